"""Command-line front end.

Subcommands cover every pipeline plus the verification suites and the
report bundle.  Exit codes: 0 success, 1 verification/assertion failure,
2 usage or parameter-domain error.  ``--json`` switches the output to a
machine-readable report that always embeds the run manifest.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field

from . import __version__
from . import bounds as bnd
from . import numerics as num
from . import projections as prj
from . import pswf as pw
from . import riesz as rz
from . import sphere_codes as sc
from .hermite import build_hermite_basis
from .verify import PROFILES, run_suites

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int
    version: str = __version__
    tol_profile: str = "strict"
    outputs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _field_name(short: str) -> str:
    return {"r": sc.REAL, "c": sc.COMPLEX}[short]


def _parse_envelope(spec: str) -> bnd.Envelope:
    """Parse ``power:p,C`` / ``gauss:a,C`` / ``table:file`` descriptors."""
    kind, _, rest = spec.partition(":")
    if kind in ("power", "power_law"):
        p, c = (float(x) for x in rest.split(","))
        return bnd.Envelope.power_law(p, c)
    if kind in ("gauss", "gaussian"):
        a, c = (float(x) for x in rest.split(","))
        return bnd.Envelope.gaussian(a, c)
    if kind == "table":
        profile = (
            num.read_function_csv(rest) if rest.endswith(".csv") else num.read_function_json(rest)
        )
        return bnd.Envelope.tabulated(profile)
    raise num.DomainError(f"cannot parse envelope spec {spec!r} (power:p,C | gauss:a,C | table:file)")


def _emit(payload: dict, manifest: RunManifest, as_json: bool, text: str) -> None:
    if as_json:
        payload = dict(payload)
        payload["manifest"] = manifest.to_dict()
        json.dump(payload, sys.stdout, indent=2, sort_keys=True, default=str)
        sys.stdout.write("\n")
    else:
        print(f"# tfbounds {manifest.command} (seed={manifest.seed}, profile={manifest.tol_profile})")
        print(text)


def _grid_from_args(args) -> num.Grid:
    return num.Grid(args.grid_L, args.grid_n)


def _bound_report_text(report: bnd.BoundReport) -> str:
    lines = [f"pipeline: {report.pipeline}"]
    for key, value in report.inputs.items():
        lines.append(f"  {key} = {value}")
    lines.append(
        f"  eps = {report.epsilon:.6g}; T = {report.T:.6g}; M = {report.M:.6g}; "
        f"d = {report.d}; alpha = {report.alpha:.6g}"
    )
    if report.n_bound is not None:
        lines.append(f"  N <= {report.n_bound}  (method {report.method})")
    else:
        lines.append(f"  log10 N <= {report.n_bound_log10:.6g}  (method {report.method})")
    for note in report.trace:
        lines.append(f"  - {note}")
    return "\n".join(lines)


def _cmd_pswf_build(args, manifest: RunManifest) -> int:
    grid = _grid_from_args(args)
    basis = pw.build_pswf_basis(args.T, args.Omega, args.d, grid)
    json_path = args.out_json or "pswf_basis.json"
    csv_path = args.out_csv or "pswf_basis.csv"
    pw.save_pswf_basis(basis, json_path, csv_path)
    manifest.outputs = [json_path, csv_path]
    payload = {
        "T": basis.T,
        "Omega": basis.Omega,
        "d_max": basis.d_max,
        "lambdas": [float(x) for x in basis.lambdas],
        "construction_gram_residual": basis.construction_gram_residual,
        "files": manifest.outputs,
    }
    text = (
        f"built {basis.d_max} prolate functions for (T, Omega) = ({basis.T}, {basis.Omega})\n"
        f"lambda head: {[round(float(x), 6) for x in basis.lambdas[:5]]}\n"
        f"sum lambda = {float(basis.lambdas.sum()):.6f} (expected {4 * basis.T * basis.Omega:.6f})\n"
        f"wrote {json_path} and {csv_path}"
    )
    _emit(payload, manifest, args.json, text)
    return EXIT_OK


def _cmd_code_bound(args, manifest: RunManifest) -> int:
    report = sc.code_upper_bound(sc.CodeBoundQuery(args.alpha, args.dim, _field_name(args.field)))
    payload = report.to_json_dict()
    lines = [f"N({args.alpha}, {args.dim}, {payload['field']}) <= {payload['best_upper']}"
             f"  [log10 {payload['best_upper_log10']:.6g}, method {payload['best_method']}]"]
    for name, value in payload["methods"].items():
        shown = "n/a" if value is None else (value["value"] if value["value"] is not None else f"10^{value['log10']:.3g}")
        lines.append(f"  {name:>20}: {shown}")
    _emit(payload, manifest, args.json, "\n".join(lines))
    return EXIT_OK


def _cmd_code_search(args, manifest: RunManifest) -> int:
    code = sc.greedy_code(args.alpha, args.dim, _field_name(args.field), args.trials, args.seed)
    check = sc.verify_code(code, args.alpha)
    upper = sc.code_upper_bound(sc.CodeBoundQuery(args.alpha, args.dim, _field_name(args.field)))
    upper.lower_bound = code.size
    payload = {
        "alpha": args.alpha,
        "dim": args.dim,
        "field": code.field,
        "size": code.size,
        "max_coherence": check.max_coherence,
        "best_upper": upper.best_upper,
        "vectors_real": [[float(x) for x in row.real] for row in code.vectors],
    }
    text = (
        f"greedy witness: {code.size} vectors at coherence {check.max_coherence:.6f} "
        f"(upper bound {upper.best_upper})"
    )
    _emit(payload, manifest, args.json, text)
    return EXIT_OK


def _cmd_project_code(args, manifest: RunManifest) -> int:
    family = num.load_family(args.family)
    grid = family[0].grid
    if args.basis == "pswf":
        d_needed = max(args.d + 1, pw.landau_pollak_dimension(args.T, args.Omega) + 1)
        basis = pw.build_pswf_basis(args.T, args.Omega, d_needed, grid)
    else:
        basis = build_hermite_basis(max(args.d, 1), grid)
    code = prj.onb_to_code(family, basis, args.d, args.epsilon, args.eta)
    payload = code.to_json_dict()
    text = (
        f"{len(family)} functions -> {code.vectors.shape[0]} code vectors in dimension {code.d}\n"
        f"coherence {code.coherence:.6e} <= bound {code.alpha_bound:.6e}"
    )
    _emit(payload, manifest, args.json, text)
    return EXIT_OK


def _cmd_bound(args, manifest: RunManifest) -> int:
    if args.bound_command == "umbrella":
        report = bnd.umbrella_bound(_parse_envelope(args.phi), _parse_envelope(args.psi), args.epsilon)
    elif args.bound_command == "umbrella-riesz":
        report = rz.umbrella_riesz_bound(
            _parse_envelope(args.phi), _parse_envelope(args.psi), args.beta, args.epsilon
        )
    elif args.bound_command == "power-law":
        report = bnd.power_law_bound(args.p, args.C)
    elif args.bound_command == "gaussian":
        report = bnd.gaussian_bound(args.a, args.C)
    elif args.bound_command == "mean-dispersion":
        if args.p is None:
            count = bnd.mean_dispersion_max_count(args.A)
            payload = {
                "A": count.A,
                "n_max": count.n_max,
                "headline": count.headline,
                "heisenberg_infeasible": count.heisenberg_infeasible,
            }
            text = (
                f"A = {args.A}: at most n = {count.n_max} (headline 8 pi A^2 = {count.headline:.4f})"
                + (" [infeasible even for one element]" if count.heisenberg_infeasible else "")
            )
            _emit(payload, manifest, args.json, text)
            return EXIT_OK
        report = bnd.p_mean_dispersion_bound(args.A, args.p, args.epsilon)
    else:  # pragma: no cover - argparse restricts choices
        raise num.DomainError(f"unknown bound command {args.bound_command}")
    _emit(report.to_json_dict(), manifest, args.json, _bound_report_text(report))
    return EXIT_OK


def _cmd_riesz(args, manifest: RunManifest) -> int:
    stats = rz.orthogonalizer_stats(args.normU, args.normUinv)
    alpha = rz.riesz_alpha(args.epsilon, stats)
    payload = {
        "norm_U": stats.norm_U,
        "norm_Uinv": stats.norm_Uinv,
        "C_U": stats.C_U,
        "eps": args.epsilon,
        "alpha": alpha,
        "eps_ceiling": rz.riesz_alpha_ceiling(stats),
    }
    text = (
        f"C(U) = {stats.C_U:.6f}; alpha(eps={args.epsilon}) = {alpha:.6f} "
        f"(eps ceiling {payload['eps_ceiling']:.6f})"
    )
    _emit(payload, manifest, args.json, text)
    return EXIT_OK


def _cmd_verify(args, manifest: RunManifest) -> int:
    names = (
        ["hermite", "pswf", "codes", "projections", "pipelines", "riesz"]
        if args.suite == "all"
        else [args.suite]
    )
    grid = _grid_from_args(args)
    reports = run_suites(names, args.tol_profile, grid=grid, seed=args.seed)
    passed = all(r.passed for r in reports)
    payload = {"passed": passed, "suites": [r.to_json_dict() for r in reports]}
    text = "\n\n".join(r.format_text() for r in reports)
    _emit(payload, manifest, args.json, text)
    return EXIT_OK if passed else EXIT_FAILURE


def _cmd_reproduce(args, manifest: RunManifest) -> int:
    from .report import reproduce

    grid = _grid_from_args(args)
    summary = reproduce(
        args.out_dir,
        profile_name=args.tol_profile,
        seed=args.seed,
        grid=grid,
        manifest_extra=manifest.to_dict(),
    )
    manifest.outputs = summary["outputs"]
    text = (
        f"bundle written to {args.out_dir} ({len(summary['outputs'])} files); "
        f"all suites passed: {summary['passed']}"
    )
    _emit(summary, manifest, args.json, text)
    return EXIT_OK if summary["passed"] else EXIT_FAILURE


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # attached both to the main parser and (with SUPPRESS defaults, so they
    # never clobber already-parsed values) to every subcommand: global flags
    # are accepted on either side of the subcommand
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--grid-L", type=float, default=default(num.DEFAULT_GRID_HALF_WIDTH),
                        help="grid half-width (default 16)")
    parser.add_argument("--grid-n", type=int, default=default(num.DEFAULT_GRID_POINTS),
                        help="grid points (default 4096)")
    parser.add_argument("--tol-profile", choices=sorted(PROFILES), default=default("strict"))
    parser.add_argument("--seed", type=int, default=default(0))
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfbounds",
        description="Concentration bounds for orthonormal and Riesz sequences.",
    )
    _global_flags(parser, suppress=False)
    parser.add_argument("--version", action="version", version=f"tfbounds {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pswf", help="prolate basis operations")
    pswf_sub = p.add_subparsers(dest="pswf_command", required=True)
    b = pswf_sub.add_parser("build", help="build and export a prolate basis", parents=[common])
    b.add_argument("--T", type=float, required=True)
    b.add_argument("--Omega", type=float, required=True)
    b.add_argument("--d", type=int, required=True, help="number of modes")
    b.add_argument("--out-json", default=None)
    b.add_argument("--out-csv", default=None)

    c = sub.add_parser("code-bound", help="upper bounds for spherical codes", parents=[common])
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--field", choices=["r", "c"], default="r")

    s = sub.add_parser("code-search", help="greedy lower-bound witness", parents=[common])
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--field", choices=["r", "c"], default="r")
    s.add_argument("--trials", type=int, default=2000)

    pc = sub.add_parser("project-code", help="project a family onto a basis and build a code", parents=[common])
    pc.add_argument("--family", nargs="+", required=True, help="CSV/JSON function files")
    pc.add_argument("--basis", choices=["pswf", "hermite"], default="pswf")
    pc.add_argument("--d", type=int, required=True)
    pc.add_argument("--epsilon", type=float, required=True)
    pc.add_argument("--eta", type=float, default=None)
    pc.add_argument("--T", type=float, default=2.0)
    pc.add_argument("--Omega", type=float, default=2.0)

    bd = sub.add_parser("bound", help="cardinality bound pipelines")
    bound_sub = bd.add_subparsers(dest="bound_command", required=True)
    u = bound_sub.add_parser("umbrella", parents=[common])
    u.add_argument("--phi", required=True, help="envelope spec: power:p,C | gauss:a,C | table:file")
    u.add_argument("--psi", required=True)
    u.add_argument("--epsilon", type=float, default=None)
    ur = bound_sub.add_parser("umbrella-riesz", parents=[common])
    ur.add_argument("--phi", required=True)
    ur.add_argument("--psi", required=True)
    ur.add_argument("--beta", type=float, required=True)
    ur.add_argument("--epsilon", type=float, default=None)
    md = bound_sub.add_parser("mean-dispersion", parents=[common])
    md.add_argument("--A", type=float, required=True)
    md.add_argument("--p", type=float, default=None)
    md.add_argument("--epsilon", type=float, default=None)
    pl = bound_sub.add_parser("power-law", parents=[common])
    pl.add_argument("--p", type=float, required=True)
    pl.add_argument("--C", type=float, required=True)
    ga = bound_sub.add_parser("gaussian", parents=[common])
    ga.add_argument("--a", type=float, required=True)
    ga.add_argument("--C", type=float, required=True)

    r = sub.add_parser("riesz", help="Riesz-basis constants")
    riesz_sub = r.add_subparsers(dest="riesz_command", required=True)
    ra = riesz_sub.add_parser("alpha", parents=[common])
    ra.add_argument("--epsilon", type=float, required=True)
    ra.add_argument("--normU", type=float, required=True)
    ra.add_argument("--normUinv", type=float, required=True)

    v = sub.add_parser("verify", help="run a verification suite", parents=[common])
    v.add_argument("suite", choices=["hermite", "pswf", "codes", "projections",
                                     "pipelines", "riesz", "all"])

    rep = sub.add_parser("reproduce", help="write the full report bundle", parents=[common])
    rep.add_argument("--out-dir", default="tfbounds_report")

    return parser


_DISPATCH = {
    "pswf": _cmd_pswf_build,
    "code-bound": _cmd_code_bound,
    "code-search": _cmd_code_search,
    "project-code": _cmd_project_code,
    "bound": _cmd_bound,
    "riesz": _cmd_riesz,
    "verify": _cmd_verify,
    "reproduce": _cmd_reproduce,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # output destinations are recorded under `outputs`, not as parameters,
    # so runs differing only in target paths share a manifest
    skip = ("command", "json", "out_dir", "out_json", "out_csv")
    parameters = {
        k: v for k, v in vars(args).items() if k not in skip and not callable(v)
    }
    manifest = RunManifest(
        command=args.command,
        parameters={k: v for k, v in parameters.items() if v is not None},
        seed=args.seed,
        tol_profile=args.tol_profile,
    )
    try:
        return _DISPATCH[args.command](args, manifest)
    except num.DomainError as exc:
        print(f"tfbounds: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (num.GridMismatchError, num.NormalizationError, ValueError) as exc:
        print(f"tfbounds: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"tfbounds: verification failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
