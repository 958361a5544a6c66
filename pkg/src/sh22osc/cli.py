"""Command-line front end: evaluation, verification and plot-data emission.

Subcommands: wavefunction, spectrum, kernel, verify, limit, observables.
Tables are emitted as CSV (17 significant digits, `# key=value` parameter
header lines, then a column header row) or as a single JSON object with
schema_version, command, parameters and rows.  Support points always travel
as the exact (sign, k) integer pair alongside the float coordinate.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import oscillator, spectral, verify
from .errors import ModelError, ParameterError
from .fock import FockTruncation, ModelParams

SCHEMA_VERSION = "1"

__all__ = ["OutputRecord", "main", "parse_csv_output"]


@dataclass
class OutputRecord:
    command: str
    parameters: dict
    rows: list[dict]
    schema_version: str = SCHEMA_VERSION
    extra: dict = field(default_factory=dict)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _plain(value):
    """JSON-safe copy of a cell or parameter value."""
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def to_csv(record: OutputRecord) -> str:
    lines = [f"# schema_version={record.schema_version}", f"# command={record.command}"]
    for key, value in record.parameters.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(_fmt(v) for v in value)
        lines.append(f"# {key}={_fmt(value)}")
    if record.rows:
        header = list(record.rows[0].keys())
        lines.append(",".join(header))
        for row in record.rows:
            lines.append(",".join(_fmt(row.get(col)) for col in header))
    return "\n".join(lines) + "\n"


def to_json(record: OutputRecord) -> str:
    payload = {
        "schema_version": record.schema_version,
        "command": record.command,
        "parameters": {k: _plain(v) for k, v in record.parameters.items()},
        "rows": [{k: _plain(v) for k, v in row.items()} for row in record.rows],
    }
    payload.update(record.extra)
    return json.dumps(payload, indent=1) + "\n"


def parse_csv_output(text: str) -> tuple[dict, list[dict]]:
    """Inverse of to_csv: `# key=value` lines become the parameter dict
    (string valued), the header row keys the row dicts (string cells)."""
    params: dict[str, str] = {}
    rows: list[dict] = []
    header: list[str] | None = None
    for line in text.splitlines():
        if not line:
            continue
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            params[key] = value
        elif header is None:
            header = line.split(",")
        else:
            rows.append(dict(zip(header, line.split(","))))
    return params, rows


def _window_points(k_max: int) -> list[spectral.SupportPoint]:
    return list(spectral.SpectrumWindow(k_max))


def _cmd_wavefunction(args) -> tuple[OutputRecord, int]:
    params = ModelParams(args.gamma)
    if args.k_max < 1:
        raise ParameterError(f"k-max must be >= 1, got {args.k_max}")
    n_list = args.n
    window = spectral.SpectrumWindow(args.k_max)
    table = oscillator.wavefunction_table(params, n_list, window)
    rows = []
    points = list(window)
    for i, n in enumerate(table.n_list):
        for j, x in enumerate(points):
            rows.append(
                {
                    "n": n,
                    "sign": x.sign,
                    "k": x.k,
                    "x_value": x.value,
                    "phi": float(table.values[i, j]),
                }
            )
    record = OutputRecord(
        "wavefunction",
        {"gamma": params.gamma, "n": list(n_list), "k_max": args.k_max},
        rows,
    )
    return record, 0


def _cmd_spectrum(args) -> tuple[OutputRecord, int]:
    params = ModelParams(args.gamma)
    trunc = FockTruncation(args.N)
    if args.count > args.N:
        raise ParameterError(f"count = {args.count} exceeds the truncation N = {args.N}")
    eigs = spectral.tridiagonal_eigenvalues(params, trunc, args.count)
    i_lo = (args.N - args.count) // 2
    rows = []
    for i, value in enumerate(eigs):
        nearest = spectral.nearest_support_point(value)
        rows.append(
            {
                "index": i_lo + i,
                "eigenvalue": float(value),
                "sign": nearest.sign,
                "k": nearest.k,
                "x_value": nearest.value,
                "abs_error": abs(value - nearest.value),
            }
        )
    record = OutputRecord(
        "spectrum",
        {"gamma": params.gamma, "N": args.N, "count": args.count},
        rows,
    )
    return record, 0


def _cmd_kernel(args) -> tuple[OutputRecord, int]:
    params = ModelParams(args.gamma)
    if args.k_max < 0:
        raise ParameterError(f"k-max must be >= 0, got {args.k_max}")
    points = (
        [spectral.SupportPoint.zero()]
        if args.k_max == 0
        else _window_points(args.k_max)
    )
    rows = []
    for x in points:
        for y in points:
            row = {
                "x_sign": x.sign,
                "x_k": x.k,
                "x_value": x.value,
                "y_sign": y.sign,
                "y_k": y.k,
                "y_value": y.value,
            }
            if args.mode in ("series", "both"):
                ks = oscillator.fourier_kernel_series(x, y, params)
                row["re"] = ks.real
                row["im"] = ks.imag
            if args.mode in ("closed", "both"):
                kc = oscillator.fourier_kernel_closed(x, y, params)
                if args.mode == "closed":
                    row["re"] = kc.real
                    row["im"] = kc.imag
                else:
                    row["re2"] = kc.real
                    row["im2"] = kc.imag
                    row["abs_diff"] = abs(complex(row["re"], row["im"]) - kc)
            rows.append(row)
    record = OutputRecord(
        "kernel",
        {"gamma": params.gamma, "k_max": args.k_max, "mode": args.mode},
        rows,
    )
    return record, 0


def _cmd_verify(args) -> tuple[OutputRecord, int]:
    checks = verify.run_checks(args.gamma, args.N, args.level, perturb=args.perturb)
    rows = [
        {
            "check": c.name,
            "residual": c.residual,
            "tolerance": c.tolerance,
            "status": "pass" if c.passed else "FAIL",
        }
        for c in checks
    ]
    record = OutputRecord(
        "verify",
        {"gamma": args.gamma, "N": args.N, "level": args.level},
        rows,
        extra={"all_passed": all(c.passed for c in checks)},
    )
    return record, 0 if all(c.passed for c in checks) else 1


def _cmd_limit(args) -> tuple[OutputRecord, int]:
    j_list = sorted(set(args.j_list + ([args.j] if args.j else [])))
    if not j_list:
        raise ParameterError("provide at least one j via --j or --j-list")
    gamma = args.gamma
    if not gamma * gamma < min(j_list):
        raise ParameterError(
            f"limit coupling needs gamma^2 < every j; gamma^2 = {gamma * gamma}, min j = {min(j_list)}"
        )
    params = ModelParams(gamma)
    rows = []
    for j in j_list:
        k_eff = min(args.k_max, j)
        finite = oscillator.Sl21Params.from_limit(j, gamma)
        for x in spectral.SpectrumWindow(k_eff):
            target_seq = spectral.p_tilde_sequence(args.n_max, x, params)
            for n in range(args.n_max + 1):
                phi_j = oscillator.sl21_wavefunction(n, x, finite)
                rows.append(
                    {
                        "kind": "point",
                        "j": j,
                        "n": n,
                        "sign": x.sign,
                        "k": x.k,
                        "x_value": x.value,
                        "phi_finite": phi_j,
                        "phi_limit": float(target_seq[n]),
                        "abs_error": abs(phi_j - float(target_seq[n])),
                        "max_error": None,
                    }
                )
    for j in j_list:
        err = oscillator.limit_error(j, gamma, args.n_max, min(args.k_max, j))
        rows.append(
            {
                "kind": "summary",
                "j": j,
                "n": None,
                "sign": None,
                "k": None,
                "x_value": None,
                "phi_finite": None,
                "phi_limit": None,
                "abs_error": None,
                "max_error": err,
            }
        )
    record = OutputRecord(
        "limit",
        {
            "gamma": gamma,
            "j_list": j_list,
            "n_max": args.n_max,
            "k_max": args.k_max,
        },
        rows,
    )
    return record, 0


def _cmd_observables(args) -> tuple[OutputRecord, int]:
    params = ModelParams(args.gamma)
    n_size = args.N if args.N else max(64, 2 * ((args.n_max + 8) // 2))
    trunc = FockTruncation(n_size)
    if args.n_max > trunc.n - 3:
        raise ParameterError(
            f"n-max = {args.n_max} is too close to the truncation N = {trunc.n}; raise --N"
        )
    rows = []
    for n in range(args.n_max + 1):
        u_f = oscillator.uncertainty_product(n, params)
        u_m = oscillator.uncertainty_product_matrix(n, params, trunc)
        c_f = oscillator.commutator_qp_eigenvalue(n, params)
        c_m = oscillator.commutator_qp_matrix(n, params, trunc)
        e_f = oscillator.energy_expectation(n, params)
        e_m = oscillator.energy_expectation_matrix(n, params, trunc)
        rows.append(
            {
                "n": n,
                "delta_q": math.sqrt(u_f),
                "uncertainty_formula": u_f,
                "uncertainty_matrix": u_m,
                "commutator_im_formula": c_f.imag,
                "commutator_im_matrix": c_m.imag,
                "energy_formula": e_f,
                "energy_matrix": e_m,
            }
        )
    record = OutputRecord(
        "observables",
        {"gamma": params.gamma, "n_max": args.n_max, "N": trunc.n},
        rows,
    )
    return record, 0


_COMMANDS = {
    "wavefunction": _cmd_wavefunction,
    "spectrum": _cmd_spectrum,
    "kernel": _cmd_kernel,
    "verify": _cmd_verify,
    "limit": _cmd_limit,
    "observables": _cmd_observables,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sh22osc",
        description="Discrete oscillator model: wavefunctions, spectra, kernel, checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, gamma=True):
        if gamma:
            p.add_argument("--gamma", type=float, required=True, help="model parameter, > 0")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", type=str, default=None, help="output path (default: stdout)")

    p = sub.add_parser("wavefunction", help="position wavefunction table over the support window")
    common(p)
    p.add_argument("--n", type=int, nargs="+", default=[0, 1, 2, 3], help="mode indices")
    p.add_argument("--k-max", type=int, default=10, help="window half-extent in k")

    p = sub.add_parser("spectrum", help="central eigenvalues of the truncated Jacobi matrix")
    common(p)
    p.add_argument("--N", type=int, default=2048, help="truncation size (even)")
    p.add_argument("--count", type=int, default=21, help="how many central eigenvalues")

    p = sub.add_parser("kernel", help="Fourier kernel over support pairs")
    common(p)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--mode", choices=["series", "closed", "both"], default="both")

    p = sub.add_parser("verify", help="run the named invariant checks")
    common(p)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("limit", help="finite-model convergence toward the infinite model")
    common(p)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--j-list", type=int, nargs="+", default=[])
    p.add_argument("--n-max", type=int, default=1)
    p.add_argument("--k-max", type=int, default=8)

    p = sub.add_parser("observables", help="uncertainty, commutator and energy tables")
    common(p)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--N", type=int, default=None, help="truncation for the matrix path")

    return parser


def _emit(record: OutputRecord, args) -> None:
    if args.format == "json":
        text = to_json(record)
    elif record.command == "verify":
        lines = [f"verify gamma={args.gamma} N={args.N} level={args.level}"]
        width = max(len(r["check"]) for r in record.rows)
        for r in record.rows:
            lines.append(
                f"  {r['check']:<{width}}  residual={r['residual']:>10.3e}"
                f"  tol={r['tolerance']:g}  {r['status']}"
            )
        lines.append("all passed" if record.extra.get("all_passed") else "FAILURES PRESENT")
        text = "\n".join(lines) + "\n"
        if args.format == "csv" and args.out:  # tabular form still available on disk
            text = to_csv(record)
    else:
        text = to_csv(record)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_error(args, exc: Exception) -> None:
    if getattr(args, "format", "csv") == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": getattr(args, "command", None),
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        sys.stdout.write(json.dumps(payload) + "\n")
    else:
        sys.stderr.write(f"error: {exc}\n")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        record, code = _COMMANDS[args.command](args)
    except ModelError as exc:
        _emit_error(args, exc)
        return 2
    _emit(record, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
