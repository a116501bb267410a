"""Command-line interface.

    entropic-packet compute --alpha 2
    entropic-packet sweep --alpha-min 0.6 --alpha-max 10 --step 0.1 --format csv --out sweep.csv
    entropic-packet verify --alpha 1 --alpha 2

Exit codes: 0 success, 1 verification failure, 2 invalid alpha or
arguments, 3 numerical non-convergence.

Quadrature tolerances come from (lowest to highest precedence) the
built-in defaults, a key=value config file named by --config or the
ENTROPIC_PACKET_CONFIG environment variable, and the --rel-tol/--abs-tol
flags. Recognised keys: rel_tol, abs_tol, max_levels, max_subdivisions.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import json
import math
import os
import sys
import tempfile
import warnings

from .crosscheck import run_all
from .entropy import ENTROPY_BOUND, total_uncertainty
from .errors import BoundViolation, ConvergenceFailure, DomainError, NearEdgeWarning
from .packet import (
    heisenberg_product,
    make_packet,
    momentum_second_moment,
    position_second_moment,
)
from .quadrature import QuadratureConfig

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 2
EXIT_NOT_CONVERGED = 3

CONFIG_ENV = "ENTROPIC_PACKET_CONFIG"
CSV_COLUMNS = ("alpha", "s_x", "s_p", "u_total", "gap")
DEFAULT_SWEEP = (0.6, 10.0, 0.1)
DEFAULT_VERIFY_ALPHAS = (0.75, 1.0, 1.5, 2.0, 5.0, 10.0)
MAX_SWEEP_POINTS = 10**6

_CONFIG_TYPES = {"rel_tol": float, "abs_tol": float, "max_levels": int, "max_subdivisions": int}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    alpha_min: float
    alpha_max: float
    step: float
    output_format: str = "csv"

    def __post_init__(self):
        if not self.alpha_min > 0.5:
            raise DomainError(f"alpha must exceed 1/2 (packet is not normalizable); got alpha_min={self.alpha_min}")
        if self.alpha_max < self.alpha_min:
            raise UsageError("alpha_max must not be smaller than alpha_min")
        if not self.step > 0:
            raise UsageError("step must be positive")
        if (self.alpha_max - self.alpha_min) / self.step > MAX_SWEEP_POINTS:
            raise UsageError(f"sweep would exceed {MAX_SWEEP_POINTS} points")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.output_format!r}")

    def grid(self):
        n = math.floor((self.alpha_max - self.alpha_min) / self.step + 1e-9)
        return [round(self.alpha_min + k * self.step, 12) for k in range(n + 1)]


def load_config_file(path):
    """Parse key=value lines; blank lines and # comments are ignored."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in _CONFIG_TYPES:
                raise UsageError(f"{path}:{lineno}: expected one of {sorted(_CONFIG_TYPES)} as key=value")
            try:
                values[key] = _CONFIG_TYPES[key](value.strip())
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {value.strip()!r}")
    return values


def resolve_config(args) -> QuadratureConfig:
    settings = {}
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        settings.update(load_config_file(path))
    if args.rel_tol is not None:
        settings["rel_tol"] = args.rel_tol
    if args.abs_tol is not None:
        settings["abs_tol"] = args.abs_tol
    try:
        return QuadratureConfig(**settings)
    except ValueError as exc:
        raise UsageError(str(exc))


def _packet(alpha):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearEdgeWarning)
        return make_packet(alpha)


def _sig(value, digits):
    return f"{value:.{digits}g}"


def format_compute(alpha, cfg: QuadratureConfig) -> str:
    packet = _packet(alpha)
    report = total_uncertainty(packet, cfg)
    lines = [
        ("alpha", _sig(packet.alpha, 6)),
        ("S_x", _sig(report.s_x, 6)),
        ("S_p", _sig(report.s_p, 6)),
        ("U", _sig(report.u_total, 6)),
        ("bound 1+ln(pi)", _sig(ENTROPY_BOUND, 6)),
        ("gap", _sig(report.gap, 6)),
        ("<X^2>", position_second_moment(packet).format(6)),
        ("<P^2>", _sig(momentum_second_moment(packet), 6)),
        ("dX*dP", heisenberg_product(packet).format(6)),
    ]
    if packet.near_edge:
        lines.append(("warning", "alpha < 0.55: tolerances relaxed 100x"))
    width = max(len(k) for k, _ in lines)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in lines) + "\n"


def sweep_row(alpha, cfg: QuadratureConfig):
    return total_uncertainty(_packet(alpha), cfg).as_row()


def compute_sweep(spec: SweepSpec, cfg: QuadratureConfig, jobs: int = 1):
    grid = spec.grid()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(sweep_row, grid, [cfg] * len(grid)))
    return [sweep_row(alpha, cfg) for alpha in grid]


def render_sweep(rows, output_format: str) -> str:
    if output_format == "csv":
        out = [",".join(CSV_COLUMNS)]
        out.extend(",".join(_sig(row[c], 12) for c in CSV_COLUMNS) for row in rows)
        return "\n".join(out) + "\n"
    records = [{c: float(_sig(row[c], 12)) for c in CSV_COLUMNS} for row in rows]
    return json.dumps(records, indent=1) + "\n"


def _write_atomically(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sweep-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_verify(report) -> str:
    lines = [f"alpha = {report.alpha:g}"]
    for e in report.entries:
        flag = "PASS" if e.passed else "FAIL"
        lines.append(
            f"  {flag}  {e.name:<34} ref={e.reference:.12g} oracle={e.oracle:.12g} "
            f"diff={e.abs_diff:.2e} tol={e.tolerance:.0e}"
        )
    lines.append(f"  all_pass = {report.all_pass}")
    return "\n".join(lines) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="entropic-packet",
        description="Entropic uncertainty of power-law wave packets phi(x) = N (1 + x^2)^(-alpha/2).",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rel-tol", type=float, help="quadrature relative tolerance (default 1e-10)")
    common.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance (default 1e-12)")
    common.add_argument("--config", help=f"key=value config file (default: ${CONFIG_ENV})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="entropies and moments for one alpha")
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser(
        "sweep",
        parents=[common],
        help="alpha,s_x,s_p,u_total,gap over a grid",
        description="The default grid [0.6, 10] in steps of 0.1 covers the region where "
        "S_x falls, S_p rises and U approaches 1 + ln(pi).",
    )
    p.add_argument("--alpha-min", type=float, default=DEFAULT_SWEEP[0])
    p.add_argument("--alpha-max", type=float, default=DEFAULT_SWEEP[1])
    p.add_argument("--step", type=float, default=DEFAULT_SWEEP[2])
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes; output order is unaffected")

    p = sub.add_parser("verify", parents=[common], help="check every closed form against its oracle")
    p.add_argument(
        "--alpha", type=float, action="append",
        help=f"repeatable; default {', '.join(f'{a:g}' for a in DEFAULT_VERIFY_ALPHAS)}",
    )
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _fail(code, message):
    print(f"entropic-packet: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "compute":
            sys.stdout.write(format_compute(args.alpha, cfg))
            return EXIT_OK
        if args.command == "sweep":
            spec = SweepSpec(args.alpha_min, args.alpha_max, args.step, args.format)
            text = render_sweep(compute_sweep(spec, cfg, args.jobs), spec.output_format)
            if args.out:
                _write_atomically(args.out, text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
        alphas = args.alpha or list(DEFAULT_VERIFY_ALPHAS)
        packets = [_packet(a) for a in alphas]
        reports = []
        for packet in packets:
            report = run_all(packet, cfg)
            reports.append(report)
            if args.format == "text":
                sys.stdout.write(format_verify(report))
        if args.format == "json":
            sys.stdout.write(json.dumps([r.to_dict() for r in reports], indent=1) + "\n")
        return EXIT_OK if all(r.all_pass for r in reports) else EXIT_VERIFY_FAILED
    except DomainError as exc:
        return _fail(EXIT_DOMAIN, str(exc))
    except UsageError as exc:
        return _fail(EXIT_DOMAIN, str(exc))
    except ConvergenceFailure as exc:
        return _fail(EXIT_NOT_CONVERGED, f"numerical non-convergence: {exc}")
    except BoundViolation as exc:
        return _fail(EXIT_VERIFY_FAILED, str(exc))


if __name__ == "__main__":
    sys.exit(main())
