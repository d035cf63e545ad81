"""Command-line front end: solve, scan, wavefunction, oracle, verify.

Exit statuses: 0 ok, 2 usage/validation, 3 non-convergence, 4 bad state
selector, 5 oracle disagreement, 6 invariant failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

from . import __version__, verify
from ._backend import backend_name
from .dirac import Channel, ShellParams
from .errors import ConvergenceError, ExtrapolationError
from .shooting import extrapolate_to_zero_width, shoot_bound_state
from .spectrum import SearchConfig, find_bound_states, sample_wavefunction, shell_pair

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3
EXIT_SELECTOR = 4
EXIT_DISAGREEMENT = 5
EXIT_INVARIANT = 6

_UNITS_NOTE = (
    "All quantities are in natural units (hbar = c = 1): masses and energies "
    "share one inverse-length unit, radii and widths its inverse, and the "
    "coupling is dimensionless."
)


class UsageError(Exception):
    pass


class SelectorError(Exception):
    pass


def parse_j_fraction(text: str) -> int:
    """'1/2' or '-3/2' -> two_j; integers are rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        if not sep:
            int(num)  # plain integer parses but is not half-odd
            raise UsageError(f"j must be half-odd-integer, got {text!r}")
        if den.strip() != "2":
            raise UsageError(f"j must be half-odd-integer, got {text!r}")
        two_j = int(num)
    except ValueError:
        raise UsageError(f"cannot parse j value {text!r}") from None
    if two_j % 2 == 0:
        raise UsageError(f"j must be half-odd-integer, got {text!r}")
    return two_j


def read_config_file(path: str) -> dict[str, str]:
    """Flat key = value lines; '#' starts a comment; flags override these."""
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise UsageError(f"{path}:{lineno}: expected 'key = value'")
                values[key.strip().lower().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deltashell",
        description=(
            "Bound states of a 2+1-dimensional Dirac particle in the "
            "attractive shell potential V(r) = -a delta(r - r0)."
        ),
        epilog=_UNITS_NOTE,
    )
    parser.add_argument("--version", action="version", version=f"deltashell {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--mass", type=float, default=None,
                        help="particle mass M > 0 (natural units; default 1)")
        sp.add_argument("--radius", type=float, default=None,
                        help="shell radius r0 > 0 (inverse mass units; default 1)")
        sp.add_argument("--coupling", type=float, default=None,
                        help="shell coupling a (dimensionless; a > 0 attracts)")
        sp.add_argument("--j", action="append", default=None, metavar="FRAC",
                        help="channel j as a fraction, e.g. 1/2 (repeatable; "
                             "negative channels need the --j=-3/2 form)")
        sp.add_argument("--two-j", action="append", type=int, default=None, metavar="INT",
                        help="channel as the odd integer 2j (repeatable)")
        sp.add_argument("--scan-points", type=int, default=None,
                        help="energy-scan grid size for root bracketing (default 512)")
        sp.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output table format (default csv)")
        sp.add_argument("--out", default=None, metavar="PATH",
                        help="write output to PATH instead of stdout")
        sp.add_argument("--precision", type=int, default=None,
                        help="significant digits for printed floats (default 12)")
        sp.add_argument("--config", default=None, metavar="PATH",
                        help="flat 'key = value' config file; flags win over it")
        sp.add_argument("--seedless-deterministic", action="store_true",
                        help="outputs are bit-reproducible; no RNG is involved "
                             "(always on; flag kept for interface stability)")

    sp = sub.add_parser("solve", help="bound-state table for fixed parameters")
    add_common(sp)

    sp = sub.add_parser("scan", help="spectra over a grid of a or r0")
    add_common(sp)
    sp.add_argument("--scan-param", choices=("a", "r0"), default=None,
                    help="which parameter the grid varies")
    sp.add_argument("--grid", default=None, metavar="START:STOP:COUNT",
                    help="grid specification for the scanned parameter")

    sp = sub.add_parser("wavefunction", help="sample one normalized bound state")
    add_common(sp)
    sp.add_argument("--state-index", type=int, default=None,
                    help="which state of the channel, ascending in E (default 0)")
    sp.add_argument("--grid", default=None, metavar="START:STOP:COUNT",
                    help="radial sample grid (default 1e-4*r0 to r0+30/kappa, 400 points)")
    sp.add_argument("--samples", type=int, default=None,
                    help="number of radial samples when --grid is not given")
    sp.add_argument("--r-max", type=float, default=None,
                    help="largest sample radius when --grid is not given")

    sp = sub.add_parser("oracle", help="cross-validate the solver against the "
                                       "regularized-potential shooting oracle")
    add_common(sp)
    sp.add_argument("--sigmas", default=None, metavar="CSV",
                    help="comma-separated bump widths, same unit as the radius "
                         "(default 0.01,0.003,0.001 times r0)")
    sp.add_argument("--shape", choices=("gaussian", "top_hat"), default=None,
                    help="bump shape used for the regularization (default gaussian)")

    sp = sub.add_parser("verify", help="run the numeric invariant battery")
    add_common(sp)
    return parser


@dataclass
class RunConfig:
    command: str
    params: ShellParams
    channels: list[Channel]
    search: SearchConfig
    fmt: str = "csv"
    out: str | None = None
    precision: int = 12
    scan_param: str | None = None
    grid: tuple[float, float, int] | None = None
    state_index: int = 0
    samples: int = 400
    r_max: float | None = None
    sigmas: list[float] = field(default_factory=list)
    shape: str = "gaussian"


def _pick(args, cfg: dict, key: str, conv, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in cfg:
        try:
            return conv(cfg[key])
        except UsageError:
            raise
        except Exception:
            raise UsageError(f"config value {key} = {cfg[key]!r} is invalid") from None
    return default


def _parse_grid_spec(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be START:STOP:COUNT, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must be START:STOP:COUNT numbers, got {text!r}") from None
    if count < 1:
        raise UsageError("grid COUNT must be >= 1")
    return start, stop, count


def _grid_values(spec: tuple[float, float, int]) -> list[float]:
    start, stop, count = spec
    if count == 1:
        return [start]
    if start == stop:
        raise UsageError("grid is non-monotone: START == STOP with COUNT > 1")
    step = (stop - start) / (count - 1)
    return [start + i * step for i in range(count)]


def resolve_config(args) -> RunConfig:
    cfg = read_config_file(args.config) if args.config else {}

    mass = _pick(args, cfg, "mass", float, 1.0)
    radius = _pick(args, cfg, "radius", float, 1.0)

    command = args.command
    scan_param = _pick(args, cfg, "scan_param", str, None) if command == "scan" else None
    coupling = _pick(args, cfg, "coupling", float, None)
    needs_coupling = command in ("solve", "wavefunction", "oracle") or (
        command == "scan" and scan_param == "r0"
    )
    if coupling is None and needs_coupling:
        raise UsageError("missing required --coupling")
    if coupling is None:
        coupling = 0.0  # placeholder for a-scans; replaced per grid value

    js = list(args.j) if args.j else None
    if js is None and "j" in cfg:
        js = [tok for tok in cfg["j"].replace(",", " ").split() if tok]
    two_js = list(args.two_j) if getattr(args, "two_j", None) else None
    if two_js is None and "two_j" in cfg:
        try:
            two_js = [int(tok) for tok in cfg["two_j"].replace(",", " ").split() if tok]
        except ValueError:
            raise UsageError(f"config two_j = {cfg['two_j']!r} is invalid") from None
    channels: list[Channel] = []
    for tok in js or []:
        channels.append(Channel(parse_j_fraction(tok)))
    for tj in two_js or []:
        if tj % 2 == 0:
            raise UsageError(f"j must be half-odd-integer, got two_j = {tj}")
        channels.append(Channel(tj))
    if not channels:
        channels = [Channel(1)]

    scan_points = _pick(args, cfg, "scan_points", int, 512)
    try:
        params = ShellParams(mass=mass, radius=radius, coupling=coupling)
        search = SearchConfig(scan_points=scan_points)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    rc = RunConfig(
        command=command,
        params=params,
        channels=channels,
        search=search,
        fmt=_pick(args, cfg, "format", str, "csv"),
        out=_pick(args, cfg, "out", str, None),
        precision=_pick(args, cfg, "precision", int, 12),
        scan_param=scan_param,
    )
    if rc.fmt not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {rc.fmt!r}")
    if rc.precision < 1:
        raise UsageError("precision must be >= 1")

    if command == "scan":
        if scan_param not in ("a", "r0"):
            raise UsageError("scan requires --scan-param a or --scan-param r0")
        grid_text = _pick(args, cfg, "grid", str, None)
        if grid_text is None:
            raise UsageError("scan requires --grid START:STOP:COUNT")
        rc.grid = _parse_grid_spec(grid_text)
    elif command == "wavefunction":
        if len(channels) != 1:
            raise UsageError("wavefunction requires exactly one channel")
        rc.state_index = _pick(args, cfg, "state_index", int, 0)
        rc.samples = _pick(args, cfg, "samples", int, 400)
        rc.r_max = _pick(args, cfg, "r_max", float, None)
        grid_text = _pick(args, cfg, "grid", str, None)
        rc.grid = _parse_grid_spec(grid_text) if grid_text is not None else None
        if rc.samples < 2:
            raise UsageError("wavefunction needs at least 2 samples")
    elif command == "oracle":
        sig_text = _pick(args, cfg, "sigmas", str, None)
        if sig_text is None:
            rc.sigmas = [0.01 * radius, 0.003 * radius, 0.001 * radius]
        else:
            try:
                rc.sigmas = [float(tok) for tok in sig_text.split(",") if tok.strip()]
            except ValueError:
                raise UsageError(f"cannot parse --sigmas {sig_text!r}") from None
            if not rc.sigmas:
                raise UsageError("--sigmas must list at least one width")
            rc.sigmas.sort(reverse=True)
        rc.shape = _pick(args, cfg, "shape", str, "gaussian")
        if rc.shape not in ("gaussian", "top_hat"):
            raise UsageError(f"shape must be gaussian or top_hat, got {rc.shape!r}")
    return rc


def _fmt_value(x, precision: int) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.{precision}g}"
    return str(x)


def _meta(rc: RunConfig) -> dict:
    meta = {
        "command": rc.command,
        "mass": rc.params.mass,
        "radius": rc.params.radius,
        "coupling": rc.params.coupling,
        "channels": [ch.label for ch in rc.channels],
        "scan_points": rc.search.scan_points,
        "residual_tol": rc.search.residual_tol,
        "format": rc.fmt,
        "precision": rc.precision,
        "backend": backend_name,
        "version": __version__,
        "units": "natural (hbar = c = 1)",
    }
    if rc.command == "scan":
        meta["scan_param"] = rc.scan_param
        meta["grid"] = list(rc.grid)
    if rc.command == "wavefunction":
        meta["state_index"] = rc.state_index
    if rc.command == "oracle":
        meta["sigmas"] = rc.sigmas
        meta["shape"] = rc.shape
    return meta


def _emit(rc: RunConfig, header: list[str], rows: list[list]) -> None:
    if rc.fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt_value(v, rc.precision) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "meta": _meta(rc),
            "rows": [dict(zip(header, row)) for row in rows],
        }
        text = json.dumps(payload, indent=2, allow_nan=True) + "\n"
    if rc.out:
        with open(rc.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_solve(rc: RunConfig) -> int:
    rows = []
    for ch in rc.channels:
        for idx_state in find_bound_states(ch, rc.params, rc.search):
            rows.append(
                [
                    idx_state.channel.two_j,
                    rc.params.mass,
                    rc.params.radius,
                    rc.params.coupling,
                    idx_state.energy,
                    idx_state.kappa,
                    idx_state.binding,
                    idx_state.residual_at_root,
                    idx_state.norm_constant,
                ]
            )
    rows.sort(key=lambda r: (r[4], r[0]))
    _emit(
        rc,
        ["two_j", "M", "r0", "a", "E", "kappa", "binding", "residual", "norm_constant"],
        rows,
    )
    return EXIT_OK


def run_scan(rc: RunConfig) -> int:
    values = _grid_values(rc.grid)
    if rc.scan_param == "r0" and any(v <= 0.0 for v in values):
        raise UsageError("r0 grid values must be positive")
    rows = []
    for value in values:
        if rc.scan_param == "a":
            make = lambda: ShellParams(rc.params.mass, rc.params.radius, value)
        else:
            make = lambda: ShellParams(rc.params.mass, value, rc.params.coupling)
        for ch in rc.channels:
            try:
                p = make()
                states = find_bound_states(ch, p, rc.search)
            except Exception:
                rows.append([value, ch.two_j, -1, math.nan, math.nan])
                continue
            for k, st in enumerate(states):
                rows.append([value, ch.two_j, k, st.energy, st.binding])
    _emit(rc, ["grid_value", "two_j", "state_index", "E", "binding"], rows)
    return EXIT_OK


def run_wavefunction(rc: RunConfig) -> int:
    ch = rc.channels[0]
    states = find_bound_states(ch, rc.params, rc.search)
    if not 0 <= rc.state_index < len(states):
        raise SelectorError(
            f"channel {ch.label} has {len(states)} state(s); "
            f"index {rc.state_index} does not exist"
        )
    state = states[rc.state_index]
    r0 = rc.params.radius
    if rc.grid is not None:
        radii = _grid_values(rc.grid)
        if any(r <= 0.0 for r in radii):
            raise UsageError("wavefunction radii must be positive")
        radii = sorted(radii)
    else:
        r_max = rc.r_max if rc.r_max is not None else r0 + 30.0 / state.kappa
        if r_max <= 0.0:
            raise UsageError("r_max must be positive")
        start = 1e-4 * r0
        step = (r_max - start) / (rc.samples - 1)
        radii = [start + i * step for i in range(rc.samples)]
    radii = [r for r in radii if r != r0]

    minus, plus = shell_pair(state, rc.params)
    rows = []
    inserted = False
    for s in sample_wavefunction(state, rc.params, radii):
        if not inserted and s.r > r0:
            rows.append(["r0-", minus.r, minus.f, minus.g, minus.norm2])
            rows.append(["r0+", plus.r, plus.f, plus.g, plus.norm2])
            inserted = True
        rows.append(["", s.r, s.f, s.g, s.norm2])
    if not inserted:
        rows.append(["r0-", minus.r, minus.f, minus.g, minus.norm2])
        rows.append(["r0+", plus.r, plus.f, plus.g, plus.norm2])
    _emit(rc, ["label", "r", "F", "G", "norm2"], rows)
    return EXIT_OK


def _single_width_bar(p: ShellParams, sigma: float) -> float:
    # conservative first-order bound on the regularization shift
    a = abs(p.coupling)
    return 4.0 * a * (1.0 + a) * (sigma / p.radius) * p.mass


def run_oracle(rc: RunConfig) -> int:
    rows = []
    all_agree = True
    for ch in rc.channels:
        analytic = [s.energy for s in find_bound_states(ch, rc.params, rc.search)]
        if len(rc.sigmas) >= 3:
            fits = extrapolate_to_zero_width(
                ch, rc.params, rc.sigmas, shape=rc.shape
            )
            oracle = [(f.energy, f.error_bar) for f in fits]
        else:
            sigma = min(rc.sigmas)
            bar = _single_width_bar(rc.params, sigma)
            roots = shoot_bound_state(ch, rc.params, sigma, shape=rc.shape)
            oracle = [(e, bar) for e in roots]
        n = max(len(analytic), len(oracle))
        for k in range(n):
            e_a = analytic[k] if k < len(analytic) else math.nan
            e_o, bar = oracle[k] if k < len(oracle) else (math.nan, math.nan)
            agree = (
                k < len(analytic)
                and k < len(oracle)
                and abs(e_a - e_o) <= bar + 1e-4 * rc.params.mass
            )
            all_agree = all_agree and agree
            rows.append([ch.two_j, k, e_a, e_o, bar, agree])
    _emit(
        rc,
        ["two_j", "state_index", "E_analytic", "E_oracle", "error_bar", "agree"],
        rows,
    )
    return EXIT_OK if all_agree else EXIT_DISAGREEMENT


def run_verify(rc: RunConfig) -> int:
    results = verify.run_battery()
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        detail = f"  ({r.detail})" if r.detail else ""
        lines.append(f"{status} {r.name}: worst error {r.worst:.3e}, tolerance {r.tol:.0e}{detail}")
    failed = [r for r in results if not r.passed]
    lines.append(
        f"{len(results) - len(failed)}/{len(results)} invariants passed"
    )
    text = "\n".join(lines) + "\n"
    if rc.out:
        with open(rc.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if failed:
        sys.stderr.write(f"invariant failure: {failed[0].name}\n")
        return EXIT_INVARIANT
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = resolve_config(args)
        if rc.command == "solve":
            return run_solve(rc)
        if rc.command == "scan":
            return run_scan(rc)
        if rc.command == "wavefunction":
            return run_wavefunction(rc)
        if rc.command == "oracle":
            return run_oracle(rc)
        return run_verify(rc)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except SelectorError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_SELECTOR
    except ExtrapolationError as exc:
        sys.stderr.write(f"oracle extrapolation failed: {exc}\n")
        return EXIT_DISAGREEMENT
    except ConvergenceError as exc:
        sys.stderr.write(f"non-convergence: {exc}\n")
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
