"""Command-line front end.

Exit status: 0 on success, 1 on invalid input, 2 when a numerical contract
(Hermiticity, norm, oracle agreement) is violated.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .errors import NumericalContractError, ValidationError
from .halfspin import FieldConfig
from .kink import KINK_POINT, kink_eigensystem, kink_state, lambdas_from_amplitudes
from .propagate import lab_series
from .resonance import default_horizon, kink_criterion, resonance_catalog, scan_samax
from .series import TimeSeries
from .single import InitialSpec, angular_momentum, populations_tilted, survival_general
from .spin import as_spin, spin_operators
from .sweeps import TARGETS, PANEL_ALIASES, SweepSpec, Table, _csv_text, format_float, run_sweep
from .twospin import TwoSpinConfig, entropy_from_eigs, evolve_two_spin, gs_phase_maps, product_state
from .weakddi import Geometry, vdd_time_average

FLAG_KEYS = (
    "j",
    "beta_z",
    "beta_perp",
    "omega",
    "omega_z",
    "omega_perp",
    "t_max",
    "samples",
    "workers",
    "out",
    "format",
    "init",
    "n",
    "theta0",
    "method",
    "theta_prime",
    "phi_prime",
    "r",
    "coupling",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def read_config(path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"--config: cannot read {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"--config {path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _common(p):
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    p.add_argument("--out", help="output file (output directory for 'figure'); default stdout")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--workers", type=int, default=None, help="process count (default $SPINROT_WORKERS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinrot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("single", help="single-spin time series (analytic or numeric)")
    _common(p)
    p.add_argument("--j", default=None)
    p.add_argument("--omega-z", default=None)
    p.add_argument("--omega-perp", default=None)
    p.add_argument("--omega", default=None, help="rotation frequency Omega")
    p.add_argument("--init", default=None, help="z | tilted | ground")
    p.add_argument("--n", default=None, help="sublevel index n = m + J of the initial state")
    p.add_argument("--theta0", default=None)
    p.add_argument("--method", default=None, help="analytic | numeric")
    p.add_argument("--t-max", default=None)
    p.add_argument("--samples", default=None)

    p = sub.add_parser("two-spin-gs", help="ground-state <Jx>/2J and S_A maps")
    _common(p)
    p.add_argument("--j", default=None)
    p.add_argument("--beta-z", default=None, help="value or start:stop:num")
    p.add_argument("--beta-perp", default=None, help="value or start:stop:num")

    p = sub.add_parser("two-spin-dyn", help="two-spin dynamics from |-J,-J>")
    _common(p)
    for flag in ("--j", "--beta-z", "--beta-perp", "--omega", "--t-max", "--samples"):
        p.add_argument(flag, default=None)

    p = sub.add_parser("scan", help="max-over-time S_A versus Omega")
    _common(p)
    p.add_argument("--j", default=None)
    p.add_argument("--beta-z", default=None)
    p.add_argument("--beta-perp", default=None)
    p.add_argument("--omega", default=None, help="start:stop:num")
    p.add_argument("--t-max", default=None, help="horizon T (default 15 * 2 pi / beta_perp)")
    p.add_argument("--samples", default=None)

    p = sub.add_parser("resonances", help="closed-form resonance catalog")
    _common(p)
    p.add_argument("--j", default=None)
    p.add_argument("--beta-z", default=None)

    p = sub.add_parser("kink", help="kink criterion and closed-form trace (spin-1/2 pair)")
    _common(p)
    for flag in ("--beta-z", "--omega", "--beta-perp", "--t-max", "--samples"):
        p.add_argument(flag, default=None)

    p = sub.add_parser("ddi-avg", help="time-averaged weak dipolar energy")
    _common(p)
    for flag in ("--j", "--n", "--omega-z", "--omega-perp", "--omega", "--theta0", "--theta-prime", "--phi-prime", "--r", "--coupling"):
        p.add_argument(flag, default=None)

    p = sub.add_parser("figure", help="regenerate the data behind a figure")
    _common(p)
    p.add_argument("name", help=f"one of {', '.join([*TARGETS, *PANEL_ALIASES])}")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a sweep parameter")

    p = sub.add_parser("selftest", help="analytic-vs-numeric oracle suite")
    _common(p)
    return parser


class Options:
    """Merged flag/config values with typed accessors that name the flag on error."""

    def __init__(self, args, allowed: set[str], extra_ok: bool = False):
        self.values = {k: v for k, v in vars(args).items() if v is not None}
        self.extra = {}
        if getattr(args, "config", None):
            for key, value in read_config(args.config).items():
                if key in allowed:
                    self.values.setdefault(key, value)
                elif extra_ok:
                    self.extra[key] = value
                else:
                    raise ValidationError(f"--config: unknown key {key!r}; valid keys: {sorted(allowed)}")

    def raw(self, key, default=None):
        return self.values.get(key, default)

    def float(self, key, default=None, lo=None, hi=None, strict_lo=False):
        raw = self.raw(key, default)
        flag = "--" + key.replace("_", "-")
        if raw is None:
            raise ValidationError(f"{flag} is required")
        try:
            value = float(raw)
        except (TypeError, ValueError):
            raise ValidationError(f"{flag} must be a number, got {raw!r}") from None
        if not math.isfinite(value):
            raise ValidationError(f"{flag} must be finite, got {raw!r}")
        if lo is not None and (value < lo or (strict_lo and value == lo)):
            rel = ">" if strict_lo else ">="
            raise ValidationError(f"{flag} must be {rel} {lo}, got {value}")
        if hi is not None and value > hi:
            raise ValidationError(f"{flag} must be <= {hi}, got {value}")
        return value

    def int(self, key, default=None, lo=None):
        raw = self.raw(key, default)
        flag = "--" + key.replace("_", "-")
        try:
            value = int(raw)
        except (TypeError, ValueError):
            raise ValidationError(f"{flag} must be an integer, got {raw!r}") from None
        if lo is not None and value < lo:
            raise ValidationError(f"{flag} must be >= {lo}, got {value}")
        return value

    def spin(self, key="j", default="1/2"):
        raw = self.raw(key, default)
        try:
            spin = as_spin(raw)
        except ValidationError as exc:
            raise ValidationError(f"--j: {exc} (valid: 1/2, 1, 3/2, ..., 16)") from None
        if spin.two_j < 1:
            raise ValidationError("--j must be >= 1/2 (valid: 1/2, 1, 3/2, ..., 16)")
        return spin

    def grid(self, key, default):
        raw = str(self.raw(key, default))
        flag = "--" + key.replace("_", "-")
        parts = raw.split(":")
        try:
            if len(parts) == 1:
                return np.array([float(parts[0])])
            if len(parts) == 3:
                n = int(parts[2])
                if n < 1:
                    raise ValueError
                return np.linspace(float(parts[0]), float(parts[1]), n)
        except ValueError:
            pass
        raise ValidationError(f"{flag} must be a number or start:stop:num with num >= 1, got {raw!r}")

    def choice(self, key, options, default):
        value = self.raw(key, default)
        if value not in options:
            raise ValidationError(f"--{key.replace('_', '-')} must be one of {options}, got {value!r}")
        return value


def _emit(opts: Options, table: Table, meta: dict):
    fmt = opts.choice("format", ("csv", "json"), "csv")
    if fmt == "json":
        import json

        rows = [[None if math.isnan(x) else float(format_float(x)) for x in row] for row in np.asarray(table.rows, float)]
        text = json.dumps({"meta": meta, "data": {table.name: {"columns": table.columns, "rows": rows}}}, indent=1) + "\n"
    else:
        text = _csv_text(meta, table)
    out = opts.raw("out")
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_single(opts: Options):
    spin = opts.spin()
    f = FieldConfig(opts.float("omega_z", 1.0), opts.float("omega_perp", 0.1, lo=0), opts.float("omega", 1.0))
    kind = opts.choice("init", ("z", "tilted", "ground"), "z")
    n = opts.int("n", 0, lo=0)
    if n > spin.two_j:
        raise ValidationError(f"--n must lie in [0, {spin.two_j}] for J = {spin}, got {n}")
    theta0 = opts.float("theta0", 0.0)
    init = InitialSpec(kind, n, theta0 if kind == "tilted" else 0.0)
    method = opts.choice("method", ("analytic", "numeric"), "analytic")
    default_t = 2 * math.pi / f.omega_eff if f.omega_eff > 0 else 10.0
    times = np.linspace(0.0, opts.float("t_max", default_t, lo=0, strict_lo=True), opts.int("samples", 201, lo=2))

    series = TimeSeries(times)
    if method == "numeric":
        psi0 = init.state(spin, f)
        states = lab_series(spin, f, psi0, times)
        pops = np.abs(states) ** 2
        surv = np.abs(states @ psi0.conj()) ** 2
        jvec = np.stack([np.einsum("ti,ij,tj->t", states.conj(), op, states).real for op in spin_operators(spin)], axis=-1)
    else:
        if n != 0:
            raise ValidationError("--method analytic gives populations only for --n 0; use --method numeric")
        angle = init.angle(f)
        pops = populations_tilted(spin, angle, f, times)
        surv = survival_general(spin, angle, f, times)
        jvec = angular_momentum(spin, init, f, times)
    for k in range(spin.dim):
        series.add(f"P_{k}", pops[:, k])
    series.add("survival", surv)
    for k, axis in enumerate("xyz"):
        series.add(f"J{axis}", jvec[:, k])
    meta = {"command": "single", "j": str(spin), "omega_z": f.omega_z, "omega_perp": f.omega_perp,
            "omega": f.omega_rot, "init": kind, "n": n, "theta0": init.theta0, "method": method, "frame": "lab"}
    _emit(opts, Table.from_series("single", series), {k: _fmt(v) for k, v in meta.items()})


def _fmt(v):
    return format_float(v) if isinstance(v, float) else str(v)


def cmd_two_spin_gs(opts: Options):
    spin = opts.spin()
    bz = opts.grid("beta_z", "0:5:51")
    bp = opts.grid("beta_perp", "0:5:51")
    if np.any(bp < 0):
        raise ValidationError("--beta-perp must be >= 0")
    maps = gs_phase_maps(spin, bz, bp, _workers(opts))
    a, b = np.meshgrid(bz, bp, indexing="ij")
    rows = np.column_stack([a.ravel(), b.ravel(), maps["jx"].ravel(), maps["sa"].ravel(), maps["degenerate"].ravel()])
    table = Table("gs", ["beta_z", "beta_perp", "jx_over_2j", "sa", "degenerate"], rows)
    _emit(opts, table, {"command": "two-spin-gs", "j": str(spin), "omega_over_gd": "0"})


def cmd_two_spin_dyn(opts: Options):
    spin = opts.spin()
    cfg = TwoSpinConfig(opts.float("beta_z", 3.0), opts.float("beta_perp", 0.5, lo=0), opts.float("omega", 3.0), spin)
    times = np.linspace(0.0, opts.float("t_max", 100.0, lo=0, strict_lo=True), opts.int("samples", 2001, lo=2))
    series = evolve_two_spin(cfg, product_state(spin, 0, 0), times)
    meta = {"command": "two-spin-dyn", "j": str(spin), "beta_z": cfg.beta_z, "beta_perp": cfg.beta_perp,
            "omega_over_gd": cfg.omega_over_gd, "init": "|-J,-J>", "frame": "rotating (populations frame-independent)"}
    _emit(opts, Table.from_series("dynamics", series), {k: _fmt(v) for k, v in meta.items()})


def _workers(opts):
    w = opts.raw("workers")
    return None if w is None else opts.int("workers", lo=1)


def cmd_scan(opts: Options):
    spin = opts.spin()
    beta_z = opts.float("beta_z", 3.0)
    beta_perp = opts.float("beta_perp", 0.1, lo=0, strict_lo=True)
    omegas = opts.grid("omega", f"{beta_z - 1}:{beta_z + 3 * spin.j + 1}:401")
    horizon = opts.float("t_max", default_horizon(beta_perp), lo=0, strict_lo=True)
    samples = opts.int("samples", 4000, lo=2)
    results = scan_samax(spin, beta_z, beta_perp, omegas, horizon, samples, _workers(opts))
    rows = np.array([(r.omega_over_gd, r.samax, r.t_at_max) for r in results])
    meta = {"command": "scan", "j": str(spin), "beta_z": beta_z, "beta_perp": beta_perp, "horizon": horizon,
            "samples": samples, "init": "|-J,-J>"}
    _emit(opts, Table("scan", ["omega_over_gd", "samax", "t_at_max"], rows), {k: _fmt(v) for k, v in meta.items()})


def _describe_state(vec, spin) -> str:
    d = spin.dim
    parts = []
    for idx in np.flatnonzero(np.abs(vec) > 1e-12):
        m1, m2 = idx // d - spin.j, idx % d - spin.j
        parts.append(f"{vec[idx].real:+.6f}|{_m(m1)},{_m(m2)}>")
    return " ".join(parts)


def _m(m):
    return str(int(m)) if float(m).is_integer() else f"{int(2 * m)}/2"


def cmd_resonances(opts: Options):
    spin = opts.spin()
    beta_z = opts.float("beta_z", 0.0)
    out = [f"# resonances from |-J,-J> for J = {spin}, beta_z = {format_float(beta_z)} (units of g_d)"]
    out.append("id,omega_over_gd,order,target_entropy,target,target_state")
    for pred in resonance_catalog(spin, beta_z):
        out.append(
            f"{pred.id},{format_float(pred.omega_over_gd)},{pred.order},{format_float(pred.target_entropy)},"
            f"{pred.label},{_describe_state(pred.target_state, spin)}"
        )
    unique = sorted({round(p.omega_over_gd, 12) for p in resonance_catalog(spin, beta_z)})
    out.append("# distinct Omega/g_d: " + ", ".join(format_float(w) for w in unique))
    text = "\n".join(out) + "\n"
    if opts.raw("out"):
        Path(opts.raw("out")).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_kink(opts: Options):
    beta_z = opts.float("beta_z", KINK_POINT[0])
    omega = opts.float("omega", KINK_POINT[2])
    given = opts.raw("beta_perp")
    beta_perp = kink_criterion(beta_z, omega)
    if beta_perp is None:
        print(f"no kink: 2*(beta_z - omega)^2 - 1/2 = {2 * (beta_z - omega) ** 2 - 0.5:.6g} < 0")
        return
    sol = kink_eigensystem(beta_z, omega, None if given is None else opts.float("beta_perp", lo=0))
    lines = [
        f"beta_perp = {format_float(sol.beta_perp)}",
        f"delta = {format_float(sol.delta)}",
        f"alpha = {format_float(sol.alpha)}",
        "energies (E1, E3, E4) = " + ", ".join(format_float(e) for e in sol.energies),
    ]
    for k in (1, 3, 4):
        c = sol.states[k]
        lines.append(f"|{k}> = {c[0]:+.12f}|dd> {c[1]:+.12f}|+> {c[2]:+.12f}|uu>")
    if sol.limit:
        lines.append("limit case: beta_perp = 0, eigenstates are bare product states")
    sys.stdout.write("\n".join(lines) + "\n")
    if opts.raw("out"):
        period = 2 * math.pi / sol.alpha
        times = np.linspace(0.0, opts.float("t_max", 2 * period, lo=0, strict_lo=True), opts.int("samples", 1001, lo=2))
        psi = kink_state(sol, times)
        lp, lm = lambdas_from_amplitudes(psi[:, 0], psi[:, 1], psi[:, 2])
        series = TimeSeries(times)
        for k, name in enumerate(("P_dd", "P_plus", "P_uu")):
            series.add(name, np.abs(psi[:, k]) ** 2)
        series.add("lambda_plus", lp)
        series.add("lambda_minus", lm)
        series.add("S_A", entropy_from_eigs(np.stack([lp, lm], axis=-1), 2))
        meta = {"command": "kink", "beta_z": beta_z, "omega_over_gd": omega, "beta_perp": sol.beta_perp, "alpha": sol.alpha}
        _emit(opts, Table.from_series("kink", series), {k: _fmt(v) for k, v in meta.items()})


def cmd_ddi_avg(opts: Options):
    spin = opts.spin()
    geom = Geometry(
        opts.float("r", 1.0, lo=0, strict_lo=True),
        opts.float("theta_prime", 0.0),
        opts.float("phi_prime", 0.0),
        opts.float("theta0", 0.0),
        opts.int("n", 0, lo=0),
        spin,
    )
    f = FieldConfig(opts.float("omega_z", 1.0), opts.float("omega_perp", 0.5, lo=0), opts.float("omega", 2.3))
    value = vdd_time_average(geom, f, opts.float("coupling", 1.0))
    print(f"theta_b = {format_float(f.theta_b)}")
    print(f"omega_eff = {format_float(f.omega_eff)}")
    print(f"V_avg = {format_float(value)}")


def cmd_figure(args, opts: Options):
    overrides = dict(opts.extra)
    for item in args.set:
        if "=" not in item:
            raise ValidationError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        overrides[key.replace("-", "_")] = value
    spec = SweepSpec(args.name, overrides, opts.raw("out", "."), opts.choice("format", ("csv", "json"), "csv"), _workers(opts))
    for path in run_sweep(spec):
        print(path)


def cmd_selftest(opts: Options):
    from .selftest import run_selftest

    checks = run_selftest()
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if failed:
        raise NumericalContractError(f"{len(failed)} selftest check(s) failed")


COMMANDS = {
    "single": cmd_single,
    "two-spin-gs": cmd_two_spin_gs,
    "two-spin-dyn": cmd_two_spin_dyn,
    "scan": cmd_scan,
    "resonances": cmd_resonances,
    "kink": cmd_kink,
    "ddi-avg": cmd_ddi_avg,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        allowed = {k for k in vars(args) if k in FLAG_KEYS}
        opts = Options(args, allowed, extra_ok=args.command == "figure")
        if args.command == "figure":
            cmd_figure(args, opts)
        else:
            COMMANDS[args.command](opts)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalContractError as exc:
        print(f"numerical contract violated: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
