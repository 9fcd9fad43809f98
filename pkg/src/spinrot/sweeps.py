"""
Deterministic parameter sweeps that regenerate the data behind each figure.

Every target has a table of defaults; a run resolves overrides against it,
computes one or more tables, and writes them with every resolved parameter
in the metadata so that any number can be reproduced from the header alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .errors import ValidationError
from .halfspin import FieldConfig
from .parallel import pmap
from .resonance import DEFAULT_SCAN_PERIODS, scan_samax
from .series import TimeSeries
from .single import p2j_ground_init_max, p2j_max, pgs_min, survival_ground_init, survival_min_stretched
from .spin import SpinJ, as_spin
from .twospin import (
    TwoSpinConfig,
    build_hrot,
    evolve_two_spin,
    gs_phase_maps,
    product_state,
    symmetric_basis,
)

__all__ = ["SweepSpec", "TimeSeries", "Table", "TARGETS", "run_sweep", "resolve_params", "format_float"]

FORMATS = ("csv", "json")


def format_float(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: np.ndarray
    notes: dict = field(default_factory=dict)

    @classmethod
    def from_series(cls, name: str, series: TimeSeries, notes=None) -> "Table":
        return cls(name, series.columns, series.rows(), notes or {})


# -- parameter parsing ----------------------------------------------------

def _floats(text):
    if isinstance(text, str):
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    return [float(v) for v in np.atleast_1d(text)]


def _spins(text):
    if isinstance(text, str):
        return [as_spin(v.strip()) for v in text.replace(";", ",").split(",") if v.strip()]
    return [as_spin(v) for v in np.atleast_1d(text)]


PARSERS = {
    float: float,
    int: int,
    "spin": as_spin,
    "floats": _floats,
    "spins": _spins,
}


def _label(x) -> str:
    """Shortest round-trip text of a float, for file and channel names."""
    return repr(float(x)).removesuffix(".0")


def _render(value):
    if isinstance(value, SpinJ):
        return str(value)
    if isinstance(value, list):
        return ",".join(_render(v) for v in value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


# -- experiment pipelines -------------------------------------------------

def _grid(p, lo, hi, n):
    if p[n] < 1:
        raise ValidationError(f"{n} must be >= 1, got {p[n]}")
    return np.linspace(p[lo], p[hi], p[n])


def _fig2a(p, workers):
    spin = p["j"]
    omegas = _grid(p, "omega_min", "omega_max", "n_omega")
    bperps = _grid(p, "bperp_min", "bperp_max", "n_bperp")
    rows = []
    for w in omegas:
        for b in bperps:
            s = survival_min_stretched(spin, FieldConfig(1.0, b, w))
            rows.append((w, b, s ** (1 / spin.two_j)))
    tables = [Table("map", ["omega_ratio", "bperp_ratio", "smin_pow"], np.array(rows))]
    line = np.linspace(p["omega_min"], p["omega_max"], p["n_line"])
    lrows = []
    for s in p["line_js"]:
        for w in line:
            lrows.append((s.j, w, p2j_max(s, FieldConfig(1.0, p["bperp_line"], w))))
    tables.append(Table("line", ["j", "omega_ratio", "p2j_max"], np.array(lrows)))
    return tables


def _fig2b_row(b, two_j, omegas, times):
    spin = SpinJ(two_j)
    pw = 1 / two_j
    out = []
    for w in omegas:
        f = FieldConfig(1.0, b, w)
        smin = float(np.min(survival_ground_init(spin, f, times)))
        out.append((w, b, max(smin, 0.0) ** pw, p2j_ground_init_max(spin, f) ** pw, pgs_min(spin, f) ** pw))
    return out


def _fig2b(p, workers):
    spin = p["j"]
    omegas = _grid(p, "omega_min", "omega_max", "n_omega")
    bperps = _grid(p, "bperp_min", "bperp_max", "n_bperp")
    times = np.linspace(0.0, p["t_max"], p["samples"])
    task = partial(_fig2b_row, two_j=spin.two_j, omegas=omegas, times=times)
    chunks = pmap(task, bperps.tolist(), workers)
    rows = sorted((r for chunk in chunks for r in chunk), key=lambda r: (r[0], r[1]))
    cols = ["omega_ratio", "bperp_ratio", "smin_pow", "p2jmax_pow", "pgsmin_pow"]
    return [Table("map", cols, np.array(rows))]


def _fig3(p, workers):
    spin = p["j"]
    times = np.linspace(0.0, p["t_max"], p["samples"])
    series = TimeSeries(times)
    for w in p["omega_ratios"]:
        s = survival_ground_init(spin, FieldConfig(1.0, p["bperp_ratio"], w), times)
        series.add(f"S_pow_omega_{_label(w)}", np.clip(s, 0.0, None) ** (1 / spin.two_j))
    return [Table.from_series("series", series)]


def _fig4(p, workers):
    bz = _grid(p, "beta_z_min", "beta_z_max", "n_beta_z")
    bp = _grid(p, "beta_perp_min", "beta_perp_max", "n_beta_perp")
    tables = []
    for spin in p["js"]:
        maps = gs_phase_maps(spin, bz, bp, workers)
        a, b = np.meshgrid(bz, bp, indexing="ij")
        rows = np.column_stack([a.ravel(), b.ravel(), maps["jx"].ravel(), maps["sa"].ravel(), maps["degenerate"].ravel()])
        tables.append(Table("j" + str(spin).replace("/", "_"), ["beta_z", "beta_perp", "jx_over_2j", "sa", "degenerate"], rows, {"j": str(spin)}))
    return tables


def _fig5(p, workers):
    bz = _grid(p, "beta_z_min", "beta_z_max", "n_beta_z")
    bp = _grid(p, "beta_perp_min", "beta_perp_max", "n_beta_perp")
    rows = []
    for spin in p["js"]:
        sa = gs_phase_maps(spin, bz, bp, workers)["sa"]
        for i, b in enumerate(bz):
            row = sa[i]
            if np.all(np.isnan(row)):
                rows.append((spin.j, b, math.nan, math.nan))
                continue
            k = int(np.nanargmax(row))
            rows.append((spin.j, b, row[k], bp[k]))
    return [Table("samax", ["j", "beta_z", "samax", "beta_perp_at_max"], np.array(rows))]


def _dynamics_table(name, cfg, t_max, samples):
    times = np.linspace(0.0, t_max, samples)
    series = evolve_two_spin(cfg, product_state(cfg.j, 0, 0), times)
    return Table.from_series(name, series, {"omega_over_gd": _render(cfg.omega_over_gd)})


def _fig6(p, workers):
    return [
        _dynamics_table(f"omega_{_label(w)}", TwoSpinConfig(p["beta_z"], p["beta_perp"], w, p["j"]), p["t_max"], p["samples"])
        for w in p["omegas"]
    ]


def _scan_tables(p, workers, beta_perps, prefix):
    omegas = _grid(p, "omega_min", "omega_max", "n_omega")
    tables = []
    for k, b in enumerate(beta_perps):
        rows = []
        horizon = p["periods"] * 2 * math.pi / b
        for bz in p["beta_zs"]:
            for r in scan_samax(p["j"], bz, b, omegas, horizon, p["samples"], workers):
                rows.append((bz, b, r.omega_over_gd, r.samax, r.t_at_max))
        tables.append(
            Table(prefix[k], ["beta_z", "beta_perp", "omega_over_gd", "samax", "t_at_max"], np.array(rows), {"horizon": format_float(horizon)})
        )
    return tables


def _fig7(p, workers):
    panels = "abcd"
    return _scan_tables(p, workers, p["beta_perps"], [f"panel_{panels[k] if k < 4 else k}" for k in range(len(p["beta_perps"]))])


def _fig8(p, workers):
    return [
        _dynamics_table(f"omega_{_label(w)}", TwoSpinConfig(p["beta_z"], p["beta_perp"], w, SpinJ(1)), p["t_max"], p["samples"])
        for w in p["omegas"]
    ]


def _fig9(p, workers):
    # sectors are diagonalized separately: E2 and E3 cross exactly at the kink
    spin = SpinJ(1)
    sym = symmetric_basis(spin)
    singlet = (product_state(spin, 0, 1) - product_state(spin, 1, 0)) / math.sqrt(2)
    rows = []
    for w in _grid(p, "omega_min", "omega_max", "n_omega"):
        h = build_hrot(TwoSpinConfig(p["beta_z"], p["beta_perp"], w, spin))
        energies, vecs = np.linalg.eigh(sym.T @ h @ sym)
        e2 = float(np.real(singlet.conj() @ h @ singlet))
        overlap = np.abs(vecs[0]) ** 2
        e1, e3, e4 = energies
        rows.append((w, e1, e2, e3, e4, overlap[0], 0.0, overlap[1], overlap[2], e3 - e1, e4 - e3))
    cols = ["omega_over_gd", "E1", "E2", "E3", "E4", "ov1", "ov2", "ov3", "ov4", "E3_minus_E1", "E4_minus_E3"]
    return [Table("spectrum", cols, np.array(rows))]


def _fig10(p, workers):
    return _scan_tables(p, workers, p["beta_perps"], [f"panel_{'ab'[k] if k < 2 else k}" for k in range(len(p["beta_perps"]))])


# -- registry -------------------------------------------------------------

_MAP_GRID = {
    "omega_min": (float, 0.0),
    "omega_max": (float, 5.0),
    "n_omega": (int, 50),
    "bperp_min": (float, 0.0),
    "bperp_max": (float, 2.0),
    "n_bperp": (int, 50),
}

_SCAN = {
    "periods": (float, float(DEFAULT_SCAN_PERIODS)),
    "samples": (int, 4000),
}

TARGETS = {
    "fig2a": (
        _fig2a,
        {**_MAP_GRID, "j": ("spin", SpinJ(1)), "bperp_line": (float, 0.1), "line_js": ("spins", _spins("1/2,1,2,4,8")), "n_line": (int, 501)},
        "stretched-state initial condition; omega_z = 1 sets the unit",
    ),
    "fig2b": (
        _fig2b,
        {**_MAP_GRID, "j": ("spin", SpinJ(2)), "t_max": (float, 40 * math.pi), "samples": (int, 4000)},
        "ground-state initial condition; smin is a minimum over the t grid, the other extrema are closed-form",
    ),
    "fig3": (
        _fig3,
        {"j": ("spin", SpinJ(2)), "bperp_ratio": (float, 1.0), "omega_ratios": ("floats", [0.5, 2.0, 4.0]), "t_max": (float, 20.0), "samples": (int, 2001)},
        "ground-state initial condition, lab-frame survival",
    ),
    "fig4": (
        _fig4,
        {
            "js": ("spins", _spins("1/2,1,2")),
            "beta_z_min": (float, 0.0),
            "beta_z_max": (float, 5.0),
            "n_beta_z": (int, 51),
            "beta_perp_min": (float, 0.0),
            "beta_perp_max": (float, 5.0),
            "n_beta_perp": (int, 51),
        },
        "ground state at Omega = 0; degenerate cells are NaN and flagged",
    ),
    "fig5": (
        _fig5,
        {
            "js": ("spins", _spins("1/2,1,2,3")),
            "beta_z_min": (float, 0.0),
            "beta_z_max": (float, 2.0),
            "n_beta_z": (int, 41),
            "beta_perp_min": (float, 0.0),
            "beta_perp_max": (float, 10.0),
            "n_beta_perp": (int, 400),
        },
        "max over the beta_perp grid of the ground-state S_A; degenerate cells skipped",
    ),
    "fig6": (
        _fig6,
        {"j": ("spin", SpinJ(1)), "beta_z": (float, 3.0), "beta_perp": (float, 0.5), "omegas": ("floats", [3.0, 4.5]), "t_max": (float, 200.0), "samples": (int, 4001)},
        "initial state |-J,-J>, rotating frame",
    ),
    "fig7": (
        _fig7,
        {
            "j": ("spin", SpinJ(1)),
            "beta_zs": ("floats", [0.0, 3.0]),
            "beta_perps": ("floats", [0.1, 0.5, 1.0, 2.0]),
            "omega_min": (float, -1.0),
            "omega_max": (float, 7.0),
            "n_omega": (int, 801),
            **_SCAN,
        },
        "scan horizon T = periods * 2 pi / beta_perp (unstated for this figure; borrowed from the spin-1 and spin-2 scans)",
    ),
    "fig8": (
        _fig8,
        {"beta_z": (float, 3.0), "beta_perp": (float, 2.0), "omegas": ("floats", [4.4, 4.5, 4.6]), "t_max": (float, 10.0), "samples": (int, 2001)},
        "spin-1/2 pair from |dd>",
    ),
    "fig9": (
        _fig9,
        {"beta_z": (float, 3.0), "beta_perp": (float, 2.0), "omega_min": (float, 0.0), "omega_max": (float, 8.0), "n_omega": (int, 801)},
        "E1 <= E3 <= E4 symmetric sector, E2 antisymmetric; ov = |<k|dd>|^2",
    ),
    "fig10": (
        _fig10,
        {
            "j": ("spin", SpinJ(2)),
            "beta_zs": ("floats", [0.0]),
            "beta_perps": ("floats", [0.1, 0.5]),
            "omega_min": (float, -0.5),
            "omega_max": (float, 4.0),
            "n_omega": (int, 451),
            **_SCAN,
        },
        "scan horizon T = periods * 2 pi / beta_perp",
    ),
    "fig11": (
        _fig10,
        {
            "j": ("spin", SpinJ(4)),
            "beta_zs": ("floats", [0.0]),
            "beta_perps": ("floats", [0.1, 0.5]),
            "omega_min": (float, -0.5),
            "omega_max": (float, 7.0),
            "n_omega": (int, 751),
            **_SCAN,
        },
        "scan horizon T = periods * 2 pi / beta_perp",
    ),
}

PANEL_ALIASES = {f"fig7{c}": ("fig7", v) for c, v in zip("abcd", (0.1, 0.5, 1.0, 2.0))}


@dataclass
class SweepSpec:
    target: str
    overrides: dict = field(default_factory=dict)
    out: Path | str | None = None
    fmt: str = "csv"
    workers: int | None = None


def resolve_params(spec: SweepSpec) -> tuple[str, dict, str]:
    """Validate ``spec`` and return ``(base_target, params, file_stem)``.

    All problems are collected and reported together.
    """
    errors = []
    target = spec.target
    stem = target
    overrides = dict(spec.overrides)
    if target in PANEL_ALIASES:
        target, b = PANEL_ALIASES[target]
        overrides.setdefault("beta_perps", [b])
    if target not in TARGETS:
        errors.append(f"unknown target {spec.target!r}; choose from {sorted([*TARGETS, *PANEL_ALIASES])}")
        raise ValidationError("; ".join(errors))
    if spec.fmt not in FORMATS:
        errors.append(f"format must be one of {FORMATS}, got {spec.fmt!r}")
    if spec.workers is not None and spec.workers < 1:
        errors.append(f"workers must be >= 1, got {spec.workers}")

    _, table, _ = TARGETS[target]
    params = {k: default for k, (_, default) in table.items()}
    for key, raw in overrides.items():
        if key not in table:
            errors.append(f"unknown parameter {key!r} for {target}; valid: {sorted(table)}")
            continue
        kind = table[key][0]
        try:
            value = PARSERS[kind](raw)
        except (ValueError, TypeError, ValidationError) as exc:
            errors.append(f"bad value for {key}: {raw!r} ({exc})")
            continue
        if isinstance(value, list) and not value:
            errors.append(f"{key} must be non-empty")
        params[key] = value
    for key, value in params.items():
        if isinstance(value, float) and not math.isfinite(value):
            errors.append(f"{key} must be finite")
        if key.startswith("n_") or key == "samples":
            if value < (2 if key == "samples" else 1):
                errors.append(f"{key} must be positive, got {value}")
        if key in ("beta_perps",) and any(b <= 0 for b in value):
            errors.append("beta_perps must all be > 0 for scans")
        if key in ("t_max", "periods") and value <= 0:
            errors.append(f"{key} must be > 0, got {value}")
    if errors:
        raise ValidationError("; ".join(errors))
    return target, params, stem


def _metadata(spec_target, target, params) -> dict:
    meta = {"target": spec_target, "pipeline": target, "convention": TARGETS[target][2]}
    for key in sorted(params):
        meta[key] = _render(params[key])
    meta["spinrot"] = __version__
    meta["numpy"] = np.__version__
    meta["scipy"] = scipy.__version__
    return meta


def _csv_text(meta: dict, table: Table) -> str:
    lines = [f"# {k}: {v}" for k, v in meta.items()]
    lines += [f"# {k}: {v}" for k, v in sorted(table.notes.items())]
    lines.append(",".join(table.columns))
    for row in np.asarray(table.rows, dtype=float):
        lines.append(",".join(format_float(x) for x in row))
    return "\n".join(lines) + "\n"


def _json_value(x):
    x = float(x)
    return None if math.isnan(x) else float(format_float(x))


def _json_text(meta: dict, tables: list[Table]) -> str:
    data = {
        t.name: {"notes": t.notes, "columns": t.columns, "rows": [[_json_value(x) for x in row] for row in np.asarray(t.rows, dtype=float)]}
        for t in tables
    }
    return json.dumps({"meta": meta, "data": data}, indent=1, sort_keys=False) + "\n"


def compute(spec: SweepSpec) -> tuple[dict, list[Table], str]:
    target, params, stem = resolve_params(spec)
    func = TARGETS[target][0]
    tables = func(params, spec.workers)
    return _metadata(spec.target, target, params), tables, stem


def run_sweep(spec: SweepSpec) -> list[Path]:
    """Compute ``spec`` and write its files; returns the written paths."""
    meta, tables, stem = compute(spec)
    out = Path(spec.out) if spec.out is not None else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    if spec.fmt == "json":
        path = out / f"{stem}.json"
        path.write_text(_json_text(meta, tables))
        return [path]
    paths = []
    for table in tables:
        name = stem if len(tables) == 1 else f"{stem}_{table.name}"
        path = out / f"{name}.csv"
        path.write_text(_csv_text(meta, table))
        paths.append(path)
    return paths
