"""Long-format curve records, CSV/JSON writers and a bare-bones SVG renderer."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .decomposition import UnitDecomposition, aggregate, split_empirical_predicted, stacked_contributions
from .errors import DomainError
from .steps import StepFunction

STYLES = ("km", "stacked", "split", "units")


@dataclass(frozen=True)
class CurveRecord:
    series: str
    tau: float
    value: float


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _round12(x: float) -> float:
    return float(fmt(x))


def parse_grid(spec: str) -> np.ndarray:
    """Uniform grid from ``start:stop:step``; ``stop`` is included when hit."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must look like start:stop:step, got {spec!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise DomainError(f"grid must look like start:stop:step, got {spec!r}") from None
    if not (start >= 0 and stop >= start and step > 0):
        raise DomainError(f"grid needs 0 <= start <= stop and step > 0, got {spec!r}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def breakpoint_records(sf: StepFunction, series: str) -> list[CurveRecord]:
    """The curve as breakpoint/value pairs, led by its value at age 0."""
    taus = np.concatenate(([0.0], sf.breakpoints[sf.breakpoints > 0]))
    return [CurveRecord(series, float(t), float(v)) for t, v in zip(taus, sf(taus))]


def sampled_records(sf: StepFunction, series: str, grid: np.ndarray) -> list[CurveRecord]:
    return [CurveRecord(series, float(t), float(v)) for t, v in zip(grid, sf(grid))]


def unit_records(d: UnitDecomposition, grid) -> list[CurveRecord]:
    out = []
    for j, curve in enumerate(d.unit_curves, start=1):
        out.extend(sampled_records(curve, f"unit_{j}", grid))
    return out


def layer_records(d: UnitDecomposition, grid) -> list[CurveRecord]:
    stacked = stacked_contributions(d, grid)
    out = []
    for m in range(d.n):
        out.extend(
            CurveRecord(f"layer_{m + 1}", float(t), float(v))
            for t, v in zip(stacked.tau, stacked.layers[:, m])
        )
    return out


def split_records(d: UnitDecomposition, grid) -> list[CurveRecord]:
    split = split_empirical_predicted(d)
    return (sampled_records(split.empirical_part, "empirical_part", grid)
            + sampled_records(split.predicted_part, "predicted_part", grid))


def to_csv(records: Iterable[CurveRecord], extra_rows: Sequence[tuple[str, str, str]] = ()) -> str:
    lines = ["series,tau,value"]
    lines.extend(f"{r.series},{fmt(r.tau)},{fmt(r.value)}" for r in records)
    lines.extend(",".join(row) for row in extra_rows)
    return "\n".join(lines) + "\n"


def records_as_dicts(records: Iterable[CurveRecord]) -> list[dict]:
    return [{"series": r.series, "tau": _round12(r.tau), "value": _round12(r.value)}
            for r in records]


def to_json(records: Iterable[CurveRecord], **fields) -> str:
    """Array of records, or an object ``{**fields, "records": [...]}`` when fields are given."""
    rows = records_as_dicts(records)
    if fields:
        payload = {k: _round12(v) if isinstance(v, float) else v for k, v in fields.items()}
        payload["records"] = rows
        return json.dumps(payload, indent=1) + "\n"
    return json.dumps(rows, indent=1) + "\n"


# --- SVG -------------------------------------------------------------------

_W, _H, _PAD = 640, 400, 48
_FAILED = "#c0392b"
_CENSORED = "#2e86c1"
_LINE = "#222222"


def _step_path(taus: np.ndarray, vals: np.ndarray, sx, sy) -> list[tuple[float, float]]:
    pts = []
    for i, (t, v) in enumerate(zip(taus, vals)):
        if i:
            pts.append((sx(t), sy(vals[i - 1])))
        pts.append((sx(t), sy(v)))
    return pts


def _poly(pts) -> str:
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)


def render_svg(d: UnitDecomposition, style: str, grid=None) -> str:
    """Static step-rendered picture of one plot style.

    Failed-unit layers are drawn red, censored-unit layers blue. No bit-exact
    layout guarantees.
    """
    if style not in STYLES:
        raise DomainError(f"unknown style {style!r}")
    t_max = float(d.population.ages[-1]) or 1.0
    if grid is None:
        grid = d.grid()
    grid = np.asarray(grid, dtype=float)
    taus = np.union1d(grid[grid <= t_max * 1.05], [t_max * 1.05])

    def sx(t):
        return _PAD + (_W - 2 * _PAD) * t / (t_max * 1.05)

    def sy(v):
        return _H - _PAD - (_H - 2 * _PAD) * v

    body = []
    if style in ("stacked", "split"):
        if style == "stacked":
            layers = stacked_contributions(d, taus).layers
            colors = [_FAILED if e else _CENSORED for e in d.population.events]
        else:
            split = split_empirical_predicted(d)
            emp = split.empirical_part(taus)
            layers = np.column_stack([emp, emp + split.predicted_part(taus)])
            colors = [_FAILED, _CENSORED]
        lower = np.zeros_like(taus)
        for m, color in enumerate(colors):
            upper = layers[:, m]
            top = _step_path(taus, upper, sx, sy)
            bottom = _step_path(taus, lower, sx, sy)[::-1]
            body.append(f'<polygon points="{_poly(top + bottom)}" fill="{color}" '
                        f'fill-opacity="0.55" stroke="white" stroke-width="0.5"/>')
            lower = upper
    curves = list(d.unit_curves) if style == "units" else [aggregate(d)]
    colors = ([_FAILED if e else _CENSORED for e in d.population.events]
              if style == "units" else [_LINE])
    for curve, color in zip(curves, colors):
        body.append(f'<polyline points="{_poly(_step_path(taus, curve(taus), sx, sy))}" '
                    f'fill="none" stroke="{color}" stroke-width="1.5"/>')
    axes = [
        f'<line x1="{_PAD}" y1="{sy(0)}" x2="{_W - _PAD}" y2="{sy(0)}" stroke="black"/>',
        f'<line x1="{_PAD}" y1="{sy(0)}" x2="{_PAD}" y2="{sy(1)}" stroke="black"/>',
        f'<text x="{_W / 2}" y="{_H - 12}" text-anchor="middle" font-size="12">age</text>',
        f'<text x="{_PAD - 8}" y="{sy(1) + 4}" text-anchor="end" font-size="11">1</text>',
        f'<text x="{_PAD - 8}" y="{sy(0) + 4}" text-anchor="end" font-size="11">0</text>',
        f'<text x="{sx(t_max)}" y="{sy(0) + 16}" text-anchor="middle" font-size="11">{fmt(t_max)}</text>',
    ]
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'viewBox="0 0 {_W} {_H}">\n'
            + "\n".join(axes + body) + "\n</svg>\n")
