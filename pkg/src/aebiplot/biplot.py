"""Threshold-filtered contribution biplot views and their SVG/JSON forms.

Filtering is a display concern only: the CA is always computed on the full
table, then classes are hidden when their contribution to both displayed
dimensions falls below ``contrib_min`` or their average frequency falls
below ``freq_min``.  The contribution criterion takes the maximum over the
two displayed dimensions, so a class that only matters in an undisplayed
dimension disappears from the plot no matter how frequent it is (its row
stays in the companion frequency table of the unfiltered analysis).

Complement rows exist to equalize masses, not to be interpreted, so they are
hidden (and never filtered) unless explicitly requested.

Rendering is deterministic: identical views produce byte-identical SVG and
JSON, with no timestamps and a fixed element order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .ca import CAResult
from .contingency import COMPLEMENT_SUFFIX, StackedTable, frequency_table
from .errors import RankTooLow


@dataclass(frozen=True)
class BiplotConfig:
    """Display configuration; ``dims`` are 1-based dimension numbers."""

    dims: tuple[int, int] = (1, 2)
    contrib_min: float = 0.0
    freq_min: float = 0.0
    show_complements: bool = False
    label_groups: bool = True

    def __post_init__(self):
        a, b = self.dims
        if a == b or a < 1 or b < 1:
            raise ValueError(f"dims must be two distinct 1-based indices, got {self.dims}")
        for name in ("contrib_min", "freq_min"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must be a fraction in [0, 1], got {v}")


@dataclass(frozen=True)
class GroupPoint:
    label: str
    x: float
    y: float


@dataclass(frozen=True)
class ClassPoint:
    label: str
    x: float
    y: float
    contribution_dim1: float  # contribution along the first displayed dimension
    contribution_dim2: float  # ... and the second (0.0 in one-dimensional views)
    avg_frequency: float


@dataclass(frozen=True)
class BiplotView:
    """Everything a renderer needs for one biplot, already filtered."""

    group_points: tuple[GroupPoint, ...]
    class_points: tuple[ClassPoint, ...]
    axis_labels: tuple[str, str]
    dropped_by_filter: tuple[str, ...]
    loss_of_information: float  # percent of inertia outside the displayed dims
    dims: tuple[int, int]
    one_dimensional: bool
    frequency_groups: tuple[str, ...]
    frequency_rows: tuple[tuple[str, tuple[float, ...], float], ...]  # label, pct per group, avg pct
    label_groups: bool = True


def make_view(result: CAResult, table: StackedTable, cfg: BiplotConfig = BiplotConfig()) -> BiplotView:
    """Build the filtered biplot view for two displayed dimensions.

    With rank < 2 the view falls back to a one-dimensional strip layout and
    sets ``one_dimensional`` instead of failing; explicitly requesting a
    dimension beyond the rank raises :class:`RankTooLow`.
    """
    rank = result.rank
    if rank >= 2:
        da, db = cfg.dims
        if da > rank or db > rank:
            raise RankTooLow(f"requested dims {cfg.dims} but decomposition rank is {rank}")
        one_d = False
    else:
        da, db = 1, 2
        one_d = True

    def share(k: int) -> float:
        return float(result.inertia_shares_pct[k - 1]) if k <= rank else 0.0

    def coord(matrix: np.ndarray, row: int, k: int) -> float:
        return float(matrix[row, k - 1]) if k <= rank else 0.0

    loss = max(0.0, 100.0 - share(da) - share(db)) if rank else 0.0

    axis_a = f"Dim {da} ({share(da):.2f}%)"
    axis_b = f"Dim {db} ({share(db):.2f}%)" if not one_d else "(rank < 2: strip layout)"

    group_points = tuple(
        GroupPoint(g, coord(result.treatment_coords, j, da), coord(result.treatment_coords, j, db))
        for j, g in enumerate(result.groups)
    )

    freq = frequency_table(table)
    pct_by_label = {lbl: (tuple(float(v) for v in row), float(avg)) for lbl, row, avg in
                    zip(freq.class_labels, freq.values_pct, freq.average_pct)}

    class_points: list[ClassPoint] = []
    dropped: list[str] = []
    shown_rows: list[tuple[str, tuple[float, ...], float]] = []
    for i, label in enumerate(result.class_labels):
        row = 2 * i  # positive row; complements sit at 2i + 1
        c1 = coord(result.contributions, row, da)
        c2 = coord(result.contributions, row, db)
        avg = float(result.avg_frequency[i])
        if max(c1, c2) >= cfg.contrib_min and avg >= cfg.freq_min:
            class_points.append(ClassPoint(
                label,
                coord(result.class_coords, row, da),
                coord(result.class_coords, row, db),
                c1, c2, avg,
            ))
            shown_rows.append((label, *pct_by_label[label]))
            if cfg.show_complements:
                crow = row + 1
                class_points.append(ClassPoint(
                    label + COMPLEMENT_SUFFIX,
                    coord(result.class_coords, crow, da),
                    coord(result.class_coords, crow, db),
                    coord(result.contributions, crow, da),
                    coord(result.contributions, crow, db),
                    1.0 - avg,
                ))
        else:
            dropped.append(label)

    return BiplotView(
        group_points=group_points,
        class_points=tuple(class_points),
        axis_labels=(axis_a, axis_b),
        dropped_by_filter=tuple(dropped),
        loss_of_information=loss,
        dims=(da, db),
        one_dimensional=one_d,
        frequency_groups=table.groups,
        frequency_rows=tuple(shown_rows),
        label_groups=cfg.label_groups,
    )


def view_to_dict(view: BiplotView) -> dict:
    """JSON-ready dict form of a view (documented schema, full precision)."""
    return {
        "dims": list(view.dims),
        "one_dimensional": view.one_dimensional,
        "axis_labels": list(view.axis_labels),
        "loss_of_information_pct": view.loss_of_information,
        "group_points": [
            {"label": p.label, "x": p.x, "y": p.y} for p in view.group_points
        ],
        "class_points": [
            {
                "label": p.label,
                "x": p.x,
                "y": p.y,
                "contribution_dim1": p.contribution_dim1,
                "contribution_dim2": p.contribution_dim2,
                "avg_frequency": p.avg_frequency,
            }
            for p in view.class_points
        ],
        "dropped_by_filter": list(view.dropped_by_filter),
        "frequency_table": {
            "groups": list(view.frequency_groups),
            "rows": [
                {"label": label, "values_pct": list(vals), "average_pct": avg}
                for label, vals, avg in view.frequency_rows
            ],
        },
    }


def export_json(view: BiplotView) -> bytes:
    """Serialize a view to stable, byte-deterministic JSON."""
    return (json.dumps(view_to_dict(view), indent=2, sort_keys=False) + "\n").encode("utf-8")


# --- SVG rendering -----------------------------------------------------------

_GROUP_COLOR = "#c62828"
_CLASS_COLOR = "#1565c0"
_FONT = "font-family=\"Helvetica, Arial, sans-serif\""


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _nudge_labels(boxes: list[tuple[float, float, float, float]], x: float, y: float,
                  w: float, h: float) -> tuple[float, float]:
    # Greedy downward steps in a fixed order keep the layout reproducible.
    for step in range(0, 40):
        yy = y + step * 11.0
        if all(xx + ww <= x or x + w <= xx or yy2 + hh <= yy or yy + h <= yy2
               for (xx, yy2, ww, hh) in boxes):
            boxes.append((x, yy, w, h))
            return x, yy
    boxes.append((x, y, w, h))
    return x, y


def render_svg(view: BiplotView, width: int = 760, height: int = 560) -> str:
    """Render a view to standalone SVG 1.1 markup (deterministic)."""
    margin = 56.0
    inner_w = width - 2 * margin
    inner_h = height - 2 * margin

    xs = [0.0] + [p.x for p in view.group_points] + [p.x for p in view.class_points]
    ys = [0.0] + [p.y for p in view.group_points] + [p.y for p in view.class_points]
    xmin, xmax = min(xs), max(xs)
    ymin, ymax = min(ys), max(ys)
    xpad = 0.08 * (xmax - xmin) or 1.0
    ypad = 0.08 * (ymax - ymin) or 1.0
    xmin, xmax = xmin - xpad, xmax + xpad
    ymin, ymax = ymin - ypad, ymax + ypad

    def sx(v: float) -> float:
        return margin + (v - xmin) / (xmax - xmin) * inner_w

    def sy(v: float) -> float:
        return margin + (ymax - v) / (ymax - ymin) * inner_h

    parts: list[str] = []
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    )
    parts.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>')

    # origin crosshair
    ox, oy = sx(0.0), sy(0.0)
    parts.append(
        f'<line x1="{_fmt(margin)}" y1="{_fmt(oy)}" x2="{_fmt(width - margin)}" y2="{_fmt(oy)}" '
        f'stroke="#9e9e9e" stroke-width="1" stroke-dasharray="4 3"/>'
    )
    if not view.one_dimensional:
        parts.append(
            f'<line x1="{_fmt(ox)}" y1="{_fmt(margin)}" x2="{_fmt(ox)}" y2="{_fmt(height - margin)}" '
            f'stroke="#9e9e9e" stroke-width="1" stroke-dasharray="4 3"/>'
        )

    # axis annotations
    parts.append(
        f'<text x="{_fmt(width / 2)}" y="{_fmt(height - 14)}" text-anchor="middle" '
        f'{_FONT} font-size="13">{_escape(view.axis_labels[0])}</text>'
    )
    parts.append(
        f'<text x="16" y="{_fmt(height / 2)}" text-anchor="middle" {_FONT} font-size="13" '
        f'transform="rotate(-90 16 {_fmt(height / 2)})">{_escape(view.axis_labels[1])}</text>'
    )
    parts.append(
        f'<text x="{_fmt(width - margin)}" y="22" text-anchor="end" {_FONT} font-size="12" '
        f'fill="#424242">Loss of information: {view.loss_of_information:.2f}%</text>'
    )
    if view.one_dimensional:
        parts.append(
            f'<text x="{_fmt(margin)}" y="22" text-anchor="start" {_FONT} font-size="12" '
            f'fill="#b71c1c">rank &lt; 2: one-dimensional strip layout</text>'
        )

    boxes: list[tuple[float, float, float, float]] = []

    parts.append(f'<g fill="{_CLASS_COLOR}">')
    for p in view.class_points:
        parts.append(f'<circle cx="{_fmt(sx(p.x))}" cy="{_fmt(sy(p.y))}" r="3.5"/>')
    parts.append('</g>')
    parts.append(f'<g fill="{_CLASS_COLOR}" {_FONT} font-size="11">')
    for p in view.class_points:
        lx, ly = _nudge_labels(boxes, sx(p.x) + 5.0, sy(p.y) - 4.0, 6.2 * len(p.label), 11.0)
        parts.append(f'<text x="{_fmt(lx)}" y="{_fmt(ly)}">{_escape(p.label)}</text>')
    parts.append('</g>')

    parts.append(f'<g fill="{_GROUP_COLOR}">')
    for p in view.group_points:
        x, y = sx(p.x), sy(p.y)
        parts.append(f'<rect x="{_fmt(x - 3.5)}" y="{_fmt(y - 3.5)}" width="7" height="7"/>')
    parts.append('</g>')
    if view.label_groups:
        parts.append(f'<g fill="{_GROUP_COLOR}" {_FONT} font-size="12" font-weight="bold">')
        for p in view.group_points:
            lx, ly = _nudge_labels(boxes, sx(p.x) + 6.0, sy(p.y) - 6.0, 7.0 * len(p.label), 12.0)
            parts.append(f'<text x="{_fmt(lx)}" y="{_fmt(ly)}">{_escape(p.label)}</text>')
        parts.append('</g>')

    parts.append('</svg>')
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def filter_view(view: BiplotView, contrib_min: float, freq_min: float) -> BiplotView:
    """Re-filter an existing (zero-threshold) view without recomputing CA.

    Equivalent to building the view with these thresholds in the first
    place; raising either threshold never adds a point.  Complement points
    (if present) follow their parent class, as in :func:`make_view`.
    """
    kept_parents = {
        p.label for p in view.class_points
        if not p.label.endswith(COMPLEMENT_SUFFIX)
        and max(p.contribution_dim1, p.contribution_dim2) >= contrib_min
        and p.avg_frequency >= freq_min
    }

    def keeps(p: ClassPoint) -> bool:
        if p.label.endswith(COMPLEMENT_SUFFIX):
            return p.label[: -len(COMPLEMENT_SUFFIX)] in kept_parents
        return p.label in kept_parents

    kept = tuple(p for p in view.class_points if keeps(p))
    newly_dropped = [
        p.label for p in view.class_points
        if not p.label.endswith(COMPLEMENT_SUFFIX) and p.label not in kept_parents
    ]
    dropped = tuple(list(view.dropped_by_filter) + newly_dropped)
    rows = tuple(r for r in view.frequency_rows if r[0] in kept_parents)
    return replace(view, class_points=kept, dropped_by_filter=dropped, frequency_rows=rows)
