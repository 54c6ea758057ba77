"""Stacked contingency tables of per-patient AE-class frequencies.

Each AE class contributes two rows: the fraction of patients in each group
who reported it at least once, and the complementary fraction.  Stacking the
complement equalizes the column totals, so every treatment gets the same
mass regardless of how many AEs (or patients) it has.

With I classes and J groups the column-profile matrix ``P`` is 2I x J with
rows interleaved as ``(pi_ij / I, (1 - pi_ij) / I)``; every column sums to 1.
Column masses are uniform (1/J) and row masses are the mass-weighted average
profile.  Scaling ``P`` by the column masses yields the correspondence
matrix with grand total 1 that the CA decomposition consumes.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ae_data import AEClass, ClassLevel, Dataset, derive_classes
from .errors import DimensionMismatch, EmptyDataset, OutOfRange, SingleGroup

COMPLEMENT_SUFFIX = "ᶜ"  # modifier small c, e.g. "G2ᶜ"


def degenerate_class_mask(pi: np.ndarray) -> np.ndarray:
    """True for classes that carry zero inertia *and* break the chi-square
    denominator: frequency constant across groups at exactly 0 or 1."""
    constant = np.all(pi == pi[:, :1], axis=1)
    extreme = (pi[:, 0] == 0.0) | (pi[:, 0] == 1.0)
    return constant & extreme


def total_inertia_from_pi(pi: np.ndarray) -> float:
    """Total inertia of the stacked table built from ``pi``.

    Computed over retained classes only (degenerate classes dropped), as
    the grand average of squared standardized deviations from the average
    profile:  (1/(I*J)) * sum_ij (pi_ij - mean_i)^2 / (mean_i * (1 - mean_i)).
    """
    keep = ~degenerate_class_mask(pi)
    if not keep.any():
        return 0.0
    kept = pi[keep]
    n_classes, n_groups = kept.shape
    mean = kept.mean(axis=1)
    dev = kept - mean[:, None]
    denom = (mean * (1.0 - mean))[:, None]
    return float(np.sum(dev * dev / denom) / (n_classes * n_groups))


def stack_profiles(pi: np.ndarray) -> np.ndarray:
    """Interleave (pi/I, (1-pi)/I) rows into the 2I x J column-profile matrix."""
    n_classes = pi.shape[0]
    P = np.empty((2 * n_classes, pi.shape[1]))
    P[0::2] = pi / n_classes
    P[1::2] = (1.0 - pi) / n_classes
    return P


def stacked_labels(class_labels: Sequence[str]) -> tuple[str, ...]:
    """Class labels interleaved with their complement labels."""
    out: list[str] = []
    for label in class_labels:
        out.append(label)
        out.append(label + COMPLEMENT_SUFFIX)
    return tuple(out)


@dataclass(frozen=True)
class StackedTable:
    """Immutable 2I x J correspondence table with masses and inertia.

    ``pi`` is the I x J per-class relative-frequency matrix, ``P`` the
    stacked column-profile matrix.  ``total_inertia`` is computed over
    retained (non-degenerate) classes; it is 0.0 when every class is
    degenerate, in which case downstream CA raises ``DegenerateTable``.
    """

    classes: tuple[AEClass, ...]
    groups: tuple[str, ...]
    pi: np.ndarray
    P: np.ndarray
    col_masses: np.ndarray
    row_masses: np.ndarray
    total_inertia: float

    def __post_init__(self):
        for arr in (self.pi, self.P, self.col_masses, self.row_masses):
            arr.setflags(write=False)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def class_labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.classes)

    @property
    def stacked_labels(self) -> tuple[str, ...]:
        return stacked_labels(self.class_labels)

    @property
    def avg_frequency(self) -> np.ndarray:
        """Average relative frequency per class (the tables' Average column)."""
        return self.pi.mean(axis=1)

    @property
    def degenerate_classes(self) -> tuple[str, ...]:
        """Classes retained here but flagged for the CA drop rule
        (frequency constant at exactly 0 or 1 across every group)."""
        mask = degenerate_class_mask(self.pi)
        return tuple(c.label for c, flag in zip(self.classes, mask) if flag)


def _assemble(classes: Sequence[AEClass], groups: Sequence[str], pi: np.ndarray) -> StackedTable:
    pi = np.ascontiguousarray(pi, dtype=float)
    n_groups = len(groups)
    P = stack_profiles(pi)
    col_masses = np.full(n_groups, 1.0 / n_groups)
    row_masses = P @ col_masses
    return StackedTable(
        classes=tuple(classes),
        groups=tuple(groups),
        pi=pi,
        P=P,
        col_masses=col_masses,
        row_masses=row_masses,
        total_inertia=total_inertia_from_pi(pi),
    )


def build_stacked(d: Dataset, level: ClassLevel) -> StackedTable:
    """Build the stacked table for a dataset at one refinement level.

    ``pi[i, j]`` counts distinct patients in group j with at least one record
    of class i, divided by N_j; repeated reports of the same class by the
    same patient count once.
    """
    classes, assignment = derive_classes(d, level)
    group_idx = {g: j for j, g in enumerate(d.groups)}
    patients: dict[tuple[int, int], set[str]] = {}
    for rec, ci in zip(d.records, assignment):
        patients.setdefault((ci, group_idx[rec.group]), set()).add(rec.patient_id)

    pi = np.zeros((len(classes), len(d.groups)))
    for (ci, gj), ids in patients.items():
        pi[ci, gj] = len(ids) / d.patients_per_group[d.groups[gj]]
    return _assemble(classes, d.groups, pi)


def from_pi_matrix(
    pi: np.ndarray,
    class_labels: Sequence[str],
    group_labels: Sequence[str],
    level: ClassLevel | None = None,
) -> StackedTable:
    """Build a stacked table directly from a relative-frequency matrix.

    This is how published percentage tables are replayed without
    patient-level data.  Rows are reordered lexicographically by class label
    to match :func:`build_stacked` output.
    """
    pi = np.asarray(pi, dtype=float)
    if pi.ndim != 2:
        raise DimensionMismatch(f"pi must be 2-D, got shape {pi.shape}")
    n_classes, n_groups = pi.shape
    if n_classes == 0:
        raise EmptyDataset("pi matrix has no class rows")
    if n_groups < 2:
        raise SingleGroup(f"need at least 2 group columns, got {n_groups}")
    if len(class_labels) != n_classes:
        raise DimensionMismatch(
            f"{len(class_labels)} class labels for {n_classes} rows"
        )
    if len(group_labels) != n_groups:
        raise DimensionMismatch(
            f"{len(group_labels)} group labels for {n_groups} columns"
        )
    bad = ~(np.isfinite(pi) & (pi >= 0.0) & (pi <= 1.0))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise OutOfRange(
            f"pi[{i}, {j}] = {pi[i, j]!r} is not a relative frequency in [0, 1]"
        )
    labels = [str(l).strip() for l in class_labels]
    seen: dict[str, str] = {}
    for l in labels:
        k = l.casefold()
        if k in seen:
            raise DimensionMismatch(f"duplicate class label {l!r}")
        seen[k] = l
    groups = [str(g).strip() for g in group_labels]
    if len({g.casefold() for g in groups}) != len(groups):
        raise DimensionMismatch("duplicate group labels")

    order = sorted(range(n_classes), key=lambda i: labels[i])
    classes = [AEClass(labels[i], level) for i in order]
    return _assemble(classes, groups, pi[order])


def read_pi_delimited(source) -> tuple[np.ndarray, list[str], list[str]]:
    """Read a class-frequency matrix from delimited text.

    First header cell is ignored, remaining header cells are group labels;
    each data row starts with the class label.  Values may be proportions
    (all <= 1) or percentages (any value > 1 switches the whole file to
    percent, with a warning).
    """
    from .ae_data import _as_text, _detect_delimiter  # same conventions as records

    text = _as_text(source)
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise EmptyDataset("pi table has no header row")
    delim = _detect_delimiter(lines[0])
    rows = [r for r in csv.reader(lines, delimiter=delim) if any(c.strip() for c in r)]
    header = rows[0]
    if len(header) < 3:
        raise SingleGroup("pi table needs a label column plus at least 2 group columns")
    groups = [h.strip() for h in header[1:]]
    labels: list[str] = []
    values: list[list[float]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DimensionMismatch(
                f"line {lineno}: expected {len(header)} cells, got {len(row)}"
            )
        labels.append(row[0].strip())
        try:
            values.append([float(c) for c in row[1:]])
        except ValueError as exc:
            raise OutOfRange(f"line {lineno}: {exc}") from None
    if not labels:
        raise EmptyDataset("pi table has no data rows")
    pi = np.array(values)
    if np.nanmax(pi) > 1.0:
        warnings.warn("pi table contains values > 1; interpreting as percentages")
        pi = pi / 100.0
    return pi, labels, groups


@dataclass(frozen=True)
class FrequencyTable:
    """Per-class relative frequencies in percent, with the Average column.

    ``values_pct`` stays at full precision; :meth:`render_text` rounds to two
    decimals for display, matching how such tables are usually published.
    """

    class_labels: tuple[str, ...]
    groups: tuple[str, ...]
    values_pct: np.ndarray
    average_pct: np.ndarray

    def __post_init__(self):
        self.values_pct.setflags(write=False)
        self.average_pct.setflags(write=False)

    def to_dict(self) -> dict:
        return {
            "classes": list(self.class_labels),
            "groups": list(self.groups),
            "values_pct": [[float(v) for v in row] for row in self.values_pct],
            "average_pct": [float(v) for v in self.average_pct],
        }

    def render_text(self) -> str:
        headers = ["AE class", *self.groups, "Average"]
        body = [
            [label, *(f"{v:.2f}" for v in row), f"{avg:.2f}"]
            for label, row, avg in zip(self.class_labels, self.values_pct, self.average_pct)
        ]
        widths = [max(len(r[i]) for r in [headers, *body]) for i in range(len(headers))]
        def fmt(cells):
            return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
        return "\n".join([fmt(headers), *(fmt(r) for r in body)])


def frequency_table(t: StackedTable) -> FrequencyTable:
    """The companion relative-frequency table (percent) for a stacked table."""
    return FrequencyTable(
        class_labels=t.class_labels,
        groups=t.groups,
        values_pct=t.pi * 100.0,
        average_pct=t.avg_frequency * 100.0,
    )
