"""Correspondence analysis of stacked AE tables.

The decomposition factors the standardized residual matrix

    S = D_r^{-1/2} (P_c - r c^T) D_c^{-1/2},      P_c = P D_c,

where ``P`` holds the column profiles and ``r``, ``c`` the row and column
masses.  An SVD ``S = A D_alpha B^T`` yields treatment principal coordinates
``F = D_c^{-1/2} B D_alpha`` (inter-point distances approximate chi-square
distances between treatment profiles) and class contribution coordinates
``A`` (squared entries give each class's share of a dimension's inertia, and
sum to 1 per dimension).

Sum of squared singular values equals the table's total inertia; dimensions
below ``RANK_TOL`` times the leading singular value are truncated, since the
complement structure and the centering make stacked tables exactly
rank-deficient.

Classes whose frequency is constant at exactly 0 or 1 across groups are
dropped before the decomposition (their chi-square denominator vanishes and
they carry no discriminating information); their labels are reported on the
result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contingency import (
    StackedTable,
    degenerate_class_mask,
    stack_profiles,
    stacked_labels,
    total_inertia_from_pi,
)
from .errors import DegenerateTable, SvdFailure, ZeroWeight

RANK_TOL = 1e-12

# Sign convention: per dimension, the largest-|F| entry is made positive.
# Entries within this relative band of the maximum count as tied and the
# lowest group index wins, which keeps the convention stable under the
# floating-point jitter of analytically tied entries (J = 2 is always tied).
SIGN_TIE_RTOL = 1e-9


def chi2_distance(profile: np.ndarray, reference: np.ndarray, weights: np.ndarray) -> float:
    """Weighted Euclidean (chi-square) distance between two profiles.

    Coordinates where both profiles agree and the weight is zero are
    skipped; a zero weight under disagreeing profiles raises
    :class:`ZeroWeight`.
    """
    p = np.asarray(profile, dtype=float)
    q = np.asarray(reference, dtype=float)
    w = np.asarray(weights, dtype=float)
    if not (p.shape == q.shape == w.shape):
        raise ValueError(f"shape mismatch: {p.shape}, {q.shape}, {w.shape}")
    zero = w == 0.0
    conflict = zero & (p != q)
    if conflict.any():
        i = int(np.flatnonzero(conflict)[0])
        raise ZeroWeight(f"coordinate {i} has zero weight but differing profiles")
    keep = ~zero
    diff = p[keep] - q[keep]
    return float(np.sqrt(np.sum(diff * diff / w[keep])))


def total_inertia(t: StackedTable) -> float:
    """Total inertia of the table: the mass-weighted sum of squared
    chi-square distances of treatment profiles from the average profile."""
    if degenerate_class_mask(t.pi).all():
        raise DegenerateTable("all classes are constant at 0 or 1")
    return total_inertia_from_pi(t.pi)


def _retained(t: StackedTable):
    keep = ~degenerate_class_mask(t.pi)
    if not keep.any():
        raise DegenerateTable("all classes are constant at 0 or 1")
    dropped = tuple(lbl for lbl, k in zip(t.class_labels, keep) if not k)
    labels = tuple(lbl for lbl, k in zip(t.class_labels, keep) if k)
    return t.pi[keep], labels, dropped


@dataclass(frozen=True)
class ResidualMatrix:
    """Standardized residual profiles; weighted row and column means are zero."""

    S: np.ndarray
    stacked_labels: tuple[str, ...]
    groups: tuple[str, ...]
    row_masses: np.ndarray
    col_masses: np.ndarray
    dropped_classes: tuple[str, ...]

    def __post_init__(self):
        for arr in (self.S, self.row_masses, self.col_masses):
            arr.setflags(write=False)


def standardized_residuals(t: StackedTable) -> ResidualMatrix:
    """Standardized residuals of the (retained) stacked table.

    The squared Frobenius norm of the result equals the total inertia.
    """
    pi, labels, dropped = _retained(t)
    n_groups = len(t.groups)
    P = stack_profiles(pi)
    c = np.full(n_groups, 1.0 / n_groups)
    r = P @ c
    expected = np.outer(r, c)
    S = (P * c - expected) / np.sqrt(expected)
    return ResidualMatrix(
        S=S,
        stacked_labels=stacked_labels(labels),
        groups=t.groups,
        row_masses=r,
        col_masses=c,
        dropped_classes=dropped,
    )


@dataclass(frozen=True)
class CAResult:
    """Output of the correspondence analysis.

    ``treatment_coords`` (J x K) are principal coordinates; Euclidean
    distances between rows reproduce chi-square distances between treatment
    profiles.  ``class_coords`` (2I x K) are contribution coordinates whose
    squares (``contributions``) sum to 1 within each dimension.  Rows of the
    class-side matrices follow ``stacked_labels`` (class and complement
    interleaved, degenerate classes dropped).
    """

    singular_values: np.ndarray
    inertia_shares_pct: np.ndarray
    treatment_coords: np.ndarray
    class_coords: np.ndarray
    contributions: np.ndarray
    class_masses: np.ndarray
    group_masses: np.ndarray
    rank: int
    groups: tuple[str, ...]
    class_labels: tuple[str, ...]
    stacked_labels: tuple[str, ...]
    dropped_classes: tuple[str, ...]
    total_inertia: float
    avg_frequency: np.ndarray

    def __post_init__(self):
        for arr in (
            self.singular_values, self.inertia_shares_pct, self.treatment_coords,
            self.class_coords, self.contributions, self.class_masses,
            self.group_masses, self.avg_frequency,
        ):
            arr.setflags(write=False)

    def to_json_dict(self) -> dict:
        """Stable JSON shape consumed by the service and the CLI."""
        return {
            "singular_values": [float(v) for v in self.singular_values],
            "inertia_shares_pct": [float(v) for v in self.inertia_shares_pct],
            "treatment_coords": [[float(v) for v in row] for row in self.treatment_coords],
            "class_coords": [[float(v) for v in row] for row in self.class_coords],
            "contributions": [[float(v) for v in row] for row in self.contributions],
            "dropped_classes": list(self.dropped_classes),
            "rank": self.rank,
            "total_inertia": float(self.total_inertia),
            "groups": list(self.groups),
            "class_labels": list(self.class_labels),
            "stacked_labels": list(self.stacked_labels),
            "avg_frequency": [float(v) for v in self.avg_frequency],
        }


def _apply_sign_convention(F: np.ndarray, *mats: np.ndarray) -> None:
    for k in range(F.shape[1]):
        col = np.abs(F[:, k])
        top = col.max()
        lead = int(np.flatnonzero(col >= top * (1.0 - SIGN_TIE_RTOL))[0])
        if F[lead, k] < 0:
            F[:, k] *= -1.0
            for m in mats:
                m[:, k] *= -1.0


def decompose(t: StackedTable) -> CAResult:
    """Run the correspondence analysis of a stacked table."""
    pi, labels, dropped = _retained(t)
    res = standardized_residuals(t)
    S, r, c = res.S, res.row_masses, res.col_masses
    try:
        A, alpha, Bt = np.linalg.svd(S, full_matrices=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - not reachable at this size
        raise SvdFailure(str(exc)) from exc

    if alpha.size and alpha[0] > 0.0:
        keep = alpha >= RANK_TOL * alpha[0]
    else:
        keep = np.zeros(alpha.shape, dtype=bool)
    A = np.ascontiguousarray(A[:, keep])
    alpha = np.ascontiguousarray(alpha[keep])
    B = np.ascontiguousarray(Bt[keep].T)
    rank = int(alpha.size)

    F = (1.0 / np.sqrt(c))[:, None] * B * alpha[None, :]
    _apply_sign_convention(F, A, B)

    inertia = float(np.sum(alpha**2))
    shares = 100.0 * alpha**2 / inertia if rank else np.empty(0)

    return CAResult(
        singular_values=alpha,
        inertia_shares_pct=shares,
        treatment_coords=F,
        class_coords=A,
        contributions=A**2,
        class_masses=r,
        group_masses=c,
        rank=rank,
        groups=t.groups,
        class_labels=labels,
        stacked_labels=res.stacked_labels,
        dropped_classes=dropped,
        total_inertia=inertia,
        avg_frequency=pi.mean(axis=1),
    )


def reconstruct(result: CAResult, group_masses: np.ndarray | None = None) -> np.ndarray:
    """Rebuild the standardized residual matrix from the CA factors.

    Serves as the decomposition's verification oracle: the rebuilt matrix
    must match :func:`standardized_residuals` to ~1e-10 max-abs.
    """
    c = result.group_masses if group_masses is None else np.asarray(group_masses, dtype=float)
    if result.rank == 0:
        return np.zeros((len(result.stacked_labels), len(result.groups)))
    # Recover the orthonormal group-side factor from the principal coordinates.
    B = np.sqrt(c)[:, None] * result.treatment_coords / result.singular_values[None, :]
    return (result.class_coords * result.singular_values[None, :]) @ B.T
