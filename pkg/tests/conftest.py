"""Shared fixtures: published grade-level tables, toy records, random data."""

import numpy as np
import pytest

from aebiplot import ColumnMap, from_pi_matrix, parse_dataset

# Grade-level percentage tables from the two NSABP trials (R04 and B35),
# as published.  The B35 G3 entry for adherent anastrozole is reconstructed
# from the row average: the published table prints 2.22 there, which
# contradicts its own Average column (7.63 requires the row to sum to 30.52);
# 4.06 restores consistency and reproduces the published inertia shares.
R04_GROUPS = ["5-FU", "5-FU+Oxa", "Cape", "Cape+Oxa"]
R04_CLASSES = ["G1", "G2", "G3", "G4", "G5"]
R04_PI_PCT = np.array([
    [1.22, 2.75, 1.23, 3.96],
    [60.67, 74.01, 63.08, 70.73],
    [25.31, 38.53, 27.39, 39.94],
    [0.61, 3.06, 2.15, 4.27],
    [0.31, 0.31, 1.23, 1.52],
])
R04_EXPECTED_SHARES = (87.77, 10.46, 1.77)

B35_GROUPS = ["Adh-Anastrozole", "Adh-Tamoxifen", "NonAdh-Anastrozole", "NonAdh-Tamoxifen"]
B35_CLASSES = ["G2", "G3", "G4"]
B35_PI_PCT = np.array([
    [38.22, 40.69, 49.66, 52.23],
    [4.06, 3.91, 10.61, 11.94],
    [0.188, 0.279, 0.903, 3.279],
])
B35_EXPECTED_SHARES = (92.57, 6.98, 0.45)

TOY_CSV = """patient_id,group,grade,domain,term,cycle
1,A,3,C,G,1
2,A,3,C,E,1
3,A,2,D,G,2
4,B,2,D,E,1
5,B,5,D,F,2
6,B,3,C,H,1
"""

TOY_BINDINGS = ColumnMap(
    patient="patient_id", group="group", grade="grade",
    domain="domain", term="term", cycle="cycle",
)


@pytest.fixture
def r04_table():
    return from_pi_matrix(R04_PI_PCT / 100.0, R04_CLASSES, R04_GROUPS)


@pytest.fixture
def b35_table():
    return from_pi_matrix(B35_PI_PCT / 100.0, B35_CLASSES, B35_GROUPS)


@pytest.fixture
def toy_dataset():
    return parse_dataset(TOY_CSV, TOY_BINDINGS)


def random_pi(rng, max_classes=10, max_groups=6):
    n_classes = int(rng.integers(2, max_classes + 1))
    n_groups = int(rng.integers(2, max_groups + 1))
    return rng.uniform(0.01, 0.99, size=(n_classes, n_groups))


def random_records_csv(rng, max_patients=20, max_groups=4, max_classes=5):
    """Random long-format AE export over grade classes 1..max_classes."""
    n_groups = int(rng.integers(2, max_groups + 1))
    groups = [f"arm{j}" for j in range(n_groups)]
    lines = ["patient_id,group,grade"]
    # every patient gets at least one record so the roster heuristic is exact
    n_patients = int(rng.integers(n_groups, max_patients + 1))
    assigned = [groups[i % n_groups] for i in range(n_patients)]
    for pid, group in enumerate(assigned):
        n_events = int(rng.integers(1, 5))
        for _ in range(n_events):
            grade = int(rng.integers(1, max_classes + 1))
            lines.append(f"p{pid},{group},{grade}")
    return "\n".join(lines) + "\n"


def brute_force_pi(dataset, level):
    """Independent patient-scan computation of the class frequency matrix.

    Pure-python loops over (class, group): count distinct patients holding
    at least one record of the class, divide by N_j.  Returns the matrix
    with rows sorted by class label, plus the labels.
    """
    from aebiplot import derive_classes

    classes, assignment = derive_classes(dataset, level)
    labels = [c.label for c in classes]
    pi = np.zeros((len(classes), len(dataset.groups)))
    for ci in range(len(classes)):
        for gj, group in enumerate(dataset.groups):
            seen = set()
            for rec, a in zip(dataset.records, assignment):
                if a == ci and rec.group == group:
                    seen.add(rec.patient_id)
            pi[ci, gj] = len(seen) / dataset.patients_per_group[group]
    return pi, labels


R04_PATIENTS = [328, 327, 325, 328]


def r04_records_csv():
    """Records fixture reconstructing the R04 grade-level table.

    Per-class patient counts are the published percentages times the arm
    sizes (they land on integers to within rounding).  Cycle-1 records carry
    the AEs; every patient without one gets a cycle-2 placeholder so the
    first-appearance roster still counts the full arm.
    """
    counts = np.rint(R04_PI_PCT * np.array(R04_PATIENTS) / 100.0).astype(int)
    lines = ["patient_id,group,grade,cycle"]
    for j, group in enumerate(R04_GROUPS):
        covered = counts[:, j].max()
        for i, grade in enumerate([1, 2, 3, 4, 5]):
            for patient in range(counts[i, j]):
                lines.append(f"{group}-{patient:03d},{group},{grade},1")
        for patient in range(covered, R04_PATIENTS[j]):
            lines.append(f"{group}-{patient:03d},{group},1,2")
    return "\n".join(lines) + "\n"


def eq5_double_loop(pi):
    """Total inertia by the literal double loop over groups and classes."""
    n_classes, n_groups = pi.shape
    total = 0.0
    for j in range(n_groups):
        for i in range(n_classes):
            mean_i = sum(pi[i]) / n_groups
            total += (pi[i, j] - mean_i) ** 2 / (mean_i * (1.0 - mean_i))
    return total / (n_classes * n_groups)
