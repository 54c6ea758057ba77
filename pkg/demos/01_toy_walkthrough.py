"""Walk through the full pipeline on a tiny hand-made trial.

Six patients, two arms, five AE reports each way; small enough to check the
numbers against a kitchen calculator.
"""

import numpy as np

from aebiplot import (
    ClassLevel,
    ColumnMap,
    build_stacked,
    chi2_distance,
    decompose,
    frequency_table,
    parse_dataset,
)

CSV = """patient_id,group,grade,domain
p1,Control,2,Gastrointestinal
p2,Control,2,Pain
p3,Control,3,Gastrointestinal
p4,Combo,3,Gastrointestinal
p5,Combo,2,Gastrointestinal
p5,Combo,2,Gastrointestinal
p6,Combo,4,Pain
p6,Combo,2,Gastrointestinal
"""

dataset = parse_dataset(CSV, ColumnMap("patient_id", "group", "grade", domain="domain"))
print(f"{len(dataset.records)} records, groups {dataset.groups}, "
      f"patients per group {dict(dataset.patients_per_group)}")
print("note: p5's duplicated report counts once per class\n")

table = build_stacked(dataset, ClassLevel.GRADE)
print("frequency table (percent of patients per arm):")
print(frequency_table(table).render_text())

print("\nstacked column profiles (each column sums to 1):")
print(np.array2string(table.P, precision=4))
print(f"\ncolumn masses: {table.col_masses}  (uniform by construction)")
print(f"total inertia: {table.total_inertia:.6f}")

for j, group in enumerate(table.groups):
    d = chi2_distance(table.P[:, j], table.row_masses, table.row_masses)
    print(f"chi2 distance of {group} from the average profile: {d:.4f}")

result = decompose(table)
print("\ninertia decomposition:")
for k, share in enumerate(result.inertia_shares_pct, start=1):
    print(f"  Dim {k}: {share:6.2f}%")

print("\nhow to read the coordinates:")
print(" 1. a class far from the origin along a dimension drives that dimension;")
print(" 2. an arm near the origin is close to the average toxicity profile;")
print(" 3. arms are compared by their positions along each dimension.")
print("\narm principal coordinates:")
for group, row in zip(result.groups, result.treatment_coords):
    print(f"  {group:8s} {np.array2string(row, precision=4)}")
print("class contribution coordinates (positive rows):")
for i, label in enumerate(result.class_labels):
    print(f"  {label:4s} {np.array2string(result.class_coords[2 * i], precision=4)}")
