"""Stacked correspondence analysis and contribution biplots for AE data.

Pipeline: parse long-format adverse-event records (`ae_data`), build the
stacked class-by-treatment frequency table (`contingency`), decompose it
(`ca`), and turn the result into filtered biplot views, SVG, and JSON
(`biplot`).  `service` and `cli` wrap the same pipeline for HTTP and batch
use.
"""

from .ae_data import (
    AEClass,
    AERecord,
    ClassLevel,
    ColumnMap,
    Dataset,
    derive_classes,
    filter_cycle,
    filter_min_grade,
    parse_dataset,
    parse_roster,
)
from .biplot import BiplotConfig, BiplotView, export_json, make_view, render_svg
from .ca import CAResult, chi2_distance, decompose, reconstruct, standardized_residuals, total_inertia
from .contingency import FrequencyTable, StackedTable, build_stacked, frequency_table, from_pi_matrix

__version__ = "0.1.0"

__all__ = [
    "AEClass",
    "AERecord",
    "BiplotConfig",
    "BiplotView",
    "CAResult",
    "ClassLevel",
    "ColumnMap",
    "Dataset",
    "FrequencyTable",
    "StackedTable",
    "build_stacked",
    "chi2_distance",
    "decompose",
    "derive_classes",
    "export_json",
    "filter_cycle",
    "filter_min_grade",
    "frequency_table",
    "from_pi_matrix",
    "make_view",
    "parse_dataset",
    "parse_roster",
    "reconstruct",
    "render_svg",
    "standardized_residuals",
    "total_inertia",
    "__version__",
]
