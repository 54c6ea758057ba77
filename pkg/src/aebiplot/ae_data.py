"""Long-format adverse-event records: parsing, validation, class derivation.

Input files are delimited text (comma or tab, auto-detected from the header
row, UTF-8) with one row per reported adverse event.  Rows that fail
validation go to a reject list instead of aborting the parse: AE exports are
rarely clean, and the analyst needs to see exactly what was excluded.

Patient counts per group (``N_j``) default to the number of distinct patient
ids among the group's valid records.  That heuristic undercounts patients who
never reported an AE, so an explicit roster file (``patient_id, group``) can
override it.  Cycle filtering never shrinks ``N_j``: a patient with no AEs in
the selected cycle still counts in the denominator.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadGrade,
    EmptyDataset,
    MissingColumn,
    MissingField,
    RosterMismatch,
    SingleGroup,
)

VALID_GRADES = (1, 2, 3, 4, 5)


class ClassLevel(Enum):
    """AE-class refinement level, in fixed reporting order."""

    GRADE = "grade"
    DOMAIN = "domain"
    DOMAIN_GRADE = "domain_grade"
    TERM = "term"
    TERM_GRADE = "term_grade"

    @classmethod
    def from_token(cls, token: str) -> "ClassLevel":
        """Accept API/CLI spellings such as ``domain_grade`` or ``domain+grade``."""
        norm = token.strip().lower().replace("+", "_").replace("-", "_").replace(" ", "_")
        norm = norm.replace("__", "_")
        for level in cls:
            if level.value == norm:
                return level
        raise ValueError(
            f"unknown class level {token!r}; expected one of "
            + ", ".join(l.value for l in cls)
        )

    @property
    def needs_domain(self) -> bool:
        return self in (ClassLevel.DOMAIN, ClassLevel.DOMAIN_GRADE)

    @property
    def needs_term(self) -> bool:
        return self in (ClassLevel.TERM, ClassLevel.TERM_GRADE)

    @property
    def display_name(self) -> str:
        return {
            ClassLevel.GRADE: "Grade",
            ClassLevel.DOMAIN: "Domain",
            ClassLevel.DOMAIN_GRADE: "Domain + Grade",
            ClassLevel.TERM: "Term",
            ClassLevel.TERM_GRADE: "Term + Grade",
        }[self]


REPORTING_ORDER = (
    ClassLevel.GRADE,
    ClassLevel.DOMAIN,
    ClassLevel.DOMAIN_GRADE,
    ClassLevel.TERM,
    ClassLevel.TERM_GRADE,
)


@dataclass(frozen=True)
class AERecord:
    """One adverse-event observation in long format."""

    patient_id: str
    group: str
    grade: int
    domain: str | None = None
    term: str | None = None
    cycle: int | None = None

    def __post_init__(self):
        if not self.patient_id:
            raise ValueError("patient_id must be non-empty")
        if not self.group:
            raise ValueError("group must be non-empty")
        if not isinstance(self.grade, int) or self.grade not in VALID_GRADES:
            raise BadGrade(f"grade must be an integer in 1..5, got {self.grade!r}")
        if self.cycle is not None and (not isinstance(self.cycle, int) or self.cycle < 0):
            raise ValueError(f"cycle must be a non-negative integer, got {self.cycle!r}")


@dataclass(frozen=True)
class AEClass:
    """A concrete AE class at one refinement level.

    ``label`` is the canonical display form: ``G<g>`` for grades,
    ``<domain>:G<g>`` / ``<term>:G<g>`` for combined levels, and the raw
    string for domain/term levels.
    """

    label: str
    level: ClassLevel | None
    grade: int | None = None
    domain: str | None = None
    term: str | None = None


@dataclass(frozen=True)
class RejectedRow:
    """A row excluded during parsing, with the file line number (1-based)."""

    line: int
    reason: str
    raw: str


@dataclass(frozen=True)
class ColumnMap:
    """Bindings from record fields to input column names."""

    patient: str
    group: str
    grade: str
    domain: str | None = None
    term: str | None = None
    cycle: str | None = None


@dataclass(frozen=True)
class Dataset:
    """Validated, immutable collection of AE records.

    ``groups`` preserves first-appearance order of the input unless an
    explicit order was supplied at parse time.  ``patients_per_group`` holds
    N_j for every group.
    """

    records: tuple[AERecord, ...]
    groups: tuple[str, ...]
    patients_per_group: Mapping[str, int]
    rejects: tuple[RejectedRow, ...] = ()

    def __post_init__(self):
        if not self.records:
            raise EmptyDataset("dataset contains no valid records")
        if len(self.groups) < 2:
            raise SingleGroup(
                f"need at least 2 groups, got {len(self.groups)}: {list(self.groups)}"
            )
        for g in self.groups:
            if self.patients_per_group.get(g, 0) < 1:
                raise ValueError(f"group {g!r} has no patients")

    @property
    def n_patients(self) -> int:
        return sum(self.patients_per_group[g] for g in self.groups)

    def to_delimited(self, delimiter: str = ",") -> str:
        """Serialize records to canonical delimited text (re-parseable)."""
        buf = io.StringIO()
        w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
        w.writerow(["patient_id", "group", "grade", "domain", "term", "cycle"])
        for r in self.records:
            w.writerow([
                r.patient_id,
                r.group,
                r.grade,
                r.domain or "",
                r.term or "",
                "" if r.cycle is None else r.cycle,
            ])
        return buf.getvalue()


CANONICAL_COLUMNS = ColumnMap(
    patient="patient_id", group="group", grade="grade",
    domain="domain", term="term", cycle="cycle",
)


def _as_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _detect_delimiter(header_line: str) -> str:
    # Tab wins when present at least as often as commas; else comma.
    return "\t" if header_line.count("\t") >= max(header_line.count(","), 1) else ","


def _clean(cell: str | None) -> str:
    return (cell or "").strip()


def parse_dataset(
    source,
    column_map: ColumnMap,
    roster: Mapping[str, Iterable[str]] | None = None,
    group_order: Sequence[str] | None = None,
) -> Dataset:
    """Parse delimited AE records into a validated :class:`Dataset`.

    ``source`` is delimited text (str, bytes, or a file-like object) with a
    header row.  Invalid rows land in ``Dataset.rejects`` with the input line
    number and a reason.  ``roster`` maps group label to the full patient-id
    collection for that group and overrides the records-derived N_j.

    Raises :class:`MissingColumn`, :class:`EmptyDataset`, :class:`SingleGroup`.
    """
    text = _as_text(source)
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise EmptyDataset("input has no header row")
    delim = _detect_delimiter(lines[0])
    rows = list(csv.reader(lines, delimiter=delim))

    header = [_clean(h) for h in rows[0]]
    index: dict[str, int] = {}
    for pos, name in enumerate(header):
        index.setdefault(name.casefold(), pos)

    def col(name: str | None) -> int | None:
        if name is None:
            return None
        pos = index.get(name.strip().casefold())
        if pos is None:
            raise MissingColumn(f"column {name!r} not found in header {header}")
        return pos

    i_patient = col(column_map.patient)
    i_group = col(column_map.group)
    i_grade = col(column_map.grade)
    i_domain = col(column_map.domain)
    i_term = col(column_map.term)
    i_cycle = col(column_map.cycle)

    roster_sets: dict[str, frozenset[str]] | None = None
    if roster is not None:
        roster_sets = {g: frozenset(p) for g, p in roster.items()}

    records: list[AERecord] = []
    rejects: list[RejectedRow] = []
    seen_groups: list[str] = []
    patients_seen: dict[str, set[str]] = {}

    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not _clean(c) for c in row):
            continue  # blank line
        raw = delim.join(row)

        def cell(i: int | None) -> str:
            return _clean(row[i]) if i is not None and i < len(row) else ""

        patient = cell(i_patient)
        group = cell(i_group)
        grade_s = cell(i_grade)
        if not patient:
            rejects.append(RejectedRow(lineno, "empty patient id", raw))
            continue
        if not group:
            rejects.append(RejectedRow(lineno, "empty group", raw))
            continue
        try:
            grade = int(grade_s)
        except ValueError:
            rejects.append(RejectedRow(lineno, f"grade {grade_s!r} is not an integer", raw))
            continue
        if grade not in VALID_GRADES:
            rejects.append(RejectedRow(lineno, f"grade {grade} outside 1..5", raw))
            continue
        cycle: int | None = None
        cycle_s = cell(i_cycle)
        if cycle_s:
            try:
                cycle = int(cycle_s)
            except ValueError:
                rejects.append(RejectedRow(lineno, f"cycle {cycle_s!r} is not an integer", raw))
                continue
            if cycle < 0:
                rejects.append(RejectedRow(lineno, f"cycle {cycle} is negative", raw))
                continue
        if roster_sets is not None:
            if group not in roster_sets:
                rejects.append(RejectedRow(lineno, f"group {group!r} not in roster", raw))
                continue
            if patient not in roster_sets[group]:
                rejects.append(RejectedRow(lineno, f"patient {patient!r} not in roster for group {group!r}", raw))
                continue

        records.append(AERecord(
            patient_id=patient,
            group=group,
            grade=grade,
            domain=cell(i_domain) or None,
            term=cell(i_term) or None,
            cycle=cycle,
        ))
        if group not in patients_seen:
            patients_seen[group] = set()
            seen_groups.append(group)
        patients_seen[group].add(patient)

    if not records:
        raise EmptyDataset(f"no valid records ({len(rejects)} rows rejected)")

    if group_order is not None:
        missing = [g for g in seen_groups if g not in group_order]
        if missing:
            raise ValueError(f"explicit group order does not cover groups {missing}")
        groups = tuple(g for g in group_order if g in patients_seen)
    else:
        groups = tuple(seen_groups)

    if roster_sets is not None:
        n_per_group = {g: len(roster_sets[g]) for g in groups}
    else:
        n_per_group = {g: len(patients_seen[g]) for g in groups}

    return Dataset(tuple(records), groups, n_per_group, tuple(rejects))


def parse_roster(source) -> dict[str, set[str]]:
    """Parse a roster file: header with ``patient_id`` and ``group`` columns.

    Returns group -> set of patient ids.  A patient listed under two groups
    raises :class:`RosterMismatch`.
    """
    text = _as_text(source)
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise RosterMismatch("roster has no header row")
    delim = _detect_delimiter(lines[0])
    rows = list(csv.reader(lines, delimiter=delim))
    header = [_clean(h).casefold() for h in rows[0]]
    try:
        i_patient = header.index("patient_id")
        i_group = header.index("group")
    except ValueError:
        raise MissingColumn(
            f"roster header must contain patient_id and group, got {rows[0]}"
        ) from None

    by_group: dict[str, set[str]] = {}
    assigned: dict[str, str] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not _clean(c) for c in row):
            continue
        patient = _clean(row[i_patient]) if i_patient < len(row) else ""
        group = _clean(row[i_group]) if i_group < len(row) else ""
        if not patient or not group:
            raise RosterMismatch(f"roster line {lineno}: empty patient or group")
        if patient in assigned and assigned[patient] != group:
            raise RosterMismatch(
                f"roster line {lineno}: patient {patient!r} listed in both "
                f"{assigned[patient]!r} and {group!r}"
            )
        assigned[patient] = group
        by_group.setdefault(group, set()).add(patient)
    if not by_group:
        raise RosterMismatch("roster contains no entries")
    return by_group


def filter_cycle(d: Dataset, cycle: int) -> Dataset:
    """Keep only records reported at the given cycle.

    N_j keeps counting every rostered patient of a surviving group: a patient
    with no AEs in the cycle still belongs to the denominator.  Groups left
    with zero records are removed.
    """
    missing = sum(1 for r in d.records if r.cycle is None)
    if missing:
        raise MissingField(f"{missing} records carry no cycle value")
    kept = tuple(r for r in d.records if r.cycle == cycle)
    if not kept:
        raise EmptyDataset(f"no records at cycle {cycle}")
    surviving = {r.group for r in kept}
    groups = tuple(g for g in d.groups if g in surviving)
    if len(groups) < 2:
        raise SingleGroup(f"only {len(groups)} group(s) have records at cycle {cycle}")
    n = {g: d.patients_per_group[g] for g in groups}
    return Dataset(kept, groups, n, d.rejects)


def filter_min_grade(d: Dataset, min_grade: int) -> Dataset:
    """Keep only records with grade >= ``min_grade`` (same N_j semantics as
    :func:`filter_cycle`).  Useful when low grades are known to be
    under-reported; the default pipeline includes all grades."""
    kept = tuple(r for r in d.records if r.grade >= min_grade)
    if not kept:
        raise EmptyDataset(f"no records with grade >= {min_grade}")
    surviving = {r.group for r in kept}
    groups = tuple(g for g in d.groups if g in surviving)
    if len(groups) < 2:
        raise SingleGroup(f"only {len(groups)} group(s) have records with grade >= {min_grade}")
    n = {g: d.patients_per_group[g] for g in groups}
    return Dataset(kept, groups, n, d.rejects)


def _canonical_spellings(values: Iterable[str]) -> dict[str, str]:
    """Case-insensitive key -> deterministic display spelling.

    The lexicographically smallest observed spelling wins, so the result does
    not depend on record order.
    """
    best: dict[str, str] = {}
    for v in values:
        k = v.casefold()
        if k not in best or v < best[k]:
            best[k] = v
    return best


def derive_classes(
    d: Dataset, level: ClassLevel
) -> tuple[list[AEClass], list[int]]:
    """Assign every record to exactly one AE class at the given level.

    Returns the deduplicated class list (lexicographic by label) and, for
    each record in input order, the index of its class.  Class identity is
    case-insensitive; display labels use a deterministic canonical spelling.

    Raises :class:`MissingField` when the level needs a field some records lack.
    """
    if level.needs_domain:
        missing = sum(1 for r in d.records if not r.domain)
        if missing:
            raise MissingField(f"level {level.value} needs a domain; {missing} records lack one")
    if level.needs_term:
        missing = sum(1 for r in d.records if not r.term)
        if missing:
            raise MissingField(f"level {level.value} needs a term; {missing} records lack one")

    domain_names = _canonical_spellings(r.domain for r in d.records if r.domain)
    term_names = _canonical_spellings(r.term for r in d.records if r.term)

    def class_of(r: AERecord) -> AEClass:
        if level is ClassLevel.GRADE:
            return AEClass(f"G{r.grade}", level, grade=r.grade)
        if level is ClassLevel.DOMAIN:
            dom = domain_names[r.domain.casefold()]
            return AEClass(dom, level, domain=dom)
        if level is ClassLevel.DOMAIN_GRADE:
            dom = domain_names[r.domain.casefold()]
            return AEClass(f"{dom}:G{r.grade}", level, grade=r.grade, domain=dom)
        if level is ClassLevel.TERM:
            term = term_names[r.term.casefold()]
            return AEClass(term, level, term=term)
        term = term_names[r.term.casefold()]
        return AEClass(f"{term}:G{r.grade}", level, grade=r.grade, term=term)

    per_record = [class_of(r) for r in d.records]
    classes = sorted({c.label: c for c in per_record}.values(), key=lambda c: c.label)
    idx = {c.label: i for i, c in enumerate(classes)}
    return classes, [idx[c.label] for c in per_record]
