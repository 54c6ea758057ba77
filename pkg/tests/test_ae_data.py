import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aebiplot import (
    AERecord,
    ClassLevel,
    ColumnMap,
    derive_classes,
    filter_cycle,
    filter_min_grade,
    parse_dataset,
    parse_roster,
)
from aebiplot.errors import (
    BadGrade,
    EmptyDataset,
    MissingColumn,
    MissingField,
    RosterMismatch,
    SingleGroup,
)
from conftest import TOY_BINDINGS, TOY_CSV


class TestParse:
    def test_toy_table(self, toy_dataset):
        assert len(toy_dataset.records) == 6
        assert toy_dataset.groups == ("A", "B")
        assert toy_dataset.patients_per_group == {"A": 3, "B": 3}
        assert toy_dataset.rejects == ()

    def test_header_only_is_empty(self):
        with pytest.raises(EmptyDataset):
            parse_dataset(TOY_CSV.splitlines()[0] + "\n", TOY_BINDINGS)

    def test_blank_input(self):
        with pytest.raises(EmptyDataset):
            parse_dataset("", TOY_BINDINGS)

    def test_bad_grade_row_goes_to_rejects(self):
        csv = "patient_id,group,grade\np1,A,6\np2,A,2\np3,B,3\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"))
        assert len(d.rejects) == 1
        assert d.rejects[0].line == 2
        assert "6" in d.rejects[0].reason
        assert len(d.records) == 2

    def test_non_integer_grade_rejected(self):
        csv = "patient_id,group,grade\np1,A,high\np2,B,2\np3,A,1\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"))
        assert len(d.rejects) == 1
        assert len(d.records) == 2

    def test_missing_column(self):
        with pytest.raises(MissingColumn):
            parse_dataset(TOY_CSV, ColumnMap("patient_id", "arm", "grade"))

    def test_single_group(self):
        csv = "patient_id,group,grade\np1,A,2\np2,A,3\n"
        with pytest.raises(SingleGroup):
            parse_dataset(csv, ColumnMap("patient_id", "group", "grade"))

    def test_tab_delimited_autodetect(self):
        csv = "patient_id\tgroup\tgrade\np1\tA\t2\np2\tB\t3\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"))
        assert d.groups == ("A", "B")

    def test_bytes_input_utf8(self):
        d = parse_dataset(TOY_CSV.encode("utf-8"), TOY_BINDINGS)
        assert len(d.records) == 6

    def test_group_order_is_first_appearance(self):
        csv = "patient_id,group,grade\np1,Z,2\np2,A,3\np3,Z,1\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"))
        assert d.groups == ("Z", "A")

    def test_explicit_group_order(self):
        csv = "patient_id,group,grade\np1,Z,2\np2,A,3\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"),
                          group_order=["A", "Z"])
        assert d.groups == ("A", "Z")

    def test_whitespace_trimmed(self):
        csv = "patient_id,group,grade\n p1 , A ,2\np2,B,3\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"))
        assert d.records[0].patient_id == "p1"
        assert d.records[0].group == "A"

    def test_roundtrip(self, toy_dataset):
        again = parse_dataset(toy_dataset.to_delimited(), TOY_BINDINGS)
        assert len(again.records) == len(toy_dataset.records)
        assert again.groups == toy_dataset.groups
        assert again.patients_per_group == toy_dataset.patients_per_group
        assert again.records == toy_dataset.records


class TestRoster:
    ROSTER = "patient_id,group\n" + "".join(
        f"r{i},A\n" for i in range(10)) + "".join(f"s{i},B\n" for i in range(8))

    def test_overrides_patient_counts(self):
        csv = "patient_id,group,grade\nr0,A,2\nr1,A,3\ns0,B,2\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"),
                          roster=parse_roster(self.ROSTER))
        assert d.patients_per_group == {"A": 10, "B": 8}

    def test_unknown_patient_rejected(self):
        csv = "patient_id,group,grade\nr0,A,2\nq9,A,3\ns0,B,2\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"),
                          roster=parse_roster(self.ROSTER))
        assert len(d.rejects) == 1
        assert "q9" in d.rejects[0].reason

    def test_conflicting_roster(self):
        with pytest.raises(RosterMismatch):
            parse_roster("patient_id,group\np1,A\np1,B\n")

    def test_roster_missing_header(self):
        with pytest.raises(MissingColumn):
            parse_roster("id,arm\np1,A\n")


class TestRecordValidation:
    def test_bad_grade(self):
        with pytest.raises(BadGrade):
            AERecord("p", "g", 6)

    def test_empty_patient(self):
        with pytest.raises(ValueError):
            AERecord("", "g", 2)

    def test_negative_cycle(self):
        with pytest.raises(ValueError):
            AERecord("p", "g", 2, cycle=-1)


class TestFilterCycle:
    def test_keeps_matching_cycle(self, toy_dataset):
        d = filter_cycle(toy_dataset, 1)
        assert all(r.cycle == 1 for r in d.records)
        assert len(d.records) == 4

    def test_empty_selection(self, toy_dataset):
        with pytest.raises(EmptyDataset):
            filter_cycle(toy_dataset, 9)

    def test_patient_counts_survive_filtering(self, toy_dataset):
        # patient 3 (group A) only has a cycle-2 record but stays in N_A
        d = filter_cycle(toy_dataset, 1)
        assert d.patients_per_group == {"A": 3, "B": 3}

    def test_four_group_toy_keeps_all_groups(self):
        lines = ["patient_id,group,grade,cycle"]
        for j, g in enumerate(["AdhA", "AdhT", "NonA", "NonT"]):
            lines.append(f"x{j},{g},2,1")
            lines.append(f"y{j},{g},3,2")
        d = parse_dataset("\n".join(lines), ColumnMap(
            "patient_id", "group", "grade", cycle="cycle"))
        filtered = filter_cycle(d, 1)
        assert filtered.groups == ("AdhA", "AdhT", "NonA", "NonT")

    def test_group_without_cycle_records_removed(self):
        csv = ("patient_id,group,grade,cycle\n"
               "p1,A,2,1\np2,B,3,1\np3,C,4,2\np4,A,1,1\n")
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade", cycle="cycle"))
        filtered = filter_cycle(d, 1)
        assert filtered.groups == ("A", "B")

    def test_missing_cycle_field(self):
        csv = "patient_id,group,grade\np1,A,2\np2,B,3\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"))
        with pytest.raises(MissingField):
            filter_cycle(d, 1)


class TestMinGradeFilter:
    def test_filters_low_grades(self, toy_dataset):
        d = filter_min_grade(toy_dataset, 3)
        assert all(r.grade >= 3 for r in d.records)
        assert d.patients_per_group == toy_dataset.patients_per_group

    def test_empty(self, toy_dataset):
        with pytest.raises(EmptyDataset):
            filter_min_grade(toy_dataset, 6)

    def test_single_surviving_group(self, toy_dataset):
        # only patient 5 (group B) has a grade-5 record
        with pytest.raises(SingleGroup):
            filter_min_grade(toy_dataset, 5)


class TestDeriveClasses:
    def test_grade_level(self):
        csv = "patient_id,group,grade\np1,A,2\np2,A,2\np3,B,3\np4,B,5\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"))
        classes, assignment = derive_classes(d, ClassLevel.GRADE)
        assert [c.label for c in classes] == ["G2", "G3", "G5"]
        assert assignment == [0, 0, 1, 2]

    def test_domain_grade_label(self, toy_dataset):
        classes, _ = derive_classes(toy_dataset, ClassLevel.DOMAIN_GRADE)
        labels = [c.label for c in classes]
        assert "C:G3" in labels and "D:G2" in labels

    def test_combined_label_format(self):
        csv = ("patient_id,group,grade,domain\n"
               "p1,A,3,Metabolism\np2,B,2,General\n")
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade", domain="domain"))
        classes, _ = derive_classes(d, ClassLevel.DOMAIN_GRADE)
        assert [c.label for c in classes] == ["General:G2", "Metabolism:G3"]

    def test_missing_term_field(self):
        csv = "patient_id,group,grade\np1,A,2\np2,B,3\n"
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade"))
        with pytest.raises(MissingField):
            derive_classes(d, ClassLevel.TERM)

    def test_case_insensitive_dedup(self):
        csv = ("patient_id,group,grade,domain\n"
               "p1,A,2,metabolism\np2,B,2,Metabolism\n")
        d = parse_dataset(csv, ColumnMap("patient_id", "group", "grade", domain="domain"))
        classes, assignment = derive_classes(d, ClassLevel.DOMAIN)
        assert [c.label for c in classes] == ["Metabolism"]
        assert assignment == [0, 0]

    def test_level_token_aliases(self):
        assert ClassLevel.from_token("Domain+Grade") is ClassLevel.DOMAIN_GRADE
        assert ClassLevel.from_token("term_grade") is ClassLevel.TERM_GRADE
        with pytest.raises(ValueError):
            ClassLevel.from_token("severity")

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_shuffle_invariance(self, seed):
        rows = [
            ("p1", "A", 2, "Cardiac"), ("p2", "A", 3, "cardiac"),
            ("p3", "B", 2, "Pain"), ("p4", "B", 4, "PAIN"),
            ("p5", "A", 2, "Neuro"), ("p6", "B", 3, "Cardiac"),
        ]
        rnd = random.Random(seed)
        shuffled = rows[:]
        rnd.shuffle(shuffled)

        def build(rs):
            body = "".join(f"{p},{g},{gr},{dom}\n" for p, g, gr, dom in rs)
            return parse_dataset("patient_id,group,grade,domain\n" + body,
                                 ColumnMap("patient_id", "group", "grade", domain="domain"))

        base_classes, _ = derive_classes(build(rows), ClassLevel.DOMAIN_GRADE)
        shuf_classes, shuf_assign = derive_classes(build(shuffled), ClassLevel.DOMAIN_GRADE)
        assert [c.label for c in base_classes] == [c.label for c in shuf_classes]
        # each shuffled record maps to the class its row content dictates
        labels = [shuf_classes[i].label for i in shuf_assign]
        for (p, g, gr, dom), lbl in zip(shuffled, labels):
            assert lbl.casefold() == f"{dom}:G{gr}".casefold()

    def test_per_class_patient_count_never_exceeds_roster(self):
        rng = random.Random(7)
        lines = ["patient_id,group,grade"]
        for pid in range(12):
            group = "AB"[pid % 2]
            for _ in range(rng.randint(1, 4)):
                lines.append(f"p{pid},{group},{rng.randint(1, 5)}")
        d = parse_dataset("\n".join(lines), ColumnMap("patient_id", "group", "grade"))
        classes, assignment = derive_classes(d, ClassLevel.GRADE)
        for ci in range(len(classes)):
            for g in d.groups:
                count = len({r.patient_id for r, a in zip(d.records, assignment)
                             if a == ci and r.group == g})
                assert count <= d.patients_per_group[g]
