import pytest

from proofminer.ioformats import (
    IncompleteProof,
    SchemaError,
    combine_exports,
    export_library,
    import_library,
    parse_cluster_xml,
    read_arff,
    read_csv,
    read_cluster_xml,
    render_cluster_xml,
    write_arff,
    write_csv,
    write_cluster_xml,
)
from proofminer.features import SSREFLECT, build_library
from proofminer.model import ClusterEntry, ClusterReport, FeatureVector


def vectors_of(library, level="goal"):
    return library.vectors[level]


# --- CSV ------------------------------------------------------------------------


def test_csv_shape(tmp_path, initial_library):
    path = tmp_path / "goal.csv"
    write_csv(vectors_of(initial_library)[:2], path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert all(len(line.split(",")) == 30 for line in lines)
    names = (tmp_path / "goal.names").read_text().splitlines()
    assert names == [v.lemma_name for v in vectors_of(initial_library)[:2]]


def test_csv_empty(tmp_path):
    path = tmp_path / "empty.csv"
    write_csv([], path)
    assert path.read_text() == ""
    assert (tmp_path / "empty.names").read_text() == ""


def test_csv_round_trip_within_tolerance(tmp_path, bigop_library):
    path = tmp_path / "goal.csv"
    original = vectors_of(bigop_library)
    write_csv(original, path)
    again = read_csv(path, "goal")
    assert [v.lemma_name for v in again] == [v.lemma_name for v in original]
    for before, after in zip(original, again):
        for x, y in zip(before.values, after.values):
            assert abs(x - y) <= 1e-12 * max(1.0, abs(x))


# --- ARFF -----------------------------------------------------------------------


def test_arff_attribute_lines(tmp_path, initial_library):
    path = tmp_path / "corpus.arff"
    write_arff(vectors_of(initial_library), "Initial", path)
    lines = path.read_text().splitlines()
    attributes = [l for l in lines if l.startswith("@ATTRIBUTE")]
    assert len(attributes) == 30
    assert all("NUMERIC" in a for a in attributes)
    assert lines[0] == "@RELATION Initial"


def test_arff_relation_quoting(tmp_path):
    path = tmp_path / "q.arff"
    write_arff([FeatureVector("x", "goal", (1.0,))], "my corpus", path)
    assert '@RELATION "my corpus"' in path.read_text()
    relation, _ = read_arff(path, "goal")
    assert relation == "my corpus"


def test_arff_round_trip_exact(tmp_path, bigop_library):
    path = tmp_path / "corpus.arff"
    original = vectors_of(bigop_library)
    write_arff(original, "bigop", path)
    relation, again = read_arff(path, "goal", names=[v.lemma_name for v in original])
    assert relation == "bigop"
    assert [v.values for v in again] == [v.values for v in original]


# --- library export ----------------------------------------------------------------


def test_export_exactly_four_files(tmp_path, initial_library):
    target = tmp_path / "lib"
    export_library(initial_library, target)
    assert sorted(p.name for p in target.iterdir()) == [
        "goal.csv", "lemmas.tsv", "tactic.csv", "tree.csv",
    ]


def test_export_import_round_trip(tmp_path, initial_library):
    target = tmp_path / "lib"
    export_library(initial_library, target)
    imported = import_library(target)
    for level in ("goal", "tactic", "tree"):
        assert [v.lemma_name for v in imported.vectors[level]] == [
            v.lemma_name for v in initial_library.vectors[level]
        ]
        for before, after in zip(initial_library.vectors[level], imported.vectors[level]):
            for x, y in zip(before.values, after.values):
                assert abs(x - y) <= 1e-12 * max(1.0, abs(x))


def test_export_rejects_incomplete_proof(tmp_path, bigop_traces, partial_trace):
    library = build_library(list(bigop_traces[:8]) + [partial_trace], SSREFLECT)
    with pytest.raises(IncompleteProof):
        export_library(library, tmp_path / "nope")


def test_export_empty_library(tmp_path):
    library = build_library([], SSREFLECT, "empty")
    target = tmp_path / "empty"
    export_library(library, target)
    assert sorted(p.name for p in target.iterdir()) == [
        "goal.csv", "lemmas.tsv", "tactic.csv", "tree.csv",
    ]
    assert (target / "goal.csv").read_text() == ""
    assert import_library(target).lemmas == []


def test_combine_exports_prefixes_collisions(tmp_path, initial_library):
    a = tmp_path / "a"
    b = tmp_path / "b"
    export_library(initial_library, a)
    export_library(initial_library, b)
    combined = combine_exports([import_library(a), import_library(b)])
    names = [name for name, _, _ in combined.lemmas]
    assert len(names) == 140
    assert len(set(names)) == 140
    assert "a.mult_n_0" in names and "b.mult_n_0" in names


# --- cluster XML ----------------------------------------------------------------------


def test_xml_structure_for_single_entry():
    report = ClusterReport((ClusterEntry(frozenset({"a", "b"}), 47.0),))
    xml = render_cluster_xml(report).decode()
    assert xml.count("<cluster>") == 1
    assert xml.count("<lemma>") == 2
    assert "<frequency>47.00</frequency>" in xml


def test_xml_empty_report():
    report = ClusterReport(())
    parsed = parse_cluster_xml(render_cluster_xml(report))
    assert parsed.entries == ()


def test_xml_round_trip_byte_identical(tmp_path, initial_library):
    from proofminer.model import EngineConfig
    from proofminer.pipeline import cluster_corpus

    config = EngineConfig(granularity=3, frequency_param=1, runs=40, master_seed=11)
    report = cluster_corpus(initial_library.vectors["goal"], config)
    path = tmp_path / "r.xml"
    write_cluster_xml(report, path)
    first = path.read_bytes()
    again = read_cluster_xml(path)
    assert [e.lemma_set for e in again.entries] == [e.lemma_set for e in report.entries]
    write_cluster_xml(again, path)
    assert path.read_bytes() == first


def test_xml_schema_errors():
    with pytest.raises(SchemaError):
        parse_cluster_xml(b"<clusters><cluster><lemma>a</lemma></cluster></clusters>")
    with pytest.raises(SchemaError):
        parse_cluster_xml(
            b"<clusters><cluster></cluster><frequency>3</frequency></clusters>"
        )
    with pytest.raises(SchemaError):
        parse_cluster_xml(b"<nope/>")
    with pytest.raises(SchemaError):
        parse_cluster_xml(
            b"<clusters><cluster><lemma>a</lemma></cluster><frequency>x</frequency></clusters>"
        )


def test_xml_escapes_names():
    report = ClusterReport((ClusterEntry(frozenset({"a<b&c"}), 10.0),))
    parsed = parse_cluster_xml(render_cluster_xml(report))
    assert parsed.entries[0].lemma_set == frozenset({"a<b&c"})
