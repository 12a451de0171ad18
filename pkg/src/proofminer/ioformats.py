"""Serialization: CSV and ARFF vector files, the four-file library export,
and the cluster-report XML.

All writers are deterministic. Numbers render with up to 17 significant
digits so CSV round trips stay within 1e-12; XML and ARFF round trips are
exact.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

from .features import Library
from .model import (
    LEVELS,
    ClusterEntry,
    ClusterReport,
    FeatureVector,
)


class IoError(OSError):
    pass


class IncompleteProof(ValueError):
    pass


class SchemaError(ValueError):
    pass


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _check_uniform(vectors):
    if not vectors:
        return
    level = vectors[0].level
    length = len(vectors[0].values)
    for vec in vectors:
        if vec.level != level or len(vec.values) != length:
            raise ValueError("vectors must share level and length")


def _names_path(path: Path) -> Path:
    return path.with_suffix(".names")


def write_csv(vectors: list[FeatureVector], path) -> None:
    """One comma-separated row of features per lemma, plus a companion
    ``.names`` file fixing the lemma order."""
    _check_uniform(vectors)
    path = Path(path)
    try:
        _write_rows(vectors, path)
        _names_path(path).write_text(
            "".join(v.lemma_name + "\n" for v in vectors), encoding="utf-8"
        )
    except OSError as exc:
        raise IoError(str(exc)) from exc


def _write_rows(vectors, path: Path) -> None:
    lines = [",".join(_fmt(x) for x in v.values) for v in vectors]
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def read_csv(path, level: str, names_path=None) -> list[FeatureVector]:
    path = Path(path)
    names_file = Path(names_path) if names_path else _names_path(path)
    names = names_file.read_text(encoding="utf-8").splitlines()
    return _read_rows(path, level, names)


def _read_rows(path: Path, level: str, names) -> list[FeatureVector]:
    rows = path.read_text(encoding="utf-8").splitlines()
    if len(rows) != len(names):
        raise SchemaError(f"{path}: {len(rows)} rows for {len(names)} lemma names")
    vectors = []
    for name, row in zip(names, rows):
        values = tuple(float(x) for x in row.split(",")) if row else ()
        vectors.append(FeatureVector(name, level, values))
    return vectors


def _quote_relation(name: str) -> str:
    if any(ch.isspace() for ch in name):
        return '"' + name.replace('"', '\\"') + '"'
    return name


def write_arff(vectors: list[FeatureVector], relation_name: str, path) -> None:
    """Weka-style ARFF: @RELATION, one NUMERIC @ATTRIBUTE per feature, then
    @DATA rows. Rows stay in lemma order; the engine side maps cluster rows
    back to lemmas positionally."""
    _check_uniform(vectors)
    width = len(vectors[0].values) if vectors else 0
    lines = [f"@RELATION {_quote_relation(relation_name)}", ""]
    for i in range(width):
        lines.append(f"@ATTRIBUTE f{i} NUMERIC")
    lines.append("")
    lines.append("@DATA")
    for vec in vectors:
        lines.append(",".join(_fmt(x) for x in vec.values))
    try:
        Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def read_arff(path, level: str, names=None) -> tuple[str, list[FeatureVector]]:
    """Internal ARFF reader; lemma names are positional, so callers supply
    them (row indices otherwise)."""
    relation = ""
    attributes = []
    rows = []
    in_data = False
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        upper = line.upper()
        if upper.startswith("@RELATION"):
            relation = line[len("@RELATION"):].strip()
            if relation.startswith('"') and relation.endswith('"'):
                relation = relation[1:-1].replace('\\"', '"')
        elif upper.startswith("@ATTRIBUTE"):
            attributes.append(line.split()[1])
        elif upper.startswith("@DATA"):
            in_data = True
        elif in_data:
            fields = line.split(",")
            if len(fields) != len(attributes):
                raise SchemaError(f"row width {len(fields)} != {len(attributes)}")
            rows.append(tuple(float(x) for x in fields))
    if not relation:
        raise SchemaError("missing @RELATION")
    if names is None:
        names = [f"row{i}" for i in range(len(rows))]
    if len(names) != len(rows):
        raise SchemaError(f"{len(rows)} rows for {len(names)} names")
    vectors = [
        FeatureVector(name, level, row) for name, row in zip(names, rows)
    ]
    return relation, vectors


LIBRARY_FILES = {
    "lemmas": "lemmas.tsv",
    "goal": "goal.csv",
    "tactic": "tactic.csv",
    "tree": "tree.csv",
}


def export_library(library: Library, directory) -> None:
    """The four-file library export: a lemma list (name, statement, script)
    plus one vector file per proof level, row-aligned with the list. Only
    finished libraries export."""
    for trace in library.traces:
        if not trace.complete:
            raise IncompleteProof(trace.lemma_name)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rows = []
    for trace in library.traces:
        script = trace.rendered_script().replace("\t", " ").replace("\n", " ")
        statement = trace.statement.replace("\t", " ")
        rows.append(f"{trace.lemma_name}\t{statement}\t{script}")
    (directory / LIBRARY_FILES["lemmas"]).write_text(
        "".join(r + "\n" for r in rows), encoding="utf-8"
    )
    for level in LEVELS:
        _write_rows(library.vectors[level], directory / LIBRARY_FILES[level])


class LibraryExport:
    """An imported library export: lemma metadata plus per-level vectors."""

    def __init__(self, name, lemmas, vectors):
        self.name = name
        self.lemmas = lemmas  # list of (name, statement, script)
        self.vectors = vectors  # level -> list[FeatureVector]


def import_library(directory) -> LibraryExport:
    directory = Path(directory)
    lemma_file = directory / LIBRARY_FILES["lemmas"]
    if not lemma_file.exists():
        raise IoError(f"{directory} is not a library export (no lemmas.tsv)")
    lemmas = []
    for line in lemma_file.read_text(encoding="utf-8").splitlines():
        fields = line.split("\t")
        while len(fields) < 3:
            fields.append("")
        lemmas.append((fields[0], fields[1], fields[2]))
    names = [name for name, _, _ in lemmas]
    vectors = {
        level: _read_rows(directory / LIBRARY_FILES[level], level, names)
        for level in LEVELS
    }
    return LibraryExport(directory.name, lemmas, vectors)


def combine_exports(exports: list[LibraryExport]) -> LibraryExport:
    """Concatenate several exports; colliding lemma names are prefixed
    ``library.lemma`` so attachments never clash."""
    seen: dict[str, int] = {}
    for export in exports:
        for name, _, _ in export.lemmas:
            seen[name] = seen.get(name, 0) + 1
    lemmas = []
    vectors = {level: [] for level in LEVELS}
    for export in exports:
        for i, (name, statement, script) in enumerate(export.lemmas):
            final = name if seen[name] == 1 else f"{export.name}.{name}"
            lemmas.append((final, statement, script))
            for level in LEVELS:
                vec = export.vectors[level][i]
                vectors[level].append(
                    FeatureVector(final, level, vec.values, vec.saturated)
                )
    name = "+".join(e.name for e in exports)
    return LibraryExport(name, lemmas, vectors)


def write_cluster_xml(report: ClusterReport, path) -> None:
    """Fig-6-style document: root ``clusters``; per entry a ``cluster`` node
    (one ``lemma`` child per name, sorted) paired with a ``frequency`` node
    rendered with two fraction digits."""
    Path(path).write_bytes(render_cluster_xml(report))


def render_cluster_xml(report: ClusterReport) -> bytes:
    lines = ["<clusters>"]
    for entry in report.entries:
        lines.append("  <cluster>")
        for name in sorted(entry.lemma_set):
            lines.append(f"    <lemma>{_escape(name)}</lemma>")
        lines.append("  </cluster>")
        lines.append(f"  <frequency>{entry.frequency_pct:.2f}</frequency>")
    lines.append("</clusters>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def read_cluster_xml(path) -> ClusterReport:
    return parse_cluster_xml(Path(path).read_bytes())


def parse_cluster_xml(data: bytes) -> ClusterReport:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise SchemaError(f"bad cluster XML: {exc}") from exc
    if root.tag != "clusters":
        raise SchemaError(f"root element is {root.tag!r}, expected 'clusters'")
    children = list(root)
    if len(children) % 2 != 0:
        raise SchemaError("clusters must hold (cluster, frequency) pairs")
    entries = []
    for cluster_el, freq_el in zip(children[::2], children[1::2]):
        if cluster_el.tag != "cluster" or freq_el.tag != "frequency":
            raise SchemaError(
                f"expected (cluster, frequency) pair, got "
                f"({cluster_el.tag!r}, {freq_el.tag!r})"
            )
        names = [el.text or "" for el in cluster_el if el.tag == "lemma"]
        if len(names) != len(list(cluster_el)):
            raise SchemaError("cluster children must all be lemma elements")
        if not names:
            raise SchemaError("empty cluster")
        try:
            freq = float(freq_el.text)
        except (TypeError, ValueError):
            raise SchemaError(f"bad frequency {freq_el.text!r}") from None
        entries.append(ClusterEntry(frozenset(names), freq))
    entries.sort(key=lambda e: (-e.frequency_pct, sorted(e.lemma_set)))
    return ClusterReport(tuple(entries), config=None)
