"""Corpus loading shared by the command line and the local service.

A corpus source is either a library-export directory (four files) or an
enriched trace file. Trace sources keep their traces around, which allows
re-encoding a partial proof in the same symbol space; export sources carry
numeric vectors only, each in the code space of its exporting run.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from . import ioformats
from .features import (
    Library,
    TacticUniverse,
    build_library,
    detect_universe,
)
from .model import LEVELS, FeatureVector, ProofTrace
from .parsing import read_trace_file


@dataclass
class CorpusBundle:
    name: str
    vectors: dict[str, list[FeatureVector]]
    statements: dict[str, str]
    scripts: dict[str, str]
    traces: tuple[ProofTrace, ...] | None  # set when every source was a trace file
    universe: TacticUniverse | None

    @property
    def lemma_names(self) -> list[str]:
        return [v.lemma_name for v in self.vectors[LEVELS[0]]]

    def size(self) -> int:
        return len(self.vectors[LEVELS[0]])


def looks_like_export(path: Path) -> bool:
    return path.is_dir() and (path / ioformats.LIBRARY_FILES["lemmas"]).exists()


def _bundle_from_library(lib: Library) -> CorpusBundle:
    statements = {t.lemma_name: t.statement for t in lib.traces}
    scripts = {t.lemma_name: t.rendered_script() for t in lib.traces}
    return CorpusBundle(
        lib.name, dict(lib.vectors), statements, scripts, lib.traces, lib.universe
    )


def _bundle_from_export(export: ioformats.LibraryExport) -> CorpusBundle:
    statements = {name: stmt for name, stmt, _ in export.lemmas}
    scripts = {name: script for name, _, script in export.lemmas}
    return CorpusBundle(export.name, export.vectors, statements, scripts, None, None)


def load_source(path, universe: TacticUniverse | None = None) -> CorpusBundle:
    path = Path(path)
    if looks_like_export(path):
        return _bundle_from_export(ioformats.import_library(path))
    if path.is_dir():
        raise ioformats.IoError(f"{path} is not a library export directory")
    traces = read_trace_file(path)
    lib = build_library(traces, universe or detect_universe(traces))
    return _bundle_from_library(lib)


def load_sources(paths, universe: TacticUniverse | None = None) -> CorpusBundle:
    """Load and attach several corpus sources; lemma names are prefixed with
    their library name on collision. When every source is a trace file the
    combined corpus is re-encoded in one shared symbol space."""
    paths = list(paths)
    if not paths:
        raise ValueError("no corpus sources given")
    if len(paths) == 1:
        return load_source(paths[0], universe)

    all_traces = all(not looks_like_export(Path(p)) for p in paths)
    if all_traces:
        groups = [read_trace_file(p) for p in paths]
        seen: dict[str, int] = {}
        for group in groups:
            for trace in group:
                seen[trace.lemma_name] = seen.get(trace.lemma_name, 0) + 1
        traces = []
        for group in groups:
            for trace in group:
                if seen[trace.lemma_name] > 1:
                    trace = replace(
                        trace, lemma_name=f"{trace.library}.{trace.lemma_name}"
                    )
                traces.append(trace)
        lib = build_library(traces, universe or detect_universe(traces))
        bundle = _bundle_from_library(lib)
        bundle.name = "+".join(g[0].library if g else "?" for g in groups)
        return bundle

    exports = []
    for p in paths:
        path = Path(p)
        if looks_like_export(path):
            exports.append(ioformats.import_library(path))
        else:
            lib = build_library(read_trace_file(path), universe)
            exports.append(
                ioformats.LibraryExport(
                    lib.name or path.stem,
                    [
                        (t.lemma_name, t.statement, t.rendered_script())
                        for t in lib.traces
                    ],
                    dict(lib.vectors),
                )
            )
    return _bundle_from_export(ioformats.combine_exports(exports))
