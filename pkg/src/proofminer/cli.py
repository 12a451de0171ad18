"""Command-line entry point.

Subcommands: extract (scripts/traces -> library export), cluster (corpus ->
frequency-filtered cluster report), suggest (goal-dependent hint for a
partial proof), serve (local HTTP service for the browser UI).

Exit codes: 0 success, 1 usage, 2 input/parse problems, 3 pipeline
preconditions (corpus too small). A key=value config file and the
PROOFMINER_SEED environment variable override the built-in defaults;
explicit flags override both.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import ioformats, mlcore, pipeline
from .features import (
    PLAIN_COQ,
    SSREFLECT,
    build_library,
    build_symbol_tables,
    detect_universe,
    encode_table,
    extract_table,
)
from .model import LEVELS, EngineConfig, validate_trace
from .parsing import (
    FormatError,
    ParseError,
    merge_script_into_trace,
    parse_script,
    read_trace_file,
)
from .workspace import CorpusBundle, load_sources

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_PIPELINE = 3

DEFAULTS = {
    "algorithm": "kmeans",
    "level": "goal",
    "granularity": 3,
    "frequency": 1,
    "runs": 200,
    "seed": 0,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def read_config_file(path) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(lineno, f"expected key=value, got {line!r}")
        values[key.strip()] = value.strip()
    return values


def resolve_config(args) -> EngineConfig:
    """Defaults < config file < PROOFMINER_SEED < explicit flags."""
    values = dict(DEFAULTS)
    if getattr(args, "config", None):
        for key, value in read_config_file(args.config).items():
            if key not in values:
                raise SystemExit(f"unknown config key {key!r}")
            values[key] = value
    if os.environ.get("PROOFMINER_SEED"):
        values["seed"] = os.environ["PROOFMINER_SEED"]
    for key in values:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return EngineConfig(
        algorithm=str(values["algorithm"]),
        level=str(values["level"]),
        granularity=int(values["granularity"]),
        frequency_param=int(values["frequency"]),
        runs=int(values["runs"]),
        master_seed=int(values["seed"]),
        use_pca=not getattr(args, "no_pca", False),
    )


def _universe(mode: str | None):
    if mode == "coq":
        return PLAIN_COQ
    if mode == "ssreflect":
        return SSREFLECT
    return None


def _engine_options(sub):
    sub.add_argument("--algorithm", choices=["kmeans", "gmm", "farthest_first"])
    sub.add_argument("--level", choices=list(LEVELS))
    sub.add_argument("-g", "--granularity", type=int, choices=range(1, 6))
    sub.add_argument("-f", "--frequency", type=int, choices=(1, 2, 3))
    sub.add_argument("--seed", type=int)
    sub.add_argument("--runs", type=int)
    sub.add_argument("--no-pca", action="store_true")
    sub.add_argument("--config", help="key=value file overriding defaults")


def build_parser() -> _Parser:
    parser = _Parser(prog="proofminer", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    ext = subs.add_parser("extract", help="extract features and write a library export")
    ext.add_argument("paths", nargs="+", help="proof scripts (.v) and/or trace files")
    ext.add_argument("--trace", action="append", default=[],
                     help="sidecar trace file with goal snapshots")
    ext.add_argument("--level", choices=list(LEVELS), default="goal")
    ext.add_argument("--mode", choices=["auto", "coq", "ssreflect"], default="auto")
    ext.add_argument("--out", default="export", help="library export directory")

    clu = subs.add_parser("cluster", help="cluster a corpus and report families")
    clu.add_argument("sources", nargs="+", help="library export dirs or trace files")
    clu.add_argument("--xml", help="write the cluster report XML here")
    _engine_options(clu)

    sug = subs.add_parser("suggest", help="goal-dependent suggestion for a partial proof")
    sug.add_argument("sources", nargs="+", help="library export dirs or trace files")
    sug.add_argument("--partial", required=True, help="partial proof trace file")
    _engine_options(sug)

    srv = subs.add_parser("serve", help="serve the corpus over HTTP")
    srv.add_argument("sources", nargs="+", help="library export dirs or trace files")
    srv.add_argument("--port", type=int, default=7464)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--frontend", help="directory of static UI files to serve")
    _engine_options(srv)
    return parser


def _load_inputs_for_extract(args):
    scripts = []
    traces = {}
    for sidecar in args.trace:
        for trace in read_trace_file(sidecar):
            traces[trace.lemma_name] = trace
    for path in args.paths:
        text = Path(path).read_text(encoding="utf-8")
        if path.endswith(".v"):
            scripts.extend(parse_script(text))
        else:
            for trace in read_trace_file(path):
                traces[trace.lemma_name] = trace
    if scripts:
        merged = []
        for script in scripts:
            for warning in script.warnings:
                print(f"warning: {script.lemma_name}: {warning}", file=sys.stderr)
            merged.append(merge_script_into_trace(script, traces.pop(script.lemma_name, None)))
        merged.extend(traces.values())
        return merged
    return list(traces.values())


def cmd_extract(args) -> int:
    try:
        traces = _load_inputs_for_extract(args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_INPUT
    except (ParseError, FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not traces:
        print("error: no proofs found", file=sys.stderr)
        return EXIT_INPUT
    problems = [(t.lemma_name, v) for t in traces for v in validate_trace(t)]
    if problems:
        for name, violation in problems:
            print(f"error: {name}: {violation}", file=sys.stderr)
        return EXIT_INPUT
    universe = _universe(None if args.mode == "auto" else args.mode) or detect_universe(traces)
    if args.level == "tree" and all(t.tree is None for t in traces):
        print("warning: no tree data; tree-level vectors will be all zeros", file=sys.stderr)
    library = build_library(traces, universe)
    ioformats.export_library(library, args.out)
    for vec in library.vectors[args.level]:
        print(f"{vec.lemma_name}: {len(vec.values)}")
    print(f"exported {len(traces)} lemmas to {args.out}", file=sys.stderr)
    return 0


def render_report(report, statements=None) -> str:
    lines = []
    for i, entry in enumerate(report.entries, start=1):
        lines.append(f"cluster {i}  frequency {entry.frequency_pct:.2f}%")
        for name in sorted(entry.lemma_set):
            statement = (statements or {}).get(name, "")
            suffix = f"  :  {statement}" if statement else ""
            lines.append(f"  {name}{suffix}")
    if not report.entries:
        lines.append("no clusters above the thresholds")
    return "\n".join(lines)


def cmd_cluster(args) -> int:
    config = resolve_config(args)
    try:
        bundle = load_sources(args.sources)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_INPUT
    except (ParseError, FormatError, ioformats.IoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report = pipeline.cluster_corpus(bundle.vectors[config.level], config)
    except (pipeline.CorpusTooSmall, mlcore.TooFewPoints) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    print(render_report(report, bundle.statements))
    if args.xml:
        ioformats.write_cluster_xml(report, args.xml)
    return 0


def encode_partial(partial, bundle: CorpusBundle, config: EngineConfig):
    """Partial-proof vector: shared symbol space when the corpus came from
    traces, a fresh space against numeric-only exports."""
    if bundle.traces is not None:
        universe = bundle.universe or detect_universe(bundle.traces + (partial,))
        symbols = build_symbol_tables(bundle.traces + (partial,), universe)
    else:
        universe = detect_universe([partial])
        symbols = build_symbol_tables([partial], universe)
    symbols.freeze()
    return encode_table(extract_table(partial, config.level, universe), symbols)


def load_partial_trace(path):
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".v"):
        scripts = parse_script(text)
        if not scripts:
            raise ParseError("no lemma in partial proof script")
        return merge_script_into_trace(scripts[0], None)
    traces = read_trace_file(path)
    if not traces:
        raise FormatError(1, "no lemma in partial trace")
    return traces[0]


def cmd_suggest(args) -> int:
    config = resolve_config(args)
    try:
        bundle = load_sources(args.sources)
        partial = load_partial_trace(args.partial)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_INPUT
    except (ParseError, FormatError, ioformats.IoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if bundle.size() == 0:
            suggestion = None
        else:
            current = encode_partial(partial, bundle, config)
            suggestion = pipeline.suggest_for_goal(
                bundle.vectors[config.level], current, config
            )
    except (pipeline.CorpusTooSmall, mlcore.TooFewPoints) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    if suggestion is None:
        print("no suggestion")
        return 0
    print(f"suggestions for {partial.lemma_name} "
          f"(cluster frequency {suggestion.frequency_pct:.2f}%):")
    for name in sorted(suggestion.lemma_set):
        statement = bundle.statements.get(name, "")
        suffix = f"  :  {statement}" if statement else ""
        print(f"  {name}{suffix}")
    return 0


def cmd_serve(args) -> int:
    from .service import run_service

    config = resolve_config(args)
    try:
        bundle = load_sources(args.sources)
    except (ParseError, FormatError, ioformats.IoError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    run_service(
        bundle,
        sources=args.sources,
        host=args.host,
        port=args.port,
        defaults=config,
        frontend=args.frontend,
    )
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "extract": cmd_extract,
        "cluster": cmd_cluster,
        "suggest": cmd_suggest,
        "serve": cmd_serve,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
