"""Three-level feature extraction from proof traces and numeric encoding.

A trace yields one symbolic table per level:

* goal level: rows g1..g5 follow the first five proof steps in script order;
  columns track tactics, tactic count, argument types, argument/hypothesis
  links, the goal's top symbol and the number of generated subgoals.
* tactic level: one row per universe tactic, aggregating every application
  in the proof (first argument type, remaining argument types, hypothesis
  links, top symbols at the application sites, use count).
* tree level: rows td1..td5 follow proof-tree depth; per tactic a tracked
  parameter (hypothesis links for rewrite, argument types otherwise), plus
  the branching code and the closed-branch count.

Encoding maps each cell to one real number through the corpus-wide symbol
tables: counts stay themselves, multi-element cells concatenate the decimal
digits of their element codes, type cells are negated, absent cells are 0.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ABSENT,
    GOAL,
    KIND_LEMMA,
    LEVELS,
    TACTIC,
    TREE,
    FeatureTable,
    FeatureVector,
    ProofTrace,
    SymCell,
    SymbolTables,
    vector_length,
)

MAX_MAGNITUDE = 1e12

GOAL_COLUMNS = ("tactics", "n_tactics", "arg_type", "arg_is_hyp", "top_symbol", "n_subgoals")
TACTIC_COLUMNS = ("arg1_type", "rest_arg_types", "arg_is_hyp", "top_symbols", "n_used")
GOAL_ROWS = ("g1", "g2", "g3", "g4", "g5")
TREE_ROWS = ("td1", "td2", "td3", "td4", "td5")


class CountOverflow(ValueError):
    """A branching-code digit exceeded 9; the decimal encoding would be
    ambiguous."""


class DimensionMismatch(ValueError):
    pass


class DuplicateLemma(ValueError):
    pass


@dataclass(frozen=True)
class TacticUniverse:
    """The fixed tactic row set of one proof dialect."""

    mode: str
    tactics: tuple[str, ...]

    def __post_init__(self):
        if self.mode == "ssreflect" and len(self.tactics) != 6:
            raise ValueError("the ssreflect universe has exactly 6 tactics")
        if self.mode == "coq" and len(self.tactics) != 10:
            raise ValueError("the coq universe has exactly 10 tactics")


PLAIN_COQ = TacticUniverse(
    "coq",
    (
        "intro",
        "intros",
        "simpl",
        "trivial",
        "auto",
        "apply",
        "rewrite",
        "case",
        "destruct",
        "induction",
    ),
)

SSREFLECT = TacticUniverse(
    "ssreflect",
    ("move =>", "move :", "move/", "rewrite", "case", "elim"),
)

_SSR_ONLY = {"move =>", "move :", "move/", "elim"}


def detect_universe(traces) -> TacticUniverse:
    """Pick the dialect from the tactic names actually used."""
    for trace in traces:
        for app in trace.flat_tactics():
            if app.name in _SSR_ONLY:
                return SSREFLECT
    return PLAIN_COQ


@dataclass(frozen=True)
class BranchingCode:
    """Tree branching summary for one depth level: the level digit followed
    by one digit per branch giving its subbranch count."""

    level: int
    subbranch_counts: tuple[int, ...]


def encode_branching(code: BranchingCode) -> int:
    if not 1 <= code.level <= 5:
        raise ValueError("branching level must be in 1..5")
    for count in code.subbranch_counts:
        if count > 9:
            raise CountOverflow(f"subbranch count {count} does not fit one digit")
        if count < 0:
            raise ValueError("negative subbranch count")
    digits = str(code.level) + "".join(str(c) for c in code.subbranch_counts)
    return int(digits)


def _step_args(step):
    return [arg for tac in step.tactics for arg in tac.args]


def _type_cell(args):
    """Argument-type cell: 'none' when there are no arguments, ABSENT when
    the prover data (types) is missing."""
    if not args:
        return SymCell("type", ("none",))
    types = [a.arg_type for a in args]
    if any(t is None for t in types):
        return ABSENT
    return SymCell("type", tuple(types))


def _kind_cell(args):
    if not args:
        return SymCell("kind", ("no",))
    return SymCell("kind", tuple(a.kind_value() for a in args))


def extract_goal_table(trace: ProofTrace) -> FeatureTable:
    """5x6 table over the first five proof steps; later rows are absent."""
    rows = []
    for i in range(5):
        if i >= len(trace.steps):
            rows.append((ABSENT,) * 6)
            continue
        step = trace.steps[i]
        args = _step_args(step)
        top = (
            SymCell("top", (step.goal_top_symbol,))
            if step.goal_top_symbol is not None
            else ABSENT
        )
        subgoals = step.n_subgoals_after if step.n_subgoals_after is not None else ABSENT
        rows.append(
            (
                SymCell("tactic", tuple(t.name for t in step.tactics)),
                len(step.tactics),
                _type_cell(args),
                _kind_cell(args),
                top,
                subgoals,
            )
        )
    return FeatureTable(GOAL, trace.lemma_name, tuple(rows), GOAL_ROWS, GOAL_COLUMNS)


def extract_tactic_table(trace: ProofTrace, universe: TacticUniverse) -> FeatureTable:
    """One row per universe tactic aggregated over the whole proof; unused
    tactics keep a fully absent row."""
    rows = []
    for name in universe.tactics:
        apps = [
            (step, app)
            for step in trace.steps
            for app in step.tactics
            if app.name == name
        ]
        if not apps:
            rows.append((ABSENT,) * 5)
            continue
        flat_args = [arg for _, app in apps for arg in app.args]
        if not flat_args:
            arg1 = SymCell("type", ("none",))
        elif flat_args[0].arg_type is None:
            arg1 = ABSENT
        else:
            arg1 = SymCell("type", (flat_args[0].arg_type,))
        rest_args = flat_args[1:]
        if not rest_args:
            # the paper's Coq tables render the empty remainder as "none",
            # its SSReflect tables as an absent cell
            rest = ABSENT if universe.mode == "ssreflect" else SymCell("type", ("none",))
        else:
            rest = _type_cell(rest_args)
        tops = [step.goal_top_symbol for step, _ in apps]
        top_cell = ABSENT if any(t is None for t in tops) else SymCell("top", tuple(tops))
        rows.append((arg1, rest, _kind_cell(flat_args), top_cell, len(apps)))
    return FeatureTable(
        TACTIC, trace.lemma_name, tuple(rows), universe.tactics, TACTIC_COLUMNS
    )


def _applications_at_depth(tree, depth):
    """(node, tactic) pairs for tactics applied at the given depth, in
    left-to-right order. A node's children all share the producing tactic."""
    apps = []
    for node in tree.nodes_at_depth(depth):
        if node.closed:
            continue
        if node.children and node.children[0].edge_tactic is not None:
            apps.append((node, node.children[0].edge_tactic))
    return apps


def extract_tree_table(trace: ProofTrace, universe: TacticUniverse) -> FeatureTable:
    """5x(|universe|+2) table over proof-tree depths 1..5. Per tactic the
    tracked parameter is the hypothesis link for rewrite and the argument
    types otherwise; the two extra columns hold the branching code and the
    number of branches closed at the level."""
    cols = universe.tactics + ("branching", "closed")
    empty_row = (ABSENT,) * len(cols)
    rows = []
    for depth in range(1, 6):
        if trace.tree is None:
            rows.append(empty_row)
            continue
        open_nodes = [n for n in trace.tree.nodes_at_depth(depth) if not n.closed]
        if not open_nodes:
            rows.append(empty_row)
            continue
        apps = _applications_at_depth(trace.tree, depth)
        row = []
        for name in universe.tactics:
            uses = [app for _, app in apps if app.name == name]
            if not uses:
                row.append(ABSENT)
                continue
            flat_args = [arg for app in uses for arg in app.args]
            if name == "rewrite":
                row.append(_kind_cell(flat_args))
            else:
                row.append(_type_cell(flat_args))
        counts = tuple(
            sum(1 for c in node.children if not c.closed) for node in open_nodes
        )
        closed = sum(1 for node in open_nodes for c in node.children if c.closed)
        row.append(BranchingCode(depth, counts))
        row.append(closed)
        rows.append(tuple(row))
    return FeatureTable(TREE, trace.lemma_name, tuple(rows), TREE_ROWS, cols)


def extract_table(trace: ProofTrace, level: str, universe: TacticUniverse) -> FeatureTable:
    if level == GOAL:
        return extract_goal_table(trace)
    if level == TACTIC:
        return extract_tactic_table(trace, universe)
    if level == TREE:
        return extract_tree_table(trace, universe)
    raise ValueError(f"unknown level {level!r}")


def _cell_number(cell, symbols: SymbolTables) -> tuple[float, bool]:
    """One cell -> (real number, saturated?)."""
    if cell is ABSENT:
        return 0.0, False
    if isinstance(cell, bool):
        raise TypeError("boolean cells are not a thing")
    if isinstance(cell, int):
        return float(cell), False
    if isinstance(cell, BranchingCode):
        return float(encode_branching(cell)), False
    if isinstance(cell, SymCell):
        if cell.namespace == "kind":
            codes = [symbols.kind_code(item) for item in cell.items]
        elif cell.namespace == "top":
            codes = [symbols.code("top", item) for item in cell.items]
        elif cell.namespace == "tactic":
            codes = [symbols.code("tactic", item) for item in cell.items]
        else:
            codes = [symbols.code("type", item) for item in cell.items]
        digits = "".join(str(c) for c in codes)
        value = float(digits)
        if cell.namespace == "type":
            value = -value
        if abs(value) > MAX_MAGNITUDE:
            return (MAX_MAGNITUDE if value > 0 else -MAX_MAGNITUDE), True
        return value, False
    raise TypeError(f"cannot encode cell {cell!r}")


def encode_table(table: FeatureTable, symbols: SymbolTables) -> FeatureVector:
    """Flatten a symbolic table row-major into a numeric vector. Magnitudes
    above 1e12 saturate (digit concatenation has no upper bound) and the
    vector records that a clamp happened."""
    values = []
    saturated = False
    for row in table.rows:
        for cell in row:
            value, clipped = _cell_number(cell, symbols)
            values.append(value)
            saturated = saturated or clipped
    return FeatureVector(table.lemma_name, table.level, tuple(values), saturated)


def agreement(table_a: FeatureTable, table_b: FeatureTable) -> tuple[int, int]:
    """Cell-wise symbolic equality count (absent matches absent)."""
    if table_a.level != table_b.level or table_a.shape != table_b.shape:
        raise DimensionMismatch(
            f"cannot compare {table_a.level} {table_a.shape} with "
            f"{table_b.level} {table_b.shape}"
        )
    matches = 0
    total = 0
    for row_a, row_b in zip(table_a.rows, table_b.rows):
        for cell_a, cell_b in zip(row_a, row_b):
            total += 1
            if cell_a == cell_b:
                matches += 1
    return matches, total


def build_symbol_tables(traces, universe: TacticUniverse) -> SymbolTables:
    """Scan the corpus in order and intern every symbol. The universe
    tactics and the pseudo-type 'none' are interned first so their codes do
    not depend on the corpus; everything else follows appearance order."""
    symbols = SymbolTables()
    for name in universe.tactics:
        symbols.intern("tactic", name)
    symbols.intern("type", "none")
    for trace in traces:
        for step in trace.steps:
            if step.goal_top_symbol is not None:
                symbols.intern("top", step.goal_top_symbol)
            for app in step.tactics:
                symbols.intern("tactic", app.name)
                for arg in app.args:
                    if arg.arg_type is not None:
                        symbols.intern("type", arg.arg_type)
                    if arg.kind == KIND_LEMMA:
                        symbols.intern("lemma", arg.lemma)
    return symbols


def extract_corpus(
    traces, level: str, universe: TacticUniverse
) -> tuple[list[FeatureVector], SymbolTables]:
    """Deterministically encode a whole corpus at one level."""
    seen = set()
    for trace in traces:
        if trace.lemma_name in seen:
            raise DuplicateLemma(trace.lemma_name)
        seen.add(trace.lemma_name)
    symbols = build_symbol_tables(traces, universe)
    symbols.freeze()
    vectors = [
        encode_table(extract_table(trace, level, universe), symbols)
        for trace in traces
    ]
    expected = vector_length(level, len(universe.tactics))
    for vec in vectors:
        assert len(vec.values) == expected
    return vectors, symbols


@dataclass(frozen=True)
class Library:
    """A corpus bundled with its encodings at all three levels."""

    name: str
    traces: tuple[ProofTrace, ...]
    universe: TacticUniverse
    symbols: SymbolTables
    vectors: dict[str, list[FeatureVector]]

    def lemma_names(self) -> list[str]:
        return [t.lemma_name for t in self.traces]

    def trace(self, lemma_name: str) -> ProofTrace:
        for t in self.traces:
            if t.lemma_name == lemma_name:
                return t
        raise KeyError(lemma_name)


def build_library(traces, universe: TacticUniverse | None = None, name: str = "") -> Library:
    traces = tuple(traces)
    if universe is None:
        universe = detect_universe(traces)
    if not name and traces:
        name = traces[0].library
    vectors = {}
    symbols = None
    for level in LEVELS:
        vecs, symbols = extract_corpus(traces, level, universe)
        vectors[level] = vecs
    if symbols is None:
        symbols = build_symbol_tables(traces, universe)
        symbols.freeze()
    return Library(name, traces, universe, symbols, vectors)
