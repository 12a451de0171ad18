"""Shared domain types: proof traces, symbol tables, feature tables, configuration.

Everything here is construction and validation only; the behaviour lives in
the extraction / clustering modules.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

GOAL = "goal"
TACTIC = "tactic"
TREE = "tree"
LEVELS = (GOAL, TACTIC, TREE)

# argument kinds
KIND_NONE = "none"      # plain argument (bound variable, pattern, ...)
KIND_HYP = "hyp"        # argument is a hypothesis from the context
KIND_IH = "ih"          # argument is an inductive hypothesis
KIND_LEMMA = "lemma"    # argument is an external lemma (carries the name)

KINDS = (KIND_NONE, KIND_HYP, KIND_IH, KIND_LEMMA)

# reserved numeric codes for arg-kind cells; external lemma codes start above
KIND_CODES = {KIND_NONE: 0, KIND_HYP: 1, KIND_IH: 2}
LEMMA_CODE_BASE = 3

ALGORITHMS = ("kmeans", "gmm", "farthest_first")


class _Absent:
    """Marker for '-' cells: a row/feature the proof never produced."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Absent"

    def __deepcopy__(self, memo):
        return self


ABSENT = _Absent()


@dataclass(frozen=True)
class SymCell:
    """A symbolic multi-element cell tied to one code namespace.

    ``namespace`` is one of "tactic", "type", "top", "kind"; items are kept in
    order of appearance so encoding concatenates deterministically.
    """

    namespace: str
    items: tuple[str, ...]

    def __post_init__(self):
        if self.namespace not in ("tactic", "type", "top", "kind"):
            raise ValueError(f"unknown cell namespace {self.namespace!r}")
        if not self.items:
            raise ValueError("empty symbolic cell; use ABSENT instead")


@dataclass(frozen=True)
class Arg:
    """One tactic argument: its type (None when the prover data is missing)
    and how it relates to the proof context."""

    arg_type: str | None
    kind: str = KIND_NONE
    lemma: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown arg kind {self.kind!r}")
        if self.kind == KIND_LEMMA and not self.lemma:
            raise ValueError("lemma-kind argument requires a lemma name")

    def kind_value(self) -> str:
        """The value that lands in 'arg is hypothesis?' cells."""
        if self.kind == KIND_LEMMA:
            return self.lemma
        return {KIND_NONE: "no", KIND_HYP: "Hyp", KIND_IH: "IH"}[self.kind]


@dataclass(frozen=True)
class TacticApp:
    name: str
    args: tuple[Arg, ...] = ()


@dataclass(frozen=True)
class ProofStep:
    """One script sentence: the goal it attacked and the tactics applied.

    A chained sentence ``t1; t2.`` is a single step carrying both tactics.
    ``goal_top_symbol`` / ``n_subgoals_after`` are None when no prover data
    was supplied (script-only traces).
    """

    tactics: tuple[TacticApp, ...]
    goal_top_symbol: str | None = None
    n_subgoals_after: int | None = None


@dataclass(frozen=True)
class TreeNode:
    """Proof tree node. ``edge_index`` is the flat index (over the proof's
    tactic applications, step order) of the tactic whose application produced
    this node; -1 for the root. Closed nodes are the discharge markers."""

    depth: int
    edge_index: int
    edge_tactic: TacticApp | None
    children: tuple["TreeNode", ...] = ()
    closed: bool = False


@dataclass(frozen=True)
class ProofTree:
    root: TreeNode

    def nodes_at_depth(self, depth: int) -> list[TreeNode]:
        out = []

        def walk(node):
            if node.depth == depth:
                out.append(node)
                return
            for child in node.children:
                walk(child)

        walk(self.root)
        return out

    def closed_leaf_count(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.closed:
                count += 1
            stack.extend(node.children)
        return count


@dataclass(frozen=True)
class ProofTrace:
    """One lemma's recorded derivation."""

    lemma_name: str
    statement: str
    library: str
    steps: tuple[ProofStep, ...]
    tree: ProofTree | None = None
    complete: bool = True
    script_text: str | None = None

    def flat_tactics(self) -> list[TacticApp]:
        return [t for step in self.steps for t in step.tactics]

    def rendered_script(self) -> str:
        """The stored script, or a canonical rendering from the steps."""
        if self.script_text is not None:
            return self.script_text
        sentences = []
        for step in self.steps:
            parts = []
            for tac in step.tactics:
                if tac.args:
                    shown = " ".join(a.lemma or a.arg_type or "_" for a in tac.args)
                    parts.append(f"{tac.name} {shown}")
                else:
                    parts.append(tac.name)
            sentences.append(";".join(parts) + ".")
        return " ".join(sentences)


class _MutableNode:
    def __init__(self, depth, edge_index, edge_tactic, closed=False):
        self.depth = depth
        self.edge_index = edge_index
        self.edge_tactic = edge_tactic
        self.closed = closed
        self.children = []

    def freeze(self) -> TreeNode:
        return TreeNode(
            self.depth,
            self.edge_index,
            self.edge_tactic,
            tuple(child.freeze() for child in self.children),
            self.closed,
        )


def derive_tree(steps) -> ProofTree | None:
    """Replay the derivation depth-first (first subgoal first) and rebuild
    the proof tree; chained sentences expand to one node per tactic. Returns
    None when subgoal counts are missing."""
    steps = tuple(steps)
    if not steps or any(s.n_subgoals_after is None for s in steps):
        return None
    root = _MutableNode(1, -1, None)
    frontier = [root]
    index = 0
    for step in steps:
        if not frontier:
            return None  # more steps than open goals; validation will flag
        node = frontier.pop()
        for j, tac in enumerate(step.tactics):
            if j < len(step.tactics) - 1:
                child = _MutableNode(node.depth + 1, index, tac)
                node.children.append(child)
                node = child
            else:
                n = step.n_subgoals_after
                if n == 0:
                    node.children.append(
                        _MutableNode(node.depth + 1, index, tac, closed=True)
                    )
                else:
                    kids = [
                        _MutableNode(node.depth + 1, index, tac) for _ in range(n)
                    ]
                    node.children.extend(kids)
                    frontier.extend(reversed(kids))
            index += 1
    return ProofTree(root.freeze())


def validate_trace(trace: ProofTrace) -> list[str]:
    """Collect every invariant violation; an empty list means the trace is
    accepted by all extractors. Violations are data, not exceptions."""
    violations = []
    if not trace.lemma_name:
        violations.append("missing lemma name")
    if trace.complete and not trace.steps:
        violations.append("empty complete proof")
    for i, step in enumerate(trace.steps, start=1):
        if not step.tactics:
            violations.append(f"step {i} has no tactics")
        if step.n_subgoals_after is not None and step.n_subgoals_after < 0:
            violations.append(f"step {i} has negative subgoal count")
    if trace.tree is not None:
        violations.extend(_validate_tree(trace))
    return violations


def _validate_tree(trace: ProofTrace) -> list[str]:
    violations = []
    flat = trace.flat_tactics()

    def walk(node, parent_depth):
        if parent_depth is not None and node.depth != parent_depth + 1:
            violations.append(
                f"node at depth {node.depth} under parent at depth {parent_depth}"
            )
        if node.closed and node.children:
            violations.append("closed node has children")
        if node.edge_index >= len(flat):
            violations.append(f"tree references tactic {node.edge_index} beyond proof")
        for child in node.children:
            walk(child, node.depth)

    walk(trace.tree.root, None)

    closed = trace.tree.closed_leaf_count()
    discharged = sum(1 for s in trace.steps if s.n_subgoals_after == 0)
    known = all(s.n_subgoals_after is not None for s in trace.steps)
    if known and closed != discharged:
        violations.append(
            f"tree closes {closed} branches but steps discharge {discharged}"
        )
    return violations


class SymbolTables:
    """Append-only bijections name <-> code for the four namespaces.

    Codes are consecutive integers assigned in order of first appearance
    (tactic/type/top start at 1, lemmas at 3 to keep 0..2 reserved for the
    no/Hyp/IH markers). After ``freeze()`` interning new names raises.
    """

    NAMESPACES = ("tactic", "type", "top", "lemma")
    _BASES = {"tactic": 1, "type": 1, "top": 1, "lemma": LEMMA_CODE_BASE}

    def __init__(self):
        self._tables: dict[str, dict[str, int]] = {ns: {} for ns in self.NAMESPACES}
        self._frozen = False

    def intern(self, namespace: str, name: str) -> int:
        table = self._tables[namespace]
        if name in table:
            return table[name]
        if self._frozen:
            raise FrozenSymbolTables(f"cannot intern {name!r} after freeze")
        code = self._BASES[namespace] + len(table)
        table[name] = code
        return code

    def code(self, namespace: str, name: str) -> int:
        return self._tables[namespace][name]

    def has(self, namespace: str, name: str) -> bool:
        return name in self._tables[namespace]

    def names(self, namespace: str) -> list[str]:
        return list(self._tables[namespace])

    def freeze(self):
        self._frozen = True

    @property
    def frozen(self) -> bool:
        return self._frozen

    def kind_code(self, value: str) -> int:
        """Code for an 'arg is hypothesis?' cell element: reserved marker or
        external-lemma code."""
        if value == "no":
            return KIND_CODES[KIND_NONE]
        if value == "Hyp":
            return KIND_CODES[KIND_HYP]
        if value == "IH":
            return KIND_CODES[KIND_IH]
        return self.intern("lemma", value)


class FrozenSymbolTables(RuntimeError):
    pass


@dataclass(frozen=True)
class FeatureTable:
    """Per-lemma symbolic table at one proof level.

    Goal tables are 5x6, tree tables 5x(|universe|+2), tactic tables
    |universe|x5. Cells are ABSENT, ints, SymCells or BranchingCodes.
    """

    level: str
    lemma_name: str
    rows: tuple[tuple[object, ...], ...]
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"unknown level {self.level!r}")
        if len(self.rows) != len(self.row_labels):
            raise ValueError("row count does not match labels")
        for row in self.rows:
            if len(row) != len(self.col_labels):
                raise ValueError("ragged feature table")
        if self.level == GOAL and (len(self.rows), len(self.col_labels)) != (5, 6):
            raise ValueError("goal tables are exactly 5x6")
        if self.level == TREE and len(self.rows) != 5:
            raise ValueError("tree tables have exactly 5 rows")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.col_labels)

    def cell(self, row_label: str, col_label: str):
        return self.rows[self.row_labels.index(row_label)][
            self.col_labels.index(col_label)
        ]


@dataclass(frozen=True)
class FeatureVector:
    lemma_name: str
    level: str
    values: tuple[float, ...]
    saturated: bool = False

    def __post_init__(self):
        for v in self.values:
            if v != v or v in (float("inf"), float("-inf")):
                raise ValueError("feature vectors must be finite")


def vector_length(level: str, universe_size: int) -> int:
    """Vector length is a pure function of (level, tactic-universe size)."""
    if level == GOAL:
        return 30
    if level == TACTIC:
        return 5 * universe_size
    if level == TREE:
        return 5 * (universe_size + 2)
    raise ValueError(f"unknown level {level!r}")


@dataclass(frozen=True)
class EngineConfig:
    """Knobs for one clustering call; defaults mirror the tool's documented
    defaults (granularity 3, frequency parameter 1, 200 runs)."""

    algorithm: str = "kmeans"
    level: str = GOAL
    granularity: int = 3
    frequency_param: int = 1
    runs: int = 200
    master_seed: int = 0
    proximity_threshold: float = 0.5
    pca_min_dim: int = 15
    pca_variance_target: float = 0.95
    use_pca: bool = True

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.level not in LEVELS:
            raise ValueError(f"unknown level {self.level!r}")
        if not 1 <= self.granularity <= 5:
            raise ValueError("granularity must be in 1..5")
        if self.frequency_param not in (1, 2, 3):
            raise ValueError("frequency parameter must be in 1..3")
        if self.runs < 1:
            raise ValueError("need at least one run")
        if not -1.0 <= self.proximity_threshold <= 1.0:
            raise ValueError("proximity threshold must lie in [-1, 1]")


@dataclass(frozen=True)
class ClusterEntry:
    lemma_set: frozenset[str]
    frequency_pct: float


@dataclass(frozen=True)
class ClusterReport:
    """Frequency-annotated lemma groupings that survived both filters,
    sorted by descending frequency."""

    entries: tuple[ClusterEntry, ...]
    config: EngineConfig | None = None

    def __post_init__(self):
        freqs = [e.frequency_pct for e in self.entries]
        if freqs != sorted(freqs, reverse=True):
            raise ValueError("report entries must be sorted by frequency")

    def sets(self) -> list[frozenset[str]]:
        return [e.lemma_set for e in self.entries]


def with_config(report: ClusterReport, config: EngineConfig) -> ClusterReport:
    return replace(report, config=config)
