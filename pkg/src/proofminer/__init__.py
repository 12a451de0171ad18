"""Statistical proof-pattern mining for interactive proof corpora.

Takes recorded proof traces, derives per-lemma feature tables at the goal,
tactic and proof-tree levels, encodes them numerically and mines proof
families via repeated clustering with proximity and frequency filters. Also
answers goal-dependent queries: given the first steps of an ongoing proof,
which finished proofs does it resemble?
"""

from .features import (
    PLAIN_COQ,
    SSREFLECT,
    Library,
    TacticUniverse,
    agreement,
    build_library,
    encode_branching,
    encode_table,
    extract_corpus,
    extract_goal_table,
    extract_tactic_table,
    extract_tree_table,
)
from .model import (
    ABSENT,
    Arg,
    ClusterReport,
    EngineConfig,
    FeatureTable,
    FeatureVector,
    ProofStep,
    ProofTrace,
    ProofTree,
    SymbolTables,
    TacticApp,
    derive_tree,
    validate_trace,
    vector_length,
)
from .parsing import (
    merge_script_into_trace,
    parse_script,
    read_trace_file,
    tokenize,
    write_trace_file,
)
from .pipeline import (
    Suggestion,
    agreement_report,
    cluster_corpus,
    frequency_threshold,
    granularity_to_k,
    suggest_for_goal,
    suggest_from_traces,
)

__version__ = "0.1.0"

__all__ = [
    "ABSENT",
    "Arg",
    "ClusterReport",
    "EngineConfig",
    "FeatureTable",
    "FeatureVector",
    "Library",
    "PLAIN_COQ",
    "ProofStep",
    "ProofTrace",
    "ProofTree",
    "SSREFLECT",
    "Suggestion",
    "SymbolTables",
    "TacticApp",
    "TacticUniverse",
    "agreement",
    "agreement_report",
    "build_library",
    "cluster_corpus",
    "derive_tree",
    "encode_branching",
    "encode_table",
    "extract_corpus",
    "extract_goal_table",
    "extract_tactic_table",
    "extract_tree_table",
    "frequency_threshold",
    "granularity_to_k",
    "merge_script_into_trace",
    "parse_script",
    "read_trace_file",
    "suggest_for_goal",
    "suggest_from_traces",
    "tokenize",
    "validate_trace",
    "vector_length",
    "write_trace_file",
]
