"""The mining protocol: granularity/frequency parameterization, repeated
clustering with proximity filtering, frequency aggregation, and the two
usage modes (general clustering, goal-dependent suggestion).

One clustering call runs the chosen algorithm ``runs`` times with seeds
``master_seed + i``, discards clusters whose mean silhouette falls under the
proximity threshold, counts how often each surviving lemma set reappears and
reports the sets whose frequency clears the threshold for the chosen
frequency parameter.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import mlcore
from .features import (
    Library,
    TacticUniverse,
    agreement,
    build_symbol_tables,
    detect_universe,
    encode_table,
    extract_table,
)
from .model import (
    ClusterEntry,
    ClusterReport,
    EngineConfig,
    FeatureVector,
    ProofTrace,
)

GRANULARITY_DIVISORS = {1: 10, 2: 9, 3: 8, 4: 7, 5: 6}
FREQUENCY_THRESHOLDS = {1: 5.0, 2: 15.0, 3: 30.0}


class CorpusTooSmall(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class UnknownLemma(KeyError):
    pass


def granularity_to_k(granularity: int, corpus_size: int) -> int:
    """Cluster count from the granularity table: floor(l / 10..6), clamped
    to at least 2 so proximity scoring stays defined."""
    if granularity not in GRANULARITY_DIVISORS:
        raise OutOfRange(f"granularity {granularity} not in 1..5")
    if corpus_size < 6:
        raise CorpusTooSmall(f"need at least 6 lemmas, got {corpus_size}")
    return max(2, corpus_size // GRANULARITY_DIVISORS[granularity])


def frequency_threshold(frequency_param: int) -> float:
    """Frequency parameter 1..3 -> percentage threshold 5/15/30."""
    if frequency_param not in FREQUENCY_THRESHOLDS:
        raise OutOfRange(f"frequency parameter {frequency_param} not in 1..3")
    return FREQUENCY_THRESHOLDS[frequency_param]


@dataclass(frozen=True)
class RunOutcome:
    run_index: int
    surviving: tuple[frozenset[str], ...]
    silhouettes: tuple[float, ...]  # mean silhouette per surviving cluster


@dataclass(frozen=True)
class Suggestion:
    lemma_set: frozenset[str]
    frequency_pct: float


def _as_dataset(vectors: list[FeatureVector]) -> mlcore.Dataset:
    if not vectors:
        raise CorpusTooSmall("empty corpus")
    level = vectors[0].level
    length = len(vectors[0].values)
    for vec in vectors:
        if vec.level != level or len(vec.values) != length:
            raise ValueError("vectors must share level and length")
    points = np.array([vec.values for vec in vectors], dtype=float)
    labels = tuple(vec.lemma_name for vec in vectors)
    return mlcore.Dataset(points, labels)


def preprocess(vectors: list[FeatureVector], config: EngineConfig) -> mlcore.Dataset:
    """Standardize, then reduce with PCA when the dimension warrants it."""
    data, _ = mlcore.standardize(_as_dataset(vectors))
    if config.use_pca and data.d > config.pca_min_dim:
        data, _ = mlcore.pca_fit_transform(data, config.pca_variance_target)
    return data


def _run_algorithm(data: mlcore.Dataset, k: int, seed: int, algorithm: str):
    if algorithm == "kmeans":
        return mlcore.kmeans(data, k, seed).assignment
    if algorithm == "gmm":
        return mlcore.gmm_em(data, k, seed).assignment
    if algorithm == "farthest_first":
        return mlcore.farthest_first(data, k, seed).assignment
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _surviving_clusters(data, assignment, labels, threshold):
    """Lemma sets for the clusters whose mean silhouette clears the
    proximity threshold."""
    compact = np.unique(assignment, return_inverse=True)[1]
    if compact.max() < 1:
        return [], []
    result = mlcore.silhouette(data, compact)
    surviving = []
    silhouettes = []
    for cid in range(compact.max() + 1):
        mean_s = float(result.cluster_means[cid])
        if mean_s >= threshold:
            members = frozenset(
                labels[i] for i in range(len(labels)) if compact[i] == cid
            )
            surviving.append(members)
            silhouettes.append(mean_s)
    return surviving, silhouettes


def clustering_runs(
    vectors: list[FeatureVector], config: EngineConfig
) -> list[RunOutcome]:
    """All repeated runs with their proximity-filtered clusters."""
    k = granularity_to_k(config.granularity, len(vectors))
    data = preprocess(vectors, config)
    outcomes = []
    for i in range(config.runs):
        assignment = _run_algorithm(data, k, config.master_seed + i, config.algorithm)
        surviving, sils = _surviving_clusters(
            data, assignment, data.labels, config.proximity_threshold
        )
        outcomes.append(RunOutcome(i, tuple(surviving), tuple(sils)))
    return outcomes


def aggregate_runs(
    outcomes: list[RunOutcome], config: EngineConfig
) -> ClusterReport:
    """Count identical lemma sets across runs, convert to percentages and
    keep the ones above the frequency threshold, sorted descending."""
    counts: dict[frozenset[str], int] = {}
    for outcome in outcomes:
        for cluster in outcome.surviving:
            counts[cluster] = counts.get(cluster, 0) + 1
    threshold = frequency_threshold(config.frequency_param)
    entries = []
    for cluster, count in counts.items():
        freq = 100.0 * count / config.runs
        if freq >= threshold:
            entries.append(ClusterEntry(cluster, freq))
    entries.sort(key=lambda e: (-e.frequency_pct, sorted(e.lemma_set)))
    return ClusterReport(tuple(entries), config)


def cluster_corpus(vectors: list[FeatureVector], config: EngineConfig) -> ClusterReport:
    """The general clustering mode over an already-encoded corpus."""
    return aggregate_runs(clustering_runs(vectors, config), config)


def suggest_for_goal(
    vectors: list[FeatureVector], current: FeatureVector, config: EngineConfig
) -> Suggestion | None:
    """Goal-dependent mode: cluster the corpus together with the current
    partial proof and return the highest-frequency reported cluster carrying
    the current lemma's name, minus that name."""
    report = cluster_corpus(list(vectors) + [current], config)
    for entry in report.entries:  # already sorted by descending frequency
        if current.lemma_name in entry.lemma_set:
            rest = entry.lemma_set - {current.lemma_name}
            if rest:
                return Suggestion(rest, entry.frequency_pct)
    return None


def suggest_from_traces(
    corpus_traces,
    partial: ProofTrace,
    config: EngineConfig,
    universe: TacticUniverse | None = None,
) -> Suggestion | None:
    """Convenience wrapper encoding the corpus and the partial proof in one
    shared symbol space. The partial proof is interned last so the corpus
    codes match a corpus-only build, and it may legitimately share a corpus
    lemma's name (an interrupted re-development)."""
    traces = tuple(corpus_traces)
    if universe is None:
        universe = detect_universe(traces + (partial,))
    symbols = build_symbol_tables(traces + (partial,), universe)
    symbols.freeze()
    vectors = [
        encode_table(extract_table(t, config.level, universe), symbols)
        for t in traces
    ]
    current = encode_table(extract_table(partial, config.level, universe), symbols)
    return suggest_for_goal(vectors, current, config)


def agreement_report(
    library: Library, lemma_a: str, lemma_b: str, level: str
) -> tuple[int, int]:
    """Symbolic feature-agreement count between two corpus lemmas."""
    try:
        trace_a = library.trace(lemma_a)
    except KeyError:
        raise UnknownLemma(lemma_a) from None
    try:
        trace_b = library.trace(lemma_b)
    except KeyError:
        raise UnknownLemma(lemma_b) from None
    table_a = extract_table(trace_a, level, library.universe)
    table_b = extract_table(trace_b, level, library.universe)
    return agreement(table_a, table_b)
