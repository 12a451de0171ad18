#!/usr/bin/env python3
"""Goal-dependent mode: hints for an unfinished proof.

The partial development holds only the first two steps of sum_first_n. It
is clustered together with the bigop library; the highest-frequency
reported cluster carrying the lemma's name becomes the suggestion. At high
granularity the answer narrows to the single closest finished proof.
"""
import json
from dataclasses import replace
from pathlib import Path

from proofminer import EngineConfig, read_trace_file, suggest_from_traces

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

corpus = read_trace_file(FIXTURES / "bigop.trace")
partial = read_trace_file(FIXTURES / "sum_first_n_partial.trace")[0]
recorded = json.loads((FIXTURES / "suggest_config.json").read_text())

print("partial development:")
print(f"  Lemma {partial.lemma_name} : {partial.statement}")
for step in partial.steps:
    print("    " + ";".join(t.name for t in step.tactics)
          + f".   (goal top: {step.goal_top_symbol}, subgoals after: {step.n_subgoals_after})")
print(f"  ... proof unfinished; corpus has {len(corpus)} complete lemmas\n")

config = EngineConfig(
    algorithm=recorded["algorithm"],
    level=recorded["level"],
    granularity=recorded["granularity"],
    frequency_param=recorded["frequency_param"],
    runs=recorded["runs"],
    master_seed=recorded["master_seed"],
)

for granularity in (3, 5):
    suggestion = suggest_from_traces(
        corpus, partial, replace(config, granularity=granularity)
    )
    print(f"granularity {granularity}:")
    if suggestion is None:
        print("  no suggestion above the thresholds")
        continue
    print(f"  cluster frequency {suggestion.frequency_pct:.1f}%")
    by_name = {t.lemma_name: t for t in corpus}
    for name in sorted(suggestion.lemma_set):
        print(f"  {name} : {by_name[name].statement}")
    print()

print("Inspecting fact_prod's finished proof shows the path: apply the")
print("recursion lemma for the big operator, then the inductive hypothesis.")
