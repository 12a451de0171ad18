#!/usr/bin/env python3
"""Walk through the three feature-extraction levels on real proofs.

Loads the bigop fixture library, picks the three running-example series
lemmas and shows their symbolic tables, the numeric encoding, and how
cell-wise agreement separates close proofs from distant ones.
"""
from pathlib import Path

from proofminer import (
    SSREFLECT,
    agreement,
    encode_table,
    read_trace_file,
)
from proofminer.features import build_symbol_tables, extract_table
from proofminer.model import ABSENT, SymCell

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

traces = read_trace_file(FIXTURES / "bigop.trace")
by_name = {t.lemma_name: t for t in traces}
picks = ["sum_first_n", "sum_first_n_odd", "fact_prod"]


def show_cell(cell):
    if cell is ABSENT:
        return "-"
    if isinstance(cell, SymCell):
        return ",".join(cell.items)
    return str(cell)


print("=" * 72)
print("Goal-level tables: one row per proof step, six tracked parameters")
print("=" * 72)
for name in picks:
    table = extract_table(by_name[name], "goal", SSREFLECT)
    print(f"\n{name}")
    print(f"  {'row':4s} " + " | ".join(f"{c:>14s}" for c in table.col_labels))
    for label, row in zip(table.row_labels, table.rows):
        print(f"  {label:4s} " + " | ".join(f"{show_cell(c)[:14]:>14s}" for c in row))

print()
print("=" * 72)
print("Numeric encoding: consecutive codes per namespace, concatenated cells,")
print("types negated, absent cells zero. Values above 1e12 saturate.")
print("=" * 72)
symbols = build_symbol_tables(traces, SSREFLECT)
symbols.freeze()
vector = encode_table(extract_table(by_name["sum_first_n"], "goal", SSREFLECT), symbols)
print(f"\nsum_first_n goal vector ({len(vector.values)} entries, "
      f"saturated={vector.saturated}):")
for i in range(0, 30, 6):
    print("  " + "  ".join(f"{x:>14.6g}" for x in vector.values[i : i + 6]))

print()
print("=" * 72)
print("Agreement: cell-wise symbolic matches out of the table size")
print("=" * 72)
for level, total in (("goal", 30), ("tactic", 30), ("tree", 40)):
    t = lambda n: extract_table(by_name[n], level, SSREFLECT)
    strong = agreement(t("sum_first_n"), t("fact_prod"))
    weak = agreement(t("sum_first_n"), t("sum_first_n_odd"))
    print(f"  {level:7s} sum_first_n ~ fact_prod       {strong[0]:>2d}/{total}")
    print(f"  {level:7s} sum_first_n ~ sum_first_n_odd {weak[0]:>2d}/{total}")
print("\nThe pair that proves the same way agrees far more often -- that is")
print("the signal the clustering stages work with.")
