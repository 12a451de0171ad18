import pytest
from hypothesis import given, strategies as st

from proofminer.features import (
    PLAIN_COQ,
    SSREFLECT,
    BranchingCode,
    CountOverflow,
    DimensionMismatch,
    DuplicateLemma,
    TacticUniverse,
    agreement,
    build_symbol_tables,
    encode_branching,
    encode_table,
    extract_corpus,
    extract_goal_table,
    extract_tactic_table,
    extract_table,
    extract_tree_table,
)
from proofminer.model import (
    ABSENT,
    Arg,
    ProofStep,
    ProofTrace,
    SymCell,
    SymbolTables,
    TacticApp,
    derive_tree,
)

from conftest import trace_by_name


def cell(namespace, *items):
    return SymCell(namespace, tuple(items))


def test_universes_are_fixed():
    assert SSREFLECT.tactics == ("move =>", "move :", "move/", "rewrite", "case", "elim")
    assert len(PLAIN_COQ.tactics) == 10
    with pytest.raises(ValueError):
        TacticUniverse("ssreflect", ("move =>",))


# --- goal level ---------------------------------------------------------------


def test_goal_table_mult_n_0(initial_traces):
    table = extract_goal_table(trace_by_name(initial_traces, "mult_n_0"))
    assert table.rows[0] == (
        cell("tactic", "induction"), 1, cell("type", "nat"),
        cell("kind", "no"), cell("top", "forall"), 2,
    )
    assert table.rows[1] == (
        cell("tactic", "simpl", "trivial"), 2, cell("type", "none"),
        cell("kind", "no"), cell("top", "equal"), 0,
    )
    assert table.rows[2] == table.rows[1]
    assert table.rows[3] == (ABSENT,) * 6
    assert table.rows[4] == (ABSENT,) * 6


def test_goal_table_app_l_nil(initial_traces):
    table = extract_goal_table(trace_by_name(initial_traces, "app_l_nil"))
    assert table.rows[2] == (
        cell("tactic", "simpl"), 1, cell("type", "none"),
        cell("kind", "no"), cell("top", "equal"), 1,
    )
    assert table.rows[3] == (
        cell("tactic", "rewrite"), 1, cell("type", "Prop"),
        cell("kind", "IH"), cell("top", "equal"), 1,
    )
    assert table.rows[4] == (
        cell("tactic", "trivial"), 1, cell("type", "none"),
        cell("kind", "no"), cell("top", "equal"), 0,
    )


def test_goal_table_empty_trace_is_all_absent():
    trace = ProofTrace("nothing", "P", "lib", steps=(), complete=False)
    table = extract_goal_table(trace)
    assert all(c is ABSENT for row in table.rows for c in row)


def test_goal_table_truncates_after_five_steps():
    step = ProofStep((TacticApp("auto"),), "equal", 1)
    last = ProofStep((TacticApp("auto"),), "equal", 0)
    trace = ProofTrace("long", "P", "lib", steps=(step,) * 6 + (last,))
    table = extract_goal_table(trace)
    assert table.shape == (5, 6)
    assert table.rows[4][5] == 1  # still the sixth step's predecessor rows


# --- tactic level ---------------------------------------------------------------


def test_tactic_table_fact_prod(bigop_traces):
    table = extract_tactic_table(trace_by_name(bigop_traces, "fact_prod"), SSREFLECT)
    elim_row = table.rows[SSREFLECT.tactics.index("elim")]
    assert elim_row == (
        cell("type", "nat"), ABSENT, cell("kind", "Hyp"), cell("top", "equal"), 1,
    )
    rewrite_row = table.rows[SSREFLECT.tactics.index("rewrite")]
    assert rewrite_row[0] == cell("type", "Prop")
    assert rewrite_row[1] == cell("type", *("Prop",) * 6)  # six remaining args
    assert rewrite_row[2] == cell(
        "kind", "big_nil", "factS", "big_add1", "IH", "big_add1", "big_nat_recr", "mulnC"
    )
    assert rewrite_row[3] == cell("top", "equal", "equal")
    assert rewrite_row[4] == 2
    for name in ("move :", "move/", "case"):
        assert table.rows[SSREFLECT.tactics.index(name)] == (ABSENT,) * 5


def test_tactic_table_app_nil_l_plain_coq(initial_traces):
    table = extract_tactic_table(trace_by_name(initial_traces, "app_nil_l"), PLAIN_COQ)
    index = PLAIN_COQ.tactics.index
    assert table.rows[index("intro")] == (
        cell("type", "list"), cell("type", "none"), cell("kind", "no"),
        cell("top", "forall"), 1,
    )
    assert table.rows[index("case")] == (ABSENT,) * 5
    for name in ("simpl", "trivial"):
        assert table.rows[index(name)] == (
            cell("type", "none"), cell("type", "none"), cell("kind", "no"),
            cell("top", "equal"), 1,
        )


def test_tactic_table_disjoint_universe(initial_traces):
    trace = trace_by_name(initial_traces, "mult_n_0")
    table = extract_tactic_table(trace, SSREFLECT)  # plain-Coq proof, SSReflect rows
    assert all(c is ABSENT for row in table.rows for c in row)


# --- tree level -----------------------------------------------------------------


def test_tree_table_sum_first_n(bigop_traces):
    table = extract_tree_table(trace_by_name(bigop_traces, "sum_first_n"), SSREFLECT)
    index = SSREFLECT.tactics.index
    td1, td2, td3, td4, td5 = table.rows
    assert td1[index("elim")] == cell("type", "nat")
    assert td1[6] == BranchingCode(1, (2,))
    assert td1[7] == 0
    assert td2[index("move =>")] == cell("type", "nat", "Prop")
    assert td2[index("rewrite")] == cell("kind", "mul0n", "big_nat1", "muln0")
    assert td2[6] == BranchingCode(2, (0, 1))
    assert td2[7] == 1
    assert td3[index("rewrite")] == cell(
        "kind", "big_nat_recr", "mulnDr", "IH", "mulnDl", "addn2", "mulnC"
    )
    assert td3[6] == BranchingCode(3, (0,))
    assert td3[7] == 1
    assert td4 == (ABSENT,) * 8
    assert td5 == (ABSENT,) * 8


def test_tree_table_single_closing_step():
    steps = (ProofStep((TacticApp("rewrite", (Arg("Prop", "lemma", "big_nil"),)),), "equal", 0),)
    trace = ProofTrace("tiny", "P", "lib", steps=steps, tree=derive_tree(steps))
    table = extract_tree_table(trace, SSREFLECT)
    assert table.rows[0][6] == BranchingCode(1, (0,))
    assert table.rows[0][7] == 1
    assert table.rows[1] == (ABSENT,) * 8


def test_tree_table_depth_truncation():
    auto = TacticApp("rewrite", (Arg("Prop", "lemma", "x"),))
    steps = tuple(ProofStep((auto,), "equal", 1) for _ in range(6)) + (
        ProofStep((auto,), "equal", 0),
    )
    trace = ProofTrace("deep", "P", "lib", steps=steps, tree=derive_tree(steps))
    table = extract_tree_table(trace, SSREFLECT)
    assert table.shape == (5, 8)
    assert all(row[6] != ABSENT for row in table.rows)  # all five levels populated


def test_tree_table_without_tree_is_absent(initial_traces):
    trace = trace_by_name(initial_traces, "mult_n_0")
    bare = ProofTrace(trace.lemma_name, trace.statement, trace.library, trace.steps)
    table = extract_tree_table(bare, PLAIN_COQ)
    assert all(c is ABSENT for row in table.rows for c in row)


# --- branching codes --------------------------------------------------------------


def test_branching_codes_from_worked_example():
    assert encode_branching(BranchingCode(1, (2,))) == 12
    assert encode_branching(BranchingCode(2, (0, 1))) == 201
    assert encode_branching(BranchingCode(3, (0,))) == 30


def test_branching_overflow():
    with pytest.raises(CountOverflow):
        encode_branching(BranchingCode(2, (10,)))


@given(
    st.integers(min_value=1, max_value=5),
    st.lists(st.integers(min_value=0, max_value=9), min_size=1, max_size=9),
)
def test_branching_injective_on_single_digits(level, counts):
    code = BranchingCode(level, tuple(counts))
    digits = str(encode_branching(code))
    assert digits == str(level) + "".join(str(c) for c in counts)


# --- numeric encoding ---------------------------------------------------------------


def _symbols_with(types=(), tactics=(), tops=(), lemmas=()):
    symbols = SymbolTables()
    for name in tactics:
        symbols.intern("tactic", name)
    for name in types:
        symbols.intern("type", name)
    for name in tops:
        symbols.intern("top", name)
    for name in lemmas:
        symbols.intern("lemma", name)
    return symbols


def test_encode_type_cell_concatenates_and_negates():
    symbols = _symbols_with(types=("none", "nat", "list", "Prop"))
    from proofminer.features import _cell_number

    value, saturated = _cell_number(cell("type", *("Prop",) * 4), symbols)
    assert value == -4444.0 and not saturated
    value, _ = _cell_number(cell("type", "nat", "Prop"), symbols)
    assert value == -24.0


def test_encode_kind_cell_uses_reserved_codes():
    symbols = _symbols_with(lemmas=("mul0n", "big_nat1"))
    from proofminer.features import _cell_number

    assert _cell_number(cell("kind", "no"), symbols)[0] == 0.0
    assert _cell_number(cell("kind", "Hyp"), symbols)[0] == 1.0
    assert _cell_number(cell("kind", "IH"), symbols)[0] == 2.0
    assert _cell_number(cell("kind", "mul0n", "big_nat1"), symbols)[0] == 34.0
    assert _cell_number(cell("kind", "IH", "mul0n"), symbols)[0] == 23.0


def test_encode_saturates_above_cap():
    symbols = _symbols_with(lemmas=tuple(f"l{i}" for i in range(30)))
    from proofminer.features import _cell_number

    value, saturated = _cell_number(cell("kind", *(f"l{i}" for i in range(20))), symbols)
    assert saturated and value == 1e12


def test_encode_goal_table_shape_and_zero_vector(bigop_traces):
    universe = SSREFLECT
    traces = list(bigop_traces)
    vectors, symbols = extract_corpus(traces, "goal", universe)
    assert all(len(v.values) == 30 for v in vectors)
    empty = ProofTrace("nothing", "P", "lib", steps=(), complete=False)
    table = extract_goal_table(empty)
    assert encode_table(table, symbols).values == (0.0,) * 30


def test_identical_cells_encode_identically(bigop_library):
    # encoding consistency: same symbolic cell -> same number, anywhere
    lib = bigop_library
    seen = {}
    for level in ("goal", "tactic", "tree"):
        for trace in lib.traces:
            table = extract_table(trace, level, lib.universe)
            vec = encode_table(table, lib.symbols)
            flat = [c for row in table.rows for c in row]
            for value, c in zip(vec.values, flat):
                if isinstance(c, SymCell):
                    key = (c.namespace, c.items)
                    assert seen.setdefault(key, value) == value


# --- agreement ----------------------------------------------------------------------


def test_agreement_with_itself_is_total(initial_library):
    table = extract_goal_table(initial_library.traces[0])
    assert agreement(table, table) == (30, 30)


def test_agreement_reproduces_published_counts(bigop_traces):
    ssn = trace_by_name(bigop_traces, "sum_first_n")
    odd = trace_by_name(bigop_traces, "sum_first_n_odd")
    fp = trace_by_name(bigop_traces, "fact_prod")
    goal = lambda t: extract_goal_table(t)
    assert agreement(goal(ssn), goal(fp)) == (27, 30)
    assert agreement(goal(ssn), goal(odd)) == (11, 30)
    tactic = lambda t: extract_tactic_table(t, SSREFLECT)
    assert agreement(tactic(ssn), tactic(fp)) == (28, 30)


def test_agreement_orderings_hold_at_all_levels(bigop_traces):
    ssn = trace_by_name(bigop_traces, "sum_first_n")
    odd = trace_by_name(bigop_traces, "sum_first_n_odd")
    fp = trace_by_name(bigop_traces, "fact_prod")
    for level in ("goal", "tactic", "tree"):
        strong = agreement(
            extract_table(ssn, level, SSREFLECT), extract_table(fp, level, SSREFLECT)
        )
        weak = agreement(
            extract_table(ssn, level, SSREFLECT), extract_table(odd, level, SSREFLECT)
        )
        assert strong[0] > weak[0], level


def test_agreement_is_symmetric(initial_library):
    a = extract_goal_table(initial_library.traces[0])
    b = extract_goal_table(initial_library.traces[5])
    assert agreement(a, b) == agreement(b, a)


def test_agreement_dimension_mismatch(initial_traces, bigop_traces):
    goal = extract_goal_table(initial_traces[0])
    tactic = extract_tactic_table(bigop_traces[0], SSREFLECT)
    with pytest.raises(DimensionMismatch):
        agreement(goal, tactic)


def test_agreement_survives_consistent_renaming(bigop_traces):
    # lemma-name independence: rename every referenced lemma consistently
    import dataclasses

    def rename_trace(trace):
        def rename_arg(arg):
            if arg.lemma:
                return dataclasses.replace(arg, lemma="zz_" + arg.lemma)
            return arg

        steps = tuple(
            dataclasses.replace(
                step,
                tactics=tuple(
                    dataclasses.replace(t, args=tuple(rename_arg(a) for a in t.args))
                    for t in step.tactics
                ),
            )
            for step in trace.steps
        )
        return dataclasses.replace(trace, steps=steps, tree=derive_tree(steps))

    ssn = trace_by_name(bigop_traces, "sum_first_n")
    fp = trace_by_name(bigop_traces, "fact_prod")
    before = agreement(extract_goal_table(ssn), extract_goal_table(fp))
    after = agreement(
        extract_goal_table(rename_trace(ssn)), extract_goal_table(rename_trace(fp))
    )
    assert before == after


# --- corpus extraction -----------------------------------------------------------------


def test_extract_corpus_initial_shapes(initial_traces):
    vectors, _ = extract_corpus(initial_traces, "goal", PLAIN_COQ)
    assert len(vectors) == 70
    assert all(len(v.values) == 30 for v in vectors)


def test_extract_corpus_deterministic(bigop_traces):
    first = extract_corpus(bigop_traces, "goal", SSREFLECT)[0]
    second = extract_corpus(bigop_traces, "goal", SSREFLECT)[0]
    assert first == second


def test_extract_corpus_empty():
    vectors, symbols = extract_corpus([], "goal", SSREFLECT)
    assert vectors == []
    assert symbols.names("lemma") == []


def test_extract_corpus_duplicate_lemma(bigop_traces):
    with pytest.raises(DuplicateLemma):
        extract_corpus(list(bigop_traces) + [bigop_traces[0]], "goal", SSREFLECT)


def test_reversed_corpus_preserves_cell_equality_pattern(bigop_traces):
    """Reversing the corpus renames codes but the pairwise equality pattern
    of encoded cells is preserved (outside the saturation cap, where two
    different digit strings can collide on the clamp)."""
    forward, _ = extract_corpus(bigop_traces, "goal", SSREFLECT)
    backward, _ = extract_corpus(list(reversed(bigop_traces)), "goal", SSREFLECT)
    back = {v.lemma_name: v for v in backward}
    names = [v.lemma_name for v in forward]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            va, vb = dict(zip(names, forward))[a], dict(zip(names, forward))[b]
            wa, wb = back[a], back[b]
            cap = 1e12
            keep = [
                abs(x) < cap and abs(y) < cap and abs(p) < cap and abs(q) < cap
                for x, y, p, q in zip(va.values, vb.values, wa.values, wb.values)
            ]
            pattern_fwd = [x == y for f, x, y in zip(keep, va.values, vb.values) if f]
            pattern_bwd = [x == y for f, x, y in zip(keep, wa.values, wb.values) if f]
            assert pattern_fwd == pattern_bwd
            break  # one partner per lemma keeps this O(n)


def test_saturation_flag_recorded(bigop_traces):
    vectors, _ = extract_corpus(bigop_traces, "goal", SSREFLECT)
    by_name = {v.lemma_name: v for v in vectors}
    assert by_name["sum_first_n"].saturated  # the six-element rewrite cell clamps


def test_build_symbol_tables_preinterns_universe(bigop_traces):
    symbols = build_symbol_tables(bigop_traces, SSREFLECT)
    assert [symbols.code("tactic", t) for t in SSREFLECT.tactics] == [1, 2, 3, 4, 5, 6]
    assert symbols.code("type", "none") == 1
