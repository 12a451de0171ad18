#!/usr/bin/env python3
"""Regenerate the fixture corpora under fixtures/.

Two libraries are produced:

* Initial.trace / Initial.v - 70 plain-Coq lemmas about naturals, lists and
  booleans, containing the running-example lemmas (mult_n_0, mult_0_n,
  app_l_nil, app_nil_l, plus_n_0, minus_n_0) embedded in synthetic proof
  families.
* bigop.trace / bigop.v - 65 SSReflect lemmas around indexed big operations,
  containing sum_first_n, sum_first_n_odd and fact_prod with their documented
  feature tables, plus sum_first_n_partial.trace (the first two steps of
  sum_first_n, the goal-dependent running example).

Run with --check to re-verify the clustering behaviour the acceptance suite
relies on; --diag prints distance diagnostics.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from proofminer.model import Arg, ProofStep, ProofTrace, TacticApp, derive_tree, validate_trace
from proofminer.features import PLAIN_COQ, SSREFLECT, build_library
from proofminer.parsing import write_trace_file

FIXDIR = ROOT / "fixtures"


def A(arg_type, kind="none", lemma=None):
    return Arg(arg_type, kind, lemma)


def EL(name):
    return Arg("Prop", "lemma", name)


def IH():
    return Arg("Prop", "ih")


def T(name, *args):
    return TacticApp(name, tuple(args))


def S(top, subgoals, *tactics):
    return ProofStep(tuple(tactics), top, subgoals)


def mk(name, statement, library, *steps, complete=True):
    trace = ProofTrace(name, statement, library, tuple(steps), complete=complete)
    trace = replace(trace, tree=derive_tree(trace.steps) if complete else None)
    problems = validate_trace(trace)
    if problems:
        raise SystemExit(f"fixture {name} is inconsistent: {problems}")
    return trace


# --- script rendering --------------------------------------------------------

_VARS = {"nat": "nmpq", "list": "lks", "bool": "abcd", "Prop": "HPQR", "seq": "stuv"}


def _render_tactic(tac, counters):
    words = []
    for arg in tac.args:
        if arg.kind == "lemma":
            words.append(arg.lemma)
        elif arg.kind == "ih":
            words.append("IH" + (_VARS.get(arg.arg_type or "nat", "x")[0]))
        else:
            pool = _VARS.get(arg.arg_type or "Prop", "xyz")
            i = counters.get(arg.arg_type, 0)
            counters[arg.arg_type] = i + 1
            words.append(pool[i % len(pool)])
    name = tac.name
    if name == "move/":
        rest = " ".join(words[1:])
        return f"move/{words[0]}" + (f" => {rest}" if rest else "")
    if words:
        return f"{name} {' '.join(words)}"
    return name


def render_script(trace, ssreflect):
    counters = {}
    lines = [f"Lemma {trace.lemma_name} : {trace.statement}.", "Proof."]
    for step in trace.steps:
        sentence = ";".join(_render_tactic(t, counters) for t in step.tactics)
        if ssreflect and step.n_subgoals_after == 0:
            sentence = "by " + sentence
        lines.append(sentence + ".")
    lines.append("Qed." if trace.complete else "Admitted.")
    return "\n".join(lines)


# --- the Initial library (plain Coq) -----------------------------------------
#
# Nine proof families. The inductive family F1 and the simplification family
# F2 are the paper's running examples and the only families with fewer than
# four proof steps, which makes them each other's nearest family: at
# granularity 3 they merge into one cluster, at granularity 5 they separate
# (the decoy subclumps inside F3/F8 absorb the extra centroids first).

SIMPL_TRIVIAL = lambda top="equal": S(top, 0, T("simpl"), T("trivial"))

ARITH_POOL = [
    "add_comm", "add_assoc", "mul_comm", "mul_assoc", "mul_add_distr_r",
    "add_sub_swap", "mul_add_distr_l", "add_succ_r", "mul_succ_r",
    "sub_add_distr", "add_cancel_l", "mul_cancel_r",
]

LIST_POOL = [
    "rev_app_distr", "app_assoc_base", "concat_cons", "map_cons",
    "fold_left_app", "rev_unit_base", "length_app", "map_map_base",
    "filter_app", "in_app_iff",
]


def family_inductive_zero(lib):
    trio = lambda name, stmt: mk(
        name, stmt, lib,
        S("forall", 2, T("induction", A("nat"))),
        SIMPL_TRIVIAL(),
        SIMPL_TRIVIAL(),
    )
    return [
        trio("mult_n_0", "forall n : nat, 0 = n * 0"),
        trio("plus_n_0", "forall n : nat, n = n + 0"),
        trio("minus_n_0", "forall n : nat, n - 0 = n"),
        mk(
            "app_l_nil", "forall l : list A, l ++ [] = l", lib,
            S("forall", 2, T("induction", A("list"))),
            SIMPL_TRIVIAL(),
            S("equal", 1, T("simpl")),
            S("equal", 1, T("rewrite", A("Prop", "ih"))),
            S("equal", 0, T("trivial")),
        ),
    ]


def family_simplification(lib):
    members = [
        ("mult_0_n", "forall n : nat, 0 = 0 * n", "nat"),
        ("app_nil_l", "forall l : list A, [] ++ l = l", "list"),
        ("plus_O_n", "forall n : nat, 0 + n = n", "nat"),
        ("minus_O_n", "forall n : nat, 0 - n = 0", "nat"),
        ("mult_1_l", "forall n : nat, 1 * n = n + 0", "nat"),
        ("pow_0_l", "forall n : nat, n ^ 0 = 1", "nat"),
        ("double_0", "forall n : nat, double 0 = 0 * n", "nat"),
        ("andb_false_l", "forall b : bool, false && b = false", "bool"),
        ("orb_true_l", "forall b : bool, true || b = true", "bool"),
        ("firstn_0", "forall l : list A, firstn 0 l = []", "list"),
        ("skipn_0", "forall l : list A, skipn 0 l = l", "list"),
        ("map_nil", "forall l : list A, map id [] = []", "list"),
    ]
    return [
        mk(name, stmt, lib, S("forall", 1, T("intro", A(ty))), SIMPL_TRIVIAL())
        for name, stmt, ty in members
    ]


def family_rewrite_chain(lib):
    """Arithmetic rewrite chains; two subclumps (4-step vs 5-step) that give
    the high granularities a natural split."""
    names_a = ["add_rot_l", "add_rot_r", "mul_rot_l", "mul_rot_r", "add_shuffle0"]
    names_b = ["add_shuffle1", "mul_shuffle0", "mul_shuffle1", "addmul_swap", "muladd_swap"]
    out = []
    for i, name in enumerate(names_a):
        p = lambda j: EL(ARITH_POOL[(i + j) % len(ARITH_POOL)])
        out.append(
            mk(
                name, f"forall a b : nat, {name.replace('_', ' ')} a b", lib,
                S("forall", 1, T("intros", A("nat"), A("nat"))),
                S("equal", 1, T("rewrite", p(0), p(1))),
                S("equal", 1, T("rewrite", p(2))),
                S("equal", 0, T("rewrite", p(3)), T("trivial")),
            )
        )
    for i, name in enumerate(names_b):
        p = lambda j: EL(ARITH_POOL[(i + j + 5) % len(ARITH_POOL)])
        out.append(
            mk(
                name, f"forall a b : nat, {name.replace('_', ' ')} a b", lib,
                S("forall", 1, T("intros", A("nat"), A("nat"))),
                S("equal", 1, T("rewrite", p(0), p(1))),
                S("equal", 1, T("rewrite", p(2))),
                S("equal", 1, T("rewrite", p(3), p(4))),
                S("equal", 0, T("rewrite", p(5)), T("trivial")),
            )
        )
    return out


def family_bool_case(lib):
    names = [
        "andb_comm", "orb_comm", "andb_orb_l", "orb_andb_l",
        "xorb_comm", "negb_andb", "negb_orb", "implb_elim",
    ]
    return [
        mk(
            name, f"forall a b : bool, {name.replace('_', ' ')} a b", lib,
            S("forall", 1, T("intros", A("bool"), A("bool"))),
            S("equal", 2, T("destruct", A("bool", "hyp"))),
            SIMPL_TRIVIAL(),
            SIMPL_TRIVIAL(),
        )
        for name in names
    ]


def family_apply_imp(lib):
    names = [
        "imp_trans_w", "imp_weaken_w", "and_proj_imp", "or_intro_imp",
        "contrapose_w", "modus_tollens_w", "imp_compose_w", "imp_swap_w",
    ]
    return [
        mk(
            name, f"forall P Q : Prop, {name.replace('_', ' ')} P Q", lib,
            S("forall", 1, T("intros", A("Prop"), A("Prop"))),
            S("impl", 1, T("intro", A("Prop"))),
            S("impl", 1, T("apply", EL("imp_intro_base"))),
            S("impl", 0, T("apply", A("Prop", "hyp")), T("auto")),
        )
        for name in names
    ]


def family_le_auto(lib):
    names = [
        "le_0_n_w", "le_n_succ_w", "le_add_r_w", "le_mul_w",
        "le_refl_w", "le_succ_diag_w", "le_pred_w",
    ]
    out = []
    for i, name in enumerate(names):
        p = lambda j: EL(ARITH_POOL[(i + j + 3) % len(ARITH_POOL)])
        out.append(
            mk(
                name, f"forall n m : nat, {name.replace('_', ' ')} n m", lib,
                S("forall", 1, T("intros", A("nat"), A("nat"))),
                S("le", 1, T("apply", EL("le_trans_base"))),
                S("le", 1, T("rewrite", p(0))),
                S("le", 0, T("auto")),
            )
        )
    return out


def family_list_induction(lib):
    names = [
        "map_length_w", "map_app_w", "rev_length_w", "app_assoc_w",
        "rev_app_w", "map_id_w", "fold_app_w",
    ]
    return [
        mk(
            name, f"forall l : list A, {name.replace('_', ' ')} l", lib,
            S("forall", 1, T("intros", A("list"))),
            S("equal", 2, T("induction", A("list", "hyp"))),
            S("equal", 0, T("simpl"), T("auto")),
            S("equal", 0, T("rewrite", A("Prop", "ih")), T("auto")),
        )
        for name in names
    ]


def family_rewrite_list(lib):
    """Equation chains on lists, no intro head; subclumps differ in the
    second and fifth steps."""
    names_a = ["rev_unit_w", "app_unit_w", "concat_one_w", "flatten_one_w"]
    names_b = ["rev_rev_w", "app_swap_w", "concat_swap_w", "flatten_swap_w"]
    out = []
    for i, name in enumerate(names_a):
        p = lambda j: EL(LIST_POOL[(i + j) % len(LIST_POOL)])
        out.append(
            mk(
                name, f"rev unit spec {name.replace('_', ' ')}", lib,
                S("equal", 1, T("rewrite", p(0))),
                S("equal", 1, T("rewrite", p(1), p(2))),
                S("equal", 2, T("case", A("list", "hyp"))),
                S("equal", 0, T("simpl"), T("auto")),
                S("equal", 0, T("rewrite", p(3)), T("auto")),
            )
        )
    for i, name in enumerate(names_b):
        p = lambda j: EL(LIST_POOL[(i + j + 4) % len(LIST_POOL)])
        out.append(
            mk(
                name, f"rev swap spec {name.replace('_', ' ')}", lib,
                S("equal", 1, T("rewrite", p(0)), T("rewrite", p(1))),
                S("equal", 1, T("rewrite", p(2))),
                S("equal", 2, T("case", A("list", "hyp"))),
                S("equal", 0, T("simpl"), T("auto")),
                S("equal", 0, T("simpl"), T("rewrite", p(3)), T("auto")),
            )
        )
    return out


def family_exists_case(lib):
    names = ["ex_succ_w", "ex_double_w", "ex_square_w", "ex_add_w", "ex_mul_w", "ex_pred_w"]
    return [
        mk(
            name, f"forall n : nat, {name.replace('_', ' ')} n", lib,
            S("forall", 1, T("intros", A("nat"))),
            S("exists", 1, T("apply", EL("ex_intro_base"))),
            S("exists", 2, T("case", A("nat", "hyp"))),
            S("exists", 0, T("auto")),
            S("exists", 0, T("simpl"), T("auto")),
        )
        for name in names
    ]


def initial_traces():
    lib = "Initial"
    traces = []
    traces += family_inductive_zero(lib)   # 4
    traces += family_simplification(lib)   # 12
    traces += family_rewrite_chain(lib)    # 10
    traces += family_bool_case(lib)        # 8
    traces += family_apply_imp(lib)        # 8
    traces += family_le_auto(lib)          # 7
    traces += family_list_induction(lib)   # 7
    traces += family_rewrite_list(lib)     # 8
    traces += family_exists_case(lib)      # 6
    assert len(traces) == 70, len(traces)
    return traces


# --- the bigop library (SSReflect) -------------------------------------------
#
# Ten families, 62 lemmas, 20 of them series lemmas (sum/prod shaped). Every
# family keeps at least four proof steps, so the two-step partial development
# of sum_first_n is nearest the lemmas sharing its exact first two rows:
# sum_first_n and fact_prod. The non-series families come first in the file
# and intern a wide pool of referenced lemma names, which pushes the series
# lemmas' references into three-digit codes and saturates the big rewrite
# cells of sum_first_n and fact_prod identically.

_PREFIXES = [
    "size", "nth", "take", "drop", "rot", "rev", "cat", "map", "filter",
    "count", "has", "all", "mem", "index", "iota", "mask", "zip", "flatten",
    "undup", "pairmap",
]
_SUFFIXES = [
    "_cat", "_cons", "_rcons", "_nseq", "_map", "_rev", "_take", "_drop",
    "_mask", "_rotr", "_zip", "_flat", "_addn", "_subn", "_muln", "_maxn",
    "_minn", "_half", "_odd", "_dbl", "_iter", "_pred", "_succ", "_id",
]

BIG_POOL = [p + s for p in _PREFIXES for s in _SUFFIXES]  # 480 names
_pool_cursor = 0


def nextp():
    global _pool_cursor
    name = BIG_POOL[_pool_cursor % len(BIG_POOL)]
    _pool_cursor += 1
    return EL(name)


def align_pool(draws):
    """Advance the pool so one family's references share a code digit-length
    (code = position + 3); keeps kind-cell magnitudes uniform per family."""
    global _pool_cursor
    start = _pool_cursor
    if start < 7:
        _pool_cursor = 7
    elif start <= 96 and start + draws - 1 > 96:
        _pool_cursor = 97


def case_split(lib):
    align_pool(64)
    names = [
        "leq_case_w", "maxn_case_w", "minn_case_w", "odd_case_w",
        "parity_case_w", "cmp_case_w", "ltn_case_w", "eqn_case_w",
    ]
    return [
        mk(
            name, f"forall n, {name.replace('_', ' ')} n", lib,
            S("forall", 1, T("move =>", A("nat"))),
            S("eqn", 2, T("case", A("nat", "hyp"))),
            S("eqn", 0, T("rewrite", nextp(), nextp())),
            S("eqn", 0, T("rewrite", nextp(), nextp(), nextp()), T("rewrite", nextp(), nextp(), nextp())),
        )
        for name in names
    ]


def view_lemmas(lib):
    align_pool(27)
    names = [
        "eqn_view_w", "leq_view_w", "andP_view_w", "orP_view_w",
        "contra_view_w", "negP_view_w", "eq_big_w", "eq_map_w", "eq_all_w",
    ]
    views = ["eqP", "leP", "andP", "orP", "contraP", "negP", "eqfunP", "mapP", "allP"]
    return [
        mk(
            name, f"forall n m, {name.replace('_', ' ')} n m", lib,
            S("forall", 1, T("move =>", A("nat"), A("nat"))),
            S("is_true", 1, T("move/", EL(views[i]))),
            S("is_true", 1, T("rewrite", _boolp(), _boolp())),
            S("is_true", 0, T("rewrite", _boolp())),
        )
        for i, name in enumerate(names)
    ]


def seq_induction(lib):
    align_pool(54)
    names = [
        "all_count_w", "has_count_w", "size_map_w",
        "sum_seq_w", "count_map_w", "filter_size_w",
    ]
    return [
        mk(
            name, f"forall s : seq T, {name.replace('_', ' ')} s", lib,
            S("eqseq", 1, T("move =>", A("seq")), T("case", A("seq", "hyp"))),
            S("eqseq", 2, T("case", A("seq", "hyp"))),
            S("eqseq", 0, T("rewrite", _boolp(), _boolp())),
            S("eqseq", 0, T("rewrite", _boolp(), _boolp(), _boolp())),
        )
        for name in names
    ]


def swap_series(lib):
    align_pool(24)
    names = [
        "sum_swap_w", "prod_swap_w", "sum_shift_w",
        "prod_shift_w", "sum_split_w", "prod_split_w",
    ]
    return [
        mk(
            name, f"forall n, {name.replace('_', ' ')} n", lib,
            S("equal", 2, T("elim", A("nat", "hyp"))),
            S("forall", 1, T("move =>", A("nat"))),
            S("equal", 0, T("rewrite", nextp(), nextp())),
            S("forall", 1, T("move =>", A("nat"), A("Prop"))),
            S("equal", 0, T("rewrite", nextp(), IH(), nextp(), nextp())),
        )
        for name in names
    ]


def leq_chains(lib):
    align_pool(36)
    names = ["leq_trans_w", "leq_add_w", "leq_mul_w", "leq_sub_w", "leq_max_w", "leq_min_w"]
    views = ["leP", "leP", "ltP", "ltP", "leP", "ltP"]
    return [
        mk(
            name, f"forall n m p, {name.replace('_', ' ')} n m p", lib,
            S("forall", 1, T("move =>", A("nat"), A("nat"), A("nat"))),
            S("leq", 1, T("move/", EL(views[i]))),
            S("leq", 1, T("rewrite", nextp())),
            S("leq", 0, T("rewrite", nextp(), nextp()), T("rewrite", nextp(), nextp(), nextp())),
        )
        for i, name in enumerate(names)
    ]


def _boolp():
    arg = nextp()
    return Arg("bool", "lemma", arg.lemma)


def base_rewrites(lib):
    align_pool(78)
    """Boolean-equation rewrite chains (reflection-style rules)."""
    names = [
        "cardseq_w", "indexseq_w", "iota_shift_w", "size_iota_w", "nth_iota_w",
        "mask_size_w", "take_iota_w", "drop_iota_w", "rot_iota_w", "rev_iota_w",
        "eq_has_w", "eq_count_w", "eq_filter_w",
    ]
    return [
        mk(
            name, f"{name.replace('_', ' ')}", lib,
            S("is_true", 1, T("rewrite", _boolp(), _boolp())),
            S("is_true", 1, T("rewrite", _boolp())),
            S("is_true", 1, T("rewrite", _boolp(), _boolp())),
            S("is_true", 0, T("rewrite", _boolp())),
        )
        for name in names
    ]


def series_siblings(lib):
    align_pool(42)
    """Two series-proof idioms: a condensed 3-step style with chained
    sentences, and a 4-step style shaped like the running examples but with
    a chained base case."""
    condensed = ["sum_square_n", "sum_cube_n", "prod_pow2_n"]
    spelled = ["sum_triangle_w", "sum_gauss_w", "prod_fact_sq_w"]
    out = []
    shapes = [
        (
            S("equal", 2, T("elim", A("nat", "hyp"))),
            S("equal", 0, T("rewrite", nextp(), nextp()), T("rewrite", nextp())),
            S("forall", 0, T("move =>", A("nat"), A("Prop")), T("rewrite", nextp(), IH(), nextp(), nextp())),
        ),
        (
            S("equal", 2, T("elim", A("nat", "hyp"))),
            S("equal", 0, T("rewrite", nextp(), nextp(), nextp())),
            S("forall", 0, T("move =>", A("nat"), A("Prop")), T("rewrite", nextp(), IH()), T("rewrite", nextp(), nextp())),
        ),
        (
            S("equal", 2, T("elim", A("nat", "hyp"))),
            S("equal", 0, T("rewrite", nextp()), T("rewrite", nextp()), T("rewrite", nextp())),
            S("forall", 0, T("move =>", A("nat"), A("Prop")), T("rewrite", nextp(), IH(), nextp())),
        ),
    ]
    for name, steps in zip(condensed, shapes):
        out.append(mk(name, f"forall n, {name.replace('_', ' ')} n", lib, *steps))
    for name in spelled:
        out.append(
            mk(
                name, f"forall n, {name.replace('_', ' ')} n", lib,
                S("equal", 2, T("elim", A("nat", "hyp"))),
                S("equal", 1, T("rewrite", nextp(), nextp(), nextp())),
                S("equal", 0, T("rewrite", nextp(), nextp())),
                S("forall", 1, T("move =>", A("nat"), A("Prop"))),
                S("equal", 0, T("rewrite", nextp(), IH(), nextp(), nextp())),
            )
        )
    return out


def series_conditional(lib):
    align_pool(150)
    odd = mk(
        "sum_first_n_odd",
        "forall n, \\sum_(0 <= i < 2 * n | odd i) i = n ^ 2", lib,
        S("equal", 2, T("elim", A("nat", "hyp"))),
        S("equal", 1, T("rewrite", EL("exp0n"), EL("index_iota"), EL("subn0"), EL("big1_seq"))),
        S("forall", 0, T("move =>", A("nat")), T("move/", EL("andP"), A("Prop")), T("move :", A("Prop", "hyp")), T("rewrite", EL("muln0"), EL("in_nil"))),
        S("forall", 1, T("move =>", A("nat"), A("Prop"))),
        S("equal", 0, T("rewrite", EL("big_mkcond"), EL("addn1"), EL("mulnDr"), EL("muln1"), EL("addn2"), EL("big_nat_recr"), IH(), EL("odd2n"), EL("odd2n1"), EL("addn0"), EL("n1square"), EL("n2square"))),
    )
    out = [odd]
    names = [
        "sum_even_sq_w", "sum_filter_w", "prod_odd_w", "sum_mod2_w",
        "prod_even_w", "sum_odd_sq_w", "prod_mod2_w", "sum_parity_w",
    ]
    for name in names:
        out.append(
            mk(
                name, f"forall n, {name.replace('_', ' ')} n", lib,
                S("equal", 2, T("elim", A("nat", "hyp"))),
                S("equal", 1, T("rewrite", nextp(), nextp(), nextp(), nextp())),
                S("forall", 0, T("move =>", A("nat")), T("move/", EL("andP"), A("Prop")), T("move :", A("Prop", "hyp")), T("rewrite", nextp(), nextp())),
                S("forall", 1, T("move =>", A("nat"), A("Prop"))),
                S("equal", 0, T("rewrite", nextp(), nextp(), nextp(), nextp(), nextp(), nextp(), IH(), nextp(), nextp(), nextp(), nextp(), nextp())),
            )
        )
    return out


def series_core(lib):
    ssn = mk(
        "sum_first_n",
        "forall n, 2 * (\\sum_(0 <= i < n.+1) i) = n * n.+1", lib,
        S("equal", 2, T("elim", A("nat", "hyp"))),
        S("equal", 0, T("rewrite", EL("mul0n"), EL("big_nat1"), EL("muln0"))),
        S("forall", 1, T("move =>", A("nat"), A("Prop"))),
        S("equal", 0, T("rewrite", EL("big_nat_recr"), EL("mulnDr"), IH(), EL("mulnDl"), EL("addn2"), EL("mulnC"))),
    )
    fp = mk(
        "fact_prod",
        "forall n, \\prod_(1 <= i < n.+1) i = n`!", lib,
        S("equal", 2, T("elim", A("nat", "hyp"))),
        S("equal", 0, T("rewrite", EL("big_nil"))),
        S("forall", 1, T("move =>", A("nat"), A("Prop"))),
        S("equal", 0, T("rewrite", EL("factS"), EL("big_add1"), IH(), EL("big_add1"), EL("big_nat_recr"), EL("mulnC"))),
    )
    return [ssn, fp]


def bigop_traces():
    global _pool_cursor
    _pool_cursor = 0
    lib = "bigop"
    traces = []
    traces += case_split(lib)          # 8
    traces += view_lemmas(lib)         # 9
    traces += seq_induction(lib)       # 6
    traces += swap_series(lib)         # 6 (series)
    traces += leq_chains(lib)          # 6
    traces += base_rewrites(lib)       # 13
    traces += series_siblings(lib)     # 6 (series)
    traces += series_conditional(lib)  # 9 (series)
    traces += series_core(lib)         # 2 (series)
    assert len(traces) == 65, len(traces)
    return traces


def partial_sum_first_n():
    return mk(
        "sum_first_n",
        "forall n, 2 * (\\sum_(0 <= i < n.+1) i) = n * n.+1",
        "current",
        S("equal", 2, T("elim", A("nat", "hyp"))),
        S("equal", 0, T("rewrite", EL("mul0n"), EL("big_nat1"), EL("muln0"))),
        complete=False,
    )


# --- emission -----------------------------------------------------------------


SUGGEST_CONFIG = {
    "algorithm": "kmeans",
    "level": "goal",
    "granularity": 5,
    "frequency_param": 1,
    "runs": 200,
    "master_seed": 104,
}


def write_all():
    import json

    FIXDIR.mkdir(exist_ok=True)
    initial = initial_traces()
    bigop = bigop_traces()
    partial = partial_sum_first_n()

    write_trace_file(initial, FIXDIR / "Initial.trace", library="Initial")
    write_trace_file(bigop, FIXDIR / "bigop.trace", library="bigop")
    write_trace_file([partial], FIXDIR / "sum_first_n_partial.trace", library="current")

    (FIXDIR / "Initial.v").write_text(
        "\n\n".join(render_script(t, ssreflect=False) for t in initial) + "\n",
        encoding="utf-8",
    )
    (FIXDIR / "bigop.v").write_text(
        "\n\n".join(render_script(t, ssreflect=True) for t in bigop) + "\n",
        encoding="utf-8",
    )
    (FIXDIR / "suggest_config.json").write_text(
        json.dumps(SUGGEST_CONFIG, indent=2) + "\n", encoding="utf-8"
    )

    from proofminer.ioformats import export_library

    def with_scripts(traces, ssreflect):
        out = []
        for t in traces:
            body = "\n".join(render_script(t, ssreflect).splitlines()[2:-1])
            out.append(replace(t, script_text=body.replace("\n", " ")))
        return out

    export_library(
        build_library(with_scripts(initial, False), PLAIN_COQ, "Initial"),
        FIXDIR / "exports" / "Initial",
    )
    export_library(
        build_library(with_scripts(bigop, True), SSREFLECT, "bigop"),
        FIXDIR / "exports" / "bigop",
    )
    print(f"wrote {len(initial)} Initial lemmas, {len(bigop)} bigop lemmas")
    return initial, bigop, partial


# --- verification harness -----------------------------------------------------


def check(initial, bigop, partial, seed, verbose=False):
    from proofminer.model import EngineConfig
    from proofminer import pipeline

    lib = build_library(initial, PLAIN_COQ, "Initial")
    vectors = lib.vectors["goal"]
    ok = True

    cfg3 = EngineConfig(algorithm="kmeans", level="goal", granularity=3,
                        frequency_param=1, master_seed=seed)
    report3 = pipeline.cluster_corpus(vectors, cfg3)
    four = {"mult_n_0", "mult_0_n", "app_l_nil", "app_nil_l"}
    hit3 = [e for e in report3.entries if four <= e.lemma_set]
    print(f"[initial g=3] clusters={len(report3.entries)} "
          f"four-together={'YES' if hit3 else 'NO'}"
          + (f" freq={hit3[0].frequency_pct:.1f}% size={len(hit3[0].lemma_set)}" if hit3 else ""))
    ok &= bool(hit3)
    if verbose:
        for e in report3.entries[:12]:
            print("   g3", f"{e.frequency_pct:5.1f}%", sorted(e.lemma_set)[:8],
                  f"(+{max(0, len(e.lemma_set) - 8)})")

    cfg5 = replace(cfg3, granularity=5)
    report5 = pipeline.cluster_corpus(vectors, cfg5)
    inductive = {"app_l_nil", "mult_n_0", "plus_n_0", "minus_n_0"}
    simplif = {"mult_0_n", "app_nil_l"}
    hit5 = [
        e for e in report5.entries
        if inductive <= e.lemma_set and not (simplif & e.lemma_set)
    ]
    print(f"[initial g=5] clusters={len(report5.entries)} "
          f"split={'YES' if hit5 else 'NO'}"
          + (f" freq={hit5[0].frequency_pct:.1f}% size={len(hit5[0].lemma_set)}" if hit5 else ""))
    ok &= bool(hit5)
    if verbose:
        for e in report5.entries[:12]:
            print("   g5", f"{e.frequency_pct:5.1f}%", sorted(e.lemma_set)[:8],
                  f"(+{max(0, len(e.lemma_set) - 8)})")

    cfg_s5 = EngineConfig(algorithm="kmeans", level="goal", granularity=5,
                          frequency_param=1, master_seed=seed)
    sug5 = pipeline.suggest_from_traces(bigop, partial, cfg_s5, SSREFLECT)
    got5 = sorted(sug5.lemma_set) if sug5 else None
    print(f"[bigop g=5] suggestion={got5} "
          f"{'YES' if got5 == ['fact_prod'] else 'NO'}")
    ok &= got5 == ["fact_prod"]

    cfg_s3 = replace(cfg_s5, granularity=3)
    sug3 = pipeline.suggest_from_traces(bigop, partial, cfg_s3, SSREFLECT)
    got3 = sorted(sug3.lemma_set) if sug3 else []
    print(f"[bigop g=3] contains fact_prod={'YES' if 'fact_prod' in got3 else 'NO'} "
          f"({len(got3)} lemmas)")
    ok &= "fact_prod" in got3
    return ok


def diagnostics(traces, universe, label, extra=None):
    import numpy as np
    from proofminer import mlcore
    from proofminer import pipeline
    from proofminer.model import EngineConfig
    from proofminer.features import GOAL_COLUMNS, GOAL_ROWS

    lib = build_library(traces, universe, label)
    vectors = lib.vectors["goal"]
    names = [v.lemma_name for v in vectors]
    if extra is not None:
        from proofminer.features import build_symbol_tables, encode_table, extract_table
        symbols = build_symbol_tables(list(traces) + [extra], universe)
        symbols.freeze()
        vectors = [
            encode_table(extract_table(t, "goal", universe), symbols)
            for t in list(traces) + [extra]
        ]
        names = [t.lemma_name for t in traces] + ["<current>"]
    cfg = EngineConfig()
    zdata, _ = mlcore.standardize(
        mlcore.Dataset(np.array([v.values for v in vectors]), tuple(names))
    )
    Z = zdata.points
    X = pipeline.preprocess(vectors, cfg).points if extra is None else Z
    print(f"--- {label}: {X.shape[0]} lemmas, {X.shape[1]} dims")
    picks = [n for n in (
        "mult_n_0", "app_l_nil", "mult_0_n", "app_nil_l",
        "sum_first_n", "fact_prod", "sum_first_n_odd", "<current>",
    ) if n in names]
    for a in picks:
        i = names.index(a)
        d = np.sqrt(((X - X[i]) ** 2).sum(axis=1))
        order = np.argsort(d)
        nearest = [(names[j], round(float(d[j]), 2)) for j in order[1:6]]
        print(f"  {a:16s} ->", nearest)

    def explain(a, b):
        if a not in names or b not in names:
            return
        i, j = names.index(a), names.index(b)
        deltas = (Z[i] - Z[j]) ** 2
        top = np.argsort(deltas)[::-1][:6]
        cells = [
            f"{GOAL_ROWS[t // 6]}.{GOAL_COLUMNS[t % 6]}={deltas[t]:.1f}"
            for t in top if deltas[t] > 0.05
        ]
        print(f"  z2[{a} ~ {b}] total={deltas.sum():.1f}: " + " ".join(cells))

    for a, b in (
        ("mult_n_0", "app_l_nil"), ("mult_n_0", "mult_0_n"),
        ("app_l_nil", "map_length_w"), ("mult_0_n", "andb_comm"),
        ("mult_0_n", "imp_trans_w"),
        ("sum_first_n", "fact_prod"), ("sum_first_n", "sum_square_n"),
        ("<current>", "sum_first_n"), ("<current>", "fact_prod"),
        ("<current>", "cardseq_w"), ("<current>", "leq_case_w"),
        ("<current>", "eqn_view_w"), ("<current>", "eq_big_w"),
    ):
        explain(a, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true")
    ap.add_argument("--diag", action="store_true")
    ap.add_argument("--seed", type=int, default=104)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()
    initial, bigop, partial = write_all()
    if args.diag:
        diagnostics(initial, PLAIN_COQ, "Initial")
        diagnostics(bigop, SSREFLECT, "bigop", extra=partial)
    if args.check:
        good = check(initial, bigop, partial, args.seed, args.verbose)
        print("ALL CRITERIA PASS" if good else "CRITERIA FAILED")
        sys.exit(0 if good else 1)


if __name__ == "__main__":
    main()
