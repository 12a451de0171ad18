import re

import pytest

from proofminer.model import KIND_HYP, KIND_IH, KIND_LEMMA, KIND_NONE
from proofminer.parsing import (
    DuplicateLemma,
    FormatError,
    MissingStatement,
    NameMismatch,
    ScriptProof,
    UnterminatedProof,
    format_trace,
    merge_script_into_trace,
    parse_script,
    parse_trace_text,
    read_trace_file,
    tokenize,
    write_trace_file,
)

from conftest import trace_by_name

APP_NIL_L = """Lemma app_nil_l : forall l: list A, [] ++ l = l.
Proof.
intro l.
simpl;trivial.
Qed.
"""

FACT_PROD = """Lemma fact_prod : forall n, prod i = n!.
Proof.
elim : n.
by rewrite big_nil.
move => n IH.
by rewrite factS big_add1 IH big_add1 big_nat_recr mulnC.
Qed.
"""


def test_tokenize_minimal_proof_block():
    kinds = [(t.kind, t.text) for t in tokenize("Proof. intro l. Qed.")]
    assert kinds == [
        ("Keyword", "Proof"), ("Dot", "."),
        ("TacticText", "intro l"), ("Dot", "."),
        ("Keyword", "Qed"), ("Dot", "."),
    ]


def test_tokenize_chained_sentence():
    kinds = [(t.kind, t.text) for t in tokenize("simpl;trivial.")]
    assert kinds == [
        ("TacticText", "simpl"), ("Semicolon", ";"),
        ("TacticText", "trivial"), ("Dot", "."),
    ]


def test_tokenize_empty_input():
    assert tokenize("") == []


def test_tokenize_reconstructs_source_modulo_whitespace():
    source = APP_NIL_L + "\n" + FACT_PROD
    joined = "".join(t.text for t in tokenize(source))
    assert re.sub(r"\s+", "", joined) == re.sub(r"\s+", "", source)


def test_tokenize_move_forms_expose_markers():
    kinds = {t.kind for t in tokenize("Lemma x : P.\nProof.\nmove => n IH.\nmove : H.\nmove/andP.\nQed.")}
    assert {"ArrowIntro", "MoveColon", "Slash"} <= kinds


def test_tokenize_unterminated_proof():
    with pytest.raises(UnterminatedProof):
        tokenize("Lemma x : P.\nProof.\nintro l.")


def test_parse_app_nil_l_sentences():
    (proof,) = parse_script(APP_NIL_L)
    assert proof.lemma_name == "app_nil_l"
    assert proof.statement == "forall l: list A, [] ++ l = l"
    names = [[t.name for t in sentence] for sentence in proof.sentences]
    assert names == [["intro"], ["simpl", "trivial"]]
    assert proof.sentences[0][0].args[0].kind == KIND_NONE


def test_parse_fact_prod_sentences():
    (proof,) = parse_script(FACT_PROD)
    names = [[t.name for t in sentence] for sentence in proof.sentences]
    assert names == [["elim"], ["rewrite"], ["move =>"], ["rewrite"]]
    final = proof.sentences[3][0]
    assert [a.lemma or a.kind for a in final.args] == [
        "factS", "big_add1", KIND_IH, "big_add1", "big_nat_recr", "mulnC",
    ]
    assert final.args[0].kind == KIND_LEMMA


def test_parse_rewrite_modifiers_are_stripped():
    src = "Lemma x : P.\nProof.\nby rewrite big_nat_recr mulnDr IH -mulnDl !addn2 ?mulnC // /= -[n.+1]addn1.\nQed."
    (proof,) = parse_script(src)
    args = proof.sentences[0][0].args
    assert [a.lemma or "IH" for a in args] == [
        "big_nat_recr", "mulnDr", "IH", "mulnDl", "addn2", "mulnC", "addn1",
    ]


def test_parse_move_slash_view_and_bound_hypothesis():
    src = "Lemma x : P.\nProof.\nmove => i.\nmove/andP => [_ H2].\nmove : H2.\nQed."
    (proof,) = parse_script(src)
    move_slash = proof.sentences[1][0]
    assert move_slash.name == "move/"
    assert move_slash.args[0].lemma == "andP"
    move_colon = proof.sentences[2][0]
    assert move_colon.args[0].kind == KIND_HYP  # H2 was introduced above


def test_parse_vacuous_proof_body_warns():
    (proof,) = parse_script("Lemma x : P.\nProof.\nQed.")
    assert proof.sentences == ()
    assert any("incomplete-derivation" in w for w in proof.warnings)


def test_parse_missing_statement():
    with pytest.raises(MissingStatement):
        parse_script("Lemma x.\nProof.\nQed.")


def test_sentence_count_matches_dot_terminated_sentences(fixtures_dir):
    source = (fixtures_dir / "Initial.v").read_text()
    proofs = parse_script(source)
    assert len(proofs) == 70  # total on the fixture corpus
    for proof in proofs:
        body = proof.body_text
        assert len(proof.sentences) == body.count(".") if body else True


def test_read_trace_file_mult_n_0(initial_traces):
    trace = trace_by_name(initial_traces, "mult_n_0")
    assert len(trace.steps) == 3
    assert trace.steps[0].goal_top_symbol == "forall"
    assert trace.steps[0].n_subgoals_after == 2
    assert [t.name for t in trace.steps[1].tactics] == ["simpl", "trivial"]
    assert len(trace.tree.root.children) == 2
    assert trace.tree.closed_leaf_count() == 2


def test_duplicate_lemma_rejected():
    text = """library l
lemma foo
statement P
step top=equal subgoals=0
  tactic auto
qed
lemma foo
statement Q
step top=equal subgoals=0
  tactic auto
qed
"""
    with pytest.raises(DuplicateLemma):
        parse_trace_text(text)


def test_negative_subgoals_is_format_error():
    text = """library l
lemma foo
statement P
step top=equal subgoals=-1
  tactic auto
qed
"""
    with pytest.raises(FormatError):
        parse_trace_text(text)


def test_malformed_directive_is_format_error():
    with pytest.raises(FormatError):
        parse_trace_text("library l\nwhatever now\n")


def test_trace_round_trip(initial_traces, bigop_traces, tmp_path):
    for name, traces in (("i", initial_traces), ("b", bigop_traces)):
        path = tmp_path / f"{name}.trace"
        write_trace_file(traces, path)
        assert read_trace_file(path) == list(traces)


def test_format_trace_is_reparsable(partial_trace):
    text = "library current\n" + format_trace(partial_trace)
    (again,) = parse_trace_text(text)
    assert again == partial_trace
    assert not again.complete


def test_merge_against_sidecar_equals_fixture(initial_traces, fixtures_dir):
    source = (fixtures_dir / "Initial.v").read_text()
    proofs = {p.lemma_name: p for p in parse_script(source)}
    fixture = trace_by_name(initial_traces, "app_nil_l")
    merged = merge_script_into_trace(proofs["app_nil_l"], fixture)
    assert merged.steps == fixture.steps
    assert merged.tree == fixture.tree
    assert merged.statement == fixture.statement
    assert merged.complete


def test_merge_without_sidecar_leaves_goal_fields_absent():
    (proof,) = parse_script(APP_NIL_L)
    merged = merge_script_into_trace(proof, None)
    assert all(s.goal_top_symbol is None for s in merged.steps)
    assert all(s.n_subgoals_after is None for s in merged.steps)
    assert merged.tree is None
    # tactic-level data still present
    assert [t.name for t in merged.steps[1].tactics] == ["simpl", "trivial"]


def test_merge_name_mismatch():
    (proof,) = parse_script(APP_NIL_L)
    other = parse_trace_text(
        "library l\nlemma b\nstatement P\nstep top=equal subgoals=0\n  tactic auto\nqed\n"
    )[0]
    with pytest.raises(NameMismatch):
        merge_script_into_trace(proof, other)


def test_script_corpus_parses_totally(fixtures_dir):
    for name in ("Initial.v", "bigop.v"):
        proofs = parse_script((fixtures_dir / name).read_text())
        assert proofs, name
