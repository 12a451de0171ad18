"""Proof-script parsing and the enriched trace file format.

Scripts alone carry tactic-level information only; goal snapshots, argument
types and tree structure come from the sidecar trace format, which is what
an instrumented prover run would have recorded:

    library <name>
    lemma <name>
    statement <text>
    step top=<symbol> subgoals=<n>
      tactic <name> [arg <type>:<kind>[:<lemma>]] ...
    tree (<tactic-index>,<closed> <child> ...)
    qed | admitted

Unknown values are written as "-". Tree node records reference the flat
index of the tactic application that produced the node (-1 for the root).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .model import (
    KIND_HYP,
    KIND_IH,
    KIND_LEMMA,
    KIND_NONE,
    Arg,
    ProofStep,
    ProofTrace,
    ProofTree,
    TacticApp,
    TreeNode,
    validate_trace,
)
from .features import DuplicateLemma


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = f" at line {line}" if line is not None else ""
        where += f", column {col}" if col is not None else ""
        super().__init__(message + where)


class UnterminatedProof(ParseError):
    pass


class MissingStatement(ParseError):
    pass


class FormatError(ValueError):
    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class NameMismatch(ValueError):
    pass


# --- script tokenizer -------------------------------------------------------

KW_LEMMA = "Lemma"
KW_PROOF = "Proof"
KW_QED = "Qed"


@dataclass(frozen=True)
class ScriptToken:
    kind: str  # Keyword, Ident, Colon, Dot, Semicolon, ArrowIntro, MoveColon,
    #            Slash, StatementText, TacticText
    text: str
    line: int
    col: int


def _positions(source):
    """Map character offset -> (line, col), 1-based."""
    lines = source.split("\n")
    table = []
    offset = 0
    for i, line in enumerate(lines, start=1):
        table.append((offset, i))
        offset += len(line) + 1
    return table


class _Scanner:
    def __init__(self, source):
        self.source = source
        self.pos = 0
        self._lines = _positions(source)

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line, col = 1, pos + 1
        for start, number in self._lines:
            if start <= pos:
                line = number
                col = pos - start + 1
        return line, col

    def eof(self):
        return self.pos >= len(self.source)

    def skip_ws(self):
        while not self.eof() and self.source[self.pos].isspace():
            self.pos += 1

    def peek_word(self):
        match = re.match(r"[A-Za-z_][A-Za-z0-9_']*", self.source[self.pos:])
        return match.group(0) if match else ""

    def until_sentence_dot(self):
        """Consume text up to a sentence-terminating '.' (a dot followed by
        whitespace or end of input); returns (text, dot_pos)."""
        start = self.pos
        while not self.eof():
            ch = self.source[self.pos]
            if ch == "." and (
                self.pos + 1 >= len(self.source) or self.source[self.pos + 1].isspace()
            ):
                return self.source[start : self.pos], self.pos
            self.pos += 1
        return self.source[start:], None


def _sentence_dot(scanner: _Scanner, tokens):
    text, dot_pos = scanner.until_sentence_dot()
    if dot_pos is None:
        line, col = scanner.where()
        raise ParseError("unterminated sentence", line, col)
    return text, dot_pos


def _emit(tokens, scanner, kind, text, pos):
    line, col = scanner.where(pos)
    tokens.append(ScriptToken(kind, text, line, col))


_MOVE_HEAD = re.compile(r"move\s*(=>|:|/)")


def _tactic_tokens(tokens, scanner, chunk, pos):
    """Split one tactic chunk into tokens; move-forms expose their marker."""
    stripped = chunk.strip()
    if not stripped:
        return
    lead = pos + (len(chunk) - len(chunk.lstrip()))
    match = _MOVE_HEAD.match(stripped)
    if match:
        _emit(tokens, scanner, "Ident", "move", lead)
        marker = match.group(1)
        kind = {"=>": "ArrowIntro", ":": "MoveColon", "/": "Slash"}[marker]
        _emit(tokens, scanner, kind, marker, lead + match.start(1))
        rest = stripped[match.end():]
        if marker == "/":
            rest = stripped[match.end():]  # view name sticks to the slash
        if rest.strip():
            _emit(tokens, scanner, "TacticText", rest.strip(), lead + match.end())
    else:
        _emit(tokens, scanner, "TacticText", stripped, lead)


def tokenize(source: str) -> list[ScriptToken]:
    """Token stream for the script subset. Concatenating token texts and
    collapsing whitespace reconstructs the source the same way."""
    tokens: list[ScriptToken] = []
    scanner = _Scanner(source)
    in_proof = False
    proof_start = None
    while True:
        scanner.skip_ws()
        if scanner.eof():
            break
        word = scanner.peek_word()
        pos = scanner.pos
        if not in_proof and word == KW_LEMMA:
            scanner.pos += len(word)
            _emit(tokens, scanner, "Keyword", KW_LEMMA, pos)
            scanner.skip_ws()
            ident = scanner.peek_word()
            if not ident:
                line, col = scanner.where()
                raise ParseError("expected lemma name", line, col)
            _emit(tokens, scanner, "Ident", ident, scanner.pos)
            scanner.pos += len(ident)
            scanner.skip_ws()
            if scanner.eof() or scanner.source[scanner.pos] != ":":
                line, col = scanner.where()
                raise MissingStatement(
                    f"lemma {ident} has no ':' statement separator", line, col
                )
            _emit(tokens, scanner, "Colon", ":", scanner.pos)
            scanner.pos += 1
            text, dot_pos = _sentence_dot(scanner, tokens)
            _emit(tokens, scanner, "StatementText", text.strip(), scanner.pos - len(text))
            _emit(tokens, scanner, "Dot", ".", dot_pos)
            scanner.pos = dot_pos + 1
        elif not in_proof and word == KW_PROOF:
            scanner.pos += len(word)
            _emit(tokens, scanner, "Keyword", KW_PROOF, pos)
            scanner.skip_ws()
            if scanner.eof() or scanner.source[scanner.pos] != ".":
                line, col = scanner.where()
                raise ParseError("expected '.' after Proof", line, col)
            _emit(tokens, scanner, "Dot", ".", scanner.pos)
            scanner.pos += 1
            in_proof = True
            proof_start = scanner.where(pos)
        elif in_proof:
            if word == KW_QED:
                scanner.pos += len(word)
                _emit(tokens, scanner, "Keyword", KW_QED, pos)
                scanner.skip_ws()
                if scanner.eof() or scanner.source[scanner.pos] != ".":
                    line, col = scanner.where()
                    raise ParseError("expected '.' after Qed", line, col)
                _emit(tokens, scanner, "Dot", ".", scanner.pos)
                scanner.pos += 1
                in_proof = False
                continue
            text, dot_pos = scanner.until_sentence_dot()
            if dot_pos is None:
                line, col = proof_start
                raise UnterminatedProof("proof block without Qed", line, col)
            cursor = scanner.pos - len(text)
            for part in text.split(";"):
                _tactic_tokens(tokens, scanner, part, cursor)
                cursor += len(part)
                if cursor < scanner.pos:
                    _emit(tokens, scanner, "Semicolon", ";", cursor)
                    cursor += 1
            _emit(tokens, scanner, "Dot", ".", dot_pos)
            scanner.pos = dot_pos + 1
        else:
            # bare tactic sentence outside a Proof block; kept so fragments
            # tokenize, parse_script still rejects them
            text, dot_pos = scanner.until_sentence_dot()
            cursor = scanner.pos - len(text)
            for part in text.split(";"):
                _tactic_tokens(tokens, scanner, part, cursor)
                cursor += len(part)
                if cursor < scanner.pos:
                    _emit(tokens, scanner, "Semicolon", ";", cursor)
                    cursor += 1
            if dot_pos is not None:
                _emit(tokens, scanner, "Dot", ".", dot_pos)
                scanner.pos = dot_pos + 1
    if in_proof:
        line, col = proof_start
        raise UnterminatedProof("proof block without Qed", line, col)
    return tokens


# --- script parser ----------------------------------------------------------


@dataclass(frozen=True)
class ScriptProof:
    lemma_name: str
    statement: str
    sentences: tuple[tuple[TacticApp, ...], ...]
    body_text: str = ""
    warnings: tuple[str, ...] = ()


_MODIFIERS = ("//=", "/=", "//")


def _clean_rewrite_arg(word: str) -> str | None:
    """Strip occurrence/direction modifiers down to the bare lemma name."""
    word = word.strip()
    if word in _MODIFIERS or not word:
        return None
    word = re.sub(r"\[[^\]]*\]", "", word)  # pattern selectors like -[n.+1]
    word = word.lstrip("-!?/")
    return word or None


def _split_intro_pattern(text: str) -> list[str]:
    """Names bound by an intro pattern; wildcards and brackets drop out."""
    cleaned = text.replace("[", " ").replace("]", " ")
    names = []
    for word in cleaned.split():
        if word in ("_",) or word in _MODIFIERS:
            continue
        names.append(word)
    return names


def _classify(name: str, bound: set[str], external_default: bool) -> Arg:
    if name.startswith("IH"):
        return Arg(None, KIND_IH)
    if name in bound:
        return Arg(None, KIND_HYP)
    if external_default:
        return Arg(None, KIND_LEMMA, lemma=name)
    return Arg(None, KIND_NONE)


def _parse_tactic(text: str, bound: set[str]) -> TacticApp:
    """One chunk of a (possibly chained) sentence into a TacticApp. Updates
    the bound-name environment for intro-style tactics."""
    text = text.strip()
    if text.startswith("by "):
        text = text[3:].strip()
    match = _MOVE_HEAD.match(text)
    if match:
        marker = match.group(1)
        rest = text[match.end():].strip()
        if marker == "=>":
            names = _split_intro_pattern(rest)
            args = tuple(Arg(None, KIND_NONE) for _ in names)
            bound.update(names)
            return TacticApp("move =>", args)
        if marker == ":":
            words = rest.split()
            return TacticApp("move :", tuple(_classify(w, bound, False) for w in words))
        # move/view [=> pattern]
        view, _, tail = rest.partition("=>")
        view = view.strip().rstrip("/")
        args = [Arg(None, KIND_LEMMA, lemma=view)] if view else []
        if tail.strip():
            names = _split_intro_pattern(tail)
            args.extend(Arg(None, KIND_NONE) for _ in names)
            bound.update(names)
        return TacticApp("move/", tuple(args))
    words = text.split()
    head = words[0]
    rest = [w for w in words[1:] if w != ":"]
    if head in ("elim", "case") and rest and rest[0].startswith(":"):
        rest[0] = rest[0][1:]
        rest = [w for w in rest if w]
    if head == "rewrite":
        args = []
        for word in rest:
            name = _clean_rewrite_arg(word)
            if name is None:
                continue
            args.append(_classify(name, bound, True))
        return TacticApp(head, tuple(args))
    if head in ("intro", "intros"):
        args = tuple(Arg(None, KIND_NONE) for _ in rest)
        bound.update(rest)
        return TacticApp(head, args)
    return TacticApp(head, tuple(_classify(w, bound, False) for w in rest))


def parse_script(source: str) -> list[ScriptProof]:
    """Parse every ``Lemma .. Proof. .. Qed.`` block of the script subset."""
    tokens = tokenize(source)
    proofs = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.kind == "Keyword" and tok.text == KW_LEMMA:
            name = tokens[i + 1].text
            if tokens[i + 2].kind != "Colon":
                raise MissingStatement(f"lemma {name}", tok.line, tok.col)
            statement = tokens[i + 3].text
            i += 5  # Lemma Ident Colon StatementText Dot
            if not (
                i < len(tokens)
                and tokens[i].kind == "Keyword"
                and tokens[i].text == KW_PROOF
            ):
                raise ParseError(f"lemma {name}: expected Proof block", tok.line, tok.col)
            i += 2  # Proof Dot
            sentences = []
            current: list[ScriptToken] = []
            bound: set[str] = set()
            body_parts = []
            while i < len(tokens) and not (
                tokens[i].kind == "Keyword" and tokens[i].text == KW_QED
            ):
                t = tokens[i]
                if t.kind == "Dot":
                    sentences.append(_assemble_sentence(current, bound))
                    body_parts.append(
                        "".join(_chunk_text(c) for c in current) + "."
                    )
                    current = []
                else:
                    current.append(t)
                i += 1
            if i >= len(tokens):
                raise UnterminatedProof(f"lemma {name}", tok.line, tok.col)
            i += 2  # Qed Dot
            warnings = ()
            if not sentences:
                warnings = ("incomplete-derivation: proof body has no tactics",)
            proofs.append(
                ScriptProof(
                    name,
                    statement,
                    tuple(sentences),
                    " ".join(body_parts),
                    warnings,
                )
            )
        else:
            raise ParseError(
                f"unexpected token {tok.text!r}; expected Lemma", tok.line, tok.col
            )
    return proofs


def _chunk_text(token: ScriptToken) -> str:
    if token.kind == "Semicolon":
        return ";"
    if token.kind in ("ArrowIntro", "MoveColon", "Slash"):
        return token.text + " " if token.kind != "Slash" else token.text
    return token.text + " " if token.kind == "Ident" else token.text


def _assemble_sentence(parts: list[ScriptToken], bound: set[str]) -> tuple[TacticApp, ...]:
    """Rebuild chunk texts between semicolons and parse each as one tactic."""
    chunks: list[str] = []
    current = ""
    for token in parts:
        if token.kind == "Semicolon":
            chunks.append(current)
            current = ""
        elif token.kind == "Ident":
            current += token.text + " "
        elif token.kind in ("ArrowIntro", "MoveColon"):
            current += token.text + " "
        elif token.kind == "Slash":
            current += token.text
        else:
            current += token.text
    chunks.append(current)
    return tuple(_parse_tactic(chunk, bound) for chunk in chunks if chunk.strip())


# --- trace file format ------------------------------------------------------


def read_trace_file(path) -> list[ProofTrace]:
    text = Path(path).read_text(encoding="utf-8")
    return parse_trace_text(text)


def parse_trace_text(text: str) -> list[ProofTrace]:
    """Parse one library document; every trace must validate."""
    library = ""
    traces: list[ProofTrace] = []
    seen: set[str] = set()

    lemma = None
    statement = ""
    steps: list[ProofStep] = []
    tactics_buffer: list[TacticApp] = []
    step_header: tuple[str | None, int | None] | None = None
    tree_text = ""

    def flush_step(lineno):
        nonlocal step_header, tactics_buffer
        if step_header is None:
            return
        if not tactics_buffer:
            raise FormatError(lineno, "step without tactics")
        top, subgoals = step_header
        steps.append(ProofStep(tuple(tactics_buffer), top, subgoals))
        step_header = None
        tactics_buffer = []

    def finish(lineno, complete):
        nonlocal lemma, statement, steps, tree_text
        flush_step(lineno)
        tree = _parse_tree(tree_text, [t for s in steps for t in s.tactics], lineno)
        trace = ProofTrace(
            lemma_name=lemma,
            statement=statement,
            library=library,
            steps=tuple(steps),
            tree=tree,
            complete=complete,
        )
        violations = validate_trace(trace)
        if violations:
            raise FormatError(lineno, f"lemma {lemma}: {violations[0]}")
        if lemma in seen:
            raise DuplicateLemma(lemma)
        seen.add(lemma)
        traces.append(trace)
        lemma = None
        statement = ""
        steps = []
        tree_text = ""

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "library":
            library = rest.strip()
        elif head == "lemma":
            if lemma is not None:
                raise FormatError(lineno, f"lemma {lemma} not terminated")
            lemma = rest.strip()
            if not lemma:
                raise FormatError(lineno, "lemma without a name")
        elif head == "statement":
            statement = rest.strip()
        elif head == "step":
            flush_step(lineno)
            step_header = _parse_step_header(rest, lineno)
        elif head == "tactic":
            if step_header is None:
                raise FormatError(lineno, "tactic outside a step")
            tactics_buffer.append(_parse_tactic_line(rest, lineno))
        elif head == "tree":
            flush_step(lineno)
            tree_text += " " + rest
        elif head in ("qed", "admitted"):
            if lemma is None:
                raise FormatError(lineno, f"{head} outside a lemma block")
            finish(lineno, complete=(head == "qed"))
        else:
            raise FormatError(lineno, f"unknown directive {head!r}")
    if lemma is not None:
        raise FormatError(len(text.splitlines()), f"lemma {lemma} not terminated")
    return traces


def _parse_step_header(rest, lineno):
    top = None
    subgoals = None
    for part in rest.split():
        key, _, value = part.partition("=")
        if key == "top":
            top = None if value == "-" else value
        elif key == "subgoals":
            if value == "-":
                subgoals = None
            else:
                try:
                    subgoals = int(value)
                except ValueError:
                    raise FormatError(lineno, f"bad subgoal count {value!r}") from None
                if subgoals < 0:
                    raise FormatError(lineno, f"negative subgoal count {subgoals}")
        else:
            raise FormatError(lineno, f"unknown step field {key!r}")
    return top, subgoals


_KINDS = {"none": KIND_NONE, "hyp": KIND_HYP, "ih": KIND_IH, "lemma": KIND_LEMMA}


def _parse_tactic_line(rest, lineno):
    name, sep, tail = rest.partition(" arg ")
    args = []
    while sep:
        spec, sep, tail = tail.partition(" arg ")
        fields = spec.strip().split(":")
        if len(fields) not in (2, 3):
            raise FormatError(lineno, f"bad arg spec {spec!r}")
        arg_type = None if fields[0] == "-" else fields[0]
        kind = _KINDS.get(fields[1])
        if kind is None:
            raise FormatError(lineno, f"unknown arg kind {fields[1]!r}")
        lemma = fields[2] if len(fields) == 3 else None
        if kind == KIND_LEMMA and not lemma:
            raise FormatError(lineno, "lemma-kind arg without a lemma name")
        try:
            args.append(Arg(arg_type, kind, lemma))
        except ValueError as exc:
            raise FormatError(lineno, str(exc)) from None
    return TacticApp(name.strip(), tuple(args))


_TREE_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _parse_tree(text, flat_tactics, lineno):
    text = text.strip()
    if not text:
        return None
    tokens = _TREE_TOKEN.findall(text)
    pos = 0

    def node(depth):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != "(":
            raise FormatError(lineno, "malformed tree spec: expected '('")
        pos += 1
        if pos >= len(tokens):
            raise FormatError(lineno, "malformed tree spec: truncated node")
        head = tokens[pos]
        pos += 1
        match = re.fullmatch(r"(-?\d+),([01])", head)
        if not match:
            raise FormatError(lineno, f"malformed tree node record {head!r}")
        index = int(match.group(1))
        closed = match.group(2) == "1"
        children = []
        while pos < len(tokens) and tokens[pos] == "(":
            children.append(node(depth + 1))
        if pos >= len(tokens) or tokens[pos] != ")":
            raise FormatError(lineno, "malformed tree spec: expected ')'")
        pos += 1
        if index >= len(flat_tactics):
            raise FormatError(lineno, f"tree references tactic {index} beyond proof")
        edge = flat_tactics[index] if index >= 0 else None
        return TreeNode(depth, index, edge, tuple(children), closed)

    root = node(1)
    if pos != len(tokens):
        raise FormatError(lineno, "trailing tree content")
    return ProofTree(root)


def format_trace(trace: ProofTrace) -> str:
    """One lemma block in the trace format (canonical rendering)."""
    out = [f"lemma {trace.lemma_name}", f"statement {trace.statement}"]
    for step in trace.steps:
        top = step.goal_top_symbol if step.goal_top_symbol is not None else "-"
        subgoals = (
            step.n_subgoals_after if step.n_subgoals_after is not None else "-"
        )
        out.append(f"step top={top} subgoals={subgoals}")
        for app in step.tactics:
            parts = [f"tactic {app.name}"]
            for arg in app.args:
                spec = f"{arg.arg_type or '-'}:{arg.kind}"
                if arg.lemma:
                    spec += f":{arg.lemma}"
                parts.append(f"arg {spec}")
            out.append("  " + " ".join(parts))
    if trace.tree is not None:
        out.append("tree " + _format_tree(trace.tree.root))
    out.append("qed" if trace.complete else "admitted")
    return "\n".join(out)


def _format_tree(node: TreeNode) -> str:
    inner = "".join(" " + _format_tree(child) for child in node.children)
    return f"({node.edge_index},{int(node.closed)}{inner})"


def write_trace_file(traces, path, library: str | None = None):
    if library is None:
        library = traces[0].library if traces else ""
    blocks = [f"library {library}", ""]
    for trace in traces:
        blocks.append(format_trace(trace))
        blocks.append("")
    Path(path).write_text("\n".join(blocks), encoding="utf-8")


# --- merging ----------------------------------------------------------------


def merge_script_into_trace(
    script: ScriptProof, partial: ProofTrace | None, library: str = ""
) -> ProofTrace:
    """Tactic-level data from the script; goal-level fields from the sidecar
    trace when present. Argument kinds fall back to the script heuristics,
    argument types stay unknown without a sidecar."""
    if partial is not None and partial.lemma_name != script.lemma_name:
        raise NameMismatch(f"{script.lemma_name!r} vs {partial.lemma_name!r}")
    steps = []
    for i, sentence in enumerate(script.sentences):
        top = None
        subgoals = None
        tactics = sentence
        if partial is not None and i < len(partial.steps):
            sidecar = partial.steps[i]
            top = sidecar.goal_top_symbol
            subgoals = sidecar.n_subgoals_after
            if len(sidecar.tactics) == len(sentence) and all(
                a.name == b.name for a, b in zip(sidecar.tactics, sentence)
            ):
                tactics = sidecar.tactics
        steps.append(ProofStep(tuple(tactics), top, subgoals))
    return ProofTrace(
        lemma_name=script.lemma_name,
        statement=script.statement,
        library=partial.library if partial is not None else library,
        steps=tuple(steps),
        tree=partial.tree if partial is not None else None,
        complete=partial.complete if partial is not None else True,
        script_text=script.body_text or None,
    )
