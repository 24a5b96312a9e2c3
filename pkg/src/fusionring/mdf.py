"""The modular-data file format: scalar expressions and datum files.

Datasets are plain UTF-8 text, line oriented, with ``#`` line comments and
four section kinds::

    [header]                     name/modules/vacuum/scale key-value lines
    [labels]                     index name qdim=<expr> dual=<int> weight=<rat>
    [S]                          row col <expr>      ("?" marks an unknown)
    [branching parent="g" k=9]   parent_index = k1 + 2*k3 + ...
    [fusion]                     [soft] i x j = k1 + 2*k3 + ... [| citation]

Scalar values use a small expression grammar (whitespace-insensitive)::

    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := ('-')? atom ('^' int)?
    atom     := rational | 'E' '(' uint ')' | 'sqrt' '(' uint ')' | '(' expr ')'
    rational := int ('/' uint)?

``E(n)`` is the root of unity exp(2*pi*i/n).  A rational literal like
``4/2^2`` binds the slash at the atom level, per the grammar.  An S entry is
stored as tabulated; the optional header ``scale`` expression multiplies
every entry on load so that file text can mirror a printed table verbatim.

Serialization is deterministic: ``parse_file(serialize(d))`` reproduces the
datum structurally and re-serializing yields identical bytes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclo import Cyclotomic, root_of_unity, sqrt_int

__all__ = [
    "ParseError", "DuplicateEntryError", "IndexRangeError",
    "parse_expr", "eval_expr", "expr_to_text", "cyclotomic_to_expr_text",
    "LabelRecord", "FixtureRecord", "BranchingSection", "DatumFile",
    "parse_file", "serialize",
]


class ParseError(ValueError):
    """Malformed expression or file; carries the byte offset of the error."""

    def __init__(self, message: str, offset: int, line: int | None = None):
        where = f"line {line}, " if line is not None else ""
        super().__init__(f"{where}offset {offset}: {message}")
        self.offset = offset
        self.line = line


class DuplicateEntryError(ValueError):
    pass


class IndexRangeError(IndexError):
    pass


# -- scalar expressions ----------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|(sqrt|E)|([()+\-*/^]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}",
                             len(text) - len(stripped))
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("sym", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _ExprParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_sym(self, sym: str):
        kind, val, off = self.next()
        if kind != "sym" or val != sym:
            raise ParseError(f"expected {sym!r}", off)

    def fail(self, message: str):
        raise ParseError(message, self.peek()[2])

    def parse(self):
        node = self.expr()
        kind, _, off = self.peek()
        if kind != "end":
            raise ParseError("trailing input", off)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.next()
                rhs = self.term()
                node = ("add" if val == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "*/":
                self.next()
                rhs = self.factor()
                node = ("mul" if val == "*" else "div", node, rhs)
            else:
                return node

    def factor(self):
        kind, val, _ = self.peek()
        negate = False
        if kind == "sym" and val == "-":
            self.next()
            negate = True
        node = self.atom()
        kind, val, _ = self.peek()
        if kind == "sym" and val == "^":
            self.next()
            node = ("pow", node, self.int_literal(signed=True))
        if negate:
            node = ("neg", node)
        return node

    def int_literal(self, signed: bool = False) -> int:
        kind, val, off = self.next()
        sign = 1
        if signed and kind == "sym" and val == "-":
            sign = -1
            kind, val, off = self.next()
        if kind != "int":
            raise ParseError("expected an integer", off)
        return sign * val

    def atom(self):
        kind, val, off = self.next()
        if kind == "int":
            # A rational literal greedily takes '/ uint' at the atom level.
            k2, v2, _ = self.peek()
            if k2 == "sym" and v2 == "/":
                k3, v3, _ = self.tokens[self.pos + 1]
                if k3 == "int":
                    self.next()
                    self.next()
                    if v3 == 0:
                        raise ParseError("zero denominator", off)
                    return ("rat", Fraction(val, v3))
            return ("rat", Fraction(val))
        if kind == "name":
            self.expect_sym("(")
            arg = self.int_literal()
            self.expect_sym(")")
            if val == "E":
                if arg < 1:
                    raise ParseError("E() needs a positive order", off)
                return ("E", arg)
            if arg < 1:
                raise ParseError("sqrt() needs a positive integer", off)
            return ("sqrt", arg)
        if kind == "sym" and val == "(":
            node = self.expr()
            self.expect_sym(")")
            return node
        raise ParseError("expected a value", off)


def parse_expr(text: str):
    """Parse a scalar expression into its syntax tree."""
    return _ExprParser(text).parse()


def eval_expr(node) -> Cyclotomic:
    """Evaluate a syntax tree to an exact cyclotomic value."""
    op = node[0]
    if op == "rat":
        return Cyclotomic.from_rational(node[1])
    if op == "E":
        return root_of_unity(node[1])
    if op == "sqrt":
        return sqrt_int(node[1])
    if op == "neg":
        return -eval_expr(node[1])
    if op == "pow":
        return eval_expr(node[1]) ** node[2]
    a = eval_expr(node[1])
    b = eval_expr(node[2])
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown node {op!r}")


def expr_to_text(node, _level: int = 0) -> str:
    """Render a syntax tree back to grammar text; reparsing is the identity."""
    op = node[0]
    if op in ("add", "sub"):
        text = expr_to_text(node[1], 0) + ("+" if op == "add" else "-") + expr_to_text(node[2], 1)
        need = _level > 0
    elif op in ("mul", "div"):
        text = expr_to_text(node[1], 1) + ("*" if op == "mul" else "/") + expr_to_text(node[2], 2)
        need = _level > 1
    elif op == "neg":
        text = "-" + expr_to_text(node[1], 3)
        need = _level > 2
    elif op == "pow":
        text = expr_to_text(node[1], 3) + "^" + str(node[2])
        need = False
    elif op == "rat":
        c = node[1]
        if c < 0:
            return expr_to_text(("neg", ("rat", -c)), _level)
        text = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        need = False
    elif op == "E":
        text = f"E({node[1]})"
        need = False
    elif op == "sqrt":
        text = f"sqrt({node[1]})"
        need = False
    else:
        raise ValueError(f"unknown node {op!r}")
    return f"({text})" if need else text


def cyclotomic_to_expr_text(value: Cyclotomic) -> str:
    """Grammar text for an exact value (sum of rational multiples of E(n)^k)."""
    from .cyclo import format_exact

    return format_exact(value)


# -- datum files -----------------------------------------------------------

@dataclass
class LabelRecord:
    index: int
    name: str
    qdim_expr: tuple | None = None
    dual: int | None = None
    weight: Fraction | None = None


@dataclass
class FixtureRecord:
    left: int
    right: int
    terms: dict[int, int]
    soft: bool = False
    citation: str = ""


@dataclass
class BranchingSection:
    parent: str
    k: int
    rows: dict[int, dict[int, int]] = field(default_factory=dict)


@dataclass
class DatumFile:
    name: str = ""
    modules: int = 0
    vacuum: int = 0
    scale_expr: tuple | None = None
    labels: list[LabelRecord] = field(default_factory=list)
    s_entries: dict[tuple[int, int], tuple | None] = field(default_factory=dict)
    fixtures: list[FixtureRecord] = field(default_factory=list)
    branchings: list[BranchingSection] = field(default_factory=list)


_SECTION_RE = re.compile(r"\[(\w+)((?:\s+\w+=(?:\"[^\"]*\"|\S+))*)\s*\]$")
_ATTR_RE = re.compile(r"(\w+)=(\"[^\"]*\"|\S+)")


def _parse_sum(text: str, line_no: int) -> dict[int, int]:
    """Parse ``k1 + 2*k3 + ...`` into an index -> multiplicity map."""
    out: dict[int, int] = {}
    for piece in text.split("+"):
        piece = piece.strip()
        if not piece:
            raise ParseError("empty summand", 0, line_no)
        if "*" in piece:
            mult_s, _, idx_s = piece.partition("*")
            mult, idx = int(mult_s), int(idx_s)
        else:
            mult, idx = 1, int(piece)
        if mult <= 0:
            raise ParseError("multiplicities must be positive", 0, line_no)
        out[idx] = out.get(idx, 0) + mult
    return out


def _format_sum(terms: dict[int, int]) -> str:
    parts = []
    for idx in sorted(terms):
        m = terms[idx]
        parts.append(str(idx) if m == 1 else f"{m}*{idx}")
    return " + ".join(parts)


def parse_file(text: str) -> DatumFile:
    """Parse datum file text; raises ParseError / DuplicateEntryError / IndexRangeError."""
    datum = DatumFile()
    section = None
    branching: BranchingSection | None = None
    seen_labels: set[int] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("["):
                m = _SECTION_RE.match(line)
                if m is None:
                    raise ParseError("malformed section header", 0, line_no)
                section = m.group(1)
                if section == "branching":
                    attrs = dict(_ATTR_RE.findall(m.group(2)))
                    if "parent" not in attrs or "k" not in attrs:
                        raise ParseError('branching sections need parent="..." and k=...', 0, line_no)
                    branching = BranchingSection(parent=attrs["parent"].strip('"'),
                                                 k=int(attrs["k"]))
                    datum.branchings.append(branching)
                elif section not in ("header", "labels", "S", "fusion"):
                    raise ParseError(f"unknown section {section!r}", 0, line_no)
                continue
            if section == "header":
                key, eq, value = line.partition("=")
                if not eq:
                    raise ParseError("header lines are key = value", 0, line_no)
                key, value = key.strip(), value.strip()
                if key == "name":
                    datum.name = value
                elif key == "modules":
                    datum.modules = int(value)
                elif key == "vacuum":
                    datum.vacuum = int(value)
                elif key == "scale":
                    datum.scale_expr = parse_expr(value)
                else:
                    raise ParseError(f"unknown header key {key!r}", 0, line_no)
            elif section == "labels":
                fields = line.split()
                if len(fields) < 2:
                    raise ParseError("label lines are: index name [attrs]", 0, line_no)
                rec = LabelRecord(index=int(fields[0]), name=fields[1])
                for attr in fields[2:]:
                    key, eq, value = attr.partition("=")
                    if not eq:
                        raise ParseError(f"malformed label attribute {attr!r}", 0, line_no)
                    if key == "qdim":
                        rec.qdim_expr = parse_expr(value)
                    elif key == "dual":
                        rec.dual = int(value)
                    elif key == "weight":
                        rec.weight = Fraction(value)
                    else:
                        raise ParseError(f"unknown label attribute {key!r}", 0, line_no)
                if rec.index in seen_labels:
                    raise DuplicateEntryError(f"line {line_no}: label {rec.index} declared twice")
                seen_labels.add(rec.index)
                datum.labels.append(rec)
            elif section == "S":
                fields = line.split(None, 2)
                if len(fields) != 3:
                    raise ParseError("S lines are: row col expr", 0, line_no)
                row, col = int(fields[0]), int(fields[1])
                key = (row, col)
                if key in datum.s_entries:
                    raise DuplicateEntryError(f"line {line_no}: S entry {key} declared twice")
                datum.s_entries[key] = None if fields[2].strip() == "?" else parse_expr(fields[2])
            elif section == "fusion":
                body, _, citation = line.partition("|")
                body = body.strip()
                soft = body.startswith("soft ")
                if soft:
                    body = body[5:].strip()
                left_s, x, rest = body.partition(" x ")
                if not x or "=" not in rest:
                    raise ParseError("fusion lines are: [soft] i x j = sum [| citation]", 0, line_no)
                right_s, _, sum_s = rest.partition("=")
                datum.fixtures.append(FixtureRecord(
                    left=int(left_s), right=int(right_s),
                    terms=_parse_sum(sum_s, line_no),
                    soft=soft, citation=citation.strip()))
            elif section == "branching":
                idx_s, eq, sum_s = line.partition("=")
                if not eq:
                    raise ParseError("branching lines are: parent_index = sum", 0, line_no)
                idx = int(idx_s)
                if idx in branching.rows:
                    raise DuplicateEntryError(f"line {line_no}: branching row {idx} declared twice")
                branching.rows[idx] = _parse_sum(sum_s, line_no)
            else:
                raise ParseError("content before any section header", 0, line_no)
        except (ParseError, DuplicateEntryError):
            raise
        except ValueError as exc:
            raise ParseError(str(exc), 0, line_no) from exc
    _check_ranges(datum)
    return datum


def _check_ranges(datum: DatumFile) -> None:
    n = datum.modules
    if n <= 0:
        return
    declared = {rec.index for rec in datum.labels}
    if datum.labels and declared != set(range(n)):
        missing = sorted(set(range(n)) - declared)
        extra = sorted(declared - set(range(n)))
        raise IndexRangeError(f"label indices do not cover 0..{n - 1}: "
                              f"missing {missing}, out of range {extra}")
    for rec in datum.labels:
        if rec.dual is not None and not 0 <= rec.dual < n:
            raise IndexRangeError(f"dual index {rec.dual} out of range for label {rec.index}")
    for (r, c) in datum.s_entries:
        if not (0 <= r < n and 0 <= c < n):
            raise IndexRangeError(f"S entry ({r}, {c}) out of range")
    for fx in datum.fixtures:
        for idx in (fx.left, fx.right, *fx.terms):
            if not 0 <= idx < n:
                raise IndexRangeError(f"fusion record index {idx} out of range")
    for br in datum.branchings:
        for parent_idx, terms in br.rows.items():
            if not 0 <= parent_idx < 2 * br.k:
                raise IndexRangeError(f"branching row {parent_idx} out of range for k={br.k}")
            for idx in terms:
                if not 0 <= idx < n:
                    raise IndexRangeError(f"branching target {idx} out of range")


def serialize(datum: DatumFile) -> str:
    """Deterministic text form; byte-stable under parse/serialize round trips."""
    lines = ["[header]", f"name = {datum.name}", f"modules = {datum.modules}",
             f"vacuum = {datum.vacuum}"]
    if datum.scale_expr is not None:
        lines.append(f"scale = {expr_to_text(datum.scale_expr)}")
    if datum.labels:
        lines.append("")
        lines.append("[labels]")
        for rec in sorted(datum.labels, key=lambda r: r.index):
            parts = [str(rec.index), rec.name]
            if rec.qdim_expr is not None:
                parts.append(f"qdim={expr_to_text(rec.qdim_expr)}")
            if rec.dual is not None:
                parts.append(f"dual={rec.dual}")
            if rec.weight is not None:
                parts.append(f"weight={rec.weight}")
            lines.append(" ".join(parts))
    if datum.s_entries:
        lines.append("")
        lines.append("[S]")
        for (r, c) in sorted(datum.s_entries):
            expr = datum.s_entries[(r, c)]
            value = "?" if expr is None else expr_to_text(expr)
            lines.append(f"{r} {c} {value}")
    for br in datum.branchings:
        lines.append("")
        lines.append(f'[branching parent="{br.parent}" k={br.k}]')
        for idx in sorted(br.rows):
            lines.append(f"{idx} = {_format_sum(br.rows[idx])}")
    if datum.fixtures:
        lines.append("")
        lines.append("[fusion]")
        for fx in datum.fixtures:
            prefix = "soft " if fx.soft else ""
            line = f"{prefix}{fx.left} x {fx.right} = {_format_sum(fx.terms)}"
            if fx.citation:
                line += f" | {fx.citation}"
            lines.append(line)
    return "\n".join(lines) + "\n"
