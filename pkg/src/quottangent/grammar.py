"""Reading and writing polynomials and module vectors.

Grammar (whitespace insignificant)::

    vector  := '[' expr (',' expr)* ']' | expr
    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := ('+'|'-') factor | atom ['^' INT]
    atom    := INT ['/' INT] | IDENT | '(' expr ')'

Identifiers are ring variables, the deformation parameter, or basis tags
``e1 .. er``.  A bracket list of ``r`` untagged entries is a vector; a
tagged expression (inside one pair of brackets or bare) is also accepted.

A ring header declares the context::

    ring x,y,z; rank 2; field QQ; param t;
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .poly import DEFAULT_ORDER, ModuleVector, Ring, TermOrder, one
from .scalars import QQ, FpElement, parse_field


class ParseError(ValueError):
    """Raised on malformed input; ``offset`` is a byte offset into the text."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.offset = len(text[:pos].encode("utf-8"))
        self.message = message
        super().__init__(f"{message} (at byte {self.offset})")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9']*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("id", m.group(2), start))
        elif m.group(3) is not None:
            if m.group(3) not in "+-*^()/[],":
                raise ParseError(f"unexpected character {m.group(3)!r}", text, start)
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


_TAG = re.compile(r"e(\d+)$")


class _Parser:
    # Tagged polynomials: dict (tag or None, monomial) -> Fraction.

    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.names = {v: i for i, v in enumerate(ring.all_variables)}
        self.n = ring.nvars
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value or tok[0] == "int":
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}",
                             self.text, tok[2])
        return tok

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.text, tok[2])

    # arithmetic on tagged polynomials
    @staticmethod
    def _add(a: dict, b: dict, sign: int = 1) -> dict:
        out = dict(a)
        for k, c in b.items():
            s = out.get(k, 0) + sign * c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def _mul(self, a: dict, b: dict, tok) -> dict:
        out: dict = {}
        for (ta, ma), ca in a.items():
            for (tb, mb), cb in b.items():
                if ta is not None and tb is not None:
                    raise self.error("product of two basis vectors", tok)
                t = ta if ta is not None else tb
                k = (t, tuple(x + y for x, y in zip(ma, mb)))
                s = out.get(k, 0) + ca * cb
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def expr(self) -> dict:
        tok = self.peek()
        sign = 1
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self._add({}, self.term(), sign)
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                acc = self._add(acc, self.term(), -1 if tok[1] == "-" else 1)
            else:
                return acc

    def term(self) -> dict:
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                acc = self._mul(acc, self.factor(), tok)
            else:
                return acc

    def factor(self) -> dict:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            f = self.factor()
            return {k: -c for k, c in f.items()} if tok[1] == "-" else f
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            etok = self.take()
            if etok[0] != "int":
                raise self.error("exponent must be a non-negative integer", etok)
            k = int(etok[1])
            result = {(None, one(self.n)): Fraction(1)}
            for _ in range(k):
                result = self._mul(result, base, etok)
            return result
        return base

    def atom(self) -> dict:
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            c = Fraction(int(val))
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.take()
                dtok = self.take()
                if dtok[0] != "int" or int(dtok[1]) == 0:
                    raise self.error("expected a nonzero integer denominator", dtok)
                c = c / int(dtok[1])
            return {(None, one(self.n)): c} if c else {}
        if kind == "id":
            if val in self.names:
                e = [0] * self.n
                e[self.names[val]] = 1
                return {(None, tuple(e)): Fraction(1)}
            m = _TAG.match(val)
            if m:
                k = int(m.group(1))
                if not 1 <= k <= self.ring.rank:
                    raise self.error(f"component index {val} out of range for rank {self.ring.rank}", tok)
                return {(k - 1, one(self.n)): Fraction(1)}
            raise self.error(f"unknown variable {val!r}", tok)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.error(f"unexpected {val or 'end of input'!r}", tok)

    def vector(self) -> ModuleVector:
        r = self.ring.rank
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "[":
            self.take()
            entries = [(self.peek(), self.expr())]
            while self.peek()[1] == ",":
                self.take()
                entries.append((self.peek(), self.expr()))
            self.expect("]")
            if len(entries) == 1 and any(t is not None for t, _ in entries[0][1]):
                out = self._tagged(entries[0][1], entries[0][0])
            else:
                if len(entries) != r:
                    raise self.error(f"expected {r} entries, found {len(entries)}", tok)
                out = {}
                for i, (etok, e) in enumerate(entries):
                    for (t, m), c in e.items():
                        if t is not None:
                            raise self.error("basis tag inside a coordinate list", etok)
                        out[(i, m)] = c
        else:
            start = tok
            e = self.expr()
            if r != 1 and not any(t is not None for t, _ in e):
                if e:
                    raise self.error(f"untagged polynomial given for rank {r}", start)
            out = self._tagged(e, start)
        end = self.peek()
        if end[0] != "end":
            raise self.error(f"unexpected {end[1]!r}", end)
        return ModuleVector({k: self.ring.field(c) for k, c in out.items()},
                            r, self.n, self.ring.field)

    def _tagged(self, e: dict, tok) -> dict:
        if self.ring.rank == 1 and all(t is None for t, _ in e):
            return {(0, m): c for (_, m), c in e.items()}
        out = {}
        for (t, m), c in e.items():
            if t is None:
                raise self.error("term without a basis tag in a tagged vector", tok)
            out[(t, m)] = c
        return out


def parse_vector(text: str, ring: Ring) -> ModuleVector:
    """Parse one vector (or polynomial when ``ring.rank == 1``)."""
    return _Parser(text, ring).vector()


def parse_polynomial(text: str, ring: Ring) -> ModuleVector:
    return _Parser(text, ring.with_rank(1)).vector()


def default_names(n: int) -> tuple[str, ...]:
    if n <= 4:
        return ("x", "y", "z", "w")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


def _format_coef(c) -> str:
    if isinstance(c, FpElement):
        return str(c.v)
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(mono, names) -> str:
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_terms(items, names) -> str:
    if not items:
        return "0"
    out = []
    for k, (mono, c) in enumerate(items):
        s = _format_coef(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        ms = format_monomial(mono, names)
        if ms:
            body = ms if s == "1" else f"{s}*{ms}"
        else:
            body = s
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def format_vector(v: ModuleVector, ring: Ring | None = None,
                  order: TermOrder = DEFAULT_ORDER) -> str:
    names = ring.all_variables if ring is not None else default_names(v.nvars)
    if len(names) != v.nvars:
        names = default_names(v.nvars)
    items = v.sorted_terms(order)
    if v.rank == 1:
        return _format_terms([(m, c) for (_, m), c in items], names)
    cols = []
    for i in range(v.rank):
        cols.append(_format_terms([(m, c) for (j, m), c in items if j == i], names))
    return "[" + ", ".join(cols) + "]"


def format_term(term, names, rank: int) -> str:
    comp, mono = term
    ms = format_monomial(mono, names) or "1"
    return ms if rank == 1 else f"{ms}*e{comp + 1}"


def format_header(ring: Ring) -> str:
    s = f"ring {','.join(ring.variables)}; rank {ring.rank}; field {ring.field.name};"
    if ring.param:
        s += f" param {ring.param};"
    return s


def parse_header(text: str) -> Ring:
    """Parse ``ring x,y,z; rank 2; field QQ; param t;``."""
    variables = None
    rank, field, param = 1, QQ, None
    for stmt in text.split(";"):
        stmt = stmt.strip()
        if not stmt:
            continue
        key, _, rest = stmt.partition(" ")
        rest = rest.strip()
        if key == "ring":
            variables = tuple(v.strip() for v in rest.split(",") if v.strip())
            for v in variables:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9']*", v) or _TAG.match(v):
                    raise ParseError(f"bad variable name {v!r}", text, text.find(v))
            if len(set(variables)) != len(variables):
                raise ParseError("repeated variable name", text, text.find(rest))
        elif key == "rank":
            if not rest.isdigit() or int(rest) < 1:
                raise ParseError(f"bad rank {rest!r}", text, text.find(stmt))
            rank = int(rest)
        elif key == "field":
            try:
                field = parse_field(rest)
            except ValueError as exc:
                raise ParseError(str(exc), text, text.find(stmt)) from None
        elif key == "param":
            param = rest
        else:
            raise ParseError(f"unknown header statement {key!r}", text, text.find(stmt))
    if variables is None:
        raise ParseError("header lacks a 'ring' statement", text, 0)
    if param is not None and param in variables:
        raise ParseError("parameter clashes with a variable", text, text.find(param))
    return Ring(variables, rank, field, param)


@dataclass
class Document:
    """A parsed input file: a ring header and named blocks of generators."""

    ring: Ring
    blocks: dict[str, list[ModuleVector]] = dc_field(default_factory=dict)
    ranks: dict[str, int] = dc_field(default_factory=dict)
    comments: list[str] = dc_field(default_factory=list)

    def block(self, name: str = "gens") -> list[ModuleVector]:
        try:
            return self.blocks[name]
        except KeyError:
            raise KeyError(f"document has no block {name!r}; blocks: {sorted(self.blocks)}") from None

    def ring_for(self, name: str) -> Ring:
        return self.ring.with_rank(self.ranks.get(name, self.ring.rank))


def parse_document(text: str) -> Document:
    """Parse a file: ``#`` comments, one header line, ``@name [rank k]`` block
    markers, and one generator per line (brackets may span lines)."""
    ring = None
    blocks: dict[str, list[ModuleVector]] = {}
    ranks: dict[str, int] = {}
    comments: list[str] = []
    current = "gens"
    pending = ""
    segments: list[tuple[int, int]] = []  # (index in pending, index in text)
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        stripped = body.strip()
        if "#" in line and not stripped:
            comments.append(line.split("#", 1)[1].strip())
        if stripped:
            col = offset + body.find(stripped)
            if ring is None:
                if not stripped.startswith("ring"):
                    raise ParseError("expected a ring header", text, col)
                try:
                    ring = parse_header(stripped)
                except ParseError as exc:
                    raise ParseError(exc.message, text, col) from None
            elif stripped.startswith("@") and not pending:
                name, _, rest = stripped[1:].partition(" ")
                if not name:
                    raise ParseError("empty block name", text, col)
                current = name
                blocks.setdefault(name, [])
                parts = rest.split()
                if parts:
                    if len(parts) != 2 or parts[0] != "rank" or not parts[1].isdigit():
                        raise ParseError(f"bad block option {rest.strip()!r}", text, col)
                    ranks[name] = int(parts[1])
            else:
                if pending:
                    pending += " "
                segments.append((len(pending), col))
                pending += stripped
                depth = (pending.count("[") - pending.count("]")
                         + pending.count("(") - pending.count(")"))
                if depth <= 0:
                    try:
                        v = parse_vector(pending, ring.with_rank(ranks.get(current, ring.rank)))
                    except ParseError as exc:
                        pos = len(pending.encode("utf-8")[:exc.offset].decode("utf-8", "ignore"))
                        base, where = max((sg for sg in segments if sg[0] <= pos),
                                          default=segments[0])
                        raise ParseError(exc.message, text, where + pos - base) from None
                    blocks.setdefault(current, []).append(v)
                    pending = ""
                    segments = []
        offset += len(line)
    if ring is None:
        raise ParseError("empty document", text, 0)
    if pending:
        raise ParseError("unbalanced brackets at end of input", text, len(text))
    return Document(ring, blocks, ranks, comments)


def format_document(ring: Ring, blocks: dict[str, list[ModuleVector]],
                    comments: list[str] = (), ranks: dict[str, int] | None = None) -> str:
    lines = [f"# {c}" if c else "#" for c in comments]
    lines.append(format_header(ring))
    ranks = ranks or {}
    for name, vecs in blocks.items():
        lines.append(f"@{name}" + (f" rank {ranks[name]}" if name in ranks else ""))
        r = ring.with_rank(ranks.get(name, ring.rank))
        lines.extend(format_vector(v, r) for v in vecs)
    return "\n".join(lines) + "\n"
