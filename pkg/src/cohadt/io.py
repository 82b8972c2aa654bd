"""Text formats: quiver files, polynomial expressions, DT tables."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import __version__
from .coha import CohaElement
from .errors import AsymmetricMatrix, NegativeEntry, NotSymmetric, ParseError, UnknownVariable
from .poly import MultiPoly, slot_offsets
from .dtseries import DTTable
from .quiver import Quiver


def _line_col(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _matrix_offsets(text: str) -> Dict[Tuple[int, int], int]:
    """Character offsets of the entries of the top-level ``"arrows"`` matrix."""
    out: Dict[Tuple[int, int], int] = {}
    i, n = 0, len(text)
    depth = 0
    key = None
    while i < n:
        ch = text[i]
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                j += 2 if text[j] == "\\" else 1
            if depth == 1:
                key = text[i + 1:j]
            i = j + 1
            continue
        if ch in "{[":
            depth += 1
            if depth == 2 and key == "arrows" and ch == "[":
                break
        elif ch in "}]":
            depth -= 1
        i += 1
    else:
        return out
    # i sits on the outer '[' of the arrows value
    depth, row, col = 0, -1, 0
    while i < n:
        ch = text[i]
        if ch == "[":
            depth += 1
            if depth == 2:
                row += 1
                col = 0
        elif ch == "]":
            depth -= 1
            if depth == 0:
                break
        elif ch == "," and depth == 2:
            col += 1
        elif depth == 2 and not ch.isspace():
            out.setdefault((row, col), i)
        i += 1
    return out


@dataclass(frozen=True)
class QuiverDocument:
    vertices: Tuple[str, ...]
    arrows: Tuple[Tuple[int, ...], ...]

    def to_quiver(self) -> Quiver:
        return Quiver(self.arrows, self.vertices)


def parse_quiver(text: str) -> Quiver:
    """Parse ``{"vertices": [...], "arrows": [[...], ...]}`` into a symmetric quiver."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("quiver file must be a JSON object")
    for key in ("vertices", "arrows"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    names, rows = doc["vertices"], doc["arrows"]
    if not isinstance(names, list) or not names or not all(isinstance(v, str) for v in names):
        raise ParseError("'vertices' must be a nonempty array of strings")
    if len(set(names)) != len(names):
        raise ParseError("vertex names must be unique")
    n = len(names)
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"'arrows' must have {n} rows, one per vertex")
    where = _matrix_offsets(text)

    def loc(i, j):
        off = where.get((i, j))
        return _line_col(text, off) if off is not None else (None, None)

    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"'arrows' row {i} must have {n} entries")
        for j, a in enumerate(row):
            if isinstance(a, bool) or not isinstance(a, int):
                raise ParseError(f"arrows[{i}][{j}] is not an integer", *loc(i, j))
            if a < 0:
                raise NegativeEntry(f"arrows[{i}][{j}] = {a} is negative", *loc(i, j))
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise AsymmetricMatrix(
                    f"arrows[{j}][{i}] = {rows[j][i]} but arrows[{i}][{j}] = {rows[i][j]}; "
                    "the quiver must be symmetric",
                    *loc(j, i),
                )
    return QuiverDocument(tuple(names), tuple(tuple(r) for r in rows)).to_quiver()


def serialize_quiver(Q: Quiver) -> str:
    """Canonical one-line JSON; stable input for digests."""
    names = list(Q.names) if Q.names else [f"v{i}" for i in range(Q.vertex_count)]
    return json.dumps({"arrows": [list(r) for r in Q.arrows], "vertices": names}, separators=(",", ":"), sort_keys=True)


def quiver_digest(Q: Quiver) -> str:
    return hashlib.sha256(serialize_quiver(Q).encode()).hexdigest()


# polynomial expressions

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)|(\[)|(\])|(,)|(\*)|(\^)|(/)|(\+)|(-))")
_KINDS = ("int", "x", "[", "]", ",", "*", "^", "/", "+", "-")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
        for kind, val in zip(_KINDS, m.groups()):
            if val is not None:
                out.append((kind, val, m.start(m.lastindex) + 1))
                break
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _PolyParser:
    def __init__(self, text: str, gamma: Tuple[int, ...]):
        self.toks = _tokenize(text)
        self.i = 0
        self.gamma = gamma
        self.offs = slot_offsets(gamma)
        self.n = sum(gamma)

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}", 1, tok[2])
        self.i += 1
        return tok

    def expr(self) -> Dict[tuple, Fraction]:
        terms: Dict[tuple, Fraction] = {}
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take(self.peek()[0])[0] == "-" else 1
        while True:
            e, c = self.term()
            terms[e] = terms.get(e, 0) + sign * c
            kind = self.peek()[0]
            if kind in ("+", "-"):
                self.take(kind)
                sign = -1 if kind == "-" else 1
            elif kind == "end":
                return terms
            else:
                raise ParseError(f"unexpected {self.peek()[1]!r}", 1, self.peek()[2])

    def term(self):
        exp = [0] * self.n
        coeff = Fraction(1)
        if self.peek()[0] == "int":
            coeff = self.rational()
        else:
            self.factor(exp)
        while self.peek()[0] == "*":
            self.take("*")
            self.factor(exp)
        return tuple(exp), coeff

    def rational(self) -> Fraction:
        num = int(self.take("int")[1])
        if self.peek()[0] == "/":
            self.take("/")
            tok = self.take("int")
            if int(tok[1]) == 0:
                raise ParseError("zero denominator", 1, tok[2])
            return Fraction(num, int(tok[1]))
        return Fraction(num)

    def factor(self, exp):
        start = self.take("x")[2]
        self.take("[")
        i = int(self.take("int")[1])
        self.take(",")
        a = int(self.take("int")[1])
        self.take("]")
        power = 1
        if self.peek()[0] == "^":
            self.take("^")
            power = int(self.take("int")[1])
        if not (0 <= i < len(self.gamma)) or not (1 <= a <= self.gamma[i]):
            raise UnknownVariable(f"x[{i},{a}] is not a variable for gamma {self.gamma}", 1, start)
        exp[self.offs[i] + a - 1] += power


@dataclass(frozen=True)
class PolyExpression:
    source: str
    gamma: Tuple[int, ...]
    poly: MultiPoly


def parse_poly(text: str, Q: Quiver, gamma: Sequence[int]) -> CohaElement:
    """Parse a polynomial in ``x[i,a]`` and check it is slot-symmetric for ``gamma``."""
    gamma = Q.check_dim(gamma)
    terms = _PolyParser(text, gamma).expr()
    expr = PolyExpression(text, gamma, MultiPoly(gamma, terms))
    try:
        return CohaElement(gamma, expr.poly)
    except NotSymmetric as exc:
        raise NotSymmetric(f"{text!r}: {exc}") from None


def format_poly(f: MultiPoly) -> str:
    """Canonical text, readable back by :func:`parse_poly`."""
    if not f.terms:
        return "0"
    offs = slot_offsets(f.gamma)
    owner = []
    for i, g in enumerate(f.gamma):
        owner.extend((i, a + 1) for a in range(g))
    pieces = []
    for e, c in f.sorted_terms():
        factors = []
        for s, x in enumerate(e):
            if x:
                i, a = owner[s]
                factors.append(f"x[{i},{a}]" + (f"^{x}" if x > 1 else ""))
        mag = abs(c)
        if factors:
            body = "*".join(([str(mag)] if mag != 1 else []) + factors)
        else:
            body = str(mag)
        pieces.append(("-" if c < 0 else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def parse_gamma(text: str) -> Tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.replace("(", "").replace(")", "").split(",") if v.strip())
    except ValueError:
        raise ParseError(f"dimension vector {text!r} must be comma-separated integers") from None
    if not vals:
        raise ParseError(f"dimension vector {text!r} is empty")
    return vals


# DT tables


def _gamma_str(g) -> str:
    return ",".join(map(str, g))


def table_to_tsv(table: DTTable) -> str:
    lines = ["gamma\tk\tc"]
    lines += [f"{_gamma_str(g)}\t{k}\t{c}" for g, k, c in table.rows()]
    return "\n".join(lines) + "\n"


def table_to_json(table: DTTable) -> str:
    doc = {
        "metadata": {
            "quiver_digest": table.quiver_digest,
            "max_dim": table.D,
            "q_ceiling": table.q_ceiling,
            "ceilings": {_gamma_str(g): c for g, c in sorted(table.ceilings.items())},
            "tool_version": __version__,
        },
        "entries": [{"gamma": list(g), "k": k, "c": c} for g, k, c in table.rows()],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def table_from_json(text: str) -> DTTable:
    try:
        doc = json.loads(text)
        meta = doc["metadata"]
        entries = {(tuple(e["gamma"]), int(e["k"])): int(e["c"]) for e in doc["entries"]}
        ceilings = {tuple(int(v) for v in g.split(",")): int(c) for g, c in meta["ceilings"].items()}
        return DTTable(entries, int(meta["max_dim"]), meta["q_ceiling"], ceilings, meta["quiver_digest"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"malformed DT table: {exc}") from None
