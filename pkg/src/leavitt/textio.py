"""The stable text surface: element grammar, JSON records, point syntax.

Element grammar (formatting emits canonical term order; parsing accepts
any order and any raw products, normalizing on the way in):

    letter  := ("y"|"x") "[" color "," index "]"
             | ("y"|"x") index              (one-color shorthand)
    unit    := "e[" i "," j "]"
    term    := [sign] [integer ["*"]] { unit | letter }*
    element := term { ("+"|"-") term }*     ("0" is the zero element)
    matrix  := "[[" element {"," element}* "]" {",[" ... "]"}* "]"

A bare integer is a valid term (the grammar's own examples need scalars
like "1"), and the "*" after a coefficient is optional on input.  Matrix
entries are scalar elements; units appear only in flat element strings.
"""

from __future__ import annotations

import json
import re

from .core import Letter, MatrixUnit, RingElement, Shape, normalize
from .dynamics import Aperiodic, Point, Rational
from .errors import ParseError, ShapeError
from .isomorphisms import Homomorphism
from .thompson import Leaf, LeafSet, TreePair

# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------


def _letter_str(t, kind, color, index):
    if t == 1:
        return f"{kind}{index}"
    return f"{kind}[{color},{index}]"


def format_element(elem: RingElement) -> str:
    """Canonical text of an element; units are omitted for 1x1 dims."""
    if not elem.terms:
        return "0"
    t = elem.shape.t
    scalar_ctx = (elem.m, elem.n) == (1, 1)
    parts = []
    for (i, j, mono), c in sorted(elem.terms.items()):
        factors = []
        if not scalar_ctx:
            factors.append(f"e[{i},{j}]")
        for color, (yw, xw) in enumerate(mono, start=1):
            for s in yw:
                factors.append(_letter_str(t, "y", color, s))
            for s in xw:
                factors.append(_letter_str(t, "x", color, s))
        mag = abs(c)
        if factors:
            body = " ".join(factors)
            if mag != 1:
                body = f"{mag}*{body}"
        else:
            body = str(mag)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


def format_matrix(elem: RingElement) -> str:
    """Canonical matrix text: rows of scalar entries."""
    entries = {}
    for (i, j, mono), c in elem.terms.items():
        entries.setdefault((i, j), {})[(1, 1, mono)] = c
    rows = []
    for i in range(1, elem.m + 1):
        cells = []
        for j in range(1, elem.n + 1):
            cell = RingElement(elem.shape, 1, 1, entries.get((i, j), {}))
            cells.append(format_element(cell))
        rows.append("[" + ",".join(cells) + "]")
    return "[" + ",".join(rows) + "]"


# ---------------------------------------------------------------------------
# Tokenizing and parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([yxe])|(\[)|(\])|(,)|(\+)|(-)|(\*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            break
        pos = mo.end()
        if mo.group(9) is not None:
            raise ParseError(f"unexpected character {mo.group(9)!r}")
        if mo.group(1) is not None:
            tokens.append(("int", int(mo.group(1))))
        elif mo.group(2) is not None:
            tokens.append(("name", mo.group(2)))
        elif mo.group(3):
            tokens.append(("[", "["))
        elif mo.group(4):
            tokens.append(("]", "]"))
        elif mo.group(5):
            tokens.append((",", ","))
        elif mo.group(6):
            tokens.append(("+", "+"))
        elif mo.group(7):
            tokens.append(("-", "-"))
        elif mo.group(8):
            tokens.append(("*", "*"))
    return tokens


class _Parser:
    def __init__(self, text, shape):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.shape = shape

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError("unexpected end of input")
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}")
        self.pos += 1
        return tok

    def done(self):
        return self.pos >= len(self.tokens)

    # factor := unit | letter
    def factor(self):
        kind, name = self.take("name")
        if name == "e":
            self.take("[")
            i = self.take("int")[1]
            self.take(",")
            j = self.take("int")[1]
            self.take("]")
            return MatrixUnit(i, j)
        nxt = self.peek()
        if nxt[0] == "int":
            if self.shape.t != 1:
                raise ParseError(
                    f"shorthand letter {name}{nxt[1]} needs t = 1; "
                    f"write {name}[color,index]")
            return Letter(name, 1, self.take("int")[1])
        if nxt[0] == "[":
            self.take("[")
            color = self.take("int")[1]
            self.take(",")
            index = self.take("int")[1]
            self.take("]")
            return Letter(name, color, index)
        raise ParseError(f"dangling letter name {name!r}")

    # term := [integer ["*"]] factor*   (sign handled by the caller)
    def term(self):
        coeff = 1
        have_body = False
        if self.peek()[0] == "int":
            coeff = self.take("int")[1]
            have_body = True
            if self.peek()[0] == "*":
                self.take("*")
        factors = []
        while self.peek()[0] == "name":
            factors.append(self.factor())
        if not factors and not have_body:
            raise ParseError("empty term")
        return coeff, factors

    def element_terms(self):
        terms = []
        sign = 1
        if self.peek()[0] == "-":
            self.take("-")
            sign = -1
        elif self.peek()[0] == "+":
            self.take("+")
        coeff, factors = self.term()
        terms.append((sign * coeff, factors))
        while self.peek()[0] in ("+", "-"):
            sign = 1 if self.take()[0] == "+" else -1
            coeff, factors = self.term()
            terms.append((sign * coeff, factors))
        return terms


def parse_element(text: str, shape: Shape, dims=None) -> RingElement:
    """Parse an element; dims default to (1,1) or, with units present,
    to the smallest dims covering all unit indices."""
    p = _Parser(text, shape)
    raw = p.element_terms()
    if not p.done():
        raise ParseError(f"trailing input near token {p.peek()[1]!r}")
    if dims is None:
        units = [f for _, factors in raw for f in factors
                 if isinstance(f, MatrixUnit)]
        if units:
            dims = (max(u.i for u in units), max(u.j for u in units))
        else:
            dims = (1, 1)
    return normalize(shape, raw, dims)


def parse_matrix(text: str, shape: Shape) -> RingElement:
    """Parse the matrix grammar: rows of scalar elements."""
    p = _Parser(text, shape)
    p.take("[")
    rows = []
    while True:
        p.take("[")
        row = [p.element_terms()]
        while p.peek()[0] == ",":
            p.take(",")
            row.append(p.element_terms())
        p.take("]")
        rows.append(row)
        if p.peek()[0] == ",":
            p.take(",")
            continue
        break
    p.take("]")
    if not p.done():
        raise ParseError(f"trailing input near token {p.peek()[1]!r}")
    n = len(rows[0])
    if any(len(row) != n for row in rows):
        raise ParseError("ragged matrix rows")
    out = {}
    for i, row in enumerate(rows, start=1):
        for j, raw in enumerate(row, start=1):
            cell = normalize(shape, raw, (1, 1))
            for (_, _, mono), c in cell.terms.items():
                out[(i, j, mono)] = c
    return RingElement(shape, len(rows), n, out)


def parse_any_element(text: str, shape: Shape, dims=None) -> RingElement:
    """Accept either the flat element grammar or the matrix grammar."""
    if text.lstrip().startswith("[["):
        return parse_matrix(text, shape)
    return parse_element(text, shape, dims)


# ---------------------------------------------------------------------------
# Tree pairs and leaf sets (JSON records)
# ---------------------------------------------------------------------------

def _leaf_obj(leaf: Leaf):
    return {"row": leaf.row, "words": [list(w) for w in leaf.words]}


def _leaf_from_obj(obj):
    try:
        return Leaf(int(obj["row"]),
                    tuple(tuple(int(d) for d in w) for w in obj["words"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad leaf record: {obj!r}") from exc


def treepair_to_json(g: TreePair) -> str:
    obj = {
        "m": g.m, "r": g.shape.r, "t": g.shape.t,
        "domain": [_leaf_obj(a) for a in g.domain],
        "range": [_leaf_obj(b) for b in g.range],
    }
    return json.dumps(obj, separators=(",", ":"))


def treepair_from_json(text: str) -> TreePair:
    try:
        obj = json.loads(text)
        shape = Shape(int(obj["r"]), int(obj["t"]))
        m = int(obj["m"])
        dom = [_leaf_from_obj(o) for o in obj["domain"]]
        ran = [_leaf_from_obj(o) for o in obj["range"]]
    except ParseError:
        raise
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad tree-pair record: {exc}") from exc
    try:
        g = TreePair(shape, m, dom, ran)
        g.validate_bases()
    except ShapeError as exc:
        raise ParseError(str(exc)) from exc
    return g


def leafset_to_json(A: LeafSet) -> str:
    obj = {
        "m": A.m, "r": A.shape.r, "t": A.shape.t,
        "leaves": [_leaf_obj(a) for a in sorted(A.leaves)],
    }
    return json.dumps(obj, separators=(",", ":"))


def leafset_from_json(text: str) -> LeafSet:
    try:
        obj = json.loads(text)
        shape = Shape(int(obj["r"]), int(obj["t"]))
        return LeafSet(shape, int(obj["m"]),
                       (_leaf_from_obj(o) for o in obj["leaves"]))
    except ParseError:
        raise
    except (json.JSONDecodeError, KeyError, TypeError, ValueError,
            ShapeError) as exc:
        raise ParseError(f"bad leaf-set record: {exc}") from exc


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------

_POINT = re.compile(r"^\s*pt\(\s*(\d+)\s*;(.*)\)\s*$", re.S)
_APER = re.compile(r"^([1-9]*)~([A-Za-z][A-Za-z0-9_]*)@(\d+)$")
_RAT = re.compile(r"^([1-9]*)\|([1-9]+)$")


def format_point(p: Point) -> str:
    coords = []
    for c in p.coords:
        pre = "".join(str(d) for d in c.pre)
        if isinstance(c, Rational):
            coords.append(f"{pre}|{''.join(str(d) for d in c.period)}")
        else:
            coords.append(f"{pre}~{c.name}@{c.offset}")
    return f"pt({p.row}; {', '.join(coords)})"


def parse_point(text: str, m: int, shape: Shape) -> Point:
    """Parse pt(row; coord, ...): rational "pre|period", aperiodic
    "[pre]~name@offset"; digits are single characters, so r <= 9."""
    if shape.r > 9:
        raise ParseError("point syntax carries single digits; needs r <= 9")
    mo = _POINT.match(text)
    if mo is None:
        raise ParseError(f"bad point syntax: {text!r}")
    row = int(mo.group(1))
    fields = [f.strip() for f in mo.group(2).split(",")]
    if fields == [""]:
        fields = []
    coords = []
    for f in fields:
        am = _APER.match(f)
        rm = _RAT.match(f)
        if am:
            coords.append(Aperiodic(am.group(2), int(am.group(3)),
                                    tuple(int(d) for d in am.group(1))))
        elif rm:
            coords.append(Rational(tuple(int(d) for d in rm.group(1)),
                                   tuple(int(d) for d in rm.group(2))))
        else:
            raise ParseError(f"bad coordinate {f!r}")
    try:
        return Point(shape, m, row, coords)
    except ShapeError as exc:
        raise ParseError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Homomorphisms (target-keyed image tables)
# ---------------------------------------------------------------------------

def _hom_obj(h: Homomorphism, with_inverse=True):
    obj = {
        "r": h.shape.r, "t": h.shape.t,
        "source_m": h.source_m, "target_m": h.target_m,
        "row_images": {f"e[{i},1]": format_element(img)
                       for i, img in enumerate(h.row_images, start=1)},
        "corner_images": {
            f"y[{l},{s}]e[1,1]": format_element(img)
            for (l, s), img in sorted(h.corner_images.items())},
    }
    if with_inverse:
        obj["inverse"] = (None if h.inverse is None
                          else _hom_obj(h.inverse, with_inverse=False))
    return obj


def hom_to_json(h: Homomorphism) -> str:
    return json.dumps(_hom_obj(h), separators=(",", ":"), sort_keys=True)


def _hom_from_obj(obj) -> Homomorphism:
    shape = Shape(int(obj["r"]), int(obj["t"]))
    source_m = int(obj["source_m"])
    target_m = int(obj["target_m"])
    dims = (target_m, target_m)
    rows = []
    for i in range(1, source_m + 1):
        text = obj["row_images"][f"e[{i},1]"]
        rows.append(parse_element(text, shape, dims))
    corners = {}
    for l in range(1, shape.t + 1):
        for s in range(1, shape.r + 1):
            text = obj["corner_images"][f"y[{l},{s}]e[1,1]"]
            corners[(l, s)] = parse_element(text, shape, dims)
    return Homomorphism(shape, source_m, target_m, rows, corners)


def hom_from_json(text: str) -> Homomorphism:
    try:
        obj = json.loads(text)
        h = _hom_from_obj(obj)
        if obj.get("inverse"):
            hi = _hom_from_obj(obj["inverse"])
            h.inverse = hi
            hi.inverse = h
    except ParseError:
        raise
    except (json.JSONDecodeError, KeyError, TypeError, ValueError,
            ShapeError) as exc:
        raise ParseError(f"bad homomorphism record: {exc}") from exc
    return h


GRAMMAR = __doc__ + """
Point syntax:      pt(row; coord, ...) with coord "pre|period" (rational)
                   or "[pre]~name@offset" (named aperiodic stream).
Tree-pair record:  {"m":..,"r":..,"t":..,"domain":[{"row":i,"words":[[..],..]},..],
                    "range":[..]} with the bijection positional and the
                    domain sorted lexicographically.
Leaf-set record:   {"m":..,"r":..,"t":..,"leaves":[..]}.
Homomorphism:      target-keyed image table with entries in the element
                    grammar; see the CLI's aap-iso/gcd-iso output.
"""
