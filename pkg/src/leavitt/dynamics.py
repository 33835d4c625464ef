"""Cantor-space action, germ groups, and the conjugacy-class count.

A point of the Cantor set is a row in [1..m] together with one
right-infinite digit word per color.  Eventually periodic words are held
as (pre-period, primitive period); all other representable words come
from named deterministic aperiodic streams with a finite prefix.  The
group acts by prefix replacement: the unique range leaf that prefixes the
point is stripped and the partner leaf prepended.

At a fixed point the germ of an element is read off as the per-color
difference (domain leaf length - range leaf length) divided by the
period length, one entry per rational coordinate; the germ group at a
point with n rational coordinates is Z^n.
"""

from __future__ import annotations

import itertools
import math

from .core import Shape, check_shape
from .errors import LeavittError, NotFixedError, ShapeError
from .thompson import Leaf, TreePair, expand, root_basis


def _thue_morse(i: int) -> int:
    return 1 + (i.bit_count() & 1)


#: Named aperiodic digit streams; each is a pure function of the position,
#: so concurrent prefix queries agree.  Streams must emit digits that stay
#: within [1..r] for every rank in use ("tm" emits only 1 and 2).
STREAMS = {"tm": _thue_morse}


def _is_primitive(word) -> bool:
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word == word[:d] * (n // d):
            return False
    return True


class Rational:
    """An eventually periodic coordinate pre . period^infinity.

    The period must be primitive (not a proper power); a non-primitive
    period is an error, never silently repaired.  The stored form is
    canonical: the pre-period is as short as possible, rotating the
    period as needed, so structural equality is equality of words.
    """

    __slots__ = ("pre", "period")

    def __init__(self, pre, period):
        pre = tuple(pre)
        period = tuple(period)
        if not period:
            raise ShapeError("a rational coordinate needs a nonempty period")
        if not _is_primitive(period):
            raise ShapeError(f"period {period} is a proper power")
        while pre and pre[-1] == period[-1]:
            period = (period[-1],) + period[:-1]
            pre = pre[:-1]
        self.pre = pre
        self.period = period

    def digit(self, k: int) -> int:
        if k < len(self.pre):
            return self.pre[k]
        return self.period[(k - len(self.pre)) % len(self.period)]

    def strip(self, k: int) -> "Rational":
        if k <= len(self.pre):
            return Rational(self.pre[k:], self.period)
        j = (k - len(self.pre)) % len(self.period)
        return Rational((), self.period[j:] + self.period[:j])

    def prepend(self, word) -> "Rational":
        return Rational(tuple(word) + self.pre, self.period)

    def max_digit(self) -> int:
        return max(self.pre + self.period)

    def __eq__(self, other):
        if not isinstance(other, Rational):
            return NotImplemented
        return self.pre == other.pre and self.period == other.period

    def __hash__(self):
        return hash((self.pre, self.period))

    def __repr__(self):
        return f"Rational({self.pre}, {self.period})"


class Aperiodic:
    """A named aperiodic stream at an offset, with a finite prefix word.

    The prefix makes prefix replacement representable.  It is kept
    canonical by absorbing prefix digits that agree with the stream just
    before the offset, so structural equality decides pointwise equality
    for coordinates drawn from the same stream.
    """

    __slots__ = ("name", "offset", "pre")

    def __init__(self, name, offset=0, pre=()):
        if name not in STREAMS:
            raise ShapeError(f"unknown stream {name!r}")
        if offset < 0:
            raise ShapeError("stream offset must be nonnegative")
        pre = tuple(pre)
        f = STREAMS[name]
        while pre and offset > 0 and pre[-1] == f(offset - 1):
            pre = pre[:-1]
            offset -= 1
        self.name = name
        self.offset = offset
        self.pre = pre

    def digit(self, k: int) -> int:
        if k < len(self.pre):
            return self.pre[k]
        return STREAMS[self.name](self.offset + k - len(self.pre))

    def strip(self, k: int) -> "Aperiodic":
        consumed = min(k, len(self.pre))
        return Aperiodic(self.name, self.offset + k - consumed,
                         self.pre[consumed:])

    def prepend(self, word) -> "Aperiodic":
        return Aperiodic(self.name, self.offset, tuple(word) + self.pre)

    def max_digit(self) -> int:
        return max(self.pre, default=1) if self.pre else 1

    def __eq__(self, other):
        if not isinstance(other, Aperiodic):
            return NotImplemented
        return (self.name == other.name and self.offset == other.offset
                and self.pre == other.pre)

    def __hash__(self):
        return hash((self.name, self.offset, self.pre))

    def __repr__(self):
        return f"Aperiodic({self.name!r}, {self.offset}, {self.pre})"


class Point:
    """A Cantor point: a row in [1..m] and one coordinate per color."""

    __slots__ = ("shape", "m", "row", "coords")

    def __init__(self, shape, m, row, coords):
        check_shape(shape)
        if not 1 <= row <= m:
            raise ShapeError(f"row {row} out of range [1..{m}]")
        coords = tuple(coords)
        if len(coords) != shape.t:
            raise ShapeError(f"need {shape.t} coordinates, got {len(coords)}")
        for c in coords:
            if not isinstance(c, (Rational, Aperiodic)):
                raise ShapeError(f"bad coordinate {c!r}")
            if isinstance(c, Rational) and c.max_digit() > shape.r:
                raise ShapeError(f"coordinate digit exceeds r = {shape.r}")
        self.shape = shape
        self.m = m
        self.row = row
        self.coords = coords

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return (self.shape == other.shape and self.m == other.m
                and self.row == other.row and self.coords == other.coords)

    __hash__ = None

    def __repr__(self):
        return f"Point(row={self.row}, {self.coords})"

    def __str__(self):
        from . import textio
        return textio.format_point(self)


# ---------------------------------------------------------------------------
# Action and germs
# ---------------------------------------------------------------------------

def _leaf_prefixes(leaf: Leaf, p: Point) -> bool:
    if leaf.row != p.row:
        return False
    for w, coord in zip(leaf.words, p.coords):
        for k, d in enumerate(w):
            if coord.digit(k) != d:
                return False
    return True


def _locate(g: TreePair, p: Point) -> int:
    """Index of the unique range leaf that prefixes the point."""
    if g.shape != p.shape or g.m != p.m:
        raise ShapeError("tree pair and point live over different parameters")
    found = [k for k, b in enumerate(g.range) if _leaf_prefixes(b, p)]
    if len(found) != 1:
        raise LeavittError(
            f"malformed action: {len(found)} range leaves prefix the point")
    return found[0]


def act(g: TreePair, p: Point) -> Point:
    """Apply the element: strip the matching range leaf, prepend its partner."""
    k = _locate(g, p)
    a, b = g.domain[k], g.range[k]
    coords = tuple(
        coord.strip(len(bw)).prepend(aw)
        for coord, aw, bw in zip(p.coords, a.words, b.words))
    return Point(p.shape, p.m, a.row, coords)


def germ_rank(p: Point) -> int:
    """Number of rational coordinates; the germ group at p is Z^rank."""
    return sum(1 for c in p.coords if isinstance(c, Rational))


def germ(g: TreePair, p: Point):
    """The germ of g at a fixed point, one integer per rational coordinate.

    Entry convention: (domain-leaf length - range-leaf length) divided by
    the period length, per rational color.
    """
    if act(g, p) != p:
        raise NotFixedError("the element does not fix the point")
    k = _locate(g, p)
    a, b = g.domain[k], g.range[k]
    entries = []
    for coord, aw, bw in zip(p.coords, a.words, b.words):
        if isinstance(coord, Rational):
            q, rem = divmod(len(aw) - len(bw), len(coord.period))
            if rem:
                raise LeavittError("internal defect: misaligned periodic tails")
            entries.append(q)
    return tuple(entries)


def _expand_along(shape, basis, start: Leaf, color: int, word):
    """Expand a basis along a digit path, returning (basis, final leaf)."""
    cur = start
    for d in word:
        basis = expand(basis, cur, color)
        cur = cur.child(color, d)
    return basis, cur


def germ_shift(p: Point, color: int) -> TreePair:
    """An element fixing p with germ +1 at ``color`` and 0 elsewhere.

    Built from prefix-replacement pairs along the one rational coordinate:
    the range is expanded along pre + period, the domain along
    pre + period + period, and the sizes are balanced by expanding an
    off-path range leaf.
    """
    coord = p.coords[color - 1]
    if not isinstance(coord, Rational):
        raise ShapeError("germ_shift needs a rational coordinate")
    shape, m = p.shape, p.m
    start = Leaf(p.row, ((),) * shape.t)
    path = coord.pre + coord.period

    ran, b = _expand_along(shape, root_basis(shape, m), start, color, path)
    dom, a = _expand_along(shape, root_basis(shape, m), start, color,
                           path + coord.period)
    for _ in range(len(coord.period)):
        off = min(leaf for leaf in ran if leaf != b)
        ran = expand(ran, off, color)
    dom_rest = sorted(leaf for leaf in dom if leaf != a)
    ran_rest = sorted(leaf for leaf in ran if leaf != b)
    return TreePair(shape, m, [a] + dom_rest, [b] + ran_rest)


# ---------------------------------------------------------------------------
# Higman's counting invariant
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _check_cc_args(p, a, r, m):
    if not _is_prime(p):
        raise ShapeError(f"p = {p} is not prime")
    if a < 1 or r < 2 or m < 1:
        raise ShapeError("need a >= 1, r >= 2, m >= 1")


def cc_count(p: int, a: int, r: int, m: int) -> int:
    """Number of conjugacy classes of cyclic subgroups of order dividing p^a.

    Counts the digit sequences n in [0..r-1]^(a+1), not all zero, with
    sum n_j p^j = m (mod r-1); for r = 2 the congruence is vacuous.  The
    count does not involve t.
    """
    _check_cc_args(p, a, r, m)
    mod = r - 1
    weights = [pow(p, j) for j in range(a + 1)]
    count = 0
    for seq in itertools.product(range(r), repeat=a + 1):
        if not any(seq):
            continue
        if mod == 1 or sum(w * n for w, n in zip(weights, seq)) % mod == m % mod:
            count += 1
    return count


def cc_closed_form(p: int, a: int, r: int, m: int) -> int:
    """Closed form for cc_count where one applies.

    If p does not divide r-1: sum_{i=0}^{a} r^(a-i).  If p divides r-1,
    the form requires a to be exactly the p-adic valuation of r-1 and
    gives sum_{i=0}^{b} p^i r^(a-i) with b the valuation of gcd(m, r-1).
    """
    _check_cc_args(p, a, r, m)
    mod = r - 1

    def vp(n):
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v

    if mod % p != 0:
        return sum(r ** (a - i) for i in range(a + 1))
    if a != vp(mod):
        raise LeavittError(
            f"closed form needs a = v_p(r-1) = {vp(mod)} when p divides r-1; "
            f"got a = {a}; use cc_count")
    b = vp(math.gcd(m, mod))
    return sum(p ** i * r ** (a - i) for i in range(b + 1))
