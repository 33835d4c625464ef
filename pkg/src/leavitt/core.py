"""Exact arithmetic in matrix rings over tensor powers of a Leavitt ring.

For a rank r >= 2 the scalar ring is generated, per tensor factor
("color") l in 1..t, by y_{l,1}..y_{l,r} and x_{l,1}..x_{l,r} subject to

    x_{l,s} y_{l,s'} = delta_{s,s'}      sum_s y_{l,s} x_{l,s} = 1

with letters of distinct colors commuting.  Every scalar is a unique
Z-linear combination of monomials that, per color, consist of a y-word
followed by an x-word and avoid the junction y_r x_r; rewriting any raw
word to that shape terminates and is confluent.  ``RingElement`` holds
m-by-n matrices over this ring with every value kept in normal form, so
structural equality is ring equality.

All values are immutable by convention: no operation mutates its
arguments, and results never share mutable state with inputs, so any
operation may run concurrently on shared values.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .errors import LeavittError, ShapeError

# A word is a tuple of indices in [1..r]; a per-color pair is
# (y-word, x-word); a monomial is one pair per color.
Word = "tuple[int, ...]"
Pair = "tuple[Word, Word]"
Mono = "tuple[Pair, ...]"


class Shape(NamedTuple):
    """Scalar-ring parameters: rank r >= 2, tensor length t >= 1."""

    r: int
    t: int


class Letter(NamedTuple):
    """A single generator: kind 'y' or 'x', color in [1..t], index in [1..r]."""

    kind: str
    color: int
    index: int


class MatrixUnit(NamedTuple):
    """The matrix unit e[i,j] used as a factor in raw products."""

    i: int
    j: int


def check_shape(shape: Shape) -> None:
    if shape.r < 2 or shape.t < 1:
        raise ShapeError(f"invalid shape {shape}: need r >= 2 and t >= 1")


def mono_one(t: int):
    """The empty monomial (the scalar 1)."""
    return (((), ()),) * t


# ---------------------------------------------------------------------------
# Per-color rewriting
# ---------------------------------------------------------------------------

def _accumulate_normal(r, yw, xw, coeff, out):
    """Add coeff * (yw, xw) to ``out`` after clearing y_r x_r junctions.

    Each rewrite y_r x_r -> 1 - sum_{s<r} y_s x_s leaves the emitted side
    terms normal (their junction letter is s < r), so only the shrinking
    head pair needs another look.
    """
    while yw and xw and yw[-1] == r and xw[0] == r:
        yw = yw[:-1]
        xw = xw[1:]
        for s in range(1, r):
            key = (yw + (s,), (s,) + xw)
            c = out.get(key, 0) - coeff
            if c:
                out[key] = c
            else:
                out.pop(key, None)
    key = (yw, xw)
    c = out.get(key, 0) + coeff
    if c:
        out[key] = c
    else:
        out.pop(key, None)


def _accumulate_term1(r, i, j, yw, xw, coeff, out):
    """One-color variant of _accumulate_normal writing (i, j, mono) keys."""
    while yw and xw and yw[-1] == r and xw[0] == r:
        yw = yw[:-1]
        xw = xw[1:]
        for s in range(1, r):
            key = (i, j, ((yw + (s,), (s,) + xw),))
            c = out.get(key, 0) - coeff
            if c:
                out[key] = c
            else:
                out.pop(key, None)
    key = (i, j, ((yw, xw),))
    c = out.get(key, 0) + coeff
    if c:
        out[key] = c
    else:
        out.pop(key, None)


def _pair_mul(r, a, b):
    """Product of two normal per-color pairs, as a dict pair -> coeff.

    The middle junction x-word(a) * y-word(b) cancels letter by letter via
    x_s y_s' = delta; a mismatch kills the product, otherwise the survivor
    words concatenate and at most one y_r x_r cascade remains.
    """
    y1, x1 = a
    y2, x2 = b
    n1 = len(x1)
    c = min(n1, len(y2))
    for i in range(c):
        if x1[n1 - 1 - i] != y2[i]:
            return {}
    out = {}
    _accumulate_normal(r, y1 + y2[c:], x1[:n1 - c] + x2, 1, out)
    return out


def mono_mul(shape, a, b):
    """Product of two normal monomials, as a dict mono -> coeff."""
    r = shape.r
    if shape.t == 1:
        pd = _pair_mul(r, a[0], b[0])
        return {(p,): c for p, c in pd.items()}
    result = {(): 1}
    for l in range(shape.t):
        pd = _pair_mul(r, a[l], b[l])
        if not pd:
            return {}
        result = {
            prefix + (pair,): c0 * c1
            for prefix, c0 in result.items()
            for pair, c1 in pd.items()
        }
    return result


def mono_involute(mono):
    return tuple((tuple(reversed(xw)), tuple(reversed(yw))) for yw, xw in mono)


def _normalize_word(r, letters):
    """Normal form of a mixed one-color word, as a dict pair -> coeff.

    Folds letters left to right into a sum of normal pairs; appending a
    letter touches only the junction, so each step is local.
    """
    acc = {((), ()): 1}
    for kind, s in letters:
        new = {}
        if kind == "y":
            for (yw, xw), c in acc.items():
                if xw:
                    if xw[-1] == s:
                        key = (yw, xw[:-1])
                        nc = new.get(key, 0) + c
                        if nc:
                            new[key] = nc
                        else:
                            new.pop(key, None)
                    # x_s' y_s with s' != s is zero
                else:
                    key = (yw + (s,), ())
                    nc = new.get(key, 0) + c
                    if nc:
                        new[key] = nc
                    else:
                        new.pop(key, None)
        else:
            for (yw, xw), c in acc.items():
                _accumulate_normal(r, yw, xw + (s,), c, new)
        acc = new
        if not acc:
            break
    return acc


# ---------------------------------------------------------------------------
# Ring elements
# ---------------------------------------------------------------------------

class RingElement:
    """An m-by-n matrix over the scalar ring, stored in normal form.

    ``terms`` maps (i, j, mono) -> nonzero integer coefficient with 1-based
    coordinates; the zero element has an empty mapping.  Scalars are the
    1-by-1 case.  Two elements are equal iff shape, dims and terms agree.
    """

    __slots__ = ("shape", "m", "n", "terms")

    def __init__(self, shape, m, n, terms=None):
        check_shape(shape)
        if m < 1 or n < 1:
            raise ShapeError(f"invalid dims {m}x{n}")
        self.shape = shape
        self.m = m
        self.n = n
        if terms:
            self.terms = {k: c for k, c in terms.items() if c}
        else:
            self.terms = {}

    # -- structure ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def dims(self):
        return (self.m, self.n)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return (self.shape == other.shape and self.m == other.m
                and self.n == other.n and self.terms == other.terms)

    __hash__ = None

    def __repr__(self):
        return (f"RingElement(r={self.shape.r}, t={self.shape.t}, "
                f"{self.m}x{self.n}, {len(self.terms)} terms)")

    def __str__(self):
        from . import textio
        return textio.format_element(self)

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch: {self.shape} vs {other.shape}")

    # -- abelian group -----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        self._check_same_shape(other)
        if (self.m, self.n) != (other.m, other.n):
            raise ShapeError(f"dims mismatch: {self.dims()} vs {other.dims()}")
        out = dict(self.terms)
        for key, c in other.terms.items():
            nc = out.get(key, 0) + c
            if nc:
                out[key] = nc
            else:
                del out[key]
        return RingElement(self.shape, self.m, self.n, out)

    def __neg__(self):
        return RingElement(self.shape, self.m, self.n,
                           {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    # -- multiplication ----------------------------------------------------

    def scale(self, k: int):
        if k == 0:
            return RingElement(self.shape, self.m, self.n)
        return RingElement(self.shape, self.m, self.n,
                           {key: k * c for key, c in self.terms.items()})

    def __rmul__(self, k):
        if isinstance(k, int):
            return self.scale(k)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        self._check_same_shape(other)
        if self.n != other.m:
            raise ShapeError(
                f"inner dims mismatch: {self.dims()} times {other.dims()}")
        # Index the right factor by row and, within a row, by first color-1
        # y-letter (0 = empty): a left term whose color-1 x-word ends in s
        # can only meet terms starting with s or with an empty y-word.
        by_row = {}
        by_first = {}
        for key_b, cb in other.terms.items():
            k = key_b[0]
            entry = (key_b[1], key_b[2], cb)
            by_row.setdefault(k, []).append(entry)
            y2 = key_b[2][0][0]
            by_first.setdefault((k, y2[0] if y2 else 0), []).append(entry)
        shape = self.shape
        r = shape.r
        one_color = shape.t == 1
        out = {}
        for (i, k, ma), ca in self.terms.items():
            x1 = ma[0][1]
            if x1:
                groups = (by_first.get((k, x1[-1])), by_first.get((k, 0)))
            else:
                groups = (by_row.get(k),)
            for hits in groups:
                if not hits:
                    continue
                for j, mb, cb in hits:
                    cab = ca * cb
                    if one_color:
                        y1w, x1w = ma[0]
                        y2w, x2w = mb[0]
                        n1 = len(x1w)
                        c = min(n1, len(y2w))
                        dead = False
                        for q in range(c):
                            if x1w[n1 - 1 - q] != y2w[q]:
                                dead = True
                                break
                        if dead:
                            continue
                        _accumulate_term1(r, i, j, y1w + y2w[c:],
                                          x1w[:n1 - c] + x2w, cab, out)
                    else:
                        for mono, cm in mono_mul(shape, ma, mb).items():
                            key = (i, j, mono)
                            nc = out.get(key, 0) + cab * cm
                            if nc:
                                out[key] = nc
                            else:
                                del out[key]
        return RingElement(self.shape, self.m, other.n, out)

    # -- involution and degrees --------------------------------------------

    def involute(self):
        """Conjugate transpose: (i,j) -> (j,i), words reversed with x and y swapped."""
        out = {}
        for (i, j, mono), c in self.terms.items():
            out[(j, i, mono_involute(mono))] = c
        return RingElement(self.shape, self.n, self.m, out)

    def degree_profile(self):
        """Per color, the pair (max y-word length, max x-word length)."""
        if not self.terms:
            raise LeavittError("no degree: the zero element has no degree profile")
        prof = [[0, 0] for _ in range(self.shape.t)]
        for (_, _, mono) in self.terms:
            for l, (yw, xw) in enumerate(mono):
                if len(yw) > prof[l][0]:
                    prof[l][0] = len(yw)
                if len(xw) > prof[l][1]:
                    prof[l][1] = len(xw)
        return tuple((a, b) for a, b in prof)


def involute(elem: RingElement) -> RingElement:
    return elem.involute()


def degree_profile(elem: RingElement):
    return elem.degree_profile()


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def zero(shape, m=1, n=1):
    return RingElement(shape, m, n)


def scalar(shape, k: int):
    """The integer scalar k as a 1x1 element."""
    if k == 0:
        return RingElement(shape, 1, 1)
    return RingElement(shape, 1, 1, {(1, 1, mono_one(shape.t)): k})


def letter_element(shape, kind, color, index):
    """A single generator letter as a 1x1 element."""
    _check_letter(shape, kind, color, index)
    pair = ((index,), ()) if kind == "y" else ((), (index,))
    mono = tuple(pair if l == color - 1 else ((), ())
                 for l in range(shape.t))
    return RingElement(shape, 1, 1, {(1, 1, mono): 1})


def _check_letter(shape, kind, color, index):
    if kind not in ("y", "x"):
        raise ShapeError(f"unknown letter kind {kind!r}")
    if not 1 <= color <= shape.t:
        raise ShapeError(f"color {color} out of range [1..{shape.t}]")
    if not 1 <= index <= shape.r:
        raise ShapeError(f"index {index} out of range [1..{shape.r}]")


def normalize(shape, raw_terms, dims=(1, 1)):
    """Normal form of a sum of signed products of letters and matrix units.

    ``raw_terms`` iterates over (coefficient, factors) pairs where each
    factor is a Letter or a MatrixUnit, in any order: letters of distinct
    colors commute and all letters commute with matrix units, so only the
    relative order of same-color letters feeds the rewriting.  Matrix
    units compose by e[i,j] e[k,l] = delta_{j,k} e[i,l]; a term without a
    unit is a scalar and requires dims == (1, 1).
    """
    check_shape(shape)
    m, n = dims
    if m < 1 or n < 1:
        raise ShapeError(f"invalid dims {m}x{n}")
    out = {}
    for coeff, factors in raw_terms:
        if coeff == 0:
            continue
        unit = None
        words = [[] for _ in range(shape.t)]
        dead = False
        for f in factors:
            if isinstance(f, MatrixUnit):
                if not (1 <= f.i <= m and 1 <= f.j <= n):
                    raise ShapeError(
                        f"matrix unit e[{f.i},{f.j}] outside dims {m}x{n}")
                if unit is None:
                    unit = (f.i, f.j)
                elif unit[1] == f.i:
                    unit = (unit[0], f.j)
                else:
                    dead = True
                    break
            elif isinstance(f, Letter):
                _check_letter(shape, f.kind, f.color, f.index)
                words[f.color - 1].append((f.kind, f.index))
            else:
                raise ShapeError(f"unknown factor {f!r}")
        if dead:
            continue
        if unit is None:
            if (m, n) != (1, 1):
                raise ShapeError(
                    "term without a matrix unit in a non-scalar context")
            unit = (1, 1)
        color_sums = []
        for letters in words:
            d = _normalize_word(shape.r, letters)
            if not d:
                dead = True
                break
            color_sums.append(d)
        if dead:
            continue
        partial = {(): coeff}
        for d in color_sums:
            partial = {
                prefix + (pair,): c0 * c1
                for prefix, c0 in partial.items()
                for pair, c1 in d.items()
            }
        i, j = unit
        for mono, c in partial.items():
            key = (i, j, mono)
            nc = out.get(key, 0) + c
            if nc:
                out[key] = nc
            else:
                del out[key]
    return RingElement(shape, m, n, out)


# ---------------------------------------------------------------------------
# Scalar action and recoloring
# ---------------------------------------------------------------------------

def scalar_times(scal: RingElement, elem: RingElement) -> RingElement:
    """Left action of a 1x1 scalar on an m-by-n element."""
    scal._check_same_shape(elem)
    if (scal.m, scal.n) != (1, 1):
        raise ShapeError("scalar_times needs a 1x1 left factor")
    shape = elem.shape
    out = {}
    for (_, _, ms), cs in scal.terms.items():
        for (i, j, me), ce in elem.terms.items():
            c0 = cs * ce
            for mono, cm in mono_mul(shape, ms, me).items():
                key = (i, j, mono)
                nc = out.get(key, 0) + c0 * cm
                if nc:
                    out[key] = nc
                else:
                    del out[key]
    return RingElement(shape, elem.m, elem.n, out)


def recolor(elem: RingElement, shape: Shape, color: int) -> RingElement:
    """Re-embed a one-color element into ``shape`` at the given color."""
    if elem.shape.t != 1:
        raise ShapeError("recolor expects a one-color element")
    if elem.shape.r != shape.r:
        raise ShapeError("recolor cannot change the rank r")
    if not 1 <= color <= shape.t:
        raise ShapeError(f"color {color} out of range [1..{shape.t}]")
    blank = ((), ())
    t = shape.t
    out = {}
    for (i, j, mono), c in elem.terms.items():
        new_mono = tuple(mono[0] if l == color - 1 else blank
                         for l in range(t))
        out[(i, j, new_mono)] = c
    return RingElement(shape, elem.m, elem.n, out)
