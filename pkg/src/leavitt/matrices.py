"""Structural matrix constructors, block sums, and unitarity checks.

Rectangular matrices are first class: an element of the m-by-n matrix
space carries its dims itself.  A matrix u is unitary when
u u* = I_m and u* u = I_n, both checked by full symbolic products.
"""

from __future__ import annotations

from typing import NamedTuple

from .core import RingElement, Shape, check_shape, mono_one
from .errors import ShapeError


def identity(shape: Shape, m: int) -> RingElement:
    check_shape(shape)
    one = mono_one(shape.t)
    return RingElement(shape, m, m, {(j, j, one): 1 for j in range(1, m + 1)})


def matrix_unit(shape: Shape, m: int, n: int, i: int, j: int) -> RingElement:
    if not (1 <= i <= m and 1 <= j <= n):
        raise ShapeError(f"matrix unit e[{i},{j}] outside dims {m}x{n}")
    return RingElement(shape, m, n, {(i, j, mono_one(shape.t)): 1})


def row_of_y(shape: Shape, color: int = 1) -> RingElement:
    """The 1-by-r row (y_{color,1}, ..., y_{color,r})."""
    check_shape(shape)
    if not 1 <= color <= shape.t:
        raise ShapeError(f"color {color} out of range [1..{shape.t}]")
    blank = ((), ())
    terms = {}
    for s in range(1, shape.r + 1):
        mono = tuple((((s,), ()) if l == color - 1 else blank)
                     for l in range(shape.t))
        terms[(1, s, mono)] = 1
    return RingElement(shape, 1, shape.r, terms)


def block_place(elem: RingElement, row_off: int, col_off: int,
                m: int, n: int) -> RingElement:
    """Embed ``elem`` into an m-by-n zero matrix at the given offsets."""
    if row_off + elem.m > m or col_off + elem.n > n:
        raise ShapeError("block does not fit at the requested offset")
    out = {(i + row_off, j + col_off, mono): c
           for (i, j, mono), c in elem.terms.items()}
    return RingElement(elem.shape, m, n, out)


def direct_sum(blocks) -> RingElement:
    """Block-diagonal sum; dims are the componentwise sums."""
    blocks = list(blocks)
    if not blocks:
        raise ShapeError("direct_sum of no blocks")
    shape = blocks[0].shape
    for b in blocks[1:]:
        if b.shape != shape:
            raise ShapeError("direct_sum blocks must share a shape")
    m = sum(b.m for b in blocks)
    n = sum(b.n for b in blocks)
    out = {}
    row_off = col_off = 0
    for b in blocks:
        for (i, j, mono), c in b.terms.items():
            out[(i + row_off, j + col_off, mono)] = c
        row_off += b.m
        col_off += b.n
    return RingElement(shape, m, n, out)


class UnitaryWitness(NamedTuple):
    """Result of a unitarity check; both flags true means unitary."""

    element: RingElement
    left: bool    # u u* = I_m
    right: bool   # u* u = I_n

    @property
    def unitary(self) -> bool:
        return self.left and self.right


def is_unitary(u: RingElement) -> UnitaryWitness:
    """Check u u* = I_m and u* u = I_n by full symbolic products."""
    ustar = u.involute()
    left = (u * ustar) == identity(u.shape, u.m)
    right = (ustar * u) == identity(u.shape, u.n)
    return UnitaryWitness(u, left, right)
