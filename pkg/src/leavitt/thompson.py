"""Tree pairs over colored leaf words: the groups tV_{r,m}.

A leaf is a matrix row together with one y-word per color; a basis is any
leaf set reachable from the m root leaves by expansions (replacing a leaf
by its r children in one color).  A tree pair matches two bases of equal
size positionally and represents a group element; the group embeds into
the positive unitary matrices by

    alpha(pair) = sum over pairs (a -> b) of a . b*

which is injective, constant on expansions, and multiplicative, so group
equality is equality of the matrix images.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

from .core import RingElement, Shape, _accumulate_normal, check_shape
from .errors import (LeavittError, NotPositiveUnitaryError, NotUnitaryError,
                     ShapeError)
from .matrices import is_unitary

_BASIS_SIZE_CAP = 2_000_000


class Leaf(NamedTuple):
    """A row in [1..m] plus one y-word per color."""

    row: int
    words: tuple

    def child(self, color, k):
        l = color - 1
        return Leaf(self.row,
                    self.words[:l] + (self.words[l] + (k,),) + self.words[l + 1:])


def _check_leaf(shape, m, leaf):
    if not 1 <= leaf.row <= m:
        raise ShapeError(f"leaf row {leaf.row} out of range [1..{m}]")
    if len(leaf.words) != shape.t:
        raise ShapeError(f"leaf needs {shape.t} words, got {len(leaf.words)}")
    for w in leaf.words:
        for d in w:
            if not 1 <= d <= shape.r:
                raise ShapeError(f"leaf digit {d} out of range [1..{shape.r}]")


class LeafSet:
    """A finite set of distinct leaves over a common (m, shape)."""

    __slots__ = ("shape", "m", "leaves")

    def __init__(self, shape, m, leaves):
        check_shape(shape)
        if m < 1:
            raise ShapeError(f"invalid m = {m}")
        leaves = frozenset(leaves)
        for leaf in leaves:
            _check_leaf(shape, m, leaf)
        self.shape = shape
        self.m = m
        self.leaves = leaves

    def __iter__(self):
        return iter(self.leaves)

    def __len__(self):
        return len(self.leaves)

    def __contains__(self, leaf):
        return leaf in self.leaves

    def __eq__(self, other):
        if not isinstance(other, LeafSet):
            return NotImplemented
        return (self.shape == other.shape and self.m == other.m
                and self.leaves == other.leaves)

    __hash__ = None

    def __repr__(self):
        return f"LeafSet(m={self.m}, {sorted(self.leaves)})"


def root_basis(shape: Shape, m: int) -> LeafSet:
    """The m leaves with all-empty words."""
    empty = ((),) * shape.t
    return LeafSet(shape, m, (Leaf(i, empty) for i in range(1, m + 1)))


def expand(A: LeafSet, leaf: Leaf, color: int) -> LeafSet:
    """Replace ``leaf`` by its r children in the given color."""
    if leaf not in A:
        raise ShapeError(f"{leaf} is not in the set")
    if not 1 <= color <= A.shape.t:
        raise ShapeError(f"color {color} out of range [1..{A.shape.t}]")
    new = set(A.leaves)
    new.remove(leaf)
    new.update(leaf.child(color, k) for k in range(1, A.shape.r + 1))
    return LeafSet(A.shape, A.m, new)


def leaf_column(shape: Shape, m: int, leaf: Leaf) -> RingElement:
    """The leaf as an m-by-1 column: e[row,1] times its y-words."""
    mono = tuple((w, ()) for w in leaf.words)
    return RingElement(shape, m, 1, {(leaf.row, 1, mono): 1})


def is_unitary_set(A: LeafSet) -> bool:
    """True iff sum_a a a* = I_m and a* b = 0 for all a != b (symbolically)."""
    shape, m = A.shape, A.m
    cols = {leaf: leaf_column(shape, m, leaf) for leaf in A}
    total = RingElement(shape, m, m)
    for col in cols.values():
        total = total + col * col.involute()
    from .matrices import identity
    if total != identity(shape, m):
        return False
    zero = RingElement(shape, 1, 1)
    leaves = sorted(A.leaves)
    for i, a in enumerate(leaves):
        astar = cols[a].involute()
        for b in leaves[i + 1:]:
            if astar * cols[b] != zero:
                return False
            if cols[b].involute() * cols[a] != zero:
                return False
    return True


def is_basis(A: LeafSet, use_unitary_shortcut: bool = True) -> bool:
    """True iff A is reachable from the root set by expansions.

    Runs a memoized backtracking collapse: repeatedly replace a full
    sibling family by its parent, across all choice orders, succeeding on
    reaching the root set.  For t <= 2 every unitary set is a basis, so
    the symbolic unitarity check answers directly unless the caller asks
    for the generic engine.
    """
    shape, m = A.shape, A.m
    r, t = shape.r, shape.t
    if (len(A) - m) % (r - 1) != 0:
        return False
    if use_unitary_shortcut and t <= 2:
        return is_unitary_set(A)
    root = frozenset(root_basis(shape, m))
    failed = set()

    def collapses(S):
        bucket = {}
        for leaf in S:
            for l in range(t):
                w = leaf.words[l]
                if w:
                    parent = Leaf(leaf.row,
                                  leaf.words[:l] + (w[:-1],) + leaf.words[l + 1:])
                    bucket.setdefault((l + 1, parent), set()).add(w[-1])
        for (color, parent), lasts in bucket.items():
            if len(lasts) == r:
                yield color, parent

    def search(S):
        if S == root:
            return True
        if S in failed:
            return False
        for color, parent in collapses(S):
            family = frozenset(parent.child(color, k) for k in range(1, r + 1))
            if search((S - family) | {parent}):
                return True
        failed.add(S)
        return False

    return search(frozenset(A.leaves))


# ---------------------------------------------------------------------------
# Tree pairs
# ---------------------------------------------------------------------------

class TreePair:
    """Two bases of equal size with a positional bijection domain[k] -> range[k].

    Stored canonically with the pairs sorted by domain leaf.  Structural
    equality compares representatives; group equality is ``equals``.
    """

    __slots__ = ("shape", "m", "domain", "range")

    def __init__(self, shape, m, domain, range_):
        check_shape(shape)
        domain = tuple(domain)
        range_ = tuple(range_)
        if len(domain) != len(range_):
            raise ShapeError("domain and range sizes differ")
        if len(set(domain)) != len(domain) or len(set(range_)) != len(range_):
            raise ShapeError("duplicate leaves in a tree pair")
        pairs = sorted(zip(domain, range_))
        self.shape = shape
        self.m = m
        self.domain = tuple(p[0] for p in pairs)
        self.range = tuple(p[1] for p in pairs)
        for leaf in self.domain:
            _check_leaf(shape, m, leaf)
        for leaf in self.range:
            _check_leaf(shape, m, leaf)

    def __eq__(self, other):
        if not isinstance(other, TreePair):
            return NotImplemented
        return (self.shape == other.shape and self.m == other.m
                and self.domain == other.domain and self.range == other.range)

    __hash__ = None

    def __repr__(self):
        return (f"TreePair(m={self.m}, r={self.shape.r}, t={self.shape.t}, "
                f"{len(self.domain)} leaves)")

    def __len__(self):
        return len(self.domain)

    def domain_set(self):
        return LeafSet(self.shape, self.m, self.domain)

    def range_set(self):
        return LeafSet(self.shape, self.m, self.range)

    def validate_bases(self):
        if not is_basis(self.domain_set()) or not is_basis(self.range_set()):
            raise ShapeError("tree pair sides must be bases")

    def domain_degrees(self):
        return tuple(max((len(a.words[l]) for a in self.domain), default=0)
                     for l in range(self.shape.t))

    def range_degrees(self):
        return tuple(max((len(b.words[l]) for b in self.range), default=0)
                     for l in range(self.shape.t))


def identity_pair(shape: Shape, m: int) -> TreePair:
    leaves = sorted(root_basis(shape, m))
    return TreePair(shape, m, leaves, leaves)


def _extensions(shape, missing):
    """All per-color extension word tuples of the given lengths."""
    per_color = [
        [tuple(w) for w in itertools.product(range(1, shape.r + 1), repeat=k)]
        for k in missing
    ]
    return itertools.product(*per_color)


def multi_homogenize(g: TreePair, degrees) -> TreePair:
    """Expand g so its range is the full multi-homogeneous basis of ``degrees``.

    Each range expansion is mirrored on the domain at the partner leaf, so
    the result is an expansion of g and has the same matrix image.
    """
    degrees = tuple(degrees)
    shape = g.shape
    if len(degrees) != shape.t:
        raise ShapeError(f"need {shape.t} degrees")
    have = g.range_degrees()
    if any(d < h for d, h in zip(degrees, have)):
        raise ShapeError(f"degrees {degrees} below range degrees {have}")
    dom, ran = [], []
    for a, b in zip(g.domain, g.range):
        missing = [d - len(w) for d, w in zip(degrees, b.words)]
        for ext in _extensions(shape, missing):
            dom.append(Leaf(a.row, tuple(w + e for w, e in zip(a.words, ext))))
            ran.append(Leaf(b.row, tuple(w + e for w, e in zip(b.words, ext))))
    return TreePair(shape, g.m, dom, ran)


def inverse(g: TreePair) -> TreePair:
    return TreePair(g.shape, g.m, g.range, g.domain)


def compose(g: TreePair, h: TreePair) -> TreePair:
    """The element g followed by h, via a common multi-homogeneous refinement."""
    if g.shape != h.shape or g.m != h.m:
        raise ShapeError("tree pairs live in different groups")
    d = tuple(max(a, b) for a, b in zip(g.range_degrees(), h.domain_degrees()))
    g2 = multi_homogenize(g, d)
    h2 = inverse(multi_homogenize(inverse(h), d))
    hmap = dict(zip(h2.domain, h2.range))
    return TreePair(g.shape, g.m, g2.domain, tuple(hmap[b] for b in g2.range))


def to_matrix(g: TreePair) -> RingElement:
    """The matrix image sum_(a -> b) a . b*, in normal form."""
    shape = g.shape
    r = shape.r
    out = {}
    for a, b in zip(g.domain, g.range):
        color_sums = []
        for l in range(shape.t):
            d = {}
            _accumulate_normal(r, a.words[l], tuple(reversed(b.words[l])), 1, d)
            color_sums.append(d)
        partial = {(): 1}
        for d in color_sums:
            partial = {
                prefix + (pair,): c0 * c1
                for prefix, c0 in partial.items()
                for pair, c1 in d.items()
            }
        for mono, c in partial.items():
            key = (a.row, b.row, mono)
            nc = out.get(key, 0) + c
            if nc:
                out[key] = nc
            else:
                del out[key]
    return RingElement(shape, g.m, g.m, out)


def equals(g: TreePair, h: TreePair) -> bool:
    """Group equality, via the injective matrix image."""
    if g.shape != h.shape or g.m != h.m:
        raise ShapeError("tree pairs live in different groups")
    return to_matrix(g) == to_matrix(h)


def from_matrix(u: RingElement, max_escalation: int = 4) -> TreePair:
    """The tree pair with matrix image u, for positive unitary u.

    Requires u unitary; seeds the range degree with the larger of the
    y- and x-word lengths per color of u's normal form (rewriting can
    shorten either side), then checks that u carries every leaf of the
    full multi-homogeneous range basis to a single leaf with coefficient
    one.  If some product is not a leaf the degree is escalated by one in
    every color, up to ``max_escalation`` extra levels.
    """
    if u.m != u.n:
        raise ShapeError(f"from_matrix needs a square matrix, got {u.m}x{u.n}")
    if not is_unitary(u).unitary:
        raise NotUnitaryError("the matrix is not unitary")
    shape, m = u.shape, u.m
    r = shape.r
    degrees = [max(pair) for pair in u.degree_profile()]
    by_col = {}
    for (i, j, mono), c in u.terms.items():
        by_col.setdefault(j, []).append((i, mono, c))

    from .core import mono_mul

    for _ in range(max_escalation + 1):
        if m * r ** sum(degrees) > _BASIS_SIZE_CAP:
            raise NotPositiveUnitaryError(
                f"escalation reached an impractical basis size at degrees "
                f"{tuple(degrees)}")
        dom, ran = [], []
        good = True
        for row in range(1, m + 1):
            if not good:
                break
            hits = by_col.get(row, ())
            for words in itertools.product(
                    *(itertools.product(range(1, r + 1), repeat=d)
                      for d in degrees)):
                b_mono = tuple((w, ()) for w in words)
                col = {}
                for i, mono, c in hits:
                    for mono2, cm in mono_mul(shape, mono, b_mono).items():
                        key = (i, mono2)
                        nc = col.get(key, 0) + c * cm
                        if nc:
                            col[key] = nc
                        else:
                            del col[key]
                if len(col) != 1:
                    good = False
                    break
                (i, mono2), c = next(iter(col.items()))
                if c != 1 or any(xw for _, xw in mono2):
                    good = False
                    break
                dom.append(Leaf(i, tuple(yw for yw, _ in mono2)))
                ran.append(Leaf(row, words))
        if good:
            if not is_unitary_set(LeafSet(shape, m, dom)):
                raise LeavittError(
                    "internal defect: leaf images do not form a unitary set")
            return TreePair(shape, m, dom, ran)
        degrees = [d + 1 for d in degrees]
    raise NotPositiveUnitaryError(
        f"no tree-pair preimage within {max_escalation} extra levels; "
        f"the matrix is unitary but not positive")


def random_basis(shape: Shape, m: int, expansions: int, rng) -> list:
    """A random basis reached by the given number of uniform expansions."""
    leaves = sorted(root_basis(shape, m))
    for _ in range(expansions):
        k = rng.randrange(len(leaves))
        color = rng.randrange(1, shape.t + 1)
        leaf = leaves.pop(k)
        leaves.extend(leaf.child(color, s) for s in range(1, shape.r + 1))
    return leaves


def random_pair(shape: Shape, m: int, expansions: int, rng) -> TreePair:
    """A random group element: two random equal-size bases, shuffled pairing."""
    dom = random_basis(shape, m, expansions, rng)
    ran = random_basis(shape, m, expansions, rng)
    rng.shuffle(ran)
    return TreePair(shape, m, dom, ran)
