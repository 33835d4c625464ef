"""Constructive isomorphisms between matrix rings over Leavitt scalars.

Three building blocks compose into an isomorphism
Mat_{m1} ~ Mat_{m2} whenever gcd(m1, r-1) = gcd(m2, r-1):

* a bounded search for a unit u modulo s with u m1 = m2 (mod s);
* conjugation by a rectangular positive unitary built from diagonal
  sums (y_1, ..., y_r) (+) I, which bridges any sizes congruent
  mod r-1;
* the direct isomorphism scalars ~ Mat_m(scalars) for r >= 3,
  m > r, gcd(m, r-1) = 1, realized by an explicit m-by-mr positive
  unitary Y and, for the inverse, a preimage table produced by
  recursions along the m-cycle j -> (j - r + 1) mod m.

Homomorphisms are finite generator-image tables applied by structural
recursion, so they are serializable, composable, and independently
verifiable (``Homomorphism.verify`` checks every defining relation).
"""

from __future__ import annotations

import functools
import math

from .core import (RingElement, Shape, letter_element, recolor, scalar,
                   scalar_times)
from .errors import LeavittError, NoIsomorphismError, ShapeError
from .matrices import (block_place, direct_sum, identity, matrix_unit,
                       row_of_y)


# ---------------------------------------------------------------------------
# Homomorphisms as generator-image tables
# ---------------------------------------------------------------------------

class Homomorphism:
    """A ring map Mat_{m1}(scalars) -> Mat_{m2}(scalars) given on generators.

    ``row_images[i-1]`` is the image of e[i,1] and ``corner_images[(l,s)]``
    the image of the corner scalar y_{l,s} e[1,1].  These determine the map
    by structural recursion over normal monomials,

        h(e[i,j] w) = h(e[i,1]) . (corner images of w's letters) . h(e[1,j]),

    where h(e[1,j]) = h(e[j,1])* and the x-corner images are the involutes
    of the y-corner images; all maps built here preserve the involution by
    construction.  ``inverse``, when present, is the table of the two-sided
    inverse map.
    """

    def __init__(self, shape, source_m, target_m, row_images, corner_images,
                 inverse=None):
        self.shape = shape
        self.source_m = source_m
        self.target_m = target_m
        self.row_images = tuple(row_images)
        self.corner_images = dict(corner_images)
        self.inverse = inverse
        if len(self.row_images) != source_m:
            raise ShapeError("need one row image per source row")
        for img in self.row_images:
            if (img.m, img.n) != (target_m, target_m) or img.shape != shape:
                raise ShapeError("row images must be square of target size")
        for (l, s), img in self.corner_images.items():
            if not (1 <= l <= shape.t and 1 <= s <= shape.r):
                raise ShapeError(f"corner key ({l},{s}) out of range")
            if (img.m, img.n) != (target_m, target_m) or img.shape != shape:
                raise ShapeError("corner images must be square of target size")
        self._col_images = tuple(img.involute() for img in self.row_images)
        self._ycache = {}
        self._mcache = {}

    def __repr__(self):
        return (f"Homomorphism(Mat_{self.source_m} -> Mat_{self.target_m}, "
                f"r={self.shape.r}, t={self.shape.t})")

    # -- application ---------------------------------------------------------

    def _yword_image(self, color, word):
        """Image of a product of y-letters of one color (balanced, cached)."""
        key = (color, word)
        hit = self._ycache.get(key)
        if hit is not None:
            return hit
        if len(word) == 1:
            res = self.corner_images[(color, word[0])]
        else:
            h = len(word) // 2
            res = self._yword_image(color, word[:h]) * self._yword_image(color, word[h:])
        self._ycache[key] = res
        return res

    def _mono_image(self, mono):
        """Image of a scalar monomial's letters, or None for the empty one."""
        if mono in self._mcache:
            return self._mcache[mono]
        res = None
        for l, (yw, xw) in enumerate(mono, start=1):
            part = None
            if yw:
                part = self._yword_image(l, yw)
            if xw:
                xi = self._yword_image(l, tuple(reversed(xw))).involute()
                part = xi if part is None else part * xi
            if part is not None:
                res = part if res is None else res * part
        self._mcache[mono] = res
        return res

    def apply(self, elem: RingElement) -> RingElement:
        if elem.shape != self.shape:
            raise ShapeError(f"shape mismatch: {elem.shape} vs {self.shape}")
        if (elem.m, elem.n) != (self.source_m, self.source_m):
            raise ShapeError(
                f"homomorphism applies to {self.source_m}x{self.source_m} "
                f"elements, got {elem.m}x{elem.n}")
        out = {}
        for (i, j, mono), c in elem.terms.items():
            acc = self.row_images[i - 1]
            mid = self._mono_image(mono)
            if mid is not None:
                acc = acc * mid
            acc = acc * self._col_images[j - 1]
            for key, cv in acc.terms.items():
                nc = out.get(key, 0) + c * cv
                if nc:
                    out[key] = nc
                else:
                    del out[key]
        return RingElement(self.shape, self.target_m, self.target_m, out)

    # -- verification --------------------------------------------------------

    def verify(self) -> bool:
        """Check every defining relation on the stored images.

        Matrix units: e[1,i] e[j,1] = delta e[1,1], sum_j e[j,j] = 1.
        Per color: x_s y_s' = delta, sum_s y_s x_s = 1, read in the corner.
        Corner containment and cross-color commutation close the list;
        involution compatibility holds structurally (column images are the
        involutes of row images).
        """
        shape = self.shape
        mt = self.target_m
        rows = self.row_images
        P = rows[0]
        zero_t = RingElement(shape, mt, mt)
        if P.involute() != P or P * P != P:
            return False
        total = zero_t
        for i, Ri in enumerate(rows):
            if Ri * P != Ri:
                return False
            Ristar = self._col_images[i]
            for j in range(i, self.source_m):
                prod = Ristar * rows[j]
                if prod != (P if j == i else zero_t):
                    return False
            total = total + Ri * Ristar
        if total != identity(shape, mt):
            return False
        for l in range(1, shape.t + 1):
            ys = [self.corner_images[(l, s)] for s in range(1, shape.r + 1)]
            total = zero_t
            for s, Y in enumerate(ys):
                if P * Y != Y or Y * P != Y:
                    return False
                Ystar = Y.involute()
                for s2 in range(s, shape.r):
                    prod = Ystar * ys[s2]
                    if prod != (P if s2 == s else zero_t):
                        return False
                total = total + Y * Ystar
            if total != P:
                return False
        for l in range(1, shape.t + 1):
            for l2 in range(l + 1, shape.t + 1):
                for s in range(1, shape.r + 1):
                    A = self.corner_images[(l, s)]
                    for s2 in range(1, shape.r + 1):
                        B = self.corner_images[(l2, s2)]
                        if A * B != B * A:
                            return False
                        Bstar = B.involute()
                        if A * Bstar != Bstar * A:
                            return False
        return True


def apply_hom(h: Homomorphism, elem: RingElement) -> RingElement:
    return h.apply(elem)


def verify_hom(h: Homomorphism) -> bool:
    return h.verify()


def identity_hom(shape: Shape, m: int) -> Homomorphism:
    rows = [matrix_unit(shape, m, m, i, 1) for i in range(1, m + 1)]
    corners = {
        (l, s): scalar_times(letter_element(shape, "y", l, s),
                             matrix_unit(shape, m, m, 1, 1))
        for l in range(1, shape.t + 1) for s in range(1, shape.r + 1)
    }
    h = Homomorphism(shape, m, m, rows, corners)
    h.inverse = h
    return h


def compose_hom(h1: Homomorphism, h2: Homomorphism) -> Homomorphism:
    """The map h1 followed by h2 (h2 is applied to h1's images)."""
    if h1.shape != h2.shape or h1.target_m != h2.source_m:
        raise ShapeError("homomorphisms do not compose")
    rows = [h2.apply(img) for img in h1.row_images]
    corners = {key: h2.apply(img) for key, img in h1.corner_images.items()}
    h = Homomorphism(h1.shape, h1.source_m, h2.target_m, rows, corners)
    if h1.inverse is not None and h2.inverse is not None:
        inv_rows = [h1.inverse.apply(img) for img in h2.inverse.row_images]
        inv_corners = {key: h1.inverse.apply(img)
                       for key, img in h2.inverse.corner_images.items()}
        hi = Homomorphism(h1.shape, h2.target_m, h1.source_m,
                          inv_rows, inv_corners)
        h.inverse = hi
        hi.inverse = h
    return h


def _extend_entrywise_bare(h: Homomorphism, m: int) -> Homomorphism:
    u1, u2 = h.source_m, h.target_m
    M1, M2 = m * u1, m * u2
    rows = []
    for big in range(1, M1 + 1):
        i, k = divmod(big - 1, u1)
        rows.append(block_place(h.row_images[k], i * u2, 0, M2, M2))
    corners = {key: block_place(img, 0, 0, M2, M2)
               for key, img in h.corner_images.items()}
    return Homomorphism(h.shape, M1, M2, rows, corners)


def extend_entrywise(h: Homomorphism, m: int) -> Homomorphism:
    """Lift Mat_{u1} -> Mat_{u2} to Mat_{m u1} -> Mat_{m u2} blockwise."""
    e = _extend_entrywise_bare(h, m)
    if h.inverse is not None:
        ei = _extend_entrywise_bare(h.inverse, m)
        e.inverse = ei
        ei.inverse = e
    return e


def _extend_tensor_bare(h: Homomorphism, color: int, t: int) -> Homomorphism:
    shape = Shape(h.shape.r, t)
    rows = [recolor(img, shape, color) for img in h.row_images]
    corners = {}
    P = recolor(h.row_images[0], shape, color)
    for l in range(1, t + 1):
        for s in range(1, shape.r + 1):
            if l == color:
                corners[(l, s)] = recolor(h.corner_images[(1, s)], shape, color)
            else:
                corners[(l, s)] = scalar_times(
                    letter_element(shape, "y", l, s), P)
    return Homomorphism(shape, h.source_m, h.target_m, rows, corners)


def extend_tensor(h: Homomorphism, color: int, t: int) -> Homomorphism:
    """Extend a one-color map to t colors, acting at ``color`` and fixing the rest."""
    if h.shape.t != 1:
        raise ShapeError("extend_tensor expects a one-color homomorphism")
    if not 1 <= color <= t:
        raise ShapeError(f"color {color} out of range [1..{t}]")
    e = _extend_tensor_bare(h, color, t)
    if h.inverse is not None:
        ei = _extend_tensor_bare(h.inverse, color, t)
        e.inverse = ei
        ei.inverse = e
    return e


# ---------------------------------------------------------------------------
# The unit lemma and the diagonal-sum conjugation
# ---------------------------------------------------------------------------

def kaplansky_unit(m1: int, m2: int, s: int) -> int:
    """Least positive u with u m1 = m2 (mod s) and gcd(u, s) = 1.

    Requires gcd(m1, s) = gcd(m2, s), which guarantees existence; for
    s = 0 the answer is whichever of +-1 carries m1 to m2.
    """
    if math.gcd(m1, s) != math.gcd(m2, s):
        raise ShapeError(
            f"gcd precondition fails: gcd({m1},{s}) != gcd({m2},{s})")
    if s == 0:
        return 1 if m1 == m2 else -1
    sa = abs(s)
    for u in range(1, 2 * sa + 1):
        if (u * m1 - m2) % sa == 0 and math.gcd(u, sa) == 1:
            return u
    raise LeavittError("internal defect: unit search exhausted its bound")


def _bridge(shape: Shape, m_from: int, m_to: int) -> RingElement:
    """A positive unitary m_from-by-m_to matrix, via chained diagonal sums."""
    if m_from == m_to:
        return identity(shape, m_from)
    lo, hi = min(m_from, m_to), max(m_from, m_to)
    prod = None
    cur = lo
    while cur < hi:
        step = row_of_y(shape, 1)
        if cur > 1:
            step = direct_sum([step, identity(shape, cur - 1)])
        prod = step if prod is None else prod * step
        cur += shape.r - 1
    assert cur == hi
    return prod if m_from == lo else prod.involute()


def rect_conjugation_iso(m_from: int, m_to: int, shape: Shape) -> Homomorphism:
    """The isomorphism Mat_{m_from} -> Mat_{m_to}, M -> Y* M Y.

    Y is a positive unitary m_from-by-m_to matrix assembled from diagonal
    sums (y_1,...,y_r) (+) I; it exists exactly when
    m_from = m_to (mod r-1).  The recorded inverse conjugates by Y*.
    """
    if (m_from - m_to) % (shape.r - 1) != 0:
        raise NoIsomorphismError(
            f"no conjugation bridge: {m_from} and {m_to} differ mod r-1 = "
            f"{shape.r - 1}")
    Y = _bridge(shape, m_from, m_to)

    def conj_table(Y, a, b):
        Ystar = Y.involute()
        rows = [Ystar * matrix_unit(shape, a, a, i, 1) * Y
                for i in range(1, a + 1)]
        corners = {
            (l, s): Ystar * scalar_times(
                letter_element(shape, "y", l, s),
                matrix_unit(shape, a, a, 1, 1)) * Y
            for l in range(1, shape.t + 1)
            for s in range(1, shape.r + 1)
        }
        return Homomorphism(shape, a, b, rows, corners)

    h = conj_table(Y, m_from, m_to)
    hi = conj_table(Y.involute(), m_to, m_from)
    h.inverse = hi
    hi.inverse = h
    return h


# ---------------------------------------------------------------------------
# The direct isomorphism scalars ~ Mat_m for r >= 3, m > r, gcd(m, r-1) = 1
# ---------------------------------------------------------------------------

def pi_map(r: int, m: int, i: int) -> int:
    """The bookkeeping permutation of Z: shift up by r-1, with each pair
    (km, km+1) shifted and interchanged."""
    rem = i % m
    if rem == 0:
        return i + r
    if rem == 1:
        return i + r - 2
    return i + r - 1


def pi_inv(r: int, m: int, k: int) -> int:
    rem = k % m
    if rem == r % m:
        return k - r
    if rem == (r - 1) % m:
        return k - r + 2
    return k - r + 1


def orbit_rep(r: int, m: int, i: int) -> int:
    """The unique representative in [2..r] of i's orbit under pi."""
    while i > r:
        i = pi_inv(r, m, i)
    while i < 2:
        i = pi_map(r, m, i)
    assert 2 <= i <= r
    return i


def _sharp(r: int, m: int, s: int, j: int) -> int:
    """The unique element of [(1+(r-1)j)..((r-1)(j+1))] in s's pi-orbit."""
    lo = 1 + (r - 1) * j
    hi = (r - 1) * (j + 1)
    k = s
    while k < lo:
        k = pi_map(r, m, k)
    assert k <= hi, f"orbit of {s} skipped the window [{lo}..{hi}]"
    return k


class AapData:
    """All data of the direct construction for one (r, m).

    Attributes
    ----------
    sharp : dict (s, j) -> s#j for s in [2..r], j in [1..m-1]
    y_assign : dict k -> y-word, k in [r+m-1 .. m r]; the tail row entries
    Y : the m-by-mr positive unitary; blocks: its m-column blocks Y_1..Y_r
    cycle : the m-cycle j -> (j-r+1) mod m starting at m; top/bottom are
        the two arcs of the cycle cut at the distinguished edges
        r-1 -> m and r -> 1
    pre_e / pre_e_compl : scalar preimages of E_i = sum_{j<=i} e[j,j] and
        of its complement, indexed 1..m
    preimages : dict with keys ("e", i, j), ("ye", j) for y_j e[1,j], and
        ("ycorner", s) for y_s e[1,1]; every value maps forward to its key
    """

    def __init__(self, r, m, shape, sharp, y_assign, Y, blocks,
                 cycle, top, bottom, pre_e, pre_e_compl, pre_diag, preimages):
        self.r = r
        self.m = m
        self.shape = shape
        self.sharp = sharp
        self.y_assign = y_assign
        self.Y = Y
        self.blocks = blocks
        self.cycle = cycle
        self.top = top
        self.bottom = bottom
        self.pre_e = pre_e
        self.pre_e_compl = pre_e_compl
        self.pre_diag = pre_diag
        self.preimages = preimages

    def pi(self, i):
        return pi_map(self.r, self.m, i)

    def pi_inverse(self, k):
        return pi_inv(self.r, self.m, k)

    def orbit_rep(self, i):
        return orbit_rep(self.r, self.m, i)


@functools.lru_cache(maxsize=None)
def aap_data(r: int, m: int) -> AapData:
    """Build the direct-construction data for r >= 3, m > r, gcd(m,r-1) = 1."""
    if r < 3:
        raise ShapeError("the direct construction needs r >= 3")
    if m <= r:
        raise ShapeError("the direct construction needs m > r")
    if math.gcd(m, r - 1) != 1:
        raise ShapeError("the direct construction needs gcd(m, r-1) = 1")
    shape = Shape(r, 1)

    sharp = {(s, j): _sharp(r, m, s, j)
             for s in range(2, r + 1) for j in range(1, m)}
    y_assign = {r + m - 1: (1,) * (m - 1)}
    for (s, j), v in sharp.items():
        y_assign[v + m] = (1,) * (j - 1) + (s,)
    assert sorted(y_assign) == list(range(r + m - 1, m * r + 1))

    width = (m - 1) * (r - 1) + 1
    tail = RingElement(shape, 1, width, {
        (1, k - (r + m - 1) + 1, ((y_assign[k], ()),)): 1
        for k in range(r + m - 1, m * r + 1)
    })
    Y = direct_sum([row_of_y(shape, 1), identity(shape, m - 2), tail])

    def column_block(s):
        lo, hi = (s - 1) * m, s * m
        terms = {(i, j - lo, mono): c
                 for (i, j, mono), c in Y.terms.items() if lo < j <= hi}
        return RingElement(shape, m, m, terms)

    blocks = tuple(column_block(s) for s in range(1, r + 1))

    cycle = [m]
    v = m
    for _ in range(m - 1):
        v = ((v - r) % m) + 1
        cycle.append(v)
    assert len(set(cycle)) == m and cycle[-1] == r - 1
    i_r = cycle.index(r)
    top = tuple(cycle[:i_r + 1])
    bottom = tuple(cycle[i_r + 1:])
    assert bottom[0] == 1

    y = {s: letter_element(shape, "y", 1, s) for s in range(1, r + 1)}
    x = {s: y[s].involute() for s in range(1, r + 1)}

    def yx_sum(lo):
        acc = None
        for s in range(lo, r + 1):
            term = y[s] * x[s]
            acc = term if acc is None else acc + term
        return acc if acc is not None else RingElement(shape, 1, 1)

    # E_i and its complement, traveling the cycle from m down to r-1
    pre_e = {m: scalar(shape, 1)}
    pre_e_compl = {m: RingElement(shape, 1, 1)}
    for k in range(m - 1):
        v, v2 = cycle[k], cycle[k + 1]
        if v >= r:
            pre_e[v2] = y[1] * pre_e[v] * x[1]
            pre_e_compl[v2] = y[1] * pre_e_compl[v] * x[1] + yx_sum(2)
        else:  # v <= r-2
            pre_e[v2] = y[2] * pre_e[v] * x[2] + y[1] * x[1]
            pre_e_compl[v2] = y[2] * pre_e_compl[v] * x[2] + yx_sum(3)

    # diagonal units e[j,j], same travel; the edges r-1 -> m and r -> 1
    # are distinguished and never stepped over
    pre_diag = {1: pre_e[1], m: pre_e_compl[m - 1]}
    for k in range(m - 1):
        v, v2 = cycle[k], cycle[k + 1]
        if v == r:
            continue
        src = pre_diag[v]
        if v >= r + 1:
            pre_diag[v2] = y[1] * src * x[1]
        else:
            pre_diag[v2] = y[2] * src * x[2]

    edges = {}
    for k in range(m - 1):
        v, v2 = cycle[k], cycle[k + 1]
        if v == r:
            continue
        lett = y[1] if v >= r + 1 else y[2]
        edges[(v2, v)] = pre_diag[v2] * lett * pre_diag[v]

    arc_index = {}
    for idx, vv in enumerate(top):
        arc_index[vv] = (0, idx)
    for idx, vv in enumerate(bottom):
        arc_index[vv] = (1, idx)

    def arc_unit(p_to, p_from):
        """Preimage of e[p_to, p_from] for two points on the same arc."""
        (a1, i1) = arc_index[p_to]
        (a2, i2) = arc_index[p_from]
        assert a1 == a2, f"{p_to} and {p_from} lie on different arcs"
        if i1 == i2:
            return pre_diag[p_to]
        arc = top if a1 == 0 else bottom
        if i1 > i2:
            acc = None
            for idx in range(i2, i1):
                e = edges[(arc[idx + 1], arc[idx])]
                acc = e if acc is None else e * acc
            return acc
        return arc_unit(p_from, p_to).involute()

    # corner targets y_j e[1,j] and the tail row entries y_k e[m, k mod m]
    pre_ye = {j: pre_diag[1] * y[1] * pre_diag[j] for j in range(1, r + 1)}

    def pre_tail_unit(kk):
        s2 = (kk - 1) // m + 1
        j2 = (kk - 1) % m + 1
        return pre_diag[m] * y[s2] * pre_diag[j2]

    # e[1,m] via the expansion of 1 into y_1^{m-1} x_1^{m-1} plus the
    # pieces y_1^{j-1} y_s x_s x_1^{j-1}
    powers = [scalar(shape, 1)]
    for _ in range(m - 1):
        powers.append(powers[-1] * pre_ye[1])
    e1m = powers[m - 1] * arc_unit(1, r - 1) * pre_tail_unit(r - 1 + m).involute()
    for j in range(1, m):
        for s in range(2, r + 1):
            sj = sharp[(s, j)]
            sjm = ((sj - 1) % m) + 1
            part = (powers[j - 1] * pre_ye[s] * arc_unit(s, sjm)
                    * pre_tail_unit(sj + m).involute())
            e1m = e1m + part
    e_m1 = e1m.involute()

    pre_row = {}
    for i in range(1, m + 1):
        if arc_index[i][0] == 1:
            pre_row[i] = arc_unit(i, 1)
        else:
            pre_row[i] = arc_unit(i, m) * e_m1

    preimages = {}
    pre_col = {j: pre_row[j].involute() for j in range(1, m + 1)}
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            preimages[("e", i, j)] = pre_row[i] * pre_col[j]
    for jj in range(1, r + 1):
        preimages[("ye", jj)] = pre_ye[jj]
        preimages[("ycorner", jj)] = pre_ye[jj] * pre_row[jj]

    return AapData(r, m, shape, sharp, y_assign, Y, blocks,
                   tuple(cycle), top, bottom, pre_e, pre_e_compl,
                   pre_diag, preimages)


@functools.lru_cache(maxsize=None)
def _aap_pair(r: int, m: int):
    data = aap_data(r, m)
    shape = data.shape
    forward = Homomorphism(
        shape, 1, m, [identity(shape, m)],
        {(1, s): data.blocks[s - 1] for s in range(1, r + 1)})
    backward = Homomorphism(
        shape, m, 1,
        [data.preimages[("e", i, 1)] for i in range(1, m + 1)],
        {(1, s): data.preimages[("ycorner", s)] for s in range(1, r + 1)})
    forward.inverse = backward
    backward.inverse = forward
    if not forward.verify() or not backward.verify():
        raise LeavittError(
            f"internal defect: the direct isomorphism for (r={r}, m={m}) "
            f"fails its relation check")
    return forward, backward


def aap_hom(r: int, m: int) -> Homomorphism:
    """The isomorphism scalars -> Mat_m(scalars), y_s -> Y_s (t = 1)."""
    return _aap_pair(r, m)[0]


def aap_inverse_hom(r: int, m: int) -> Homomorphism:
    """The inverse isomorphism, built from the explicit preimage table."""
    return _aap_pair(r, m)[1]


# ---------------------------------------------------------------------------
# The composed gcd isomorphism
# ---------------------------------------------------------------------------

def gcd_iso(r: int, t: int, m1: int, m2: int) -> Homomorphism:
    """An isomorphism Mat_{m1}(scalars) -> Mat_{m2}(scalars) with recorded
    inverse, for gcd(m1, r-1) = gcd(m2, r-1); otherwise NoIsomorphismError.

    For r = 2 a single conjugation bridge suffices (all sizes congruent
    mod 1).  For r >= 3 the route is: pick a unit u > r with
    u m1 = m2 (mod r-1), blow up entrywise through the direct isomorphism
    scalars ~ Mat_u, then bridge m1 u to m2 by conjugation; finally the
    one-color map is extended to all t colors.
    """
    if r < 2 or t < 1 or m1 < 1 or m2 < 1:
        raise ShapeError("need r >= 2, t >= 1, m1, m2 >= 1")
    g1 = math.gcd(m1, r - 1)
    g2 = math.gcd(m2, r - 1)
    if g1 != g2:
        raise NoIsomorphismError(
            f"gcd(m1, r-1) = {g1} but gcd(m2, r-1) = {g2}; the gcd is an "
            f"isomorphism invariant, so no isomorphism exists")
    base = Shape(r, 1)
    if r == 2:
        h = rect_conjugation_iso(m1, m2, base)
    else:
        u = kaplansky_unit(m1, m2, r - 1)
        while u <= r:
            u += r - 1
        h1 = extend_entrywise(aap_hom(r, u), m1)
        h2 = rect_conjugation_iso(m1 * u, m2, base)
        h = compose_hom(h1, h2)
    if t > 1:
        h = extend_tensor(h, 1, t)
    if not h.verify() or not h.inverse.verify():
        raise LeavittError(
            "internal defect: the composed isomorphism fails its relation check")
    return h
