"""Independent brute-force normalizer used as a rewriting oracle.

Rewrites raw words by naive subword search to a fixpoint, applying the
rightmost redex first (the production engine folds left to right), so
agreement between the two paths is evidence of confluence rather than
shared code.
"""

from leavitt.core import Letter, MatrixUnit, RingElement, Shape


def normalize_word_naive(r, letters):
    """Normal form of a mixed one-color word as a dict (yword, xword) -> coeff."""
    pending = [(tuple(letters), 1)]
    done = {}
    steps = 0
    while pending:
        word, coeff = pending.pop()
        steps += 1
        assert steps < 5_000_000, "runaway rewriting"
        redex = None
        for q in range(len(word) - 2, -1, -1):
            (k1, s1), (k2, s2) = word[q], word[q + 1]
            if k1 == "x" and k2 == "y":
                redex = ("xy", q)
                break
            if k1 == "y" and s1 == r and k2 == "x" and s2 == r:
                redex = ("junction", q)
                break
        if redex is None:
            yw = tuple(s for k, s in word if k == "y")
            xw = tuple(s for k, s in word if k == "x")
            key = (yw, xw)
            c = done.get(key, 0) + coeff
            if c:
                done[key] = c
            else:
                del done[key]
            continue
        kind, q = redex
        s1 = word[q][1]
        s2 = word[q + 1][1]
        head, tail = word[:q], word[q + 2:]
        if kind == "xy":
            if s1 == s2:
                pending.append((head + tail, coeff))
        else:
            pending.append((head + tail, coeff))
            for s in range(1, r):
                pending.append((head + (("y", s), ("x", s)) + tail, -coeff))
    return done


def normalize_naive(shape, raw_terms, dims=(1, 1)):
    """Oracle twin of leavitt.core.normalize, over the naive word rewriter."""
    m, n = dims
    out = {}
    for coeff, factors in raw_terms:
        unit = None
        words = [[] for _ in range(shape.t)]
        dead = False
        for f in factors:
            if isinstance(f, MatrixUnit):
                if unit is None:
                    unit = (f.i, f.j)
                elif unit[1] == f.i:
                    unit = (unit[0], f.j)
                else:
                    dead = True
                    break
            else:
                words[f.color - 1].append((f.kind, f.index))
        if dead or coeff == 0:
            continue
        if unit is None:
            unit = (1, 1)
        partial = {(): coeff}
        for letters in words:
            d = normalize_word_naive(shape.r, letters)
            partial = {
                prefix + (pair,): c0 * c1
                for prefix, c0 in partial.items()
                for pair, c1 in d.items()
            }
            if not partial:
                break
        i, j = unit
        for mono, c in partial.items():
            key = (i, j, mono)
            nc = out.get(key, 0) + c
            if nc:
                out[key] = nc
            else:
                del out[key]
    return RingElement(shape, m, n, out)


def random_raw_terms(rng, shape, dims=(1, 1), max_terms=3, max_len=12):
    """Random signed products of letters (and units for matrix dims)."""
    m, n = dims
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        coeff = rng.choice([-2, -1, 1, 1, 1, 2, 3])
        factors = []
        if (m, n) != (1, 1):
            factors.append(MatrixUnit(rng.randint(1, m), rng.randint(1, n)))
        for _ in range(rng.randint(0, max_len)):
            factors.append(Letter(rng.choice("yx"),
                                  rng.randint(1, shape.t),
                                  rng.randint(1, shape.r)))
        terms.append((coeff, factors))
    return terms


def random_element(rng, shape, dims=(1, 1), max_terms=3, max_len=6):
    """A random normal-form element, via the production normalizer."""
    from leavitt.core import normalize
    return normalize(shape,
                     random_raw_terms(rng, shape, dims, max_terms, max_len),
                     dims)
