"""Pure-Python reference versions of the inner loops.

``_speedups.pyx`` mirrors every function here with the same signature
and semantics; :mod:`nonor4.kernels` picks one of the two at import.
"""


def arf_ones(diag, rows, n):
    """Count x in Z_2^n with q(x) = 1.

    ``q(x) = sum diag_i x_i + sum_{i<j} S_ij x_i x_j`` where ``diag`` is a
    bitmask of the linear terms and ``rows[k]`` is the bitmask of row k of
    the symmetric off-diagonal part S (bit k clear).  Walks a Gray code so
    each step costs one popcount.
    """
    x = 0
    q = 0
    ones = 0
    for s in range(1, 1 << n):
        k = (s & -s).bit_length() - 1
        delta = ((diag >> k) & 1) ^ ((rows[k] & x).bit_count() & 1)
        q ^= delta
        x ^= 1 << k
        ones += q
    return ones


def residue_counts(weights, moduli, modulus):
    """Histogram of ``sum_i weights[i] * x_i**2 mod modulus``.

    x ranges over the product of ``range(moduli[i])``.  Returns a list of
    length ``modulus``.
    """
    counts = [0] * modulus
    k = len(weights)
    if k == 0:
        counts[0] = 1
        return counts
    # per-coordinate contribution tables
    tables = [[(w * x * x) % modulus for x in range(m)] for w, m in zip(weights, moduli)]
    acc = {0: 1}
    for table in tables:
        nxt = {}
        for v, c in acc.items():
            for t in table:
                key = (v + t) % modulus
                nxt[key] = nxt.get(key, 0) + c
        acc = nxt
    for v, c in acc.items():
        counts[v] = c
    return counts


def coset_min(a, b, c, rx, ry, box):
    """Minimum of ``c*x^2 - 2*b*x*y + a*y^2`` over a coset of 2Z^2.

    (x, y) ranges over integers with x = rx, y = ry (mod 2) and
    |x|, |y| <= box.  For the matrix [[a, b], [b, c]] this is det times
    the quadratic form of its inverse.
    """
    best = None
    x0 = -box if (-box - rx) % 2 == 0 else -box + 1
    y0 = -box if (-box - ry) % 2 == 0 else -box + 1
    for x in range(x0, box + 1, 2):
        cx = c * x * x
        bx = 2 * b * x
        for y in range(y0, box + 1, 2):
            v = cx - bx * y + a * y * y
            if best is None or v < best:
                best = v
    return best
