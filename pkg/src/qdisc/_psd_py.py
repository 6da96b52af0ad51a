"""Pure-Python fraction-free PSD kernels (fallback for the compiled ``_psd_ext``).

Both kernels run symmetric Bareiss elimination with diagonal pivots in order.
At every stage the working matrix equals the last positive pivot times the
Schur complement, so diagonal signs are the LDL^T pivot signs.  A zero pivot
is accepted only if its whole row in the working matrix vanishes, in which
case the index is dropped.
"""


def psd_int(rows):
    """PSD test of a symmetric integer matrix given as a list of rows."""
    n = len(rows)
    m = [list(r) for r in rows]
    active = list(range(n))
    prev = 1
    while active:
        k = active.pop(0)
        p = m[k][k]
        if p < 0:
            return False
        mk = m[k]
        if p == 0:
            for j in active:
                if mk[j] != 0:
                    return False
            continue
        for idx, i in enumerate(active):
            mi = m[i]
            mik = mi[k]
            for j in active[idx:]:
                v = (p * mi[j] - mik * mk[j]) // prev
                mi[j] = v
                m[j][i] = v
        prev = p
    return True


def _qsign(a, b, d):
    if a >= 0 and b >= 0:
        return 1 if (a or b) else 0
    if a <= 0 and b <= 0:
        return -1
    diff = a * a - b * b * d
    s = (diff > 0) - (diff < 0)
    return s if a > 0 else -s


def psd_quad(rows_a, rows_b, d):
    """PSD test of a symmetric matrix with entries ``a + b*sqrt(d)``, ``a, b`` integers.

    Bareiss quotients are minors of the input, so they stay in Z[sqrt d] and
    the division ``x / y = x * conj(y) / N(y)`` is exact coordinate-wise.
    """
    n = len(rows_a)
    A = [list(r) for r in rows_a]
    B = [list(r) for r in rows_b]
    active = list(range(n))
    pa, pb = 1, 0
    while active:
        k = active.pop(0)
        ka, kb = A[k][k], B[k][k]
        s = _qsign(ka, kb, d)
        if s < 0:
            return False
        Ak, Bk = A[k], B[k]
        if s == 0:
            for j in active:
                if Ak[j] != 0 or Bk[j] != 0:
                    return False
            continue
        norm = pa * pa - d * pb * pb
        for idx, i in enumerate(active):
            Ai, Bi = A[i], B[i]
            ia, ib = Ai[k], Bi[k]
            for j in active[idx:]:
                xa, xb = Ai[j], Bi[j]
                ya, yb = Ak[j], Bk[j]
                # pivot * x - (i,k) * (k,j)
                ta = ka * xa + d * kb * xb - (ia * ya + d * ib * yb)
                tb = ka * xb + kb * xa - (ia * yb + ib * ya)
                # divide by prev = pa + pb sqrt d
                qa = (ta * pa - d * tb * pb) // norm
                qb = (tb * pa - ta * pb) // norm
                Ai[j] = qa
                Bi[j] = qb
                A[j][i] = qa
                B[j][i] = qb
        pa, pb = ka, kb
    return True
