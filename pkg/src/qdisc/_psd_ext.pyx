# cython: language_level=3, boundscheck=False, wraparound=False
"""GMP-backed fraction-free PSD kernels; same algorithms as ``_psd_py``."""

from libc.stdlib cimport malloc, free


cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    ctypedef __mpz_struct* mpz_ptr

    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_ptr)
    void mpz_set_ui(mpz_ptr, unsigned long)
    void mpz_set_si(mpz_ptr, long)
    int mpz_set_str(mpz_ptr, const char*, int)
    void mpz_mul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_mul_si(mpz_ptr, mpz_ptr, long)
    void mpz_mul_ui(mpz_ptr, mpz_ptr, unsigned long)
    void mpz_submul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_addmul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_sub(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_add(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_divexact(mpz_ptr, mpz_ptr, mpz_ptr)
    int mpz_sgn(mpz_ptr)
    int mpz_cmp(mpz_ptr, mpz_ptr)


cdef class _MpzArray:
    cdef __mpz_struct* data
    cdef Py_ssize_t size

    def __cinit__(self, Py_ssize_t size):
        self.size = 0
        self.data = <__mpz_struct*> malloc(size * sizeof(__mpz_struct))
        if self.data == NULL:
            raise MemoryError()
        cdef Py_ssize_t i
        for i in range(size):
            mpz_init(&self.data[i])
        self.size = size

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.data != NULL:
            for i in range(self.size):
                mpz_clear(&self.data[i])
            free(self.data)


cdef inline void _load(__mpz_struct* dst, object value):
    cdef bytes s
    if -(1 << 62) < value < (1 << 62):
        mpz_set_si(dst, <long> value)
    else:
        s = format(value, "x").encode("ascii")
        mpz_set_str(dst, s, 16)


def psd_int(rows):
    """PSD test of a symmetric integer matrix (list of rows)."""
    cdef Py_ssize_t n = len(rows)
    cdef _MpzArray m = _MpzArray(n * n)
    cdef _MpzArray tmp = _MpzArray(2)
    cdef __mpz_struct* M = m.data
    cdef __mpz_struct* prev = &tmp.data[0]
    cdef __mpz_struct* t = &tmp.data[1]
    cdef Py_ssize_t i, j, k, a, b, na
    cdef int s
    for i in range(n):
        row = rows[i]
        for j in range(n):
            _load(&M[i * n + j], row[j])
    cdef Py_ssize_t* active = <Py_ssize_t*> malloc((n + 1) * sizeof(Py_ssize_t))
    if active == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            active[i] = i
        na = n
        mpz_set_ui(prev, 1)
        while na > 0:
            k = active[0]
            for i in range(na - 1):
                active[i] = active[i + 1]
            na -= 1
            s = mpz_sgn(&M[k * n + k])
            if s < 0:
                return False
            if s == 0:
                for a in range(na):
                    if mpz_sgn(&M[k * n + active[a]]) != 0:
                        return False
                continue
            for a in range(na):
                i = active[a]
                for b in range(a, na):
                    j = active[b]
                    mpz_mul(t, &M[k * n + k], &M[i * n + j])
                    mpz_submul(t, &M[i * n + k], &M[k * n + j])
                    mpz_divexact(&M[i * n + j], t, prev)
                    if i != j:
                        mpz_set(&M[j * n + i], &M[i * n + j])
            mpz_set(prev, &M[k * n + k])
        return True
    finally:
        free(active)


cdef int _qsign(__mpz_struct* a, __mpz_struct* b, unsigned long d,
                __mpz_struct* t1, __mpz_struct* t2):
    cdef int sa = mpz_sgn(a)
    cdef int sb = mpz_sgn(b)
    cdef int c
    if sa >= 0 and sb >= 0:
        return 1 if (sa != 0 or sb != 0) else 0
    if sa <= 0 and sb <= 0:
        return -1
    mpz_mul(t1, a, a)
    mpz_mul(t2, b, b)
    mpz_mul_ui(t2, t2, d)
    c = mpz_cmp(t1, t2)
    c = (c > 0) - (c < 0)
    return c if sa > 0 else -c


def psd_quad(rows_a, rows_b, unsigned long d):
    """PSD test of a symmetric matrix with entries ``a + b*sqrt(d)`` over Z."""
    cdef Py_ssize_t n = len(rows_a)
    cdef _MpzArray ma = _MpzArray(n * n)
    cdef _MpzArray mb = _MpzArray(n * n)
    cdef _MpzArray tmp = _MpzArray(8)
    cdef __mpz_struct* A = ma.data
    cdef __mpz_struct* B = mb.data
    cdef __mpz_struct* pa = &tmp.data[0]
    cdef __mpz_struct* pb = &tmp.data[1]
    cdef __mpz_struct* ta = &tmp.data[2]
    cdef __mpz_struct* tb = &tmp.data[3]
    cdef __mpz_struct* norm = &tmp.data[4]
    cdef __mpz_struct* u = &tmp.data[5]
    cdef __mpz_struct* w1 = &tmp.data[6]
    cdef __mpz_struct* w2 = &tmp.data[7]
    cdef Py_ssize_t i, j, k, a, b, na, kk, ij, ik, kj
    cdef int s
    for i in range(n):
        ra = rows_a[i]
        rb = rows_b[i]
        for j in range(n):
            _load(&A[i * n + j], ra[j])
            _load(&B[i * n + j], rb[j])
    cdef Py_ssize_t* active = <Py_ssize_t*> malloc((n + 1) * sizeof(Py_ssize_t))
    if active == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            active[i] = i
        na = n
        mpz_set_ui(pa, 1)
        mpz_set_ui(pb, 0)
        while na > 0:
            k = active[0]
            for i in range(na - 1):
                active[i] = active[i + 1]
            na -= 1
            kk = k * n + k
            s = _qsign(&A[kk], &B[kk], d, w1, w2)
            if s < 0:
                return False
            if s == 0:
                for a in range(na):
                    j = active[a]
                    if mpz_sgn(&A[k * n + j]) != 0 or mpz_sgn(&B[k * n + j]) != 0:
                        return False
                continue
            # norm = pa^2 - d pb^2
            mpz_mul(norm, pa, pa)
            mpz_mul(u, pb, pb)
            mpz_mul_ui(u, u, d)
            mpz_sub(norm, norm, u)
            for a in range(na):
                i = active[a]
                ik = i * n + k
                for b in range(a, na):
                    j = active[b]
                    ij = i * n + j
                    kj = k * n + j
                    # ta = ka*xa + d*kb*xb - (ia*ya + d*ib*yb)
                    mpz_mul(ta, &A[kk], &A[ij])
                    mpz_submul(ta, &A[ik], &A[kj])
                    mpz_mul(u, &B[kk], &B[ij])
                    mpz_submul(u, &B[ik], &B[kj])
                    mpz_mul_ui(u, u, d)
                    mpz_add(ta, ta, u)
                    # tb = ka*xb + kb*xa - (ia*yb + ib*ya)
                    mpz_mul(tb, &A[kk], &B[ij])
                    mpz_addmul(tb, &B[kk], &A[ij])
                    mpz_submul(tb, &A[ik], &B[kj])
                    mpz_submul(tb, &B[ik], &A[kj])
                    # qa = (ta*pa - d*tb*pb) / norm ; qb = (tb*pa - ta*pb) / norm
                    mpz_mul(w1, ta, pa)
                    mpz_mul(w2, tb, pb)
                    mpz_mul_ui(w2, w2, d)
                    mpz_sub(w1, w1, w2)
                    mpz_mul(w2, tb, pa)
                    mpz_submul(w2, ta, pb)
                    mpz_divexact(&A[ij], w1, norm)
                    mpz_divexact(&B[ij], w2, norm)
                    if i != j:
                        mpz_set(&A[j * n + i], &A[ij])
                        mpz_set(&B[j * n + i], &B[ij])
            mpz_set(pa, &A[kk])
            mpz_set(pb, &B[kk])
        return True
    finally:
        free(active)
