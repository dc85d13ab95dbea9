# cython: language_level=3
"""Compiled hot kernels. Same surface and semantics as ``_fallback``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport ldexp

cnp.import_array()

BACKEND = "cython"
COMPENSATION_THRESHOLD = 64
cdef Py_ssize_t _THRESHOLD = COMPENSATION_THRESHOLD


cdef void _sym_sums_into(const double[:] v, double[:] e, double[:] c) noexcept nogil:
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i, j
    cdef double x, p, s, bp, err
    e[0] = 1.0
    c[0] = 0.0
    for j in range(1, n + 1):
        e[j] = 0.0
        c[j] = 0.0
    if n <= _THRESHOLD:
        for i in range(n):
            x = v[i]
            for j in range(i + 1, 0, -1):
                e[j] += x * e[j - 1]
        return
    for i in range(n):
        x = v[i]
        for j in range(i + 1, 0, -1):
            p = x * e[j - 1]
            s = e[j] + p
            bp = s - e[j]
            err = (e[j] - (s - bp)) + (p - bp)
            c[j] += err + x * c[j - 1]
            e[j] = s
    for j in range(n + 1):
        e[j] += c[j]


def sym_sums(values):
    """Elementary symmetric sums e_0..e_N of ``values``."""
    cdef const double[:] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    e = np.empty(n + 1)
    c = np.empty(n + 1)
    _sym_sums_into(v, e, c)
    return e


def omega(x1, x2):
    """Alternating even-subset aggregate via the paired-product recurrence."""
    cdef const double[:] a = np.ascontiguousarray(x1, dtype=np.float64)
    cdef const double[:] b = np.ascontiguousarray(x2, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double even = 1.0, odd = 0.0, t
    for i in range(a.shape[0]):
        t = even * a[i] - odd * b[i]
        odd = odd * a[i] + even * b[i]
        even = t
    return even


cdef inline const double* _vec(object arr, Py_ssize_t n, list keep) except NULL:
    # contiguous float64 view of arr; keep holds any converted copy alive
    cdef cnp.ndarray a
    if isinstance(arr, cnp.ndarray) and cnp.PyArray_TYPE(<cnp.ndarray>arr) == cnp.NPY_DOUBLE \
            and cnp.PyArray_IS_C_CONTIGUOUS(<cnp.ndarray>arr):
        a = <cnp.ndarray>arr
    else:
        a = np.ascontiguousarray(arr, dtype=np.float64)
        keep.append(a)
    if a.ndim != 1 or a.shape[0] != n:
        raise ValueError("outcome length does not match coefficient count")
    return <const double*>cnp.PyArray_DATA(a)


def ghz_prob(bytes bits, k, double cos_g, double omega_term):
    """Unclamped GHZ outcome probability for one outcome given as b"0101..."."""
    cdef Py_ssize_t n = len(bits), i
    cdef list keep = []
    cdef const double* kk = _vec(k, n, keep)
    cdef const unsigned char* b = bits
    cdef double even = 1.0, odd = 0.0, parity = 1.0, z, t
    for i in range(n):
        if b[i] == 49:
            z = -kk[i]
            parity = -parity
        else:
            z = kk[i]
        t = even + z * odd
        odd = odd + z * even
        even = t
    return ldexp(even + cos_g * odd + parity * omega_term, <int>-n)


def w_prob(bytes bits, k, x1, x2):
    """Unclamped W outcome probability for one outcome given as b"0101..."."""
    cdef Py_ssize_t n = len(bits), i
    cdef list keep = []
    cdef const double* kk = _vec(k, n, keep)
    cdef const double* a = _vec(x1, n, keep)
    cdef const double* c2 = _vec(x2, n, keep)
    cdef const unsigned char* b = bits
    cdef double base = 1.0, single = 0.0, px = 0.0, py = 0.0, done = 0.0, z, s, f
    for i in range(n):
        s = -1.0 if b[i] == 49 else 1.0
        z = s * kk[i]
        f = 1.0 + z
        done = done * f + s * (px * a[i] + py * c2[i])
        px = px * f + base * s * a[i]
        py = py * f + base * s * c2[i]
        single = single * f + base * (1.0 - z)
        base = base * f
    return ldexp(single + 2.0 * done, <int>-n) / n


def ghz_dense(k, double cos_g, double omega_term):
    """All 2^N GHZ probabilities (player 1 = most significant bit)."""
    cdef const double[:] kk = np.ascontiguousarray(k, dtype=np.float64)
    cdef Py_ssize_t n = kk.shape[0], idx, q, size = (<Py_ssize_t>1) << n
    out = np.empty(size)
    cdef double[:] o = out
    cdef double even, odd, t, z, parity
    with nogil:
        for idx in range(size):
            even = 1.0
            odd = 0.0
            parity = 1.0
            for q in range(n):
                if (idx >> (n - 1 - q)) & 1:
                    z = -kk[q]
                    parity = -parity
                else:
                    z = kk[q]
                t = even + z * odd
                odd = odd + z * even
                even = t
            o[idx] = ldexp(even + cos_g * odd + parity * omega_term, <int>-n)
    return out


def w_dense(k, x1, x2):
    """All 2^N W-state probabilities."""
    cdef const double[:] kk = np.ascontiguousarray(k, dtype=np.float64)
    cdef const double[:] a = np.ascontiguousarray(x1, dtype=np.float64)
    cdef const double[:] b = np.ascontiguousarray(x2, dtype=np.float64)
    cdef Py_ssize_t n = kk.shape[0], idx, q, size = (<Py_ssize_t>1) << n
    out = np.empty(size)
    cdef double[:] o = out
    cdef double base, single, px, py, done, z, s, f
    with nogil:
        for idx in range(size):
            base = 1.0
            single = 0.0
            px = 0.0
            py = 0.0
            done = 0.0
            for q in range(n):
                s = -1.0 if (idx >> (n - 1 - q)) & 1 else 1.0
                z = s * kk[q]
                f = 1.0 + z
                done = done * f + s * (px * a[q] + py * b[q])
                px = px * f + base * s * a[q]
                py = py * f + base * s * b[q]
                single = single * f + base * (1.0 - z)
                base = base * f
            o[idx] = ldexp(single + 2.0 * done, <int>-n) / n
    return out
