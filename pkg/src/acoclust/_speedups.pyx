# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled construction kernel, mirror of _pykernels.construct_sweep.

The arithmetic must stay statement for statement identical to the pure
kernel, and setup.py compiles this module with FMA contraction disabled,
so both backends produce bit-identical runs from the same seed.
"""

from libc.math cimport INFINITY, log, pow
from libc.stdlib cimport free, malloc

BACKEND = "compiled"

ctypedef unsigned long long u64


cdef inline u64 _next(u64 *state) noexcept nogil:
    cdef u64 z
    state[0] = state[0] + <u64>0x9E3779B97F4A7C15ULL
    z = state[0]
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _rand(u64 *state) noexcept nogil:
    return <double>(_next(state) >> 11) * (1.0 / 9007199254740992.0)


def construct_sweep(const double[:, ::1] points, const double[:, ::1] gamma,
                    double[:, ::1] gamma_aux, double[:, :, ::1] cents,
                    long long[:, ::1] assign, long long[:, ::1] sizes,
                    u64[::1] states, double alpha, double beta,
                    double q, double d_eps):
    """One full construction pass; see _pykernels.construct_sweep."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t p = points.shape[1]
    cdef Py_ssize_t mm = assign.shape[0]
    cdef Py_ssize_t kk = cents.shape[1]
    cdef Py_ssize_t step, m, i, k, jj, ksel
    cdef long long rem, pick, sz
    cdef u64 st
    cdef double u1, u2, g, tau_max, acc, diff, d_min, total, wk
    cdef double target, cum, r1, r2, lg1, lg2, score, best

    cdef long long *remaining = <long long *>malloc(mm * n * sizeof(long long))
    cdef long long *rem_count = <long long *>malloc(mm * sizeof(long long))
    cdef double *d = <double *>malloc(kk * sizeof(double))
    cdef double *w = <double *>malloc(kk * sizeof(double))
    if remaining == NULL or rem_count == NULL or d == NULL or w == NULL:
        free(remaining)
        free(rem_count)
        free(d)
        free(w)
        raise MemoryError()

    with nogil:
        for m in range(mm):
            rem_count[m] = n
            for i in range(n):
                remaining[m * n + i] = i

        for step in range(n):
            for m in range(mm):
                st = states[m]
                rem = rem_count[m]

                u1 = _rand(&st)
                pick = <long long>(u1 * <double>rem)
                # u1*rem can round up to rem itself when rem is large
                if pick >= rem:
                    pick = rem - 1
                i = <Py_ssize_t>remaining[m * n + pick]
                remaining[m * n + pick] = remaining[m * n + rem - 1]
                rem_count[m] = rem - 1

                tau_max = 0.0
                for k in range(kk):
                    g = gamma[i, k]
                    if g > tau_max:
                        tau_max = g
                if tau_max <= 0.0:
                    tau_max = 1.0

                d_min = INFINITY
                for k in range(kk):
                    acc = 0.0
                    for jj in range(p):
                        diff = points[i, jj] - cents[m, k, jj]
                        acc += diff * diff
                    if acc < d_eps:
                        acc = d_eps
                    d[k] = acc
                    if acc < d_min:
                        d_min = acc

                total = 0.0
                for k in range(kk):
                    wk = pow(gamma[i, k] / tau_max, alpha) * pow(d_min / d[k], beta)
                    w[k] = wk
                    total += wk

                u2 = _rand(&st)
                states[m] = st

                if total > 0.0:
                    target = u2 * total
                    ksel = kk - 1
                    cum = 0.0
                    for k in range(kk):
                        cum += w[k]
                        if target < cum:
                            ksel = k
                            break
                else:
                    ksel = 0
                    best = -INFINITY
                    for k in range(kk):
                        r1 = gamma[i, k] / tau_max
                        lg1 = log(r1) if r1 > 0.0 else -INFINITY
                        r2 = d_min / d[k]
                        lg2 = log(r2) if r2 > 0.0 else -INFINITY
                        score = alpha * lg1 + beta * lg2
                        if score > best:
                            best = score
                            ksel = k

                assign[m, i] = ksel
                sz = sizes[m, ksel] + 1
                sizes[m, ksel] = sz
                for jj in range(p):
                    cents[m, ksel, jj] = (<double>(sz - 1) * cents[m, ksel, jj]
                                          + points[i, jj]) / <double>sz
                gamma_aux[i, ksel] += q / d[ksel]

    free(remaining)
    free(rem_count)
    free(d)
    free(w)
