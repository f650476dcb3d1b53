# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as pisotile._purepy.

Integers are 64-bit here.  Callers must check the magnitude limits in
pisotile.kernels before dispatching; a return code of (-2, -2) from the
orbit kernel means a coordinate left the safe range mid-run.
"""
from libc.math cimport sqrtl

cdef extern from *:
    ctypedef long long i128 "__int128"

cdef long long COORD_LIMIT = 1LL << 40


cdef inline long long floordiv(long long x, long long y) nogil:
    cdef long long r = x / y
    if (x % y != 0) and ((x < 0) != (y < 0)):
        r -= 1
    return r


cdef inline i128 isqrt128(i128 n) nogil:
    cdef i128 r = <i128> sqrtl(<long double> n)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


cdef inline int step(long long a, long long b, long long D, long long q,
                     long long *U, long long *V) nogil:
    cdef long long m = b * V[0]
    cdef long long n = U[0] + a * V[0]
    cdef long long M = 2 * m + a * n
    cdef long long digit, s
    cdef i128 r
    if n == 0:
        digit = floordiv(M, 2 * q)
    else:
        r = isqrt128(<i128> n * <i128> n * <i128> D)
        if n > 0:
            s = <long long> r
        else:
            s = -(<long long> r) - 1
        digit = floordiv(M + s, 2 * q)
    U[0] = m - digit * q
    V[0] = n
    if U[0] > COORD_LIMIT or U[0] < -COORD_LIMIT or V[0] > COORD_LIMIT or V[0] < -COORD_LIMIT:
        return 1
    return 0


cdef int _brent(long long a, long long b, long long q, long long U, long long V,
                long long cap, long long *mu_out, long long *lam_out) nogil:
    cdef long long D = a * a + 4 * b
    cdef long long steps = 0, power = 1, lam = 1, mu = 0, i
    cdef long long tU = U, tV = V, hU = U, hV = V
    if step(a, b, D, q, &hU, &hV):
        return 2
    while tU != hU or tV != hV:
        if power == lam:
            tU = hU
            tV = hV
            power *= 2
            lam = 0
        if step(a, b, D, q, &hU, &hV):
            return 2
        lam += 1
        steps += 1
        if steps > cap:
            return 1
    tU = U
    tV = V
    hU = U
    hV = V
    for i in range(lam):
        step(a, b, D, q, &hU, &hV)
    while tU != hU or tV != hV:
        step(a, b, D, q, &tU, &tV)
        step(a, b, D, q, &hU, &hV)
        mu += 1
    mu_out[0] = mu
    lam_out[0] = lam
    return 0


def orbit_tail_period(long long a, long long b, long long q, long long U,
                      long long V, long long cap):
    cdef long long mu = 0, lam = 0
    cdef int status
    with nogil:
        status = _brent(a, b, q, U, V, cap, &mu, &lam)
    if status == 1:
        return -1, -1
    if status == 2:
        return -2, -2
    return mu, lam


def stripe_cover(estart, elabel, etarget, int depth, powK, powL, powR,
                 long long modulus, double beta2, double half_width):
    cdef int nnodes = len(estart) - 1
    cdef int nedges = len(elabel)
    cdef long long[:] es = _ll(estart)
    cdef long long[:] el = _ll(elabel)
    cdef long long[:] et = _ll(etarget)
    cdef long long[:] pK = _ll(powK)
    cdef long long[:] pL = _ll(powL)
    cdef long long[:] pR = _ll(powR)
    cdef long long[:] counts = _ll([0] * modulus)
    # explicit DFS stack: per level the node, next edge index and accumulators
    cdef long long[:] s_node = _ll([0] * (depth + 1))
    cdef long long[:] s_edge = _ll([0] * (depth + 1))
    cdef long long[:] s_K = _ll([0] * (depth + 1))
    cdef long long[:] s_L = _ll([0] * (depth + 1))
    cdef long long[:] s_R = _ll([0] * (depth + 1))
    cdef long long total = 0
    cdef int j = 0, i
    cdef long long e, w, nd
    cdef double val
    with nogil:
        if depth == 0:
            total = 1
            if -half_width < 0.0 < half_width:
                counts[0] += 1
        else:
            s_node[0] = 0
            s_edge[0] = es[0]
            while j >= 0:
                nd = s_node[j]
                e = s_edge[j]
                if e >= es[nd + 1]:
                    j -= 1
                    continue
                s_edge[j] = e + 1
                w = el[e]
                i = depth - 1 - j
                s_K[j + 1] = s_K[j] + w * pK[i]
                s_L[j + 1] = s_L[j] + w * pL[i]
                s_R[j + 1] = (s_R[j] + w * pR[i]) % modulus
                if j + 1 == depth:
                    total += 1
                    val = <double> s_K[j + 1] + <double> s_L[j + 1] * beta2
                    if -half_width < val and val < half_width:
                        counts[s_R[j + 1]] += 1
                else:
                    j += 1
                    s_node[j] = et[e]
                    s_edge[j] = es[et[e]]
    return [counts[i] for i in range(modulus)], total


cdef long long[:] _ll(seq):
    import array
    return array.array("q", seq)
