"""Pure-Python versions of the hot kernels.

State convention: the element (U + V*beta)/q of Q(beta), with integers U, V
and a fixed positive denominator q.  beta^2 = a*beta + b, D = a^2 + 4b.
"""
from math import isqrt


def t_step(a, b, D, q, U, V):
    """One step of T_beta: return (digit, U', V')."""
    m = b * V
    n = U + a * V
    # beta*x = (m + n*beta)/q = ((2m + a n) + n sqrt D) / (2q)
    M = 2 * m + a * n
    if n == 0:
        digit = M // (2 * q)
    else:
        r = isqrt(n * n * D)
        digit = (M + (r if n > 0 else -r - 1)) // (2 * q)
    return digit, m - digit * q, n


def orbit_tail_period(a, b, q, U, V, cap):
    """Brent cycle detection on the T_beta orbit of (U + V beta)/q.

    Returns (mu, lam): tail length and cycle length, or (-1, -1) when the
    number of steps exceeds ``cap``.
    """
    D = a * a + 4 * b
    steps = 0
    power = lam = 1
    tU, tV = U, V
    _, hU, hV = t_step(a, b, D, q, U, V)
    while tU != hU or tV != hV:
        if power == lam:
            tU, tV = hU, hV
            power *= 2
            lam = 0
        _, hU, hV = t_step(a, b, D, q, hU, hV)
        lam += 1
        steps += 1
        if steps > cap:
            return -1, -1
    tU, tV = U, V
    hU, hV = U, V
    for _ in range(lam):
        _, hU, hV = t_step(a, b, D, q, hU, hV)
    mu = 0
    while tU != hU or tV != hV:
        _, tU, tV = t_step(a, b, D, q, tU, tV)
        _, hU, hV = t_step(a, b, D, q, hU, hV)
        mu += 1
    return mu, lam


def stripe_cover(estart, elabel, etarget, depth, powK, powL, powR, modulus,
                 beta2, half_width):
    """Count, per residue class, the length-``depth`` words read from node 1
    whose real embedding K + L*beta2 lies in (-half_width, half_width).

    Edges of node i (0-based) are ``estart[i]:estart[i+1]``.  ``powK[i] +
    powL[i]*beta`` is beta^i and ``powR[i]`` is r^i mod ``modulus``.
    Returns (counts, total_paths).
    """
    counts = [0] * modulus
    total = 0
    stack = [(0, 0, 0, 0, 0)]
    while stack:
        node, j, K, L, R = stack.pop()
        if j == depth:
            total += 1
            val = float(K) + float(L) * beta2
            if -half_width < val < half_width:
                counts[R] += 1
            continue
        i = depth - 1 - j
        pk, pl, pr = powK[i], powL[i], powR[i]
        for e in range(estart[node + 1] - 1, estart[node] - 1, -1):
            w = elabel[e]
            stack.append((etarget[e], j + 1, K + w * pk, L + w * pl, (R + w * pr) % modulus))
    return counts, total
