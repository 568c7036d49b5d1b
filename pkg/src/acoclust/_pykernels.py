"""Pure-Python construction kernel, bit-compatible with the compiled one.

Both backends execute the same scalar operations in the same order on IEEE
doubles, so a run reproduces exactly regardless of which one is active.
Any edit here must be mirrored statement for statement in _speedups.pyx.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / 9007199254740992.0


def _rand(state: int) -> tuple[int, float]:
    # splitmix64 step, identical to rng.SplitMix64.random()
    state = (state + _GOLDEN) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    z ^= z >> 31
    return state, (z >> 11) * _INV_2_53


def construct_sweep(points, gamma, gamma_aux, cents, assign, sizes, states,
                    alpha: float, beta: float, q: float, d_eps: float) -> None:
    """One full construction pass: every ant classifies every object.

    Ants advance together, one object per ant per inner step, and each
    classification consumes exactly two variates from that ant's stream
    (object pick, then class roulette).  The roulette weight of class k for
    object i is (tau_ik / tau_max)**alpha * (d_min / d_ik)**beta, a rescaling
    of the usual tau**alpha * (1/d)**beta that cannot overflow; when every
    weight underflows to zero the class is taken by log-space argmax instead,
    with the roulette variate still consumed.  Each pick appends to the ant's
    tabu list (written as the assignment entry), grows the class, folds the
    point into the class centroid, and deposits q / d_ik into gamma_aux.

    assign, sizes, cents, gamma_aux and states are written in place; assign
    must arrive filled with -1 and sizes with 0.
    """
    n, p = points.shape
    mm = assign.shape[0]
    kk = cents.shape[1]

    pts = points.tolist()
    gam = gamma.tolist()
    aux = gamma_aux.tolist()
    cen = [cents[m].tolist() for m in range(mm)]
    asg = [[-1] * n for _ in range(mm)]
    szs = [[0] * kk for _ in range(mm)]
    sts = [int(s) for s in states.tolist()]

    remaining = [list(range(n)) for _ in range(mm)]
    rem_count = [n] * mm

    d = [0.0] * kk
    w = [0.0] * kk

    for _step in range(n):
        for m in range(mm):
            st = sts[m]
            rem = rem_count[m]
            pool = remaining[m]

            st, u1 = _rand(st)
            pick = int(u1 * rem)
            # u1*rem can round up to rem itself when rem is large
            if pick >= rem:
                pick = rem - 1
            i = pool[pick]
            pool[pick] = pool[rem - 1]
            rem_count[m] = rem - 1

            x = pts[i]
            cm = cen[m]
            gi = gam[i]

            tau_max = 0.0
            for k in range(kk):
                g = gi[k]
                if g > tau_max:
                    tau_max = g
            if tau_max <= 0.0:
                tau_max = 1.0

            d_min = math.inf
            for k in range(kk):
                ck = cm[k]
                acc = 0.0
                for jj in range(p):
                    diff = x[jj] - ck[jj]
                    acc += diff * diff
                if acc < d_eps:
                    acc = d_eps
                d[k] = acc
                if acc < d_min:
                    d_min = acc

            total = 0.0
            for k in range(kk):
                wk = (gi[k] / tau_max) ** alpha * (d_min / d[k]) ** beta
                w[k] = wk
                total += wk

            st, u2 = _rand(st)
            sts[m] = st

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
                best = -math.inf
                for k in range(kk):
                    r1 = gi[k] / tau_max
                    lg1 = math.log(r1) if r1 > 0.0 else -math.inf
                    r2 = d_min / d[k]
                    lg2 = math.log(r2) if r2 > 0.0 else -math.inf
                    score = alpha * lg1 + beta * lg2
                    if score > best:
                        best = score
                        ksel = k

            asg[m][i] = ksel
            sz = szs[m][ksel] + 1
            szs[m][ksel] = sz
            ck = cm[ksel]
            for jj in range(p):
                ck[jj] = ((sz - 1) * ck[jj] + x[jj]) / sz
            aux[i][ksel] += q / d[ksel]

    for m in range(mm):
        assign[m, :] = asg[m]
        sizes[m, :] = szs[m]
        cents[m, :, :] = cen[m]
    states[:] = np.array(sts, dtype=np.uint64)
    gamma_aux[:, :] = aux
