"""Exact earth mover's distance between two small discrete distributions.

Solves the balanced transportation problem

    min sum_ij d[i][j] * f[i][j]
    s.t. sum_j f[i][j] = source[i],  sum_i f[i][j] = target[j],  f >= 0

exactly, by successive shortest augmenting paths on the bipartite
supply/demand graph with node potentials (Dijkstra on reduced costs).
Instances are tiny (11 terms by default) but the distortion-map
pipeline solves one per pixel pair, so the kernel is written to be
numba-compilable; without numba the same code runs as plain Python.
"""

import numpy as np

from .errors import InfeasibleMarginals, ValueOutOfRange

MASS_TOL = 1e-9
_SOLVE_TOL = 1e-12
_INF = float("inf")


def emd(source, target, d):
    """Minimum transport cost and an optimal flow matrix.

    Parameters
    ----------
    source, target : array-like, shape (N,)
        Nonnegative weights carrying equal total mass (probability
        vectors in the descriptor use case).
    d : array-like, shape (N, N)
        Nonnegative ground distances.

    Returns
    -------
    cost : float
        Exact minimum of sum(d * flow).
    flow : np.ndarray, shape (N, N)
        A flow achieving it; row sums equal ``source`` and column sums
        equal ``target`` to within 1e-9.
    """
    p = np.asarray(source, dtype=np.float64)
    q = np.asarray(target, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    n = p.shape[0]
    if q.shape != (n,) or d.shape != (n, n):
        raise ValueOutOfRange("source, target and d must agree on N")
    if np.any(p < -MASS_TOL) or np.any(q < -MASS_TOL) or np.any(d < 0):
        raise ValueOutOfRange("weights and distances must be nonnegative")
    if abs(p.sum() - q.sum()) > MASS_TOL:
        raise InfeasibleMarginals(f"mass mismatch: {p.sum()} vs {q.sum()}")

    # Degenerate zero-mass rows/columns never carry flow; drop them.
    si = np.flatnonzero(p > _SOLVE_TOL)
    tj = np.flatnonzero(q > _SOLVE_TOL)
    flow = np.zeros((n, n))
    if si.size == 0 or tj.size == 0:
        return 0.0, flow

    cost_sub, flow_sub = _transport_kernel(
        p[si].copy(), q[tj].copy(), np.ascontiguousarray(d[np.ix_(si, tj)])
    )
    flow[np.ix_(si, tj)] = flow_sub
    return cost_sub, flow


def emd_cost(source, target, d) -> float:
    """Cost-only variant of :func:`emd` (same exact solve)."""
    return emd(source, target, d)[0]


def _transport_kernel(a, b, c):
    """Successive shortest paths on a dense bipartite instance.

    Potentials keep every residual arc at nonnegative reduced cost;
    supply nodes enter each Dijkstra at their own potential (the
    implicit zero-cost arc from the super source). ``a`` and ``b`` are
    consumed in place.
    """
    n = a.shape[0]
    m = b.shape[0]
    f = np.zeros((n, m))
    pot_u = np.zeros(n)
    pot_v = np.zeros(m)
    remaining = min(a.sum(), b.sum())
    guard = 100000
    while remaining > _SOLVE_TOL and guard > 0:
        guard -= 1

        dist_u = np.empty(n)
        dist_v = np.full(m, _INF)
        prev_v = np.full(m, -1, np.int64)  # source feeding each sink
        prev_u = np.full(n, -1, np.int64)  # sink feeding each source (residual)
        done_u = np.zeros(n, np.bool_)
        done_v = np.zeros(m, np.bool_)
        for i in range(n):
            dist_u[i] = pot_u[i] if a[i] > _SOLVE_TOL else _INF

        while True:
            best = _INF
            side = -1
            node = -1
            for i in range(n):
                if not done_u[i] and dist_u[i] < best:
                    best = dist_u[i]
                    side = 0
                    node = i
            for j in range(m):
                if not done_v[j] and dist_v[j] < best:
                    best = dist_v[j]
                    side = 1
                    node = j
            if node < 0:
                break
            if side == 0:
                done_u[node] = True
                du = dist_u[node]
                pu = pot_u[node]
                for j in range(m):
                    if not done_v[j]:
                        nd = du + c[node, j] - pu + pot_v[j]
                        if nd < dist_v[j]:
                            dist_v[j] = nd
                            prev_v[j] = node
            else:
                done_v[node] = True
                dv = dist_v[node]
                pv = pot_v[node]
                for i in range(n):
                    if not done_u[i] and f[i, node] > _SOLVE_TOL:
                        nd = dv - (c[i, node] - pot_u[i] + pv)
                        if nd < dist_u[i]:
                            dist_u[i] = nd
                            prev_u[i] = node

        # Cheapest reachable sink with unmet demand.
        tgt = -1
        best = _INF
        for j in range(m):
            if b[j] > _SOLVE_TOL and dist_v[j] < best:
                best = dist_v[j]
                tgt = j
        if tgt < 0:
            break  # residual slack below tolerance

        # Bottleneck pass along the predecessor chain.
        bneck = b[tgt]
        start = -1
        j = tgt
        while True:
            i = prev_v[j]
            jj = prev_u[i]
            if jj == -1:
                if a[i] < bneck:
                    bneck = a[i]
                start = i
                break
            if f[i, jj] < bneck:
                bneck = f[i, jj]
            j = jj

        # Augment pass.
        j = tgt
        while True:
            i = prev_v[j]
            f[i, j] += bneck
            jj = prev_u[i]
            if jj == -1:
                break
            f[i, jj] -= bneck
            j = jj

        a[start] -= bneck
        b[tgt] -= bneck
        remaining -= bneck

        for i in range(n):
            if dist_u[i] < _INF:
                pot_u[i] -= dist_u[i]
        for j in range(m):
            if dist_v[j] < _INF:
                pot_v[j] -= dist_v[j]

    cost = 0.0
    for i in range(n):
        for j in range(m):
            cost += f[i, j] * c[i, j]
    return cost, f


try:  # pragma: no cover - exercised implicitly when numba is installed
    from numba import njit

    _transport_kernel = njit(cache=True)(_transport_kernel)
except ImportError:  # pragma: no cover
    pass
