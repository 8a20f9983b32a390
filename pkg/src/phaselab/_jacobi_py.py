"""Pure-Python (numpy) fallback for the Jacobi kernel.

Same contract as the compiled ``jacobi_inplace`` (eigenvectors returned as
the rows of ``vt``). Uses round-robin
(tournament) ordering so each of the n-1 rounds in a sweep applies n/2
disjoint rotations at once; a full sweep still visits every off-diagonal
pair exactly once. Entries far below the sweep's mean off-diagonal
magnitude are left for a later sweep (threshold strategy).
"""

import numpy as np

# rotations on entries smaller than this would overflow 1/r
TINY = 1e-290
# threshold strategy: skip entries below this fraction of the mean off-diagonal size
THRESH_FACTOR = 1e-2


def _tournament(n):
    players = list(range(n)) if n % 2 == 0 else list(range(n)) + [-1]
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(x, y), max(x, y)) for x, y in pairs if x >= 0 and y >= 0]
        p = np.array([x for x, _ in pairs], dtype=np.intp)
        q = np.array([y for _, y in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _offdiag(a):
    mask = ~np.eye(a.shape[0], dtype=bool)
    return np.linalg.norm(a[mask])


def jacobi_inplace(a, vt, tol, max_sweeps):
    n = a.shape[0]
    fro = np.linalg.norm(a)
    if fro == 0.0:
        return 0, 0.0
    rounds = _tournament(n) if n > 1 else []
    off = _offdiag(a)
    sweeps = 0
    while off > tol * fro and sweeps < max_sweeps:
        thresh = max(TINY, THRESH_FACTOR * off / n)
        for p, q in rounds:
            apq = a[p, q]
            r = np.abs(apq)
            live = r > thresh
            if not live.any():
                continue
            p, q, apq, r = p[live], q[live], apq[live], r[live]
            e = apq / r
            app = a[p, p].real
            aqq = a[q, q].real
            tau = (aqq - app) / (2.0 * r)
            with np.errstate(over="ignore", divide="ignore"):
                t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            huge = np.abs(tau) > 1e150
            t[huge] = 0.5 / tau[huge]
            c = 1.0 / np.sqrt(1.0 + t * t)
            se = t * c * e

            x = a[:, p]
            y = a[:, q]
            a[:, p] = c * x - se.conj() * y
            a[:, q] = se * x + c * y
            x = a[p, :]
            y = a[q, :]
            a[p, :] = c[:, None] * x - se[:, None] * y
            a[q, :] = se.conj()[:, None] * x + c[:, None] * y
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = app - t * r
            a[q, q] = aqq + t * r
            if vt is not None:
                x = vt[p, :]
                y = vt[q, :]
                vt[p, :] = c[:, None] * x - se.conj()[:, None] * y
                vt[q, :] = se[:, None] * x + c[:, None] * y
        sweeps += 1
        off = _offdiag(a)
    return sweeps, off / fro
