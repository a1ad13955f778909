"""Pure-Python fallback for the shortest-path centrality kernel.

Single BFS pass per source computes raw betweenness (successor-form
dependency accumulation) and the reachability-weighted closeness in one
go.  Accumulation order matches the compiled kernel, so results are
bit-identical across backends.
"""

from __future__ import annotations

from collections import deque

import numpy as np


def brandes_centrality(indptr, indices, n):
    """Raw betweenness and closeness for a directed CSR graph.

    Returns (betweenness, closeness) as float64 arrays of length n.
    Betweenness is unnormalized; closeness is the number of nodes
    reachable from s divided by the sum of their BFS distances.
    """
    betw = np.zeros(n, dtype=np.float64)
    clos = np.zeros(n, dtype=np.float64)
    for s in range(n):
        dist = [-1] * n
        sigma = [0.0] * n
        delta = [0.0] * n
        dist[s] = 0
        sigma[s] = 1.0
        order = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v]
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        reach = 0
        total = 0
        for v in order:
            if dist[v] > 0:
                reach += 1
                total += dist[v]
        if total > 0:
            clos[s] = reach / total
        for idx in range(len(order) - 1, -1, -1):
            v = order[idx]
            dv1 = dist[v] + 1
            acc = 0.0
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if dist[w] == dv1:
                    acc += sigma[v] / sigma[w] * (1.0 + delta[w])
            delta[v] = acc
            if v != s:
                betw[v] += acc
    return betw, clos
