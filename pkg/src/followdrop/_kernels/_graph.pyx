# cython: language_level=3
"""Compiled shortest-path centrality kernel.

Same BFS visit order and dependency-accumulation order as graph_py.py,
so betweenness and closeness agree bit-for-bit across backends.
"""

import numpy as np


def brandes_centrality(int[::1] indptr, int[::1] indices, Py_ssize_t n):
    betw_arr = np.zeros(n, dtype=np.float64)
    clos_arr = np.zeros(n, dtype=np.float64)
    dist_arr = np.empty(n, dtype=np.int32)
    sigma_arr = np.empty(n, dtype=np.float64)
    delta_arr = np.empty(n, dtype=np.float64)
    queue_arr = np.empty(n, dtype=np.int32)
    cdef double[::1] betw = betw_arr
    cdef double[::1] clos = clos_arr
    cdef int[::1] dist = dist_arr
    cdef double[::1] sigma = sigma_arr
    cdef double[::1] delta = delta_arr
    cdef int[::1] queue = queue_arr
    cdef Py_ssize_t s, idx, e, head, tail
    cdef int v, w, dv
    cdef long reach, total
    cdef double acc
    with nogil:
        for s in range(n):
            for idx in range(n):
                dist[idx] = -1
                sigma[idx] = 0.0
                delta[idx] = 0.0
            dist[s] = 0
            sigma[s] = 1.0
            queue[0] = <int>s
            head = 0
            tail = 1
            while head < tail:
                v = queue[head]
                head += 1
                dv = dist[v]
                for e in range(indptr[v], indptr[v + 1]):
                    w = indices[e]
                    if dist[w] < 0:
                        dist[w] = dv + 1
                        queue[tail] = w
                        tail += 1
                    if dist[w] == dv + 1:
                        sigma[w] += sigma[v]
            reach = 0
            total = 0
            for idx in range(tail):
                v = queue[idx]
                if dist[v] > 0:
                    reach += 1
                    total += dist[v]
            if total > 0:
                clos[s] = (<double>reach) / (<double>total)
            for idx in range(tail - 1, -1, -1):
                v = queue[idx]
                dv = dist[v] + 1
                acc = 0.0
                for e in range(indptr[v], indptr[v + 1]):
                    w = indices[e]
                    if dist[w] == dv:
                        acc += sigma[v] / sigma[w] * (1.0 + delta[w])
                delta[v] = acc
                if v != s:
                    betw[v] += acc
    return betw_arr, clos_arr
