"""Mention and content-similarity graphs plus node features.

The mention graph is directed: an edge a -> b means user a mentioned
user b in some tweet, resolved case-insensitively against known user
ids.  The similarity graph connects users whose content-word sets have
Jaccard similarity at or above a pruning threshold.  Both graphs are
built once over a whole corpus; only neighbor-vote features depend on
which labels the caller passes in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from followdrop import _kernels
from followdrop.corpus import UserRecord, filtered_tokens, tokenize

SIMILARITY_THRESHOLD = 0.3
EIGEN_TOL = 1e-8
EIGEN_MAX_ITER = 200000


@dataclass
class MentionGraph:
    nodes: list                 # user ids, corpus order
    index: dict                 # user id -> position in nodes
    indptr: np.ndarray          # CSR over out-edges, int32
    indices: np.ndarray         # int32 targets, sorted within each row


@dataclass
class NodeCentrality:
    in_degree: float
    out_degree: float
    betweenness: float
    closeness: float
    eigenvector: float
    clustering: float


def build_mention_graph(users: Iterable[UserRecord]) -> MentionGraph:
    """Directed mention graph over users that mention or get mentioned.

    Mentions of handles that match no user id are dropped, as are
    self-mentions.  Handle resolution is case-insensitive; when two user
    ids collide under lowercasing the earliest record wins.
    """
    users = list(users)
    by_lower: dict[str, str] = {}
    for u in users:
        by_lower.setdefault(u.user_id.lower(), u.user_id)

    edges: set[tuple[str, str]] = set()
    for u in users:
        for tweet in u.tweets:
            for handle in tweet.mentions:
                target = by_lower.get(handle.lower())
                if target is None or target == u.user_id:
                    continue
                edges.add((u.user_id, target))

    incident: set[str] = set()
    for a, b in edges:
        incident.add(a)
        incident.add(b)
    nodes = [u.user_id for u in users if u.user_id in incident]
    index = {uid: i for i, uid in enumerate(nodes)}

    adj: list[list[int]] = [[] for _ in nodes]
    for a, b in edges:
        adj[index[a]].append(index[b])
    indptr = np.zeros(len(nodes) + 1, dtype=np.int32)
    indices_list: list[int] = []
    for i, row in enumerate(adj):
        row.sort()
        indices_list.extend(row)
        indptr[i + 1] = len(indices_list)
    indices = np.asarray(indices_list, dtype=np.int32)
    return MentionGraph(nodes=nodes, index=index, indptr=indptr,
                        indices=indices)


def _undirected_edges(g: MentionGraph) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric edge list (row, col) of the undirected projection."""
    pairs: set[tuple[int, int]] = set()
    for v in range(len(g.nodes)):
        for e in range(g.indptr[v], g.indptr[v + 1]):
            w = int(g.indices[e])
            if v != w:
                pairs.add((min(v, w), max(v, w)))
    rows = []
    cols = []
    for a, b in sorted(pairs):
        rows.extend((a, b))
        cols.extend((b, a))
    return (np.asarray(rows, dtype=np.int64),
            np.asarray(cols, dtype=np.int64))


def eigenvector_centrality(g: MentionGraph, tol: float = EIGEN_TOL,
                           max_iter: int = EIGEN_MAX_ITER) -> np.ndarray:
    """Principal eigenvector of the undirected projection's adjacency.

    Power iteration runs on A + I (same eigenvectors, strictly shifted
    spectrum, so it cannot oscillate on bipartite components); the
    convergence residual ||Ax - lambda x|| is measured on A itself.
    Entries are nonnegative and the vector has unit 2-norm.
    """
    n = len(g.nodes)
    if n == 0:
        return np.zeros(0, dtype=np.float64)
    rows, cols = _undirected_edges(g)
    x = np.full(n, 1.0 / np.sqrt(n), dtype=np.float64)
    if len(rows) == 0:
        return np.zeros(n, dtype=np.float64)

    def matvec(v: np.ndarray) -> np.ndarray:
        return np.bincount(rows, weights=v[cols], minlength=n)

    for _ in range(max_iter):
        ax = matvec(x)
        y = ax + x
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return np.zeros(n, dtype=np.float64)
        x = y / norm
        ax = matvec(x)
        lam = float(np.dot(x, ax))
        if float(np.linalg.norm(ax - lam * x)) < tol:
            return np.abs(x)
    raise RuntimeError("eigenvector iteration did not converge")


def _clustering(neighbor_sets: list[set]) -> np.ndarray:
    coeffs = np.zeros(len(neighbor_sets), dtype=np.float64)
    for v, nbrs in enumerate(neighbor_sets):
        k = len(nbrs)
        if k < 2:
            continue
        links = 0
        for u in nbrs:
            links += len(neighbor_sets[u] & nbrs)
        links //= 2
        coeffs[v] = 2.0 * links / (k * (k - 1))
    return coeffs


def mention_centralities(g: MentionGraph) -> dict:
    """Per-node centrality features, keyed by user id.

    Degrees are normalized by n - 1; betweenness by (n-1)(n-2);
    closeness is reachable-count over summed BFS distance; clustering
    and eigenvector centrality use the undirected projection.
    """
    n = len(g.nodes)
    if n == 0:
        return {}
    out_deg = np.diff(g.indptr).astype(np.float64)
    in_deg = np.bincount(g.indices, minlength=n).astype(np.float64)
    if n > 1:
        in_deg = in_deg / (n - 1)
        out_deg = out_deg / (n - 1)
    betw, clos = _kernels.brandes_centrality(g.indptr, g.indices, n)
    betw = np.asarray(betw, dtype=np.float64)
    if n > 2:
        betw = betw / ((n - 1) * (n - 2))
    eig = eigenvector_centrality(g)
    rows, cols = _undirected_edges(g)
    neighbor_sets: list[set] = [set() for _ in range(n)]
    for a, b in zip(rows.tolist(), cols.tolist()):
        neighbor_sets[a].add(b)
    clust = _clustering(neighbor_sets)
    out = {}
    for i, uid in enumerate(g.nodes):
        out[uid] = NodeCentrality(in_degree=float(in_deg[i]),
                                  out_degree=float(out_deg[i]),
                                  betweenness=float(betw[i]),
                                  closeness=float(clos[i]),
                                  eigenvector=float(eig[i]),
                                  clustering=float(clust[i]))
    return out


def jaccard(a: set, b: set) -> float:
    """Set overlap |a & b| / |a | b|; 0 when both sets are empty."""
    if not a and not b:
        return 0.0
    inter = len(a & b)
    if inter == 0:
        return 0.0
    return inter / (len(a) + len(b) - inter)


@dataclass
class SimilarityGraph:
    nodes: list                     # all user ids, corpus order
    adjacency: dict                 # user id -> {neighbor id: weight}
    token_sets: dict                # user id -> frozenset of content words


def content_word_set(user: UserRecord, stopwords: frozenset) -> frozenset:
    toks: set[str] = set()
    for tweet in user.tweets:
        toks.update(filtered_tokens(tokenize(tweet.text), stopwords))
    return frozenset(toks)


def build_similarity_graph(users: Iterable[UserRecord],
                           stopwords: frozenset,
                           threshold: float = SIMILARITY_THRESHOLD) -> SimilarityGraph:
    """Jaccard-of-content-words graph, pruned below threshold.

    Edges with weight exactly at the threshold are kept.
    """
    users = list(users)
    token_sets = {u.user_id: content_word_set(u, stopwords) for u in users}
    nodes = [u.user_id for u in users]
    adjacency: dict[str, dict[str, float]] = {uid: {} for uid in nodes}
    for i in range(len(nodes)):
        si = token_sets[nodes[i]]
        for j in range(i + 1, len(nodes)):
            w = jaccard(si, token_sets[nodes[j]])
            if w >= threshold and w > 0.0:
                adjacency[nodes[i]][nodes[j]] = w
                adjacency[nodes[j]][nodes[i]] = w
    return SimilarityGraph(nodes=nodes, adjacency=adjacency,
                           token_sets=token_sets)


def similarity_clustering(g: SimilarityGraph) -> dict:
    """Unweighted clustering coefficient per node of the pruned graph."""
    index = {uid: i for i, uid in enumerate(g.nodes)}
    neighbor_sets = [set() for _ in g.nodes]
    for uid, nbrs in g.adjacency.items():
        neighbor_sets[index[uid]] = {index[v] for v in nbrs}
    coeffs = _clustering(neighbor_sets)
    return {uid: float(coeffs[index[uid]]) for uid in g.nodes}


def dump_edges(g: MentionGraph | SimilarityGraph, path) -> None:
    """Edge-list text dump (src, dst, similarity graphs add weight)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if isinstance(g, MentionGraph):
            for v, uid in enumerate(g.nodes):
                for e in range(g.indptr[v], g.indptr[v + 1]):
                    fh.write(f"{uid}\t{g.nodes[int(g.indices[e])]}\n")
        else:
            for uid in g.nodes:
                for nbr, w in sorted(g.adjacency[uid].items()):
                    if uid < nbr:
                        fh.write(f"{uid}\t{nbr}\t{w!r}\n")


def neighbor_majority(g: SimilarityGraph, user_id: str,
                      training_labels: Mapping[str, int]) -> float:
    """Majority class among labeled similarity neighbors.

    Returns 1.0 or 0.0 for a strict majority, 0.5 on ties or when no
    neighbor carries a training label.  Only ids present in
    training_labels vote, so held-out users never leak in.
    """
    votes_pos = 0
    votes_neg = 0
    for nbr in g.adjacency.get(user_id, {}):
        lab = training_labels.get(nbr)
        if lab is None:
            continue
        if lab == 1:
            votes_pos += 1
        else:
            votes_neg += 1
    if votes_pos > votes_neg:
        return 1.0
    if votes_neg > votes_pos:
        return 0.0
    return 0.5
