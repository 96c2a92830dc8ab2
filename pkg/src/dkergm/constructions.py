"""Regular, near-regular and full-degree-spectrum graphs."""

from __future__ import annotations

from .errors import NonexistenceError
from .graph import Graph, bi_degree_vector


def regular_graph(n: int, k: int) -> Graph:
    """A k-regular graph on n nodes (circulant: offsets 1..k//2, plus the antipode if k is odd)."""
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got k={k}, n={n}")
    if k * n % 2:
        raise NonexistenceError(f"no {k}-regular graph on {n} nodes: k*n = {k * n} is odd")
    edges = set()
    for i in range(n):
        for off in range(1, k // 2 + 1):
            j = (i + off) % n
            edges.add((min(i, j), max(i, j)))
        if k % 2:
            j = (i + n // 2) % n
            edges.add((min(i, j), max(i, j)))
    return Graph.from_edges(n, edges)


def near_regular_graph(n: int, k: int, l: int) -> Graph:
    """n-1 nodes of degree k and one node (label n-1) of degree l; n and k odd.

    Starts from the circulant k-regular graph on nodes 0..n-2, whose antipodal
    chords (i, i + (n-1)/2) form a perfect matching, then re-routes l/2 of
    those chords through the extra node.
    """
    if n % 2 == 0 or k % 2 == 0:
        raise ValueError("near-regular construction needs n and k odd")
    if not (0 <= k < n and 0 <= l < n):
        raise ValueError(f"need 0 <= k, l < n, got k={k}, l={l}, n={n}")
    if l % 2:
        raise NonexistenceError(f"no graph with {n - 1} nodes of degree {k} and one of degree {l}: odd degree sum")
    h = n - 1
    half = (n - 1) // 2
    base = regular_graph(n - 1, k)
    edges = set(base.edge_list())
    for i in range(l // 2):
        edges.discard((i, i + half))
        edges.update({(i, h), (i + half, h)})
    return Graph.from_edges(n, edges)


def spectrum_graph(n: int) -> Graph:
    """A graph with no isolated node and at least one node of every degree 1..n-1.

    Grown from K_2.  Each step adds a node and joins it to existing nodes in
    decreasing degree order (ties by label), stopping right after the first
    node whose degree is the duplicated one.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    adj = [{1}, {0}]
    for size in range(2, n):
        deg = [len(a) for a in adj]
        seen, dup = set(), None
        for d in deg:
            if d in seen:
                dup = d
                break
            seen.add(d)
        new = size
        adj.append(set())
        for v in sorted(range(size), key=lambda v: (-deg[v], v)):
            adj[v].add(new)
            adj[new].add(v)
            if deg[v] == dup:
                break
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in adj[i] if i < j))


def spectrum_bidegree_nonzeros(n: int) -> int:
    return sum(1 for c in bi_degree_vector(spectrum_graph(n)) if c)


def spectrum_bidegree_closed_form(n: int) -> int:
    """((n-1)/2)^2 for odd n, ((n-2)/2)^2 + n/2 for even n."""
    if n % 2:
        return ((n - 1) // 2) ** 2
    return ((n - 2) // 2) ** 2 + n // 2
