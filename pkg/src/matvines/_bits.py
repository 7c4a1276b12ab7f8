"""Index-based graph kernels.

Vertices are integers 0..n-1, adjacency is a list of neighbour bitmasks,
labels are an n x n symmetric matrix with 0 meaning "no edge".  The public
modules wrap these kernels and translate witnesses back to vertex names;
the exhaustive drivers in :mod:`matvines.enumeration` call them directly to
avoid per-graph object overhead.
"""

from __future__ import annotations

from itertools import combinations


def iter_bits(mask: int):
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def components(n: int, adj: list[int], alive: int) -> list[int]:
    """Connected components of the induced subgraph on ``alive``, as bitmasks."""
    comps = []
    rest = alive
    while rest:
        comp = rest & -rest
        frontier = comp
        while frontier:
            new = 0
            for v in iter_bits(frontier):
                new |= adj[v] & alive & ~comp
            comp |= new
            frontier = new
        comps.append(comp)
        rest &= ~comp
    return comps


def _forest_path(forest_adj: list[int], start: int, goal: int) -> list[int] | None:
    """Unique path between two vertices of a forest, or None if disconnected."""
    if start == goal:
        return [start]
    prev = {start: -1}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for u in iter_bits(forest_adj[v]):
                if u in prev:
                    continue
                prev[u] = v
                if u == goal:
                    path = [u]
                    while path[-1] != start:
                        path.append(prev[path[-1]])
                    path.reverse()
                    return path
                nxt.append(u)
        frontier = nxt
    return None


def mat_violation(n: int, adj: list[int], lab: list[list[int]]):
    """First violated labeling axiom, or None.

    Returns ("ML1", (u, v), cycle_vertices) or ("ML2", (u, v), count).
    The cycle lists the vertices of the monochromatic-or-shortcut cycle,
    closed by the edge (u, v).
    """
    by_label: dict[int, list[tuple[int, int]]] = {}
    for i in range(n):
        ai = adj[i]
        for j in iter_bits(ai >> (i + 1) << (i + 1)):
            by_label.setdefault(lab[i][j], []).append((i, j))
    ks = sorted(by_label)
    for k in ks:
        forest = [0] * n
        for (u, v) in by_label[k]:
            path = _forest_path(forest, u, v)
            if path is not None:
                return ("ML1", (u, v), tuple(path))
            forest[u] |= 1 << v
            forest[v] |= 1 << u
        for kk in ks:
            if kk >= k:
                break
            for (u, v) in by_label[kk]:
                path = _forest_path(forest, u, v)
                if path is not None:
                    return ("ML1", (u, v), tuple(path))
        for (u, v) in by_label[k]:
            cond = 0
            for w in iter_bits(adj[u] & adj[v]):
                if lab[u][w] < k and lab[v][w] < k:
                    cond += 1
            if cond != k - 1:
                return ("ML2", (u, v), cond)
    return None


def mat_simplicial_violation(n: int, adj: list[int], lab: list[list[int]],
                             v: int, alive: int):
    """First violated simpliciality condition of ``v`` in the induced subgraph."""
    nb = adj[v] & alive
    nbl = list(iter_bits(nb))
    for u1, u2 in combinations(nbl, 2):
        if not (adj[u1] >> u2) & 1:
            return ("MS1", (u1, u2))
    labels = sorted(lab[v][u] for u in nbl)
    if labels != list(range(1, len(nbl) + 1)):
        return ("MS2", tuple(labels))
    for u1, u2 in combinations(nbl, 2):
        if lab[u1][u2] >= max(lab[v][u1], lab[v][u2]):
            return ("MS3", (u1, u2))
    return None


def find_mat_peo(n: int, adj: list[int], lab: list[list[int]]) -> list[int] | None:
    """Greedy elimination ordering; each prefix ends in a simplicial vertex.

    Peeling any admissible vertex is safe because removing one preserves
    the labeling property, so no backtracking is required.
    """
    alive = (1 << n) - 1
    peeled = []
    while alive:
        pick = -1
        for v in iter_bits(alive):
            if mat_simplicial_violation(n, adj, lab, v, alive) is None:
                pick = v
                break
        if pick < 0:
            return None
        peeled.append(pick)
        alive &= ~(1 << pick)
    peeled.reverse()
    return peeled


def mcs_order(n: int, adj: list[int]) -> list[int]:
    """Maximum cardinality search visit order (lowest index wins ties)."""
    weight = [0] * n
    order = []
    unnumbered = set(range(n))
    while unnumbered:
        z = max(unnumbered, key=lambda v: (weight[v], -v))
        unnumbered.remove(z)
        order.append(z)
        for y in iter_bits(adj[z]):
            if y in unnumbered:
                weight[y] += 1
    return order


def is_chordal(n: int, adj: list[int]) -> bool:
    """MCS visit order is an elimination ordering exactly for chordal graphs."""
    placed = 0
    for v in mcs_order(n, adj):
        nb = adj[v] & placed
        for u in iter_bits(nb):
            if nb & ~adj[u] & ~(1 << u):
                return False
        placed |= 1 << v
    return True


def induced_cycle(n: int, adj: list[int]) -> list[int] | None:
    """Some chordless cycle of length >= 4, or None if the graph is chordal.

    For every vertex v with non-adjacent neighbours u, w, a shortest u-w
    path avoiding the rest of N[v] closes into a chordless cycle through v.
    """
    for v in range(n):
        nbl = list(iter_bits(adj[v]))
        for u, w in combinations(nbl, 2):
            if (adj[u] >> w) & 1:
                continue
            blocked = (adj[v] | (1 << v)) & ~(1 << u) & ~(1 << w)
            allowed = [a & ~blocked for a in adj]
            path = _forest_like_shortest(allowed, u, w)
            if path is not None:
                return [v] + path
    return None


def _forest_like_shortest(adj: list[int], start: int, goal: int) -> list[int] | None:
    """Shortest path by BFS (shortest paths are chordless in the subgraph)."""
    prev = {start: -1}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for u in iter_bits(adj[v]):
                if u in prev:
                    continue
                prev[u] = v
                if u == goal:
                    path = [u]
                    while path[-1] != start:
                        path.append(prev[path[-1]])
                    path.reverse()
                    return path
                nxt.append(u)
        frontier = nxt
    return None


def is_strongly_chordal_fast(n: int, adj: list[int]) -> bool:
    """Greedy simple-vertex elimination.

    A vertex is simple when the closed neighbourhoods of its neighbours form
    an inclusion chain; a graph admits a simple elimination ordering exactly
    when it is strongly chordal, and the class is hereditary, so greedy
    peeling decides membership.
    """
    alive = (1 << n) - 1
    closed = [adj[v] | (1 << v) for v in range(n)]
    remaining = n
    while remaining:
        found = -1
        m = alive
        while m:
            b = m & -m
            v = b.bit_length() - 1
            m ^= b
            sets = sorted(closed[u] & alive for u in iter_bits(adj[v] & alive))
            ok = True
            prev = 0
            first = True
            for s in sets:
                if first:
                    prev, first = s, False
                elif prev & ~s:
                    ok = False
                    break
                else:
                    prev = s
            if ok:
                found = v
                break
        if found < 0:
            return False
        alive &= ~(1 << found)
        remaining -= 1
    return True


def find_sun(n: int, adj: list[int]):
    """Induced complete sun, as (inner cycle vertices, outer vertices).

    The outer tuple is aligned so outer[i] is adjacent to inner[i] and
    inner[i+1] (cyclically).  Brute force over vertex subsets; only used to
    extract witnesses after the fast decision procedure has said "no".
    """
    for s in range(3, n // 2 + 1):
        for subset in combinations(range(n), 2 * s):
            sub_mask = 0
            for v in subset:
                sub_mask |= 1 << v
            for inner in combinations(subset, s):
                inner_mask = 0
                for v in inner:
                    inner_mask |= 1 << v
                if any(inner_mask & ~adj[v] & ~(1 << v) for v in inner):
                    continue
                outer = [v for v in subset if not (inner_mask >> v) & 1]
                if any(adj[o1] >> o2 & 1 for o1, o2 in combinations(outer, 2)):
                    continue
                pairs = []
                ok = True
                for o in outer:
                    nb = adj[o] & sub_mask
                    if nb.bit_count() != 2 or nb & ~inner_mask:
                        ok = False
                        break
                    pairs.append((o, nb))
                if not ok:
                    continue
                arrangement = _close_sun_cycle(inner, pairs)
                if arrangement is not None:
                    return arrangement
    return None


def _close_sun_cycle(inner, pairs):
    """Order the outer vertices along a single cycle through the inner clique."""
    s = len(inner)
    masks = [nb for _, nb in pairs]
    if len(set(masks)) != s:
        return None
    deg = {v: 0 for v in inner}
    for nb in masks:
        for v in iter_bits(nb):
            if v not in deg:
                return None
            deg[v] += 1
    if any(d != 2 for d in deg.values()):
        return None
    # a 2-regular graph is a single cycle iff a walk closes only after s steps
    edge_of = {nb: o for o, nb in pairs}
    start = inner[0]
    cycle = [start]
    used: set[int] = set()
    outer_seq = []
    cur = start
    for _ in range(s):
        found = None
        for nb in masks:
            if nb not in used and (nb >> cur) & 1:
                found = nb
                break
        if found is None:
            return None
        used.add(found)
        outer_seq.append(edge_of[found])
        cur = (found & ~(1 << cur)).bit_length() - 1
        if len(cycle) < s:
            cycle.append(cur)
    if cur != start or len(set(cycle)) != s:
        return None
    return tuple(cycle), tuple(outer_seq)


def find_mat_labeling(n: int, adj: list[int]) -> list[list[int]] | None:
    """Backtracking search for a valid labeling.

    Vertices are placed one at a time; each placed vertex must see a clique
    among the already-placed vertices and its new edges receive a
    permutation of 1..degree subject to the domination constraint against
    labels already fixed inside that clique.  Any completed placement order
    is by construction an elimination ordering certifying the labeling.
    """
    full = (1 << n) - 1
    if not is_chordal(n, adj):
        # every admissible placement order is a perfect elimination ordering
        return None
    lab = [[0] * n for _ in range(n)]
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if adj[i] >> j & 1]
    failed: set[tuple[int, tuple[int, ...]]] = set()

    def state_key(placed: int) -> tuple[int, tuple[int, ...]]:
        vals = tuple(lab[i][j] for (i, j) in edges
                     if placed >> i & 1 and placed >> j & 1)
        return (placed, vals)

    def assign(v: int, nbl: list[int], pos: int, used: int, placed: int) -> bool:
        if pos == len(nbl):
            return place(placed | (1 << v))
        u = nbl[pos]
        lab_v = lab[v]
        lab_u = lab[u]
        for t in range(1, len(nbl) + 1):
            if used >> t & 1:
                continue
            ok = True
            for q in range(pos):
                w = nbl[q]
                if lab_u[w] >= (t if t > lab_v[w] else lab_v[w]):
                    ok = False
                    break
            if not ok:
                continue
            lab_v[u] = lab_u[v] = t
            if assign(v, nbl, pos + 1, used | (1 << t), placed):
                return True
            lab_v[u] = lab_u[v] = 0
        return False

    def place(placed: int) -> bool:
        if placed == full:
            return True
        key = state_key(placed)
        if key in failed:
            return False
        for v in range(n):
            if placed >> v & 1:
                continue
            nb = adj[v] & placed
            clique = True
            for u in iter_bits(nb):
                if nb & ~adj[u] & ~(1 << u):
                    clique = False
                    break
            if not clique:
                continue
            if assign(v, list(iter_bits(nb)), 0, 0, placed):
                return True
        failed.add(key)
        return False

    if place(0):
        return lab
    return None
