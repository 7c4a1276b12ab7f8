"""Conversions between labeled graphs and vines, morphism lifting, round
trips, the ideal embedding into a regular vine, and the finite pushout
check."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .errors import InternalDefectError, MorphismError, PreconditionError
from .labeled_graph import (LabeledGraph, check_mat_labeling, extend_to_complete,
                            glue, principal_cliques)
from .vine_poset import (VineClass, VinePoset, assign_union_names, classify,
                         complete_union, cond_sets, hat, join_and_paths,
                         structurally_equal)
from .verdict import Verdict


@dataclass(frozen=True, eq=False)
class GraphMorphism:
    """A vertex map that must send edges to edges of equal label."""

    source: LabeledGraph
    target: LabeledGraph
    mapping: dict[str, str]

    def __call__(self, v: str) -> str:
        return self.mapping[v]


@dataclass(frozen=True, eq=False)
class PosetMorphism:
    """A node map between posets; the flags record verified properties."""

    source: VinePoset
    target: VinePoset
    mapping: dict[str, str]
    rank_preserving: bool = False
    join_preserving: bool = False

    def __call__(self, v: str) -> str:
        return self.mapping[v]


def validate_graph_morphism(m: GraphMorphism) -> None:
    """Raise unless the map is a label-preserving homomorphism."""
    tgt = set(m.target.vertices)
    for v in m.source.vertices:
        if v not in m.mapping:
            raise MorphismError(f"vertex {v!r} is not mapped")
        if m.mapping[v] not in tgt:
            raise MorphismError(f"image {m.mapping[v]!r} of {v!r} is not a target vertex")
    for (u, v), k in m.source.labels.items():
        iu, iv = m.mapping[u], m.mapping[v]
        if iu == iv or not m.target.has_edge(iu, iv):
            raise MorphismError(f"edge ({u!r}, {v!r}) has no image edge")
        if m.target.label_of(iu, iv) != k:
            raise MorphismError(
                f"edge ({u!r}, {v!r}) changes label {k} -> "
                f"{m.target.label_of(iu, iv)}")


def _join(p: VinePoset, x: str, y: str) -> str | None:
    """Least upper bound by scanning common upper bounds, or None."""
    ix, iy = p.index[x], p.index[y]
    ups = [v for v in p.nodes
           if p.down_masks[v] >> ix & 1 and p.down_masks[v] >> iy & 1]
    for u in ups:
        if all(p.leq(u, w) for w in ups):
            return u
    return None


def validate_poset_morphism(m: PosetMorphism) -> PosetMorphism:
    """Check order, rank, and join preservation; joins are tested over all
    node pairs (quadratic, fine at this scale)."""
    tgt = set(m.target.nodes)
    for v in m.source.nodes:
        if v not in m.mapping:
            raise MorphismError(f"node {v!r} is not mapped")
        if m.mapping[v] not in tgt:
            raise MorphismError(f"image {m.mapping[v]!r} of {v!r} is not a target node")
    for a in m.source.nodes:
        for b in m.source.nodes:
            if a != b and m.source.leq(a, b):
                if not m.target.leq(m.mapping[a], m.mapping[b]):
                    raise MorphismError(f"order violated on pair ({a!r}, {b!r})")
    rank_ok = all(m.source.rank_of[v] == m.target.rank_of[m.mapping[v]]
                  for v in m.source.nodes)
    if not rank_ok:
        bad = next(v for v in m.source.nodes
                   if m.source.rank_of[v] != m.target.rank_of[m.mapping[v]])
        raise MorphismError(f"rank violated at node {bad!r}")
    for a, b in combinations(m.source.nodes, 2):
        j = _join(m.source, a, b)
        if j is None:
            continue
        tj = _join(m.target, m.mapping[a], m.mapping[b])
        if tj is None or tj != m.mapping[j]:
            raise MorphismError(f"join violated on pair ({a!r}, {b!r})")
    return PosetMorphism(m.source, m.target, dict(m.mapping),
                         rank_preserving=True, join_preserving=True)


def _psi_with_sets(g: LabeledGraph) -> tuple[VinePoset, dict[frozenset[str], str]]:
    cliques = principal_cliques(g)
    entries = []
    for (u, v), clique in cliques.items():
        entries.append((clique, frozenset((u, v)), clique - {u, v}))
    if len({clique for clique, _, _ in entries}) != len(entries):
        raise InternalDefectError("two edges generate the same principal clique")
    names = assign_union_names(entries, reserved=g.vertices)
    set_to_id: dict[frozenset[str], str] = {frozenset((v,)): v for v in g.vertices}
    set_to_id.update(names)
    items: list[tuple[str, int, list[str]]] = [(v, 1, []) for v in g.vertices]
    for (u, v), clique in sorted(cliques.items(),
                                 key=lambda kv: (len(kv[1]), kv[0])):
        children = []
        for removed in (u, v):
            child = clique - {removed}
            child_id = set_to_id.get(child)
            if child_id is None:
                raise InternalDefectError(
                    f"{sorted(child)} is not a principal clique or vertex")
            children.append(child_id)
        items.append((set_to_id[clique], len(clique), children))
    poset = VinePoset.build(items)
    kind = classify(poset).kind
    if kind < VineClass.LR_VINE:
        raise InternalDefectError(f"construction yielded {kind.name}, not an LR-vine")
    if g.is_complete() and kind != VineClass.R_VINE:
        raise InternalDefectError("complete input must yield a regular vine")
    return poset, set_to_id


def psi(g: LabeledGraph) -> VinePoset:
    """The vine of an MAT-labeled graph: singletons plus all principal
    cliques, ordered by inclusion and graded by cardinality."""
    return _psi_with_sets(g)[0]


def omega(p: VinePoset) -> LabeledGraph:
    """The labeled graph of an LR-vine: vertices are the minimal nodes, each
    non-minimal node contributes its conditioned pair as an edge labeled one
    less than the node's rank.

    Edges are found through the joining-path tower and cross-checked against
    the conditioned sets computed from complete unions.
    """
    kind = classify(p).kind
    if kind < VineClass.LR_VINE:
        raise PreconditionError(f"omega requires an LR-vine, got {kind.name.lower()}")
    verts = p.minimals
    items = []
    edge_set = {}
    for i, j in combinations(verts, 2):
        found = join_and_paths(p, i, j)
        if found is None:
            continue
        label = p.rank_of[found.join] - 1
        items.append((i, j, label))
        edge_set[frozenset((i, j))] = label
    expected = {}
    for v in p.nodes:
        if not p.covers_of[v]:
            continue
        conditioned, _ = cond_sets(p, v)
        expected[frozenset(conditioned)] = p.rank_of[v] - 1
    if expected != edge_set:
        raise InternalDefectError(
            "joining-path edges disagree with conditioned sets")
    out = LabeledGraph.build(verts, items)
    verdict = check_mat_labeling(out)
    if not verdict.ok:
        raise InternalDefectError(
            f"vine produced an invalid labeling: {verdict.violation}")
    if kind == VineClass.R_VINE and not out.is_complete():
        raise InternalDefectError("regular vine must map to a complete graph")
    return out


@dataclass(frozen=True, eq=False)
class RoundtripResult:
    verdict: Verdict
    witness: dict[str, str]


def roundtrip_check(x: LabeledGraph | VinePoset) -> RoundtripResult:
    """Verify the two-way conversion on one object.

    For a graph: converting to a vine and back must reproduce the graph, the
    witness being the vertex-to-minimal-node map.  For a vine: converting to
    a graph and back must give exactly the poset of complete unions, the
    witness being the map sending each node to its complete union.
    """
    if isinstance(x, LabeledGraph):
        return _roundtrip_graph(x)
    return _roundtrip_poset(x)


def _roundtrip_graph(g: LabeledGraph) -> RoundtripResult:
    p, set_to_id = _psi_with_sets(g)
    g2 = omega(p)
    eps = {v: set_to_id[frozenset((v,))] for v in g.vertices}
    if sorted(g2.vertices) != sorted(eps.values()):
        return RoundtripResult(
            Verdict.failed("Roundtrip", message="vertex sets differ"), eps)
    mapped = {tuple(sorted((eps[u], eps[v]))): k for (u, v), k in g.labels.items()}
    if mapped != g2.labels:
        return RoundtripResult(
            Verdict.failed("Roundtrip", message="edges or labels differ"), eps)
    return RoundtripResult(Verdict.passed(), eps)


def _roundtrip_poset(p: VinePoset) -> RoundtripResult:
    g = omega(p)
    q, set_to_id = _psi_with_sets(g)
    eta = {v: set_to_id[frozenset(complete_union(p, v))] for v in p.nodes}
    hatted = hat(p)
    if not structurally_equal(q, hatted):
        return RoundtripResult(
            Verdict.failed("Roundtrip",
                           message="reconstructed vine differs from the union poset"),
            eta)
    if len(set(eta.values())) != len(p.nodes) or set(eta.values()) != set(q.nodes):
        return RoundtripResult(
            Verdict.failed("Roundtrip", message="union map is not bijective"), eta)
    for a in p.nodes:
        for b in p.nodes:
            if p.leq(a, b) != q.leq(eta[a], eta[b]):
                return RoundtripResult(
                    Verdict.failed("Roundtrip",
                                   message=f"order not preserved on ({a!r}, {b!r})"),
                    eta)
        if p.rank_of[a] != q.rank_of[eta[a]]:
            return RoundtripResult(
                Verdict.failed("Roundtrip", message=f"rank changes at {a!r}"), eta)
    return RoundtripResult(Verdict.passed(), eta)


def lift_graph_morphism(m: GraphMorphism) -> PosetMorphism:
    """Image of a label-preserving graph map on the associated vines."""
    validate_graph_morphism(m)
    src, src_sets = _psi_with_sets(m.source)
    dst, dst_sets = _psi_with_sets(m.target)
    id_to_set_src = {v: s for s, v in src_sets.items()}
    mapping = {}
    for node in src.nodes:
        image_set = frozenset(m.mapping[a] for a in id_to_set_src[node])
        image_id = dst_sets.get(image_set)
        if image_id is None:
            raise InternalDefectError(
                f"image {sorted(image_set)} is not a node of the target vine")
        mapping[node] = image_id
    return validate_poset_morphism(
        PosetMorphism(src, dst, mapping))


def lift_poset_morphism(m: PosetMorphism) -> GraphMorphism:
    """Restriction of a rank- and join-preserving poset map to the minimal
    nodes, as a map of the associated labeled graphs."""
    checked = validate_poset_morphism(m)
    g_src = omega(m.source)
    g_dst = omega(m.target)
    mapping = {v: checked.mapping[v] for v in m.source.minimals}
    out = GraphMorphism(g_src, g_dst, mapping)
    validate_graph_morphism(out)
    return out


def embed_in_r_vine(p: VinePoset) -> tuple[VinePoset, PosetMorphism]:
    """Exhibit an LR-vine as an ideal of a regular vine.

    The target is the vine of the completed labeled graph; each node maps to
    the node carrying its complete union.  The image is verified to be
    downward closed.
    """
    kind = classify(p).kind
    if kind < VineClass.LR_VINE:
        raise PreconditionError(f"embed requires an LR-vine, got {kind.name.lower()}")
    g = omega(p)
    completed = extend_to_complete(g)
    target, set_to_id = _psi_with_sets(completed)
    mapping = {}
    for v in p.nodes:
        s = frozenset(complete_union(p, v))
        node = set_to_id.get(s)
        if node is None:
            raise InternalDefectError(
                f"complete union {sorted(s)} missing from the completed vine")
        mapping[v] = node
    morphism = validate_poset_morphism(PosetMorphism(p, target, mapping))
    image = set(mapping.values())
    if len(image) != len(p.nodes):
        raise InternalDefectError("embedding is not injective")
    for a in p.nodes:
        for b in p.nodes:
            if (target.leq(mapping[a], mapping[b]) != p.leq(a, b)):
                raise InternalDefectError("embedding is not an order embedding")
    for w in target.nodes:
        if any(w not in image and target.leq(w, x) for x in image):
            raise InternalDefectError("image of the embedding is not an ideal")
    return target, morphism


def enumerate_homomorphisms(src: LabeledGraph, dst: LabeledGraph
                            ) -> Iterator[dict[str, str]]:
    """All label-preserving vertex maps (not necessarily injective)."""
    order = list(src.vertices)

    def rec(t: int, partial: dict[str, str]) -> Iterator[dict[str, str]]:
        if t == len(order):
            yield dict(partial)
            return
        v = order[t]
        for cand in dst.vertices:
            ok = True
            for u, k in src.adjacency[v].items():
                if u in partial:
                    iu = partial[u]
                    if iu == cand or not dst.has_edge(iu, cand) \
                            or dst.label_of(iu, cand) != k:
                        ok = False
                        break
            if ok:
                partial[v] = cand
                yield from rec(t + 1, partial)
                del partial[v]

    yield from rec(0, {})


def check_pushout(g1: LabeledGraph, g2: LabeledGraph, overlap: LabeledGraph,
                  glued: LabeledGraph,
                  targets: Sequence[LabeledGraph] = ()) -> Verdict:
    """Verify the gluing square commutes and, against the supplied candidate
    targets, that a unique mediating map exists for every cocone.

    Universal-property checking is necessarily finite: every pair of
    compatible maps out of the two pieces into each target is enumerated and
    the induced map out of the glued graph must exist and be the only
    commuting one.
    """
    shared = set(g1.vertices) & set(g2.vertices)
    if set(overlap.vertices) != shared:
        raise PreconditionError("overlap vertices must be the shared vertices")
    for g, tag in ((g1, "first"), (g2, "second")):
        if overlap.labels != {e: k for e, k in g.restrict(shared).labels.items()}:
            raise PreconditionError(f"overlap does not match the {tag} input")
    expected = glue(g1, g2)
    if (set(glued.vertices) != set(expected.vertices)
            or glued.labels != expected.labels):
        return Verdict.failed("Commutation",
                              message="glued graph is not the union of the pieces")
    for t_index, target in enumerate(targets):
        homs1 = list(enumerate_homomorphisms(g1, target))
        homs2 = list(enumerate_homomorphisms(g2, target))
        all_glued_homs = list(enumerate_homomorphisms(glued, target))
        for h1 in homs1:
            for h2 in homs2:
                if any(h1[v] != h2[v] for v in shared):
                    continue
                mediators = [
                    theta for theta in all_glued_homs
                    if all(theta[v] == h1[v] for v in g1.vertices)
                    and all(theta[v] == h2[v] for v in g2.vertices)]
                if len(mediators) != 1:
                    cocone = {**{f"1/{v}": h1[v] for v in g1.vertices},
                              **{f"2/{v}": h2[v] for v in g2.vertices}}
                    return Verdict.failed(
                        "UniversalProperty",
                        message=f"cocone {cocone} into target #{t_index} "
                                f"admits {len(mediators)} mediating maps")
    return Verdict.passed()
