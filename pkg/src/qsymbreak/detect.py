"""Syntactic symmetry detection via colored-graph automorphism search.

A QBF instance is turned into a vertex-colored undirected graph whose
color- and adjacency-preserving vertex permutations correspond to
block-respecting signed permutations of the variables: two literal
vertices per variable joined by a negation edge, one vertex per clause
joined to the vertices of its literals, literal colors given by the
quantifier-block index and a single separate color for clauses.

Automorphisms are found by backtracking over color cells with iterative
refinement at every node, comparing each discrete leaf against the first
one reached.  Every candidate that survives the literal-pairing check and
the syntactic-symmetry test is reported as a generator.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from math import factorial

from .errors import CapExceededError, ValidationError
from .groups import SignedPermutation, is_syntactic_symmetry
from .qdimacs import QbfInstance

DEFAULT_BUDGET = 50_000
BRUTE_FORCE_CAP = 200_000


class DetectionWarning(UserWarning):
    """A candidate automorphism was discarded during conversion."""


@dataclass(frozen=True)
class ColoredGraph:
    """Simple undirected graph with integer vertex colors.

    Edges are sorted pairs ``(u, v)`` with ``u < v``, listed once.  Each
    vertex carries a provenance tag, either ``("literal", var, sign)`` or
    ``("clause", index)``.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    colors: tuple[int, ...]
    tags: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.colors) != self.n_vertices or len(self.tags) != self.n_vertices:
            raise ValidationError("colors and tags must cover every vertex")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n_vertices):
                raise ValidationError(f"bad edge ({u}, {v})")
            if (u, v) in seen:
                raise ValidationError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(row) for row in adj)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_set if u < v else (v, u) in self.edge_set


def build_symmetry_graph(
    instance: QbfInstance, collapse_binary: bool = False
) -> ColoredGraph:
    """Encode an instance as a colored graph for automorphism search.

    Variable ``v`` at position ``i`` of the prefix owns vertices ``2i``
    (positive literal) and ``2i + 1`` (negative literal).  With
    ``collapse_binary`` set, width-2 clauses become a direct edge between
    their two literal vertices instead of a clause vertex; this shrinks
    the graph but relies on the downstream pairing filter for soundness.
    """
    prefix = instance.prefix
    order = prefix.variables
    index = {v: i for i, v in enumerate(order)}
    clause_color = len(prefix.blocks)

    def lit_vertex(lit: int) -> int:
        return 2 * index[abs(lit)] + (1 if lit < 0 else 0)

    colors: list[int] = []
    tags: list[tuple] = []
    for v in order:
        b = prefix.block_index_of(v)
        colors += [b, b]
        tags += [("literal", v, 1), ("literal", v, -1)]

    edges = {(2 * i, 2 * i + 1) for i in range(len(order))}
    next_vertex = 2 * len(order)
    for idx, clause in enumerate(instance.clauses):
        lits = set(clause)
        if collapse_binary and len(lits) == 2:
            a, b = sorted(lit_vertex(lit) for lit in lits)
            if a != b:
                edges.add((a, b))
            continue
        cv = next_vertex
        next_vertex += 1
        colors.append(clause_color)
        tags.append(("clause", idx))
        for lit in lits:
            lv = lit_vertex(lit)
            edges.add((min(cv, lv), max(cv, lv)))

    return ColoredGraph(next_vertex, tuple(sorted(edges)), tuple(colors), tuple(tags))


def refine_colors(
    graph: ColoredGraph, colors: tuple[int, ...] | None = None
) -> tuple[int, ...]:
    """Split color classes by the multiset of neighbor colors, to a fixpoint.

    The result uses consecutive ids ``0..k-1`` assigned canonically, by
    sorting the signatures ``(old color, sorted neighbor colors)``.  Two
    colorings of the same graph related by an automorphism therefore
    refine to colorings related by that same automorphism with identical
    ids, which makes cell structures comparable across search branches.
    Refining an already stable coloring returns it unchanged.
    """
    n = graph.n_vertices
    current = tuple(graph.colors if colors is None else colors)
    if len(current) != n:
        raise ValidationError("coloring must assign a color to every vertex")
    adj = graph.adjacency
    while True:
        sigs = [
            (current[v], tuple(sorted(current[u] for u in adj[v]))) for v in range(n)
        ]
        rank = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        new = tuple(rank[sig] for sig in sigs)
        if new == current:
            return new
        current = new


@dataclass(frozen=True)
class AutomorphismResult:
    """Vertex permutations found by the search, with budget accounting."""

    permutations: tuple[tuple[int, ...], ...]
    complete: bool
    nodes_expanded: int

    def __iter__(self):
        return iter(self.permutations)

    def __len__(self) -> int:
        return len(self.permutations)


class _BudgetExhausted(Exception):
    pass


def find_automorphisms(
    graph: ColoredGraph, budget: int = DEFAULT_BUDGET
) -> AutomorphismResult:
    """Search for all color- and adjacency-preserving vertex permutations.

    Backtracking over the first non-singleton color cell at each node,
    with refinement after every individualization.  Each discrete leaf is
    matched against the first leaf by color; matches that verify as
    automorphisms are harvested.  The identity is never reported.  When
    the node-expansion ``budget`` runs out, the permutations found so far
    are returned with ``complete=False``.
    """
    n = graph.n_vertices
    edges = graph.edges
    colors0 = graph.colors
    edge_set = graph.edge_set
    found: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    first_leaf: list[tuple[int, ...]] = []
    shapes: dict[int, Counter] = {}
    identity = tuple(range(n))
    state = {"nodes": 0}

    def first_cell(coloring: tuple[int, ...]) -> list[int] | None:
        counts = Counter(coloring)
        target = min((c for c, k in counts.items() if k > 1), default=None)
        if target is None:
            return None
        return [v for v in range(n) if coloring[v] == target]

    def is_automorphism(perm: tuple[int, ...]) -> bool:
        if any(colors0[perm[v]] != colors0[v] for v in range(n)):
            return False
        for u, v in edges:
            a, b = perm[u], perm[v]
            if ((a, b) if a < b else (b, a)) not in edge_set:
                return False
        return True

    def handle_leaf(coloring: tuple[int, ...]) -> None:
        if not first_leaf:
            first_leaf.append(coloring)
            return
        base = first_leaf[0]
        slot = {c: v for v, c in enumerate(coloring)}
        perm = tuple(slot[base[v]] for v in range(n))
        if perm == identity or perm in seen:
            return
        if is_automorphism(perm):
            seen.add(perm)
            found.append(perm)

    def dfs(coloring: tuple[int, ...], depth: int) -> None:
        cell = first_cell(coloring)
        if cell is None:
            handle_leaf(coloring)
            return
        fresh = max(coloring) + 1
        for v in cell:
            state["nodes"] += 1
            if state["nodes"] > budget:
                raise _BudgetExhausted
            child = list(coloring)
            child[v] = fresh
            refined = refine_colors(graph, tuple(child))
            # prune branches whose cell structure diverges from the first
            # path at this depth; automorphic images always keep the shape
            shape = Counter(refined)
            known = shapes.get(depth + 1)
            if known is None:
                shapes[depth + 1] = shape
            elif shape != known:
                continue
            dfs(refined, depth + 1)

    complete = True
    try:
        dfs(refine_colors(graph), 0)
    except _BudgetExhausted:
        complete = False
    return AutomorphismResult(tuple(found), complete, state["nodes"])


def to_signed_permutations(
    perms, instance: QbfInstance, graph: ColoredGraph | None = None
) -> tuple[SignedPermutation, ...]:
    """Convert vertex permutations into signed variable permutations.

    A vertex permutation is kept only if it maps each variable's pair of
    literal vertices onto the literal pair of a single variable; the rest
    are discarded with a :class:`DetectionWarning`.  Survivors are
    deduplicated, the identity is dropped, and every output is checked to
    be a syntactic symmetry of the instance.
    """
    if graph is None:
        graph = build_symmetry_graph(instance)
    lit_vertex: dict[tuple[int, int], int] = {}
    lit_of: dict[int, tuple[int, int]] = {}
    for vertex, tag in enumerate(graph.tags):
        if tag[0] == "literal":
            _, var, sign = tag
            lit_vertex[(var, sign)] = vertex
            lit_of[vertex] = (var, sign)

    out: list[SignedPermutation] = []
    seen: set[SignedPermutation] = set()
    for perm in perms:
        mapping: dict[int, int] = {}
        consistent = True
        for (var, sign), vertex in lit_vertex.items():
            if sign < 0:
                continue
            pos_image = lit_of.get(perm[vertex])
            neg_image = lit_of.get(perm[lit_vertex[(var, -1)]])
            if (
                pos_image is None
                or neg_image is None
                or pos_image[0] != neg_image[0]
                or pos_image[1] != -neg_image[1]
            ):
                consistent = False
                break
            mapping[var] = pos_image[0] * pos_image[1]
        if not consistent:
            warnings.warn(
                "discarded a vertex permutation that breaks literal pairing",
                DetectionWarning,
                stacklevel=2,
            )
            continue
        g = SignedPermutation.from_dict(mapping)
        if g.is_identity or g in seen:
            continue
        try:
            accepted = is_syntactic_symmetry(g, instance)
        except ValidationError:
            accepted = False
        if not accepted:
            warnings.warn(
                "discarded a vertex permutation that is not a syntactic symmetry",
                DetectionWarning,
                stacklevel=2,
            )
            continue
        seen.add(g)
        out.append(g)
    return tuple(out)


@dataclass(frozen=True)
class DetectionResult:
    """Generators found for an instance, with search accounting."""

    generators: tuple[SignedPermutation, ...]
    complete: bool
    nodes_expanded: int

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)


def detect_symmetries(
    instance: QbfInstance,
    budget: int = DEFAULT_BUDGET,
    collapse_binary: bool = False,
) -> DetectionResult:
    """Detect syntactic symmetries of an instance.

    Builds the colored graph, searches for automorphisms within
    ``budget`` node expansions, and converts the results to verified
    signed-permutation generators.  ``complete=False`` signals that the
    budget ran out and the generator list may be missing symmetries.
    """
    graph = build_symmetry_graph(instance, collapse_binary=collapse_binary)
    search = find_automorphisms(graph, budget=budget)
    generators = to_signed_permutations(search.permutations, instance, graph=graph)
    return DetectionResult(generators, search.complete, search.nodes_expanded)


def brute_force_symmetries(
    instance: QbfInstance, cap: int = BRUTE_FORCE_CAP
) -> tuple[SignedPermutation, ...]:
    """Enumerate every syntactic symmetry by exhausting signed permutations.

    Tries all block-respecting signed permutations of the prefix
    variables and keeps the non-identity ones that preserve the clause
    multiset.  Intended as a desk-scale reference for the detector; the
    candidate count is capped because it grows as the product of
    ``2^k * k!`` over block sizes ``k``.
    """
    prefix = instance.prefix
    total = 1
    for block in prefix.blocks:
        k = len(block.variables)
        total *= factorial(k) * 2**k
    if total > cap:
        raise CapExceededError(
            f"{total} block-respecting signed permutations exceed cap {cap}"
        )

    block_options: list[list[tuple[tuple[int, int], ...]]] = []
    for block in prefix.blocks:
        variables = block.variables
        options = []
        for image in permutations(variables):
            for signs in product((1, -1), repeat=len(variables)):
                options.append(
                    tuple((v, s * w) for v, s, w in zip(variables, signs, image))
                )
        block_options.append(options)

    out: list[SignedPermutation] = []
    for combo in product(*block_options):
        mapping = {v: w for part in combo for v, w in part}
        g = SignedPermutation.from_dict(mapping)
        if g.is_identity:
            continue
        if is_syntactic_symmetry(g, instance):
            out.append(g)
    return tuple(out)
