"""Truncated regular-tree pair and exact cocycle checks on it.

The ambient tree is (q_E+1)-regular with q_E = q_F^2, built outward from a
root edge to a fixed depth; inside it sits a marked (q_F+1)-regular subtree
through the same root edge.  Chambers are edges, panels are vertices, and
the gallery distance between edges is the number of panel crossings, i.e.
the BFS level at which an edge is created.

Storage is flat arrays with implicit ids: edge 0 is the root edge joining
vertices 0 and 1, edge e (e >= 1) creates vertex e + 1 as its far endpoint,
and the children edges of vertex v occupy the contiguous range starting at
1 + v * q_E.  A vertex is interior when all q_E + 1 of its neighbors are
materialized, which happens exactly when it was expanded.

The marked subtree follows creation order: every marked vertex marks its
first q_F children edges.  Each edge also records delta, its edge-to-edge
gallery distance to the nearest marked edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, ModelError
from .linalg import nullspace

ALLOWED_QF = (2, 3, 4, 5, 7, 8, 9)

DEFAULT_EDGE_BUDGET = 4_000_000


def _projected_edges(q_E, depth):
    total = 1
    power = 1
    for _ in range(depth):
        power *= q_E
        total += 2 * power
    return total


class TreePair:
    """Truncated (q_E+1)-regular tree with a marked (q_F+1)-regular subtree."""

    def __init__(self, q_F, depth, near, e_in_F, e_level, e_delta,
                 v_label, v_in_F, n_expanded):
        self.q_F = q_F
        self.q_E = q_F * q_F
        self.depth = depth
        self.near = near
        self.e_in_F = e_in_F
        self.e_level = e_level
        self.e_delta = e_delta
        self.v_label = v_label
        self.v_in_F = v_in_F
        self.n_expanded = n_expanded
        self.n_edges = len(near)
        self.n_vertices = len(v_label)
        self._edge_index = None

    # -- structure accessors -------------------------------------------------

    def far(self, e):
        return e + 1

    def endpoints(self, e):
        return self.near[e], e + 1

    def parent_edge(self, v):
        # both endpoints of the root edge point back to it
        return 0 if v <= 1 else v - 1

    def children(self, v):
        if v >= self.n_expanded:
            return range(0)
        start = 1 + v * self.q_E
        return range(start, start + self.q_E)

    def incident_edges(self, v):
        yield self.parent_edge(v)
        yield from self.children(v)

    def is_interior(self, v):
        return v < self.n_expanded

    def edges(self):
        return range(self.n_edges)

    def edge_between(self, u, w):
        """Edge id joining u and w, or None; the endpoint index is built lazily."""
        if self._edge_index is None:
            self._edge_index = {}
            for e in range(self.n_edges):
                a, b = self.near[e], e + 1
                self._edge_index[(a, b) if a < b else (b, a)] = e
        return self._edge_index.get((u, w) if u < w else (w, u))

    # -- census ---------------------------------------------------------------

    def sphere_sizes(self, marked_only=False):
        """Edge counts per gallery distance from the root edge."""
        counts = [0] * (self.depth + 1)
        if marked_only:
            for e in range(self.n_edges):
                if self.e_in_F[e]:
                    counts[self.e_level[e]] += 1
        else:
            for e in range(self.n_edges):
                counts[self.e_level[e]] += 1
        return counts

    def to_json_dict(self):
        return {
            "schema_version": 1,
            "q_F": self.q_F,
            "q_E": self.q_E,
            "depth": self.depth,
            "vertices": [
                {"id": v, "label": self.v_label[v], "in_F": self.v_in_F[v],
                 "interior": self.is_interior(v)}
                for v in range(self.n_vertices)
            ],
            "edges": [
                {"id": e, "near": self.near[e], "far": e + 1,
                 "in_F": self.e_in_F[e], "level": self.e_level[e],
                 "delta": self.e_delta[e]}
                for e in range(self.n_edges)
            ],
        }


def build_tree_pair(q_F, depth, edge_budget=DEFAULT_EDGE_BUDGET):
    """Build the truncated tree pair for a residue size q_F and a depth.

    Raises BudgetError before allocating anything when the edge count would
    exceed the budget; the error reports the smallest depth that already
    fails.
    """
    if q_F not in ALLOWED_QF:
        raise ValueError(f"q_F must be one of {ALLOWED_QF}, got {q_F}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    q_E = q_F * q_F
    if _projected_edges(q_E, depth) > edge_budget:
        failing = next(L for L in range(1, depth + 1)
                       if _projected_edges(q_E, L) > edge_budget)
        raise BudgetError(
            f"tree with q_F={q_F} needs {_projected_edges(q_E, depth)} edges at "
            f"depth {depth}, over budget {edge_budget}",
            budget=edge_budget, smallest_failing_depth=failing)

    near = [0]
    e_in_F = [True]
    e_level = [0]
    e_delta = [0]
    v_label = [0, 1]
    v_in_F = [True, True]

    # per-vertex extension templates; children of a marked vertex start with
    # its q_F marked children, all others are unmarked
    f_flags = [True] * q_F + [False] * (q_E - q_F)
    f_deltas = [0] * q_F + [1] * (q_E - q_F)
    e_flags = [False] * q_E

    v = 0
    while True:
        parent = 0 if v <= 1 else v - 1
        child_level = e_level[parent] + 1
        if child_level > depth:
            break
        near.extend([v] * q_E)
        e_level.extend([child_level] * q_E)
        v_label.extend([1 - v_label[v]] * q_E)
        if v_in_F[v]:
            e_in_F.extend(f_flags)
            e_delta.extend(f_deltas)
            v_in_F.extend(f_flags)
        else:
            e_in_F.extend(e_flags)
            e_delta.extend([e_delta[parent] + 1] * q_E)
            v_in_F.extend(e_flags)
        v += 1

    return TreePair(q_F, depth, near, e_in_F, e_level, e_delta,
                    v_label, v_in_F, n_expanded=v)


# ---------------------------------------------------------------------------
# cocycles

class EdgeCocycle:
    """Exact rational value per edge, indexed by edge id over the whole tree."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = list(values)

    def __getitem__(self, e):
        return self.values[e]

    def __len__(self):
        return len(self.values)

    @classmethod
    def constant(cls, tree, value):
        return cls([Fraction(value)] * tree.n_edges)

    @classmethod
    def indicator(cls, tree, edge):
        vals = [Fraction(0)] * tree.n_edges
        vals[edge] = Fraction(1)
        return cls(vals)

    @classmethod
    def from_deltas(cls, tree, profile):
        """Cocycle constant on delta-classes; profile[delta] gives the value."""
        return cls([profile[d] for d in tree.e_delta])


def iwahori_cocycle(tree):
    """The alternating geometric cocycle (-1/q_E)^(distance to the root edge)."""
    powers = [Fraction(1)]
    for _ in range(tree.depth):
        powers.append(powers[-1] * Fraction(-1, tree.q_E))
    return EdgeCocycle([powers[lvl] for lvl in tree.e_level])


@dataclass(frozen=True)
class HarmonicityReport:
    violations: tuple
    interior_checked: int
    boundary_skipped: int

    @property
    def ok(self):
        return not self.violations


def verify_harmonic(tree, cocycle):
    """Check that the edge values around every interior vertex sum to zero.

    Boundary vertices have missing neighbors, so they are skipped and counted
    rather than reported as violations.
    """
    vals = cocycle.values
    q_E = tree.q_E
    violations = []
    zero = Fraction(0)
    for v in range(tree.n_expanded):
        start = 1 + v * q_E
        total = sum(vals[start:start + q_E], vals[0 if v <= 1 else v - 1])
        if total != zero:
            violations.append(v)
    return HarmonicityReport(
        violations=tuple(violations),
        interior_checked=tree.n_expanded,
        boundary_skipped=tree.n_vertices - tree.n_expanded)


def tree_period(tree, cocycle):
    """Partial sums of the cocycle over marked edges, sphere by sphere."""
    layer_sums = [Fraction(0)] * (tree.depth + 1)
    vals = cocycle.values
    for e in range(tree.n_edges):
        if tree.e_in_F[e]:
            layer_sums[tree.e_level[e]] += vals[e]
    sums = []
    acc = Fraction(0)
    for s in layer_sums:
        acc += s
        sums.append(acc)
    return sums


def distance_to_F(tree, edge):
    """Gallery distance from an edge to the nearest marked edge."""
    if not 0 <= edge < tree.n_edges:
        raise ValueError(f"edge id out of range: {edge}")
    return tree.e_delta[edge]


def decay_check(tree, cocycle):
    """Exact sup over edges of |value| * q_E^(distance to the root edge)."""
    vals = cocycle.values
    best = Fraction(0)
    for e in range(tree.n_edges):
        cur = abs(vals[e]) * tree.q_E ** tree.e_level[e]
        if cur > best:
            best = cur
    return best


# ---------------------------------------------------------------------------
# the invariant cocycle: solve on delta-classes, then rebuild layer by layer

@dataclass(frozen=True)
class InvariantSolution:
    dimension: int
    profile: tuple  # value on delta-class d is profile[d], normalized profile[0] = 1


def invariant_solver(tree):
    """Solve for cocycles constant on delta-classes, harmonic at interior vertices.

    Builds one linear equation per distinct interior-vertex incidence pattern
    and computes the exact nullspace.  Any dimension other than 1 is a model
    bug and raises ModelError.  The returned profile is normalized to value 1
    on the marked edges, and the corresponding global cocycle is re-verified
    vertex by vertex before returning.
    """
    if tree.depth < 2:
        raise ValueError("need depth >= 2 to constrain every delta class")
    n_classes = tree.depth + 1
    rows = set()
    for v in range(tree.n_expanded):
        counts = [0] * n_classes
        counts[tree.e_delta[tree.parent_edge(v)]] += 1
        for e in tree.children(v):
            counts[tree.e_delta[e]] += 1
        rows.add(tuple(counts))
    basis = nullspace(sorted(rows), n_classes)
    if len(basis) != 1:
        raise ModelError(
            f"invariant space has dimension {len(basis)}, expected 1")
    vec = basis[0]
    if vec[0] == 0:
        raise ModelError("invariant cocycle vanishes on the marked subtree")
    profile = tuple(x / vec[0] for x in vec)
    report = verify_harmonic(tree, EdgeCocycle.from_deltas(tree, profile))
    if not report.ok:
        raise ModelError("solved profile is not harmonic at some interior vertex")
    return InvariantSolution(dimension=1, profile=profile)


def reconstruct_layer(tree, values):
    """Push a constant layer of values one delta-step outward.

    `values` must cover exactly the edges of one delta-class, with a single
    common value.  For each edge one class further out, the value is forced
    by harmonicity at its inner panel: the edges at the panel split into the
    known inner ones and the unknown outer ones, the outer ones all carry the
    same value, so that value is minus the inner sum over the outer count.
    Returns the full next layer as a dict; empty when already at the rim.
    """
    if not values:
        raise ValueError("empty input layer")
    deltas = {tree.e_delta[e] for e in values}
    if len(deltas) != 1:
        raise ValueError(f"input edges span several delta classes: {sorted(deltas)}")
    delta = deltas.pop()
    expected = [e for e in range(tree.n_edges) if tree.e_delta[e] == delta]
    if set(values) != set(expected):
        raise ValueError(f"input must cover every edge at delta={delta}")
    if len(set(values.values())) != 1:
        raise ValueError("input layer is not constant")

    out = {}
    panels = {}
    for e in range(tree.n_edges):
        if tree.e_delta[e] == delta + 1:
            panels.setdefault(tree.near[e], []).append(e)
    for panel, outer in panels.items():
        if not tree.is_interior(panel):
            raise ModelError("outer edge hangs at a boundary panel")
        inner = [e for e in tree.incident_edges(panel) if tree.e_delta[e] <= delta]
        inner_sum = sum((values[e] for e in inner), Fraction(0))
        val = -inner_sum / len(outer)
        for e in outer:
            out[e] = val
    return out


# ---------------------------------------------------------------------------
# automorphisms and the sign character

class TreeAutomorphism:
    """Partial automorphism: a vertex bijection on a sub-ball of the tree.

    The edge map is induced from the vertex map and validated edge by edge;
    a pair of mapped endpoints that is not an edge again is rejected.  The
    marked subtree does not need to be preserved.
    """

    def __init__(self, tree, vertex_map):
        self.tree = tree
        self.vertex_map = dict(vertex_map)
        if len(set(self.vertex_map.values())) != len(self.vertex_map):
            raise ValueError("vertex map is not injective")
        edge_map = {}
        for e in range(tree.n_edges):
            u, w = tree.near[e], e + 1
            gu = self.vertex_map.get(u)
            gw = self.vertex_map.get(w)
            if gu is None or gw is None:
                continue
            img = tree.edge_between(gu, gw)
            if img is None:
                raise ValueError(
                    f"vertex map breaks adjacency: edge {e} maps to non-edge "
                    f"({gu},{gw})")
            edge_map[e] = img
        self.edge_map = edge_map


def epsilon_tree(g):
    """Sign of the induced permutation of the two vertex types.

    +1 when the automorphism preserves the bipartition labels, -1 when it
    swaps them on every mapped edge.  A mixed or empty answer is incoherent
    and raises ValueError.
    """
    tree = g.tree
    sign = None
    for e in g.edge_map:
        u = tree.near[e]
        s = 1 if tree.v_label[g.vertex_map[u]] == tree.v_label[u] else -1
        if sign is None:
            sign = s
        elif sign != s:
            raise ValueError("automorphism is not label-coherent")
    if sign is None:
        raise ValueError("automorphism domain contains no edges")
    return sign


def identity_automorphism(tree):
    return TreeAutomorphism(tree, {v: v for v in range(tree.n_vertices)})


def endpoint_swap(tree):
    """The involution exchanging the two root-edge endpoints, matched by
    creation order below them."""
    vmap = {0: 1, 1: 0}
    stack = [(0, 1), (1, 0)]
    while stack:
        u, w = stack.pop()
        for eu, ew in zip(tree.children(u), tree.children(w)):
            vmap[eu + 1] = ew + 1
            stack.append((eu + 1, ew + 1))
    return TreeAutomorphism(tree, vmap)


def random_automorphism(tree, rng, swap=None):
    """Random full automorphism: optional endpoint swap, then a uniform
    permutation of the children at every expanded vertex."""
    if swap is None:
        swap = rng.random() < 0.5
    vmap = {0: 1, 1: 0} if swap else {0: 0, 1: 1}
    q_E = tree.q_E
    for v in range(tree.n_expanded):
        image = vmap[v]
        perm = list(range(q_E))
        rng.shuffle(perm)
        base = 1 + v * q_E
        ibase = 1 + image * q_E
        for j, pj in enumerate(perm):
            vmap[base + j + 1] = ibase + pj + 1
    return TreeAutomorphism(tree, vmap)


def compose(g, h):
    """The automorphism x -> g(h(x)), on the domain where both are defined."""
    vmap = {v: g.vertex_map[hv] for v, hv in h.vertex_map.items()
            if hv in g.vertex_map}
    return TreeAutomorphism(g.tree, vmap)


def translation_automorphism(tree, steps):
    """Partial automorphism shifting the canonical axis through the root edge.

    The axis follows first children on both sides of the root edge; a shift
    by `steps` moves every axis vertex that many places toward the positive
    end, and hanging subtrees follow by creation order as far as their images
    are materialized.  Odd shifts swap the two vertex labels.
    """
    if steps == 0:
        return identity_automorphism(tree)
    axis = [0, 1]
    while tree.is_interior(axis[-1]):
        axis.append(tree.children(axis[-1])[0] + 1)
    back = [0]
    while tree.is_interior(back[-1]):
        back.append(tree.children(back[-1])[0] + 1)
    axis = list(reversed(back[1:])) + axis  # negative end first

    if abs(steps) >= len(axis):
        raise ValueError(f"shift {steps} exceeds the materialized axis")
    vmap = {}
    axis_set = set(axis)
    pairs = []
    for j, v in enumerate(axis):
        if 0 <= j + steps < len(axis):
            vmap[v] = axis[j + steps]
            pairs.append((v, axis[j + steps]))

    # hang off-axis subtrees: children ranges minus the axis child, in order
    def off_axis_children(v):
        return [e for e in tree.children(v) if e + 1 not in axis_set]

    stack = []
    for v, img in pairs:
        src = off_axis_children(v)
        dst = off_axis_children(img)
        if len(src) == len(dst):
            for es, ed in zip(src, dst):
                stack.append((es + 1, ed + 1))
    while stack:
        v, img = stack.pop()
        vmap[v] = img
        for es, ed in zip(tree.children(v), tree.children(img)):
            stack.append((es + 1, ed + 1))
    return TreeAutomorphism(tree, vmap)


# ---------------------------------------------------------------------------
# structural invariant audit

@dataclass(frozen=True)
class TreeAuditReport:
    problems: tuple

    @property
    def ok(self):
        return not self.problems


def check_tree_invariants(tree):
    """Audit the structural invariants of a built tree pair.

    Checks interior degrees, marked-subtree degrees and connectivity, label
    alternation across every edge, sphere censuses, and the delta recursion
    (each delta >= 2 edge has exactly one inner neighbor one class closer;
    each delta = 1 edge hangs at a marked vertex carrying q_F + 1 marked
    edges).
    """
    problems = []
    q_F, q_E = tree.q_F, tree.q_E

    for v in range(tree.n_vertices):
        n_marked = sum(1 for e in tree.incident_edges(v) if tree.e_in_F[e])
        if tree.is_interior(v):
            degree = 1 + len(tree.children(v))
            if degree != q_E + 1:
                problems.append(f"interior vertex {v} has degree {degree}")
            if tree.v_in_F[v] and n_marked != q_F + 1:
                problems.append(f"marked interior vertex {v} has {n_marked} marked edges")
        if not tree.v_in_F[v] and n_marked != 0:
            problems.append(f"unmarked vertex {v} touches {n_marked} marked edges")

    for e in range(tree.n_edges):
        if tree.v_label[tree.near[e]] == tree.v_label[e + 1]:
            problems.append(f"edge {e} joins equal labels")

    # marked subtree connected: walk marked edges from the root edge
    marked_edges = {e for e in range(tree.n_edges) if tree.e_in_F[e]}
    seen_vertices = {0, 1}
    seen_edges = {0}
    stack = [0, 1]
    while stack:
        v = stack.pop()
        for e in tree.incident_edges(v):
            if e in marked_edges and e not in seen_edges:
                seen_edges.add(e)
                other = tree.near[e] if tree.near[e] != v else e + 1
                if other not in seen_vertices:
                    seen_vertices.add(other)
                    stack.append(other)
    if seen_edges != marked_edges:
        problems.append("marked subtree is not connected to the root edge")

    expected_f = [2 * q_F**k for k in range(1, tree.depth + 1)]
    expected_e = [2 * q_E**k for k in range(1, tree.depth + 1)]
    if tree.sphere_sizes(marked_only=True)[1:] != expected_f:
        problems.append("marked sphere census mismatch")
    if tree.sphere_sizes()[1:] != expected_e:
        problems.append("ambient sphere census mismatch")

    for e in range(tree.n_edges):
        delta = tree.e_delta[e]
        if delta == 0:
            continue
        panel = tree.near[e]
        closer = sum(1 for x in tree.incident_edges(panel)
                     if tree.e_delta[x] == delta - 1)
        if delta == 1:
            if closer != q_F + 1:
                problems.append(f"edge {e} at delta=1 sees {closer} marked edges")
        elif closer != 1:
            problems.append(f"edge {e} at delta={delta} has {closer} inner neighbors")

    return TreeAuditReport(problems=tuple(problems))


def cocycle_to_csv(cocycle):
    """CSV dump with the fixed header edge_id,num,den."""
    lines = ["edge_id,num,den"]
    for e, val in enumerate(cocycle.values):
        lines.append(f"{e},{val.numerator},{val.denominator}")
    return "\n".join(lines) + "\n"
