"""Irreducible affine Coxeter systems as exact integer affine transformations.

A system of family X and rank d has d+1 generators acting on the span of the
simple coroots, written in the simple-coroot basis.  The finite simple
reflections come straight from the Cartan matrix; the extra affine generator
reflects across the wall of the highest root shifted by one, which is the
composite of the highest-root reflection with translation by its coroot.  In
this basis every group element is an integer matrix plus an integer
translation vector, so equality, hashing and breadth-first enumeration are
exact.  Lengths are always Cayley-graph BFS layer indices, never reduced-word
bookkeeping.

Numbering: node 0 is always the affine node, nodes 1..d carry the Bourbaki
numbering of the finite diagram.  Coxeter matrices store the order of
s_i s_j, with 0 encoding an infinite order (only family A at rank 1 has one).

Instances are immutable; all operations are deterministic and safe to share
across threads.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .errors import BudgetError, FactorizationError, InvalidTypeError, ModelError
from .linalg import solve

INFINITE_ORDER = 0

DEFAULT_ELEMENT_BUDGET = 2_000_000

FAMILIES = ("A", "B", "C", "D", "E", "F", "G")

MAX_RANK = 9


def _check_type(family, rank):
    if family not in FAMILIES:
        raise InvalidTypeError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if not isinstance(rank, int):
        raise InvalidTypeError(f"rank must be an int, got {rank!r}")
    fixed = {"E": (6, 7, 8), "F": (4,), "G": (2,)}
    minimum = {"A": 1, "B": 3, "C": 2, "D": 4}
    if family in fixed:
        if rank not in fixed[family]:
            raise InvalidTypeError(f"family {family} requires rank in {fixed[family]}, got {rank}")
    elif rank < minimum[family]:
        hint = " (rank 2 is family C)" if family == "B" else ""
        raise InvalidTypeError(f"family {family} requires rank >= {minimum[family]}{hint}, got {rank}")
    elif rank > MAX_RANK:
        # construction itself is polynomial in rank but generator-order
        # validation and any later enumeration are not; keep desk scale
        raise InvalidTypeError(f"rank is capped at {MAX_RANK}, got {rank}")


# ---------------------------------------------------------------------------
# ambient root-system realizations (exact rational coordinates)

def _basis_vector(i, n):
    return tuple(Fraction(int(j == i)) for j in range(n))


def _dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def _simple_roots(family, d):
    F = Fraction
    if family == "A":
        n = d + 1
        return [tuple(F(int(j == i)) - F(int(j == i + 1)) for j in range(n)) for i in range(d)]
    if family in ("B", "C", "D"):
        roots = [tuple(F(int(j == i)) - F(int(j == i + 1)) for j in range(d)) for i in range(d - 1)]
        if family == "B":
            roots.append(_basis_vector(d - 1, d))
        elif family == "C":
            roots.append(tuple(2 * x for x in _basis_vector(d - 1, d)))
        else:
            roots.append(tuple(F(int(j == d - 2)) + F(int(j == d - 1)) for j in range(d)))
        return roots
    if family == "E":
        half = F(1, 2)
        alpha1 = (half, -half, -half, -half, -half, -half, -half, half)
        alpha2 = tuple(F(int(j in (0, 1))) for j in range(8))
        chain = [tuple(F(int(j == i)) - F(int(j == i - 1)) for j in range(8)) for i in range(1, 7)]
        return ([alpha1, alpha2] + chain)[:d]
    if family == "F":
        half = F(1, 2)
        return [
            tuple(F(x) for x in (0, 1, -1, 0)),
            tuple(F(x) for x in (0, 0, 1, -1)),
            tuple(F(x) for x in (0, 0, 0, 1)),
            (half, -half, -half, -half),
        ]
    # G2 in the plane x + y + z = 0
    return [
        tuple(Fraction(x) for x in (1, -1, 0)),
        tuple(Fraction(x) for x in (-2, 1, 1)),
    ]


def _reflect(beta, alpha, alpha_sq):
    coef = 2 * _dot(beta, alpha) / alpha_sq
    return tuple(b - coef * a for b, a in zip(beta, alpha))


def _all_roots(simple):
    norms = [_dot(a, a) for a in simple]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for beta in frontier:
            for alpha, sq in zip(simple, norms):
                img = _reflect(beta, alpha, sq)
                if img not in roots:
                    roots.add(img)
                    new.append(img)
        frontier = new
    return roots


def _highest_root(simple, roots):
    dominant = [r for r in roots if all(_dot(r, a) >= 0 for a in simple)]
    top_sq = max(_dot(r, r) for r in dominant)
    longs = [r for r in dominant if _dot(r, r) == top_sq]
    if len(longs) != 1:
        raise ModelError("highest root is not unique; root realization is broken")
    return longs[0]


def _as_int(x):
    frac = Fraction(x)
    if frac.denominator != 1:
        raise ModelError(f"expected an integer, got {frac}")
    return frac.numerator


# ---------------------------------------------------------------------------
# group elements

class AffineMap:
    """Integer affine transformation x -> M x + v; immutable and hashable."""

    __slots__ = ("matrix", "shift")

    def __init__(self, matrix, shift):
        self.matrix = tuple(tuple(row) for row in matrix)
        self.shift = tuple(shift)

    @classmethod
    def identity(cls, dim):
        return cls(tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)),
                   (0,) * dim)

    def __mul__(self, other):
        # composition: (self * other)(x) = self(other(x))
        m, v = self.matrix, self.shift
        om, ov = other.matrix, other.shift
        n = len(v)
        new_m = tuple(
            tuple(sum(m[i][k] * om[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )
        new_v = tuple(sum(m[i][k] * ov[k] for k in range(n)) + v[i] for i in range(n))
        return AffineMap(new_m, new_v)

    def apply(self, x):
        n = len(self.shift)
        return tuple(sum(self.matrix[i][k] * x[k] for k in range(n)) + self.shift[i]
                     for i in range(n))

    def is_identity(self):
        n = len(self.shift)
        return (all(v == 0 for v in self.shift)
                and all(self.matrix[i][j] == (1 if i == j else 0)
                        for i in range(n) for j in range(n)))

    def __eq__(self, other):
        return (isinstance(other, AffineMap)
                and self.matrix == other.matrix and self.shift == other.shift)

    def __hash__(self):
        return hash((self.matrix, self.shift))

    def __repr__(self):
        return f"AffineMap({self.matrix!r}, {self.shift!r})"


def _transformation_order(t, cap=6):
    """Exact order of t, or INFINITE_ORDER if it exceeds cap.

    Finite dihedral orders in an affine Coxeter system are at most 6, so any
    pair product that survives the cap is genuinely infinite.
    """
    p = t
    for k in range(1, cap + 1):
        if p.is_identity():
            return k
        p = p * t
    return INFINITE_ORDER


# ---------------------------------------------------------------------------
# system construction

@dataclass(frozen=True)
class CoxeterSystem:
    """An affine Coxeter system with exact generators.

    coxeter_matrix is the (rank+1) square matrix of pair orders, index 0 the
    affine node, with 0 encoding infinity.  generators[i] realizes s_i.
    """

    family: str
    rank: int
    coxeter_matrix: tuple
    generators: tuple
    n_positive_roots: int

    def to_json_dict(self):
        return {
            "schema_version": 1,
            "family": self.family,
            "rank": self.rank,
            "coxeter_matrix": [list(row) for row in self.coxeter_matrix],
        }


@dataclass(frozen=True)
class GrowthSeries:
    """Sphere sizes a_k of the Cayley graph, a_k = #{w : length(w) = k}."""

    family: str
    rank: int
    truncation: int
    coefficients: tuple
    source: str = "enumerated"


@functools.cache
def build_affine_system(family, rank):
    """Construct the affine system of the given family and rank.

    All generator matrices are validated on the spot: each generator is an
    involution and every pair product has exactly the order recorded in the
    Coxeter matrix.
    """
    _check_type(family, rank)
    d = rank
    simple = _simple_roots(family, d)
    roots = _all_roots(simple)
    theta = _highest_root(simple, roots)
    norms = [_dot(a, a) for a in simple]
    theta_sq = _dot(theta, theta)

    # Cartan matrix a[i][j] = <alpha_i, alpha_j_vee>
    cartan = [[_as_int(2 * _dot(simple[i], simple[j]) / norms[j]) for j in range(d)]
              for i in range(d)]
    # pairings of the highest root against the simple coroots, and vice versa
    t_row = [_as_int(2 * _dot(theta, simple[k]) / norms[k]) for k in range(d)]
    theta_on_coroot = [_as_int(2 * _dot(simple[j], theta) / theta_sq) for j in range(d)]

    # coordinates of the highest coroot in the simple-coroot basis
    covee = [tuple(2 * x / sq for x in a) for a, sq in zip(simple, norms)]
    theta_vee = tuple(2 * x / theta_sq for x in theta)
    gram = [[_dot(covee[i], covee[j]) for j in range(d)] for i in range(d)]
    rhs = [_dot(covee[i], theta_vee) for i in range(d)]
    c = [_as_int(x) for x in solve(gram, rhs)]

    gens = []
    m0 = [[(1 if j == k else 0) - c[j] * t_row[k] for k in range(d)] for j in range(d)]
    gens.append(AffineMap(m0, tuple(c)))
    for i in range(d):
        mi = [[(1 if j == k else 0) - (cartan[i][k] if j == i else 0) for k in range(d)]
              for j in range(d)]
        gens.append(AffineMap(mi, (0,) * d))

    # Coxeter matrix from affine Cartan products, 0/1/2/3 -> 2/3/4/6, 4 -> infinite
    order_of_product = {0: 2, 1: 3, 2: 4, 3: 6, 4: INFINITE_ORDER}
    m = [[1] * (d + 1) for _ in range(d + 1)]
    for i in range(d + 1):
        for j in range(d + 1):
            if i == j:
                continue
            if i >= 1 and j >= 1:
                n_ij = cartan[i - 1][j - 1] * cartan[j - 1][i - 1]
            else:
                k = (j if i == 0 else i) - 1
                n_ij = t_row[k] * theta_on_coroot[k]
            m[i][j] = order_of_product[n_ij]

    for i in range(d + 1):
        g2 = gens[i] * gens[i]
        if not g2.is_identity():
            raise ModelError(f"generator {i} is not an involution")
        for j in range(i + 1, d + 1):
            got = _transformation_order(gens[i] * gens[j])
            if got != m[i][j]:
                raise ModelError(
                    f"pair ({i},{j}) has order {got}, Coxeter matrix says {m[i][j]}")

    # the finite diagram must be connected (irreducible root system)
    seen = {1}
    stack = [1]
    while stack:
        i = stack.pop()
        for j in range(1, d + 1):
            if j not in seen and m[i][j] > 2:
                seen.add(j)
                stack.append(j)
    if len(seen) != d:
        raise ModelError("finite diagram is not connected")

    return CoxeterSystem(
        family=family,
        rank=rank,
        coxeter_matrix=tuple(tuple(row) for row in m),
        generators=tuple(gens),
        n_positive_roots=len(roots) // 2,
    )


# ---------------------------------------------------------------------------
# enumeration

def growth_coefficients(system, truncation, budget=DEFAULT_ELEMENT_BUDGET):
    """Sphere sizes a_0..a_K of the affine Cayley graph, by plain BFS.

    Distances are BFS layer indices over exact affine transformations.  If the
    enumeration would exceed `budget` elements, a BudgetError is raised that
    carries the complete layers found so far.
    """
    if truncation < 0:
        raise ValueError(f"truncation must be >= 0, got {truncation}")
    gens = system.generators
    start = AffineMap.identity(system.rank)
    seen = {start}
    layer = [start]
    coeffs = [1]
    for _ in range(truncation):
        nxt = []
        for w in layer:
            for g in gens:
                u = w * g
                if u not in seen:
                    if len(seen) >= budget:
                        raise BudgetError(
                            f"enumeration budget {budget} exceeded after "
                            f"{len(coeffs) - 1} complete layers",
                            partial_coefficients=coeffs, budget=budget)
                    seen.add(u)
                    nxt.append(u)
        coeffs.append(len(nxt))
        layer = nxt
    return GrowthSeries(
        family=system.family, rank=system.rank, truncation=truncation,
        coefficients=tuple(coeffs), source="enumerated")


def poincare_finite(family, rank, budget=DEFAULT_ELEMENT_BUDGET):
    """Length generating polynomial of the finite group <s_1..s_d>.

    Returns the tuple of coefficients by degree; computed by exhausting the
    finite group with BFS, so large exceptional types hit the element budget.
    """
    system = build_affine_system(family, rank)
    gens = system.generators[1:]
    start = AffineMap.identity(system.rank)
    seen = {start}
    layer = [start]
    coeffs = [1]
    while layer:
        nxt = []
        for w in layer:
            for g in gens:
                u = w * g
                if u not in seen:
                    if len(seen) >= budget:
                        raise BudgetError(
                            f"finite group of {family}{rank} exceeds budget {budget}",
                            partial_coefficients=coeffs, budget=budget)
                    seen.add(u)
                    nxt.append(u)
        if nxt:
            coeffs.append(len(nxt))
        layer = nxt
    if len(coeffs) - 1 != system.n_positive_roots:
        raise ModelError(
            f"top degree {len(coeffs) - 1} != positive root count "
            f"{system.n_positive_roots} for {family}{rank}")
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# exponents via exact factorization into geometric blocks

def _poly_div_exact(num, den):
    """Quotient of num by monic den in Z[t] if the division is exact, else None."""
    if len(num) < len(den):
        return None
    work = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in reversed(range(len(q))):
        coef = work[i + len(den) - 1]
        q[i] = coef
        if coef:
            for j, dj in enumerate(den):
                work[i + j] -= coef * dj
    if any(work[: len(den) - 1]):
        return None
    return q


def exponents(family, rank, budget=DEFAULT_ELEMENT_BUDGET):
    """Exponents m_1..m_d, from factoring the finite length polynomial.

    The polynomial must factor as prod_i (1 + t + ... + t^{m_i}); anything
    else raises FactorizationError.  Largest blocks are peeled first, which is
    forced: a geometric block of size n divides the polynomial only if some
    factor's block size is a multiple of n.
    """
    poly = list(poincare_finite(family, rank, budget=budget))
    order = sum(poly)
    work = poly
    exps = []
    for _ in range(rank):
        top = len(work)  # block size n has degree n-1
        found = None
        for n in range(top, 1, -1):
            q = _poly_div_exact(work, [1] * n)
            if q is not None:
                found = n
                work = q
                break
        if found is None:
            raise FactorizationError(
                f"length polynomial of {family}{rank} has no geometric factor left")
        exps.append(found - 1)
    if work != [1]:
        raise FactorizationError(
            f"length polynomial of {family}{rank} leaves a non-unit cofactor")
    exps.sort()
    if prod(m + 1 for m in exps) != order:
        raise FactorizationError(
            f"exponent product check failed for {family}{rank}")
    return exps


# ---------------------------------------------------------------------------
# the finite abelian group Omega of affine-diagram rotations

@dataclass(frozen=True)
class OmegaElement:
    """A diagram automorphism, stored as a permutation of the nodes 0..d."""

    perm: tuple

    def __mul__(self, other):
        return OmegaElement(tuple(self.perm[p] for p in other.perm))

    def is_identity(self):
        return all(p == i for i, p in enumerate(self.perm))


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _omega_perms(family, d):
    n = d + 1
    ident = tuple(range(n))
    if family == "A":
        if d == 1:
            return [ident, (1, 0)]
        rot = tuple((i + 1) % n for i in range(n))
        out, p = [], ident
        for _ in range(n):
            out.append(p)
            p = tuple(rot[x] for x in p)
        return out
    if family == "B":
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        return [ident, tuple(swap)]
    if family == "C":
        return [ident, tuple(d - i for i in range(n))]
    if family == "D":
        flip = tuple(d - i for i in range(n))
        kappa = list(range(n))
        kappa[0], kappa[1] = 1, 0
        kappa[d - 1], kappa[d] = d, d - 1
        kappa = tuple(kappa)
        if d % 2 == 0:
            comp = tuple(kappa[flip[i]] for i in range(n))
            return [ident, kappa, flip, comp]
        sigma = [d - i for i in range(n)]  # middle nodes flip
        sigma[0], sigma[d - 1], sigma[1], sigma[d] = d - 1, 1, d, 0
        sigma = tuple(sigma)
        out, p = [], ident
        for _ in range(4):
            out.append(p)
            p = tuple(sigma[x] for x in p)
        return out
    if family == "E" and d == 6:
        rho = (1, 6, 3, 5, 4, 2, 0)  # rotate the three arms around node 4
        return [(0, 1, 2, 3, 4, 5, 6), rho, tuple(rho[x] for x in rho)]
    if family == "E" and d == 7:
        return [ident, (7, 6, 2, 5, 4, 3, 1, 0)]
    return [ident]


def omega_group(family, rank):
    """The abelian group of affine-diagram rotations, as node permutations.

    Each permutation is checked to preserve the Coxeter matrix, and the list
    is checked to be closed under composition and commutative.
    """
    system = build_affine_system(family, rank)
    m = system.coxeter_matrix
    n = rank + 1
    elements = [OmegaElement(p) for p in _omega_perms(family, rank)]
    for el in elements:
        p = el.perm
        if sorted(p) != list(range(n)):
            raise ModelError(f"tabulated Omega entry {p} is not a permutation")
        for i in range(n):
            for j in range(n):
                if m[p[i]][p[j]] != m[i][j]:
                    raise ModelError(
                        f"Omega entry {p} does not preserve the Coxeter matrix "
                        f"of {family}{rank}")
    perms = {el.perm for el in elements}
    for a in elements:
        for b in elements:
            if (a * b).perm not in perms:
                raise ModelError(f"Omega of {family}{rank} is not closed")
            if (a * b).perm != (b * a).perm:
                raise ModelError(f"Omega of {family}{rank} is not abelian")
    return elements


def epsilon_of_omega(omega):
    """Sign character: the signature of the node permutation."""
    return _perm_sign(omega.perm)
