"""Consolidated verification suite.

Runs every headline check of the toolkit over fixed grids and returns one
report with a pass/fail status per named check.  Output is deterministic for
a fixed seed: no timings, no environment data, stable ordering; two runs with
the same arguments serialize to identical bytes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import coxeter, orbits, period, tree
from .cache import cached_growth
from .coxeter import DEFAULT_ELEMENT_BUDGET

GRID_TYPES = (("A", 1), ("A", 2), ("A", 3), ("C", 2), ("G", 2))
GRID_QF = (2, 3, 4, 5)
RANK1_QF = (2, 3, 4, 5, 7, 8, 9)
OMEGA_GRID = (("A", 1), ("A", 2), ("A", 4), ("B", 3), ("C", 2), ("C", 3),
              ("D", 4), ("D", 5), ("E", 6), ("E", 7), ("E", 8), ("F", 4),
              ("G", 2))
ORBIT_CHAR2 = ((2, 1), (2, 2), (2, 3), (2, 4))
ORBIT_ODD = ((3, 1), (5, 1), (7, 1), (3, 2))

SUITE_TRUNCATION = 12
COUNTING_K = 8
SAMPLED_PAIRS = 50
DEFAULT_SEED = 1729


def _rat(x):
    return {"num": x.numerator, "den": x.denominator}


@dataclass(frozen=True)
class CheckResult:
    name: str
    claim: str
    status: str  # pass | fail
    witness: object

    def to_json_dict(self):
        return {"name": self.name, "claim": self.claim,
                "status": self.status, "witness": self.witness}


@dataclass(frozen=True)
class SuiteReport:
    seed: int
    depth: int
    checks: tuple

    @property
    def passed(self):
        return all(c.status == "pass" for c in self.checks)

    def to_json_dict(self):
        return {
            "schema_version": 1,
            "seed": self.seed,
            "depth": self.depth,
            "all_pass": self.passed,
            "checks": [c.to_json_dict() for c in self.checks],
        }

    def text_lines(self):
        lines = []
        for c in self.checks:
            lines.append(f"[{'PASS' if c.status == 'pass' else 'FAIL'}] "
                         f"{c.name}: {c.claim}")
        verdict = "all checks passed" if self.passed else "SOME CHECKS FAILED"
        lines.append(f"suite: {verdict} ({len(self.checks)} checks)")
        return lines


def _type_name(family, rank):
    return f"{family}{rank}"


def run_suite(seed=DEFAULT_SEED, depth=6, cache_dir=None,
              budget=DEFAULT_ELEMENT_BUDGET):
    """Run all named checks; returns a SuiteReport (never raises on failure).

    `depth` controls the deep trees for q_F in {2, 3} and must be at least 6
    so the harmonicity check covers the advertised range.
    """
    if depth < 6:
        raise ValueError(f"suite depth must be >= 6, got {depth}")
    checks = []

    # shared artifacts
    series = {(f, r): cached_growth(f, r, SUITE_TRUNCATION,
                                    cache_dir=cache_dir, budget=budget)
              for f, r in GRID_TYPES}
    periods = {(f, r, q): period.evaluate_period(f, r, q, budget=budget,
                                                 series=series[(f, r)])
               for f, r in GRID_TYPES for q in GRID_QF}
    deep_trees = {q: tree.build_tree_pair(q, depth) for q in (2, 3)}
    small_trees = {q: tree.build_tree_pair(q, 4 if q <= 3 else 3)
                   for q in GRID_QF}

    # 1. rank-1 closed form
    rows = []
    for q in RANK1_QF:
        value = period.period_closed_form("A", 1, q, budget=budget)
        expected = Fraction(q - 1, q + 1)
        rows.append({"q_F": q, "value": _rat(value), "ok": value == expected})
    checks.append(CheckResult(
        name="rank1-closed-form",
        claim="in rank 1 the alternating period series sums to (q_F-1)/(q_F+1) exactly",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 2. partial sums vs closed form within the exact tail bound
    rows = []
    for f, r in GRID_TYPES:
        for q in GRID_QF:
            res = periods[(f, r, q)]
            diff = abs(res.closed_form - res.partial_sums[-1])
            rows.append({"type": _type_name(f, r), "q_F": q,
                         "difference": _rat(diff), "tail_bound": _rat(res.tail),
                         "ok": diff <= res.tail})
    checks.append(CheckResult(
        name="series-tail-agreement",
        claim="truncated sums at K=12 match the closed form within the exact geometric tail bound",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 3. exact bounds on the value when q_F exceeds the rank
    rows = []
    for f, r in GRID_TYPES:
        for q in GRID_QF:
            rep = period.check_theorem_bounds(periods[(f, r, q)])
            rows.append({"type": _type_name(f, r), "q_F": q,
                         "applicable": rep.applicable, "ok": rep.holds,
                         "value": _rat(rep.value),
                         "lower": _rat(rep.lower) if rep.applicable else None})
    checks.append(CheckResult(
        name="period-bounds",
        claim="1 > value > 1 - (d+1)/q_F holds exactly whenever q_F > d",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 4. counting bound on sphere sizes, equality in rank 1
    rows = []
    for f, r in GRID_TYPES:
        bound_rows = period.check_counting_bound(series[(f, r)], r,
                                                 truncation=COUNTING_K)
        ok = all(row.ok for row in bound_rows)
        entry = {"type": _type_name(f, r), "ok": ok,
                 "min_slack": min(row.slack for row in bound_rows)}
        if (f, r) == ("A", 1):
            entry["equality"] = all(row.slack == 0 for row in bound_rows)
            entry["ok"] = ok and entry["equality"]
        rows.append(entry)
    checks.append(CheckResult(
        name="counting-bound",
        claim="sphere sizes satisfy a_k <= (d+1) d^(k-1) for k <= 8, with equality in rank 1",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 5. tree census and structural audit
    rows = []
    for q, t in sorted({**small_trees, **deep_trees}.items()):
        f_census = t.sphere_sizes(marked_only=True)
        e_census = t.sphere_sizes()
        census_ok = (f_census == [1] + [2 * q**k for k in range(1, t.depth + 1)]
                     and e_census == [1] + [2 * t.q_E**k
                                            for k in range(1, t.depth + 1)])
        audit = tree.check_tree_invariants(t)
        rows.append({"q_F": q, "depth": t.depth, "census_ok": census_ok,
                     "audit_ok": audit.ok,
                     "ok": census_ok and audit.ok})
    checks.append(CheckResult(
        name="tree-census",
        claim="marked and ambient edge spheres have sizes 2 q_F^k and 2 q_E^k, and all structural invariants hold",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 6. harmonicity and decay of the alternating geometric cocycle
    rows = []
    for q in (2, 3):
        t = deep_trees[q]
        f = tree.iwahori_cocycle(t)
        rep = tree.verify_harmonic(t, f)
        decay = tree.decay_check(t, f)
        rows.append({"q_F": q, "depth": t.depth,
                     "violations": len(rep.violations),
                     "interior_checked": rep.interior_checked,
                     "decay": _rat(decay),
                     "ok": rep.ok and decay == 1})
    checks.append(CheckResult(
        name="iwahori-harmonicity",
        claim="the alternating geometric cocycle is harmonic at every interior vertex with decay constant exactly 1",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 7. one-dimensional invariant space with the forced profile
    rows = []
    for q in GRID_QF:
        t = small_trees[q]
        sol = tree.invariant_solver(t)
        q_E = q * q
        expected = [Fraction(1), Fraction(-(q + 1), q_E - q)]
        while len(expected) < len(sol.profile):
            expected.append(expected[-1] / -q_E)
        profile_ok = list(sol.profile) == expected
        layer = {e: sol.profile[0] for e in t.edges() if t.e_delta[e] == 0}
        recon_ok = True
        delta = 0
        while True:
            layer = tree.reconstruct_layer(t, layer)
            if not layer:
                break
            delta += 1
            recon_ok = recon_ok and all(v == sol.profile[delta]
                                        for v in layer.values())
        rows.append({"q_F": q, "dimension": sol.dimension,
                     "profile": [_rat(c) for c in sol.profile],
                     "profile_ok": profile_ok, "reconstruction_ok": recon_ok,
                     "ok": sol.dimension == 1 and profile_ok and recon_ok})
    checks.append(CheckResult(
        name="invariant-multiplicity-one",
        claim="distance-class harmonic cocycles form a one-dimensional space with c_1 = -(q_F+1)/(q_E-q_F) and c_{d+1} = -c_d/q_E, reproduced layer by layer",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 8. orbit transitivity in both characteristics
    rows = []
    for p, n in ORBIT_CHAR2:
        fields = orbits.build_fields(p, n)
        rep = orbits.affine_square_orbits(fields)
        rows.append({"q": fields.q, "characteristic": 2,
                     "affine_orbits": rep.orbit_count,
                     "sizes": list(rep.orbit_sizes),
                     "ok": rep.orbit_count == 1})
    for p, n in ORBIT_ODD:
        fields = orbits.build_fields(p, n)
        aff = orbits.affine_square_orbits(fields)
        full = orbits.inversion_closure_orbits(fields)
        half = (fields.q * fields.q - fields.q) // 2
        rows.append({"q": fields.q, "characteristic": p,
                     "affine_orbits": aff.orbit_count,
                     "sizes": list(aff.orbit_sizes),
                     "closure_orbits": full.orbit_count,
                     "ok": (aff.orbit_count == 2
                            and aff.orbit_sizes == (half, half)
                            and full.orbit_count == 1)})
    checks.append(CheckResult(
        name="orbit-transitivity",
        claim="affine-square moves are transitive in characteristic 2; odd characteristic gives two half-size orbits merged by the inversion moves",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 9. inversion rewriting identity, exhaustively
    rows = []
    for p, n in ORBIT_ODD:
        fields = orbits.build_fields(p, n)
        rep = orbits.verify_fraction_identity(fields)
        rows.append({"q": fields.q, "checked": rep.n_checked,
                     "skipped": rep.n_skipped, "ok": rep.holds})
    checks.append(CheckResult(
        name="fraction-identity",
        claim="1/(a^2 x c + b) rewrites to (a^2 x c - b)/(a^4 c - b^2) for every coefficient pair",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 10. nonsquare witness value exists
    rows = []
    for p, n in ORBIT_ODD:
        fields = orbits.build_fields(p, n)
        _, c = orbits.canonical_inversion_data(fields)
        a, b = orbits.exists_nonsquare_value(fields, c)
        rows.append({"q": fields.q, "a": a, "b": b, "ok": True})
    checks.append(CheckResult(
        name="nonsquare-witness",
        claim="some a, b make a^2 - b^2/(a^2 c) a nonzero nonsquare of the base field",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 11. sign character multiplicative on the special diagram automorphisms
    rows = []
    for f, r in OMEGA_GRID:
        omega = coxeter.omega_group(f, r)
        ok = all(coxeter.epsilon_of_omega(a * b)
                 == coxeter.epsilon_of_omega(a) * coxeter.epsilon_of_omega(b)
                 for a in omega for b in omega)
        rows.append({"type": _type_name(f, r), "order": len(omega),
                     "signs": sorted({coxeter.epsilon_of_omega(a)
                                      for a in omega}),
                     "ok": ok})
    checks.append(CheckResult(
        name="omega-sign-homomorphism",
        claim="the label sign is multiplicative on the whole special automorphism group of each type",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    # 12. sign character on sampled tree automorphisms
    rows = []
    for q in GRID_QF:
        t = small_trees[q]
        rng = random.Random(seed + q)
        ok = tree.epsilon_tree(tree.endpoint_swap(t)) == -1
        for _ in range(SAMPLED_PAIRS):
            g = tree.random_automorphism(t, rng)
            h = tree.random_automorphism(t, rng)
            ok = ok and (tree.epsilon_tree(tree.compose(g, h))
                         == tree.epsilon_tree(g) * tree.epsilon_tree(h))
        rows.append({"q_F": q, "pairs": SAMPLED_PAIRS, "ok": ok})
    checks.append(CheckResult(
        name="tree-sign-homomorphism",
        claim="the label sign is multiplicative on sampled tree automorphisms and the root-edge endpoint swap has sign -1",
        status="pass" if all(r["ok"] for r in rows) else "fail",
        witness=rows))

    return SuiteReport(seed=seed, depth=depth, checks=tuple(checks))
