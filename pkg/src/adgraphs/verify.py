"""Claim checks: each registered claim recomputes a quantity and compares it
exactly with its closed form or predicate.

``verify_claim`` runs one (claim, q) pair and raises :class:`Inadmissible`
when q is outside the claim's hypotheses.  ``verify_all`` runs a grid of
pairs, never stops early, and records inadmissible pairs and errors instead
of raising.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from adgraphs.adgraph import (Side, covering_report, graph_from_strings, gq_graph, line,
                              plane_graph, point, rigid_graph)
from adgraphs.ff import Field, FieldError, field_of_order, prime_power
from adgraphs.metrics import (bfs_levels, diameter, girth, has_4cycle, level_set, p_ab_eval,
                              r3_census, r3_param_set, special_set, special_set_closed_form,
                              three_path_endpoint)
from adgraphs.poly import (JPoly, all_polys, is_pp_bruteforce, is_pp_hermite_dickson,
                           leading_coefficient_identities, wan_bound)
from adgraphs.rng import DEFAULT_SEED, stream
from adgraphs.symmetry import (are_isomorphic, aut_group, bipartition_preserved, frobenius_map,
                               group_elements, is_automorphism, is_isomorphism, map_order)

REQUIRED = "required"
EVIDENCE = "evidence"


class Inadmissible(ValueError):
    """q does not satisfy the hypotheses of the claim."""


@dataclass
class VerifyOptions:
    seed: int = DEFAULT_SEED
    samples: int | None = None      # overrides the default sample count of sampled claims
    any_residue: bool = False       # run thm2.1/thm3.2 outside q = 1 mod 3, as evidence
    node_limit: int = 200_000


@dataclass
class ClaimResult:
    claim_id: str
    q: int
    expected: Any
    computed: Any
    passed: bool
    severity: str = REQUIRED
    status: str = "pass"            # pass | fail | error | inadmissible
    seed: int | None = None
    reason: str | None = None
    runtime_ms: int = field(default=0, compare=False)

    @property
    def blocking_failure(self) -> bool:
        return self.severity == REQUIRED and self.status in ("fail", "error")

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "claim_id": self.claim_id,
            "q": self.q,
            "status": self.status,
            "passed": self.passed,
            "severity": self.severity,
            "expected": self.expected,
            "computed": self.computed,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.reason is not None:
            out["reason"] = self.reason
        if timings:
            out["runtime_ms"] = self.runtime_ms
        return out


@dataclass(frozen=True)
class _Outcome:
    expected: Any
    computed: Any
    passed: bool
    sampled: bool = False
    severity: str = REQUIRED


@dataclass(frozen=True)
class Claim:
    claim_id: str
    description: str
    admissible: Callable[[int, VerifyOptions], str | None]   # None if admissible, else the reason
    run: Callable[[Field, VerifyOptions], _Outcome]
    severity: str = REQUIRED
    default_samples: int | None = None


REGISTRY: dict[str, Claim] = {}


def _claim(claim_id: str, description: str, admissible, severity: str = REQUIRED,
           samples: int | None = None):
    def deco(fn):
        REGISTRY[claim_id] = Claim(claim_id, description, admissible, fn, severity, samples)
        return fn
    return deco


# -- admissibility predicates ---------------------------------------------------------

def _odd_prime_power(q: int) -> str | None:
    try:
        p, _ = prime_power(q)
    except FieldError:
        return f"q={q} is not a prime power"
    if p == 2:
        return f"q={q} is even; only odd prime powers are supported"
    return None


def _at_least(k: int):
    def check(q: int, opts: VerifyOptions) -> str | None:
        return _odd_prime_power(q) or (None if q >= k else f"requires q >= {k}")
    return check


def _one_mod_three_from(k: int, prime_only: bool = False):
    def check(q: int, opts: VerifyOptions) -> str | None:
        base = _odd_prime_power(q)
        if base:
            return base
        if prime_only and prime_power(q)[1] != 1:
            return "requires q prime"
        if q < k:
            return f"requires q >= {k}"
        if q % 3 != 1 and not opts.any_residue:
            return "requires q = 1 mod 3 (pass any_residue to run anyway)"
        return None
    return check


def _samples(opts: VerifyOptions, default: int) -> int:
    return opts.samples if opts.samples is not None else default


# -- census and automorphisms -----------------------------------------------------------

def _census(F: Field, opts: VerifyOptions):
    return r3_census(rigid_graph(F), rng=stream(opts.seed, "census", F.q))


@_claim("prop3.1", "r3 of [0,1,0] and [0,0,0] in R match their cubic closed forms", _at_least(7))
def _prop31(F, opts):
    q = F.q
    values = _census(F, opts).values
    computed = {"r3_010": values[(Side.LINE, 0, 1)], "r3_000": values[(Side.LINE, 0, 0)]}
    expected = {"r3_010": q**3 - 4 * q**2 + 9 * q - 8, "r3_000": q**3 - 4 * q**2 + 8 * q - 6}
    return _Outcome(expected, computed, computed == expected)


@_claim("thm3.2", "strict r3 ordering: other lines and all points < [0,0,0] < [0,1,0]",
        _one_mod_three_from(7))
def _thm32(F, opts):
    values = _census(F, opts).values
    top, second = values[(Side.LINE, 0, 1)], values[(Side.LINE, 0, 0)]
    other_lines = max(v for (s, a, b), v in values.items()
                      if s == Side.LINE and (a, b) not in ((0, 0), (0, 1)))
    points = max(v for (s, _, _), v in values.items() if s == Side.POINT)
    computed = {"r3_010": top, "r3_000": second, "max_other_line": other_lines, "max_point": points}
    ok = other_lines < second < top and points < second
    severity = REQUIRED if F.q % 3 == 1 else EVIDENCE
    return _Outcome("max_other_line < r3_000 < r3_010 and max_point < r3_000", computed, ok,
                    severity=severity)


@_claim("thm2.1", "Aut(R) has order p, consists of translations, and p^2 does not divide it",
        _one_mod_three_from(3, prime_only=True))
def _thm21(F, opts):
    rep = aut_group(rigid_graph(F), opts.node_limit)
    computed = {"order": str(rep.order), "translation_only": rep.is_translation_only,
                "divisible_by_q2": rep.order % (F.q * F.q) == 0}
    expected = {"order": str(F.q), "translation_only": True, "divisible_by_q2": False}
    severity = REQUIRED if F.q % 3 == 1 else EVIDENCE
    return _Outcome(expected, computed, computed == expected, severity=severity)


@_claim("conj5.1", "|Aut(R)| = e*q", _at_least(3), severity=EVIDENCE)
def _conj51(F, opts):
    rep = aut_group(rigid_graph(F), opts.node_limit)
    return _Outcome(str(F.e * F.q), str(rep.order), rep.order == F.e * F.q, severity=EVIDENCE)


@_claim("viglione", "|Aut(Gamma(p1*l1))| = 2*e*q^3*(q-1)^2", _at_least(5))
def _viglione(F, opts):
    q = F.q
    rep = aut_group(plane_graph(F), opts.node_limit)
    expected = 2 * F.e * q**3 * (q - 1) ** 2
    return _Outcome(str(expected), str(rep.order), rep.order == expected)


@_claim("frobenius", "coordinate-wise p-th power is a side-preserving automorphism of R of order e",
        _at_least(3))
def _frobenius(F, opts):
    R = rigid_graph(F)
    m = frobenius_map(R)
    computed = {"automorphism": is_automorphism(R, m), "order": map_order(m),
                "bipartition_preserved": bipartition_preserved(R, m)}
    expected = {"automorphism": True, "order": F.e, "bipartition_preserved": True}
    return _Outcome(expected, computed, computed == expected)


def _aut_elements(F: Field, opts: VerifyOptions):
    R = rigid_graph(F)
    rep = aut_group(R, opts.node_limit)
    return R, group_elements(rep.generators, R.vertex_count)


@_claim("cor3.6", "every automorphism of R maps points to points", _one_mod_three_from(7))
def _cor36(F, opts):
    R, elements = _aut_elements(F, opts)
    bad = sum(1 for g in elements if not bipartition_preserved(R, g))
    return _Outcome({"violations": 0}, {"elements": len(elements), "violations": bad}, bad == 0)


@_claim("fixed.sets", "Aut(R) fixes L_0, L_1, P_0 setwise and permutes the sets P_a",
        _one_mod_three_from(7))
def _fixed_sets(F, opts):
    R, elements = _aut_elements(F, opts)
    q = F.q

    def ids(kind, a):
        return frozenset(R.vertex_id(v) for v in special_set(R, kind, a))

    L0, L1, P0 = ids("L", 0), ids("L", 1), ids("P", 0)
    P_sets = {ids("P", a) for a in range(q)}
    bad = 0
    for g in elements:
        img = lambda s: frozenset(int(x) for x in g.images[sorted(s)])
        ok = img(L0) == L0 and img(L1) == L1 and img(P0) == P0
        ok = ok and all(img(P) in P_sets for P in P_sets)
        bad += not ok
    return _Outcome({"violations": 0}, {"elements": len(elements), "violations": bad}, bad == 0)


# -- structure ------------------------------------------------------------------------------

@_claim("diam", "diameter of R is 6, or 7 when q = 3", _at_least(3))
def _diam(F, opts):
    d = diameter(rigid_graph(F))
    expected = 7 if F.q == 3 else 6
    return _Outcome(expected, d, d == expected)


@_claim("c4free", "R has no 4-cycles", _at_least(3))
def _c4free(F, opts):
    has = has_4cycle(rigid_graph(F))
    return _Outcome(False, has, not has)


@_claim("girth", "Gamma(p1*l1, p1*l1^2) has girth 8", _at_least(5))
def _girth(F, opts):
    g = girth(gq_graph(F))
    return _Outcome(8, g, g == 8)


@_claim("cover", "dropping the third coordinate is a covering map from R onto Gamma(p1*l1)",
        _at_least(3))
def _cover(F, opts):
    rep = covering_report(rigid_graph(F), plane_graph(F))
    computed = {"q_to_one": rep.q_to_one, "edge_preserving": rep.edge_preserving,
                "neighborhoods_onto": rep.neighborhoods_onto}
    return _Outcome({k: True for k in computed}, computed, rep.ok)


ISO_CHAIN = ("p1^2*l1-p1*p2", "p2*l1", "p1*l1^2", "p1^2*l1")


@_claim("iso.chain", "four graphs Gamma(p1*l1, g) are pairwise isomorphic; R is not isomorphic to them",
        _at_least(3))
def _iso_chain(F, opts):
    graphs = [graph_from_strings(F, "p1*l1", g) for g in ISO_CHAIN]
    pairs = {}
    for i, j in itertools.combinations(range(len(graphs)), 2):
        ok, w = are_isomorphic(graphs[i], graphs[j], opts.node_limit)
        pairs[f"{i}-{j}"] = bool(ok and is_isomorphism(graphs[i], graphs[j], w))
    r_iso = are_isomorphic(rigid_graph(F), gq_graph(F), opts.node_limit)[0]
    computed = {"pairs": pairs, "R_isomorphic_to_chain": r_iso}
    expected = {"pairs": {k: True for k in pairs}, "R_isomorphic_to_chain": False}
    return _Outcome(expected, computed, computed == expected)


# -- distance lemma and named sets ------------------------------------------------------------

def _dist_from(table: np.ndarray, v: int, radius: int | None = None) -> np.ndarray:
    dist = np.full(table.shape[0], -1, dtype=np.int64)
    for d, level in enumerate(bfs_levels(table, v, radius)):
        dist[level] = d
    return dist


@_claim("lemma4.1.i", "vertices of R at distance 2 have distinct first coordinates", _at_least(5))
def _lemma41i(F, opts):
    R = rigid_graph(F)
    table, first = R.table, R.coords[:, 0]
    bad = 0
    for r in R.representatives:
        two = bfs_levels(table, int(r), 2)[2]
        bad += int(np.count_nonzero(first[two] == first[r]))
    return _Outcome({"violations": 0}, {"classes": len(R.representatives), "violations": bad}, bad == 0)


@_claim("lemma4.1.ii", "points (0,b,r) and (0,c,s) of R with b != c are at distance 4", _at_least(5))
def _lemma41ii(F, opts):
    R, q = rigid_graph(F), F.q
    bad = checked = 0
    # translations reduce r to 0
    for b in range(q):
        dist = _dist_from(R.table, R.vertex_id(point(0, b, 0)), 4)
        for c in range(q):
            if c == b:
                continue
            ids = R.ids_of(Side.POINT, [np.zeros(q, np.int64), np.full(q, c), np.arange(q)])
            bad += int(np.count_nonzero(dist[ids] != 4))
            checked += q
    return _Outcome({"violations": 0}, {"pairs": checked, "violations": bad}, bad == 0)


@_claim("lemma4.1.iii", "[x,y,r] and [x,y,s] (and points alike) with r != s are at distance >= 6",
        _at_least(5))
def _lemma41iii(F, opts):
    R, q = rigid_graph(F), F.q
    bad = 0
    for r in R.representatives:
        dist = _dist_from(R.table, int(r), 4)
        others = int(r) + np.arange(1, q)
        bad += int(np.count_nonzero(dist[others] >= 0))
    return _Outcome({"violations": 0}, {"classes": len(R.representatives), "violations": bad}, bad == 0)


@_claim("sets", "the sets N_r and I_b of R match their closed forms for every r and b", _at_least(5))
def _sets(F, opts):
    R = rigid_graph(F)
    bad = [f"{kind}{x}" for kind in ("N", "I") for x in range(F.q)
           if special_set(R, kind, x) != special_set_closed_form(F, kind, x)]
    return _Outcome({"mismatches": []}, {"mismatches": bad}, not bad)


# -- 3-neighbourhood parameterisations -----------------------------------------------------------

@_claim("eq2.path", "the third coordinate at the end of 3-paths from [A,B,0] is P_AB(b,c;a)/(b-a)",
        _at_least(5), samples=1000)
def _eq2_path(F, opts):
    R, q = rigid_graph(F), F.q
    rng = stream(opts.seed, "eq2.path", q)
    n = _samples(opts, 1000)
    bad = drawn = 0
    while drawn < n:
        A, B, a, b, c = (int(x) for x in rng.integers(0, q, size=5))
        if a == b or c == F.sub(F.mul(A, b), B):
            continue
        drawn += 1
        end = three_path_endpoint(R, A, B, a, b, c)
        want = F.div(p_ab_eval(F, A, B, b, c, a), F.sub(b, a))
        bad += end.coords[2] != want
    return _Outcome({"failures": 0}, {"samples": n, "failures": bad}, bad == 0, sampled=True)


@_claim("eq1.sets", "parameterised 3-neighbourhood sets of lines [A,B,0] equal the BFS level sets",
        _at_least(5))
def _eq1_sets(F, opts):
    R, q = rigid_graph(F), F.q
    bad = []
    if r3_param_set(R, "zero_zero") != level_set(R, line(0, 0, 0), 3):
        bad.append("zero_zero")
    if r3_param_set(R, "zero_one") != level_set(R, line(0, 1, 0), 3):
        bad.append("zero_one")
    pairs = list(itertools.product(range(q), repeat=2))
    if q > 13:
        rng = stream(opts.seed, "eq1.sets", q)
        pairs = [pairs[i] for i in sorted(rng.choice(len(pairs), size=20, replace=False))]
    for A, B in pairs:
        if r3_param_set(R, "general", A, B) != level_set(R, line(A, B, 0), 3):
            bad.append(f"general({A},{B})")
    return _Outcome({"mismatches": []}, {"classes": len(pairs) + 2, "mismatches": bad}, not bad,
                    sampled=q > 13)


# -- polynomials -----------------------------------------------------------------------------------

def _row_distinct(values: np.ndarray) -> np.ndarray:
    s = np.sort(values, axis=1)
    return 1 + np.count_nonzero(np.diff(s, axis=1), axis=1)


def _eval_grid(F: Field, coeffs: np.ndarray, powers: np.ndarray) -> np.ndarray:
    """values[i, t] = sum_k coeffs[i, k] * powers[k, t] over F."""
    out = np.zeros((coeffs.shape[0], powers.shape[1]), dtype=np.int64)
    for k in range(coeffs.shape[1]):
        out = F.add(out, F.mul(coeffs[:, k][:, None], powers[k][None, :]))
    return out


@_claim("wan", "every non-PP of degree 3 has at most q - ceil((q-1)/3) values", _at_least(3))
def _wan(F, opts):
    q = F.q
    t = np.arange(q)
    powers = np.stack([F.pow(t, k) for k in range(4)])
    lows = np.array(list(itertools.product(range(q), repeat=3)), dtype=np.int64)
    bound = wan_bound(3, F)
    non_pp = worst = bad = 0
    for lead in range(1, q):
        coeffs = np.column_stack([lows[:, 2], lows[:, 1], lows[:, 0], np.full(len(lows), lead)])
        sizes = _row_distinct(_eval_grid(F, coeffs, powers))
        np_sizes = sizes[sizes < q]
        non_pp += len(np_sizes)
        if len(np_sizes):
            worst = max(worst, int(np_sizes.max()))
        bad += int(np.count_nonzero(np_sizes > bound))
    computed = {"polys": (q - 1) * q**3, "non_pp": non_pp, "max_non_pp_values": worst,
                "violations": bad}
    return _Outcome({"bound": bound, "violations": 0}, computed, bad == 0)


@_claim("hd.criterion", "Hermite-Dickson test agrees with exhaustive evaluation", _at_least(3),
        samples=500)
def _hd_criterion(F, opts):
    q = F.q
    cases: list = []
    sampled = False
    if q <= 5:
        cases += [p for p in all_polys(F, 3) if p.degree() >= 1]
    if q <= 9:
        cases += list(all_polys(F, 3, monic_degree=3))
    else:
        rng = stream(opts.seed, "hd.criterion", q)
        cases += [JPoly.random(F, rng).to_poly(F) for _ in range(_samples(opts, 500))]
        sampled = True
    bad = sum(1 for p in cases if is_pp_hermite_dickson(p, F) != is_pp_bruteforce(p, F))
    return _Outcome({"disagreements": 0}, {"cases": len(cases), "disagreements": bad}, bad == 0,
                    sampled=sampled)


@_claim("hd.identities", "X^(q-1) coefficients of J^2, J^3, J^4 mod X^q - X match closed forms",
        _at_least(17), samples=200)
def _hd_identities(F, opts):
    rng = stream(opts.seed, "hd.identities", F.q)
    n = _samples(opts, 200)
    bad = 0
    for _ in range(n):
        j = JPoly.random(F, rng)
        bad += any(a != b for a, b in leading_coefficient_identities(j, F).values())
    return _Outcome({"failures": 0}, {"samples": n, "failures": bad}, bad == 0, sampled=True)


@_claim("lemma3.3", "J is never a PP; #V_j <= #V_J <= q-2, and #V_j <= q-3 when 0 is not a value of j",
        _one_mod_three_from(17), samples=200)
def _lemma33(F, opts):
    q = F.q
    t = np.arange(q)
    inv = np.where(t == 0, 0, F.pow(np.where(t == 0, 1, t), q - 2))
    powers = np.stack([F.pow(t, 3), F.pow(t, 2), t, inv])
    grid = np.array(list(itertools.product(range(q), repeat=3)), dtype=np.int64)
    coeffs = np.column_stack([np.ones(len(grid), np.int64), grid])
    vals = _eval_grid(F, coeffs, powers)
    size_J = _row_distinct(vals)
    size_j = _row_distinct(vals[:, 1:])
    zero_in_j = np.any(vals[:, 1:] == 0, axis=1)
    pp = int(np.count_nonzero(size_J == q))
    chain = int(np.count_nonzero((size_j > size_J) | (size_J > q - 2)))
    sharper = int(np.count_nonzero(~zero_in_j & (size_j > q - 3)))
    rng = stream(opts.seed, "lemma3.3", q)
    n = _samples(opts, 200)
    sampled_pp = sum(is_pp_bruteforce(JPoly.random(F, rng).to_poly(F), F) for _ in range(n))
    computed = {"exhaustive": len(grid), "pp": pp, "bound_violations": chain,
                "zero_free_violations": sharper, "samples": n, "sampled_pp": int(sampled_pp)}
    ok = pp == chain == sharper == sampled_pp == 0
    expected = {"pp": 0, "bound_violations": 0, "zero_free_violations": 0, "sampled_pp": 0}
    return _Outcome(expected, computed, ok, sampled=True)


# -- drivers ---------------------------------------------------------------------------------------

def claim_ids() -> list[str]:
    return sorted(REGISTRY)


def admissibility(claim_id: str, q: int, options: VerifyOptions | None = None) -> str | None:
    if claim_id not in REGISTRY:
        raise KeyError(f"unknown claim {claim_id!r}")
    return REGISTRY[claim_id].admissible(q, options or VerifyOptions())


def verify_claim(claim_id: str, q: int, options: VerifyOptions | None = None) -> ClaimResult:
    opts = options or VerifyOptions()
    claim = REGISTRY.get(claim_id)
    if claim is None:
        raise KeyError(f"unknown claim {claim_id!r}")
    why = claim.admissible(q, opts)
    if why:
        raise Inadmissible(f"{claim_id} at q={q}: {why}")
    start = time.perf_counter()
    out = claim.run(field_of_order(q), opts)
    ms = int((time.perf_counter() - start) * 1000)
    return ClaimResult(claim_id, q, out.expected, out.computed, bool(out.passed),
                       severity=out.severity, status="pass" if out.passed else "fail",
                       seed=opts.seed if out.sampled else None, runtime_ms=ms)


def _run_job(job: tuple[str, int, VerifyOptions]) -> ClaimResult:
    claim_id, q, opts = job
    claim = REGISTRY[claim_id]
    try:
        return verify_claim(claim_id, q, opts)
    except Inadmissible as exc:
        return ClaimResult(claim_id, q, None, None, False, claim.severity, "inadmissible",
                           reason=str(exc))
    except Exception as exc:  # recorded, never raised: the grid must complete
        return ClaimResult(claim_id, q, None, None, False, claim.severity, "error",
                           reason=f"{type(exc).__name__}: {exc}")


def select_claims(claim_filter: str | Iterable[str] | None) -> list[str]:
    """``None``/"all" selects everything; otherwise exact ids or prefixes
    ("lemma4.1" selects its three parts)."""
    if claim_filter is None or claim_filter == "all":
        return claim_ids()
    wanted = [claim_filter] if isinstance(claim_filter, str) else list(claim_filter)
    out = []
    for w in wanted:
        if w == "all":
            out.extend(claim_ids())
            continue
        hits = [c for c in claim_ids() if c == w or c.startswith(w + ".")]
        if not hits:
            raise KeyError(f"unknown claim {w!r}")
        out.extend(hits)
    return sorted(set(out))


def verify_all(q_list: Iterable[int], claim_filter=None, seed: int = DEFAULT_SEED,
               options: VerifyOptions | None = None, workers: int = 1) -> list[ClaimResult]:
    opts = options or VerifyOptions(seed=seed)
    if options is not None and seed != opts.seed:
        opts = VerifyOptions(seed, opts.samples, opts.any_residue, opts.node_limit)
    jobs = [(c, int(q), opts) for c in select_claims(claim_filter) for q in q_list]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(j) for j in jobs]
    return sorted(results, key=lambda r: (r.claim_id, r.q))


def any_blocking_failure(results: Iterable[ClaimResult]) -> bool:
    return any(r.blocking_failure for r in results)
