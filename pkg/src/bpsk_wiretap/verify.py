"""Verification suites run by ``bpsk-wiretap verify``.

Each check returns ``{"name", "pass", "detail"}``; a suite report is
``{"suite", "checks", "pass"}``. Functions under test are looked up on their
modules at call time, so a patched implementation is what gets checked.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction
from typing import Callable

import numpy as np

from . import capacity, codesim, entropy, fock, gram, proof, scenario

SUITES = ("identities", "oracle", "lemmas", "typicality", "montecarlo")


def _check(name: str, passed: bool, detail: str) -> dict:
    return {"name": name, "pass": bool(passed), "detail": detail}


def _timed(name: str, fn: Callable[[], tuple[bool, str]], budget: float | None = None) -> dict:
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crashing check is a failing check
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed > budget:
        passed = False
        detail += f"; exceeded time budget {budget}s"
    return _check(name, passed, f"{detail} ({elapsed:.3f}s)")


# ---------------------------------------------------------------------------
# identities


def check_hbpsk_dual_formula(points: int = 1000, tol: float = 1e-12) -> tuple[bool, str]:
    xs = np.linspace(0.0, 50.0, points)
    worst = 0.0
    for x in xs:
        # cosh(x) e^{-x} written out independently of the library's evaluation
        p = math.cosh(x) * math.exp(-x)
        q = 1.0 - p
        direct = 0.0 if q <= 0 else -(p * math.log2(p) + q * math.log2(q))
        worst = max(worst, abs(entropy.h_bpsk(float(x)) - direct))
    return worst <= tol, f"max |difference| = {worst:.3e} over {points} points, tol {tol:g}"


def check_binary_entropy_symmetry() -> tuple[bool, str]:
    grid = [k / 1024 for k in range(1025)]
    bad = [p for p in grid if entropy.binary_entropy(p) != entropy.binary_entropy(1.0 - p)]
    return not bad, f"{len(bad)} asymmetric points on a dyadic grid of {len(grid)}"


def check_monotone_terms() -> tuple[bool, str]:
    xs = np.linspace(0.0, 20.0, 2001)[1:]
    hb = [entropy.h_bpsk(float(x)) for x in xs]
    pe = [entropy.homodyne_error(float(x)) for x in xs[:400]]
    ok_h = all(b >= a for a, b in zip(hb, hb[1:])) and max(hb) <= 1.0
    ok_p = all(b < a for a, b in zip(pe, pe[1:]))
    return ok_h and ok_p, f"h_bpsk non-decreasing and <= 1: {ok_h}; homodyne error strictly decreasing: {ok_p}"


def check_two_codeword_srm(tol: float = 1e-10) -> tuple[bool, str]:
    worst = 0.0
    for E in (0.1, 0.5, 1.0, 2.0):
        a = math.sqrt(E)
        g = gram.build_gram(gram.WeightedEnsemble.uniform([[a], [-a]]))
        expected = 0.5 * (1.0 + math.sqrt(1.0 - math.exp(-4.0 * E)))
        worst = max(worst, abs(gram.srm_success(g) - expected))
    return worst <= tol, f"max deviation from the Helstrom value {worst:.3e}, tol {tol:g}"


def check_singleton_reduction() -> tuple[bool, str]:
    cases = [(1.0, math.sqrt(0.2), 1.0), (0.5, 0.3, 4.0), (0.01, 0.004, 1e6), (0.2, 0.2, 3.0)]
    bad = []
    for tau, eta, E in cases:
        entry = capacity.qq_capacity(capacity.ChannelParamSet.singleton(tau, eta, E))
        rate = proof.achievable_rate(entropy.h_bpsk(tau * tau * E), entropy.h_bpsk(eta * eta * E))
        if entry.raw != rate:
            bad.append((tau, eta, E, entry.raw, rate))
    return not bad, f"{len(cases) - len(bad)}/{len(cases)} singleton cases match exactly"


def check_sweep_ordering(points: int = 128, tol: float = 1e-12) -> tuple[bool, str]:
    cfg = scenario.ScenarioConfig(grid_points=points)
    rows = scenario.run_sweep(cfg)
    order = all(r.qq_raw >= r.cq_raw - tol and r.cc_raw >= r.cq_raw - tol for r in rows)
    gain = sum(1 for r in rows if r.cq == 0.0 and r.qq > 0.0)
    return order and gain > 0 and len(rows) >= 64, \
        f"{len(rows)} points; ordering holds: {order}; points with CQ clipped and QQ > 0: {gain}"


def check_scenario_numbers() -> tuple[bool, str]:
    cfg = scenario.ScenarioConfig()
    budget = scenario.block_budget(cfg)
    rows = scenario.run_sweep(cfg)
    lo, hi = rows[0].E_r, rows[-1].E_r
    ok = budget == 50_000_000 and abs(lo / 1e-2 - 1) <= 1e-9 and abs(hi / 1e2 - 1) <= 1e-9
    return ok, f"block budget {budget}; E_r range [{lo!r}, {hi!r}]"


def identities() -> list[dict]:
    return [
        _timed("h_bpsk dual formula", check_hbpsk_dual_formula, budget=1.0),
        _timed("binary entropy symmetry", check_binary_entropy_symmetry),
        _timed("monotone capacity terms", check_monotone_terms),
        _timed("two-codeword SRM optimality", check_two_codeword_srm, budget=1.0),
        _timed("QQ singleton reduction", check_singleton_reduction, budget=1.0),
        _timed("capacity ordering over the default sweep", check_sweep_ordering, budget=5.0),
        _timed("scenario numbers", check_scenario_numbers, budget=1.0),
    ]


# ---------------------------------------------------------------------------
# oracle


ORACLE_CUTOFF = 40
ORACLE_SHAPES = ((1, 1), (1, 2), (2, 1), (2, 2), (2, 4), (4, 2), (8, 1), (1, 8))


def oracle_cases():
    """Codebooks with ``n <= 3``, ``M*L <= 8``, ``E <= 1`` used for the Gram/Fock comparison."""
    seed = 0
    for n in (1, 2, 3):
        for M, L in ORACLE_SHAPES:
            for E in (0.3, 1.0):
                seed += 1
                yield codesim.sample_codebook(M, L, n, E, seed)


def check_oracle_equivalence(tol: float = 1e-6, N: int = ORACLE_CUTOFF) -> tuple[bool, str]:
    worst = {"entropy": 0.0, "srm": 0.0, "distance": 0.0}
    count = 0
    for cb in oracle_cases():
        for scale in (1.0, 0.6):
            full = gram.WeightedEnsemble.uniform(cb.labels(scale))
            fake = gram.WeightedEnsemble.uniform(cb.message_labels(0, scale))
            g = gram.build_gram(full)
            ref = fock.FockSpanOracle(full, N)
            worst["entropy"] = max(worst["entropy"], abs(gram.ensemble_entropy(g) - ref.entropy()))
            worst["srm"] = max(worst["srm"], abs(gram.srm_success(g) - ref.srm_success()))
            worst["distance"] = max(worst["distance"], abs(
                gram.average_state_distance(full, fake) - ref.distance(fake)))
            count += 1
    ok = all(v <= tol for v in worst.values())
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    return ok, f"{count} ensembles at cutoff {N}; max deviations: {detail}; tol {tol:g}"


def check_dense_oracle(tol: float = 1e-8) -> tuple[bool, str]:
    # single-mode dense operators, including the explicit SRM POVM
    worst = 0.0
    for E in (0.1, 0.5, 1.0):
        a = math.sqrt(E)
        ens = gram.WeightedEnsemble.uniform([[a], [-a]])
        rho = fock.density_from_ensemble(ens, 30)
        worst = max(worst, abs(fock.von_neumann_entropy(rho) - entropy.h_bpsk(E)))
        states = [fock.coherent_vector(a, 30), fock.coherent_vector(-a, 30)]
        povm = fock.srm_povm(states)
        completeness = np.abs(sum(povm) - np.eye(31)).max()
        succ = fock.povm_success(povm, states)
        worst = max(worst, abs(succ - gram.srm_success(gram.build_gram(ens))), completeness)
    return worst <= tol, f"max deviation {worst:.2e} (entropy, SRM success, POVM completeness); tol {tol:g}"


def oracle() -> list[dict]:
    return [
        _timed("Gram/Fock oracle equivalence", check_oracle_equivalence, budget=60.0),
        _timed("dense single-mode oracle", check_dense_oracle),
    ]


# ---------------------------------------------------------------------------
# lemmas


def check_tail_bound() -> tuple[bool, str]:
    bad, rows = [], 0
    for mean in (0.5, 1.0, 2.0):
        base = math.ceil(8 * math.e * mean) + 1
        for N in (base, base + 10):
            rep = fock.tail_probability(math.sqrt(mean), N)
            rows += 1
            if not (rep.precondition and rep.tail <= 2.0 ** (-N - 1)):
                bad.append((mean, N, rep.tail))
    return not bad, f"{rows - len(bad)}/{rows} (|alpha|^2, N) pairs satisfy tail <= 2^(-N-1)"


def continuity_pairs(count: int = 100, seed: int = 4, cutoff: int = 10):
    """Seeded pairs ``(rho, sigma, E, eps)`` of truncated single-mode states inside the bound's range."""
    rng = np.random.default_rng(seed)
    dim = cutoff + 1
    made = 0
    while made < count:
        support = int(rng.integers(2, dim + 1))
        kind = made % 3
        rho = np.zeros((dim, dim), dtype=complex)
        rho[:support, :support] = fock.random_density_matrix(support, rng, rank=int(rng.integers(1, support + 1)))
        if kind == 1:
            # low-energy state: mostly vacuum
            vac = np.zeros((dim, dim), dtype=complex)
            vac[0, 0] = 1.0
            a = rng.uniform(0.0, 0.3)
            rho = (1 - a) * vac + a * rho
        other = np.zeros((dim, dim), dtype=complex)
        other[:support, :support] = fock.random_density_matrix(support, rng)
        t = rng.uniform(0.0, 0.6) if kind != 2 else rng.uniform(0.0, 1.0)
        sigma = (1 - t) * rho + t * other
        r_op, s_op = fock.FockOperator(rho, cutoff), fock.FockOperator(sigma, cutoff)
        E = max(fock.photon_number_expectation(r_op), fock.photon_number_expectation(s_op))
        eps = 0.5 * fock.trace_norm_distance(r_op, s_op)
        if E <= 0 or eps > E / (1 + E):
            continue
        made += 1
        yield r_op, s_op, E, eps


def check_continuity_bound(count: int = 100) -> tuple[bool, str]:
    violations, worst_ratio = 0, 0.0
    for rho, sigma, E, eps in continuity_pairs(count):
        gap = abs(fock.von_neumann_entropy(rho) - fock.von_neumann_entropy(sigma))
        bound = entropy.entropy_continuity_bound(min(eps, E / (1 + E)), E)
        if gap > bound + 1e-12:
            violations += 1
        if bound > 0:
            worst_ratio = max(worst_ratio, gap / bound)
    return violations == 0, f"{violations} violations in {count} pairs; max gap/bound {worst_ratio:.3f}"


def check_finite_support(count: int = 100, seed: int = 3, dim: int = 8) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(count):
        lam = fock.random_effect_operator(dim, rng)
        rho = fock.random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1)))
        sigma = fock.random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1)))
        if not fock.check_finite_support_lemma(lam, rho, sigma):
            failures += 1
    return failures == 0, f"{failures} violations in {count} triples"


def check_truncation_error() -> tuple[bool, str]:
    bad = []
    for mean in (0.1, 0.5, 1.0):
        N = math.ceil(8 * math.e * mean) + 1
        big = fock.FockOperator.from_vector(fock.coherent_vector(math.sqrt(mean), N + 40), N + 40)
        small = fock.truncate_renormalize(big, N)
        padded = np.zeros_like(big.matrix)
        padded[:N + 1, :N + 1] = small.matrix
        dist = fock.trace_norm_distance(big.matrix, padded)
        if dist > 2.0 ** (-N):
            bad.append((mean, N, dist))
    return not bad, f"{3 - len(bad)}/3 single-mode truncations within 2^-N"


def lemmas() -> list[dict]:
    return [
        _timed("coherent-state truncation tail", check_tail_bound, budget=1.0),
        _timed("entropy continuity bound", check_continuity_bound, budget=30.0),
        _timed("finite support approximation", check_finite_support, budget=30.0),
        _timed("truncate-renormalize error", check_truncation_error),
    ]


# ---------------------------------------------------------------------------
# typicality


TYPICALITY_DELTAS = ("0.05", "0.1", "0.2", "0.3")


def binomial_typical_count(n: int, delta: str) -> int:
    """``sum C(n, k)`` over ``|k/n - 1/2| <= delta``, in exact rational arithmetic."""
    d = Fraction(delta)
    return sum(math.comb(n, k) for k in range(n + 1) if abs(Fraction(k, n) - Fraction(1, 2)) <= d)


def check_typicality(max_n: int = 20) -> tuple[bool, str]:
    p = proof.FiniteDistribution.uniform((-1, 1))
    mismatches, bound_failures, norm_worst, cases = 0, 0, 0.0, 0
    for n in range(1, max_n + 1):
        for delta in TYPICALITY_DELTAS:
            params = proof.TypicalityParams(n, float(delta))
            ts = proof.typical_set(p, params)
            cases += 1
            if len(ts) != binomial_typical_count(n, delta):
                mismatches += 1
            if len(ts) == 0:
                continue
            if not ts.satisfies_cardinality_bounds():
                bound_failures += 1
            pruned = proof.pruned_distribution(p, params)
            norm_worst = max(norm_worst, abs(float(np.sum(pruned.probs)) - 1.0))
    c = proof.default_typicality_constant(p)
    ok = mismatches == 0 and bound_failures == 0 and norm_worst <= 1e-12
    return ok, (f"{cases} (n, delta) cases: {mismatches} count mismatches, {bound_failures} "
                f"cardinality-bound failures with c = {c:g}; pruned normalization error {norm_worst:.1e}")


def check_pruned_entropy_trend() -> tuple[bool, str]:
    p = proof.FiniteDistribution.uniform((-1, 1))
    gaps = [abs(p.entropy() - proof.pruned_distribution(p, proof.TypicalityParams(n, 0.1)).entropy_rate())
            for n in (4, 8, 16, 20)]
    ok = all(b < a for a, b in zip(gaps, gaps[1:]))
    return ok, "per-symbol entropy gaps " + ", ".join(f"{g:.4f}" for g in gaps)


def typicality() -> list[dict]:
    return [
        _timed("typical set enumeration and bounds", check_typicality, budget=30.0),
        _timed("pruned entropy convergence", check_pruned_entropy_trend),
    ]


# ---------------------------------------------------------------------------
# montecarlo


def check_leakage_monotone(codebooks: int = 20) -> tuple[bool, str]:
    etas = [k / 10 for k in range(11)]
    failures = 0
    for seed in range(codebooks):
        cb = codesim.sample_codebook(2, 4, 1 + seed % 4, 1.0, 1000 + seed)
        try:
            codesim.leakage_monotonicity(cb, etas)
        except codesim.PropertyViolation:
            failures += 1
    return failures == 0, f"{failures}/{codebooks} codebooks with decreasing leakage"


def check_covering_trend(seeds: int = 20) -> tuple[bool, str]:
    rows = codesim.covering_trend(2, 4, 0.5, 0.4, (2, 8, 32, 128), range(seeds))
    means = [r["mean"] for r in rows]
    ok = all(b <= a for a, b in zip(means, means[1:]))
    return ok, "means by L: " + ", ".join(f"{r['L']}: {r['mean']:.4f}" for r in rows)


def check_leakage_reduction(tol: float = 1e-10) -> tuple[bool, str]:
    worst = 0.0
    for E in (0.3, 1.0, 2.5):
        cb = codesim.Codebook(np.array([[[1]], [[-1]]]), E)
        for eta in (0.2, 0.5, 0.9):
            worst = max(worst, abs(codesim.leakage(cb, eta) - entropy.h_bpsk(eta * eta * E)))
    return worst <= tol, f"max |leakage - h_bpsk(eta^2 E)| = {worst:.2e}"


def montecarlo() -> list[dict]:
    return [
        _timed("leakage monotone in eta", check_leakage_monotone),
        _timed("covering distance shrinks with L", check_covering_trend),
        _timed("L=1 leakage reduction", check_leakage_reduction, budget=1.0),
    ]


_RUNNERS = {
    "identities": identities,
    "oracle": oracle,
    "lemmas": lemmas,
    "typicality": typicality,
    "montecarlo": montecarlo,
}


def run_suite(name: str) -> dict:
    """Run one suite (or ``"all"``) and return the JSON-ready report."""
    if name == "all":
        checks = [c for s in SUITES for c in _RUNNERS[s]()]
    elif name in _RUNNERS:
        checks = _RUNNERS[name]()
    else:
        raise KeyError(name)
    return {"suite": name, "checks": checks, "pass": all(c["pass"] for c in checks)}
