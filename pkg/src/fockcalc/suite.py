"""Seeded verification suites over randomized functional corpora.

Each suite draws a deterministic corpus, measures the worst normalized gap
of one family of identities, and reports pass/fail against its tolerance.
Per-trial work may fan out over a thread pool, but every reduction runs over
the ordered result list, so reports are bit-identical for any thread count.
"""

from __future__ import annotations

import datetime
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Sequence, TypeVar

from .bridge import (
    build_space,
    check_intertwining,
    check_orthonormality,
    classical_clark_ocone_check,
    plancherel_check,
)
from .clark_ocone import (
    co_term,
    decompose,
    integrate,
    predictable_sequence,
    reconstruct_check,
    verify_convergence_window,
)
from .corpus import random_functionals
from .covariance import cov_identity, var_bound, var_p
from .functional import (
    FockFunctional,
    basis_element,
    linear_combine,
    make_functional,
    norm_dual,
    norm_p,
    sum_functionals,
)
from .gamma import EMPTY_SET, SubsetIndex
from .operators import (
    annihilate,
    cond_expect,
    create,
    verify_car,
    verify_commutation,
    verify_norm_bounds,
)

SUITE_NAMES = ("car", "bounds", "commutation", "clark", "covariance", "bridge", "all")

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class SuiteConfig:
    """Knobs for one verification run.

    ``tolerance`` applies to the exact coefficient identities; pathwise
    bridge comparisons get the looser ``bridge_tolerance`` because they
    accumulate across up to 2**horizon paths.
    """

    suite: str = "all"
    trials: int = 500
    seed: int = 0
    support_max: int = 10
    max_terms: int = 24
    p_grid: Sequence[float] = (0.0, 1.0, 2.0)
    tolerance: float = 1e-12
    bridge_tolerance: float = 1e-10
    horizon: int = 8
    threads: int = 1

    def __post_init__(self):
        if self.suite not in SUITE_NAMES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {SUITE_NAMES}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def _map_trials(fn: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    # Ordered map; the executor preserves input order, so downstream
    # reductions see the same sequence for any worker count.
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _scale(phi: FockFunctional) -> float:
    return 1.0 + norm_dual(phi, 0.0)


def _check_record(name: str, max_gap: float, tolerance: float, **extra: Any) -> Dict[str, Any]:
    record: Dict[str, Any] = {"check": name, "max_gap": max_gap, "tolerance": tolerance}
    record.update(extra)
    record["pass"] = bool(max_gap <= tolerance)
    return record


def _check_car(cfg: SuiteConfig, corpus: Sequence[FockFunctional]) -> Dict[str, Any]:
    sites = range(cfg.support_max + 1)

    def worst(phi: FockFunctional) -> float:
        return max(verify_car(phi, k) for k in sites) / _scale(phi)

    gaps = _map_trials(worst, corpus, cfg.threads)
    return _check_record("car", max(gaps), cfg.tolerance, trials=len(corpus))


def _check_bounds(cfg: SuiteConfig, corpus: Sequence[FockFunctional]) -> Dict[str, Any]:
    sites = range(cfg.support_max + 1)

    def worst(phi: FockFunctional) -> float:
        excess = -1.0
        for k in sites:
            for p in cfg.p_grid:
                rep = verify_norm_bounds(phi, k, p)
                excess = max(
                    excess,
                    (rep.annihilate_ratio - rep.annihilate_bound) / rep.annihilate_bound,
                    (rep.create_ratio - rep.create_bound) / rep.create_bound,
                    rep.cond_expect_ratio - 1.0,
                )
        return excess

    gaps = _map_trials(worst, corpus, cfg.threads)

    # Tightness witnesses: the single-site basis element saturates the
    # annihilation ceiling, the constant saturates the creation ceiling.
    witness_gap = 0.0
    for k in range(cfg.support_max + 1):
        for p in cfg.p_grid:
            ann = verify_norm_bounds(basis_element(SubsetIndex([k])), k, p)
            cre = verify_norm_bounds(basis_element(EMPTY_SET), k, p)
            witness_gap = max(
                witness_gap,
                abs(ann.annihilate_ratio - ann.annihilate_bound) / ann.annihilate_bound,
                abs(cre.create_ratio - cre.create_bound) / cre.create_bound,
            )
    return _check_record(
        "bounds",
        max(max(gaps), witness_gap),
        cfg.tolerance,
        trials=len(corpus),
        witness_gap=witness_gap,
    )


def _check_commutation(cfg: SuiteConfig, corpus: Sequence[FockFunctional]) -> Dict[str, Any]:
    sites = range(cfg.support_max + 1)

    def worst(phi: FockFunctional) -> float:
        top = 0.0
        for k in sites:
            g1, g2 = verify_commutation(phi, k)
            top = max(top, g1, g2)
        return top / _scale(phi)

    gaps = _map_trials(worst, corpus, cfg.threads)
    return _check_record("commutation", max(gaps), cfg.tolerance, trials=len(corpus))


def _check_clark(cfg: SuiteConfig, corpus: Sequence[FockFunctional]) -> Dict[str, Any]:
    q_grid = tuple(float(q) for q in cfg.p_grid)

    def worst(phi: FockFunctional) -> float:
        scale = _scale(phi)
        top = reconstruct_check(phi) / scale

        report = decompose(phi, q_grid)
        smax = report.termination_index
        # The reconstruction must reproduce phi coefficient for coefficient.
        top = max(
            top,
            norm_dual(linear_combine(1.0, report.reconstruction(), -1.0, phi), 0.0) / scale,
        )
        for q in q_grid:
            series = [report.residual_norms[(n, q)] for n in range(smax + 1)]
            for earlier, later in zip(series, series[1:]):
                top = max(top, (later - earlier) / scale)
            if series:
                top = max(top, series[-1] / scale)
        # Both decomposition pipelines must agree term by term.
        u = predictable_sequence(phi)
        for k in range(smax + 1):
            via_integrand = create(cond_expect(annihilate(phi, k), k - 1), k)
            if co_term(phi, k) != via_integrand:
                top = max(top, 1.0)
        top = max(
            top,
            norm_dual(
                linear_combine(
                    1.0,
                    sum_functionals(co_term(phi, k) for k in range(smax + 1)),
                    -1.0,
                    integrate(u),
                ),
                0.0,
            )
            / scale,
        )
        pointwise, envelope_excess = verify_convergence_window(phi)
        return max(top, pointwise / scale, envelope_excess / scale)

    gaps = _map_trials(worst, corpus, cfg.threads)
    return _check_record("clark", max(gaps), cfg.tolerance, trials=len(corpus))


def _check_covariance(cfg: SuiteConfig) -> Dict[str, Any]:
    pool = random_functionals(
        2 * cfg.trials, cfg.seed, support_max=cfg.support_max, max_terms=cfg.max_terms
    )
    pairs = [(pool[2 * i], pool[2 * i + 1]) for i in range(cfg.trials)]

    def worst(pair) -> float:
        phi, psi = pair
        top = 0.0
        for p in cfg.p_grid:
            rep = cov_identity(phi, psi, p)
            top = max(top, rep.gap / (1.0 + abs(rep.lhs)))
            for f in (phi, psi):
                lhs, rhs = var_bound(f, p)
                top = max(top, (lhs - rhs) / (1.0 + rhs))
        return top

    gaps = _map_trials(worst, pairs, cfg.threads)

    # Equality witness: all-singleton supports make the variance ceiling
    # exact; a two-element support makes it strict.
    witness_gap = 0.0
    singletons = make_functional(
        [
            (EMPTY_SET, 1.0),
            (SubsetIndex([0]), 2.0),
            (SubsetIndex([1]), 1.0),
        ]
    )
    lhs, rhs = var_bound(singletons, 0.0)
    witness_gap = max(witness_gap, abs(lhs - rhs), abs(lhs - 5.0))
    pair_set = basis_element(SubsetIndex([0, 1]))
    lhs, rhs = var_bound(pair_set, 0.0)
    witness_gap = max(witness_gap, abs(lhs - 1.0), abs(rhs - 2.0))
    witness_gap = max(witness_gap, abs(var_p(pair_set, 0.0) - 1.0))

    return _check_record(
        "covariance",
        max(max(gaps), witness_gap),
        cfg.tolerance,
        trials=len(pairs),
        witness_gap=witness_gap,
    )


def _check_bridge(cfg: SuiteConfig) -> List[Dict[str, Any]]:
    n = cfg.horizon
    corpus = random_functionals(
        cfg.trials, cfg.seed, support_max=n - 1, max_terms=cfg.max_terms
    )
    space = build_space(n, "exhaustive")

    ortho_gap = check_orthonormality(n)

    co_gaps = _map_trials(
        lambda phi: classical_clark_ocone_check(phi, n), corpus, cfg.threads
    )

    def worst_intertwining(phi: FockFunctional) -> float:
        return max(max(check_intertwining(phi, k, n)) for k in range(n))

    twine_gaps = _map_trials(worst_intertwining, corpus, cfg.threads)

    plancherel_gaps = _map_trials(
        lambda phi: plancherel_check(phi, space) / (1.0 + norm_p(phi, 0.0) ** 2),
        corpus,
        cfg.threads,
    )

    return [
        _check_record("orthonormality", ortho_gap, cfg.tolerance, N=n),
        _check_record(
            "clark_ocone_pathwise", max(co_gaps), cfg.bridge_tolerance, N=n, trials=len(corpus)
        ),
        _check_record(
            "intertwining", max(twine_gaps), cfg.bridge_tolerance, N=n, trials=len(corpus)
        ),
        _check_record(
            "plancherel", max(plancherel_gaps), cfg.tolerance, N=n, trials=len(corpus)
        ),
    ]


def run_suite(cfg: SuiteConfig) -> Dict[str, Any]:
    """Run the selected suite(s) and return the JSON-ready report.

    The report's ``pass`` field is the conjunction of all checks; everything
    except the ``created`` timestamp is a pure function of the config.
    """
    wanted = SUITE_NAMES[:-1] if cfg.suite == "all" else (cfg.suite,)
    checks: List[Dict[str, Any]] = []
    needs_corpus = {"car", "bounds", "commutation", "clark"} & set(wanted)
    corpus = (
        random_functionals(
            cfg.trials, cfg.seed, support_max=cfg.support_max, max_terms=cfg.max_terms
        )
        if needs_corpus
        else []
    )
    if "car" in wanted:
        checks.append(_check_car(cfg, corpus))
    if "bounds" in wanted:
        checks.append(_check_bounds(cfg, corpus))
    if "commutation" in wanted:
        checks.append(_check_commutation(cfg, corpus))
    if "clark" in wanted:
        checks.append(_check_clark(cfg, corpus))
    if "covariance" in wanted:
        checks.append(_check_covariance(cfg))
    if "bridge" in wanted:
        checks.extend(_check_bridge(cfg))
    return {
        "suite": cfg.suite,
        "created": datetime.datetime.now(datetime.timezone.utc)
        .replace(microsecond=0)
        .isoformat(),
        "config": {
            "suite": cfg.suite,
            "trials": cfg.trials,
            "seed": cfg.seed,
            "support_max": cfg.support_max,
            "max_terms": cfg.max_terms,
            "p_grid": list(cfg.p_grid),
            "tolerance": cfg.tolerance,
            "bridge_tolerance": cfg.bridge_tolerance,
            "horizon": cfg.horizon,
            "threads": cfg.threads,
        },
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
