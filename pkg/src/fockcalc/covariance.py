"""Centered dual-chain covariance and its per-site decomposition.

The level-p covariance of two functionals is the dual pairing of their
centered parts (mean term removed).  Because the per-site decomposition
terms of distinct sites have disjoint supports, the covariance also equals
the sum over sites of the pairings of matching terms; ``cov_identity``
measures both routes and their gap.  The variance is bounded above by the
un-truncated recombination norms, with equality exactly when every nonempty
support set is a singleton.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

from .clark_ocone import co_term
from .functional import FockFunctional, inner_dual, linear_combine, norm_dual
from .operators import annihilate, create, expect


def _centered(phi: FockFunctional) -> FockFunctional:
    return linear_combine(1.0, phi, -1.0, expect(phi))


def cov_p(phi: FockFunctional, psi: FockFunctional, p: float) -> complex:
    """Level-p covariance: dual pairing of the centered functionals.

    Follows the dual-pairing orientation (first argument plain, second
    conjugated), so cov_p(phi, psi, p) == conj(cov_p(psi, phi, p)).
    """
    return inner_dual(_centered(phi), _centered(psi), p)


def var_p(phi: FockFunctional, p: float) -> float:
    """Level-p variance: squared dual norm of the centered functional."""
    return norm_dual(_centered(phi), p) ** 2


@dataclass(frozen=True)
class CovarianceReport:
    """Direct covariance, its per-site series form, and the measured gap."""

    lhs: complex
    rhs: complex
    per_site: Dict[int, complex]
    gap: float


def cov_identity(phi: FockFunctional, psi: FockFunctional, p: float) -> CovarianceReport:
    """Evaluate the covariance both directly and as the per-site series.

    The series runs over every site up to the larger support maximum; the
    per-site entries pair matching decomposition terms.  The gap vanishes in
    exact arithmetic for finitely supported inputs.
    """
    direct = cov_p(phi, psi, p)
    top = max(phi.support_max, psi.support_max)
    per_site: Dict[int, complex] = {}
    total = 0j
    for k in range(top + 1):
        contribution = inner_dual(co_term(phi, k), co_term(psi, k), p)
        per_site[k] = contribution
        total += contribution
    return CovarianceReport(
        lhs=direct, rhs=total, per_site=per_site, gap=abs(direct - total)
    )


def var_bound(phi: FockFunctional, p: float) -> tuple[float, float]:
    """Variance versus its per-site recombination ceiling.

    Returns (variance, sum over sites of the squared dual norms of
    create(annihilate(phi, k), k)).  The ceiling counts each support set once
    per member while the variance counts it once, so the bound is strict as
    soon as some support set has two or more elements.
    """
    lhs = var_p(phi, p)
    rhs = 0.0
    for k in range(phi.support_max + 1):
        rhs += norm_dual(create(annihilate(phi, k), k), p) ** 2
    if lhs > rhs + 1e-12 * (1.0 + rhs):
        # Mathematically unreachable; a failure here means corrupted state.
        raise ArithmeticError(f"variance {lhs} exceeded its ceiling {rhs}")
    return lhs, rhs
