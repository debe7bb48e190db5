"""Clark-Ocone decomposition of coefficient functionals.

A functional splits into its mean part plus one term per site k, where the
k-th term holds exactly the coefficients whose support set peaks at k.  Two
equivalent pipelines produce that term:

* truncate-after-recombine:  cond_expect(create(annihilate(phi, k), k), k)
* integrate-the-predictable: create(cond_expect(annihilate(phi, k), k - 1), k)

Both are pure coefficient selections, so for finitely supported functionals
the series terminates exactly at the largest support index and the identity
holds with zero residual.  ``decompose`` reports the partial-sum residuals
across a grid of dual levels; ``reconstruct_check`` measures the stochastic
integral form and the agreement between the two pipelines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

from .errors import PredictabilityViolatedError
from .functional import FockFunctional, linear_combine, norm_dual, sum_functionals
from .gamma import EMPTY_SET
from .operators import annihilate, cond_expect, create, expect

DEFAULT_Q_PROBE = (0.0, 1.0, 2.0)


def co_term(phi: FockFunctional, k: int) -> FockFunctional:
    """The site-k summand: the terms of phi whose support set has max == k."""
    return cond_expect(create(annihilate(phi, k), k), k)


def partial_sum(phi: FockFunctional, n: int) -> FockFunctional:
    """Sum of the site terms up to n: the nonempty terms with max <= n."""
    if n < 0:
        raise ValueError(f"partial-sum level must be >= 0, got {n}")
    return sum_functionals(co_term(phi, k) for k in range(n + 1))


@dataclass(frozen=True)
class DecompositionReport:
    """Mean part, per-site terms, and partial-sum residuals of a functional.

    ``termination_index`` is the largest support index (-1 when only the
    constant term is present: the term map is then empty, no fictitious
    zero term is emitted).  ``residual_norms[(n, q)]`` is the level-q dual
    norm of (phi - mean - partial_sum(phi, n)).
    """

    mean: FockFunctional
    terms: Dict[int, FockFunctional]
    termination_index: int
    residual_norms: Dict[Tuple[int, float], float] = field(default_factory=dict)

    def reconstruction(self) -> FockFunctional:
        """mean + sum of the per-site terms, in ascending site order."""
        pieces = [self.mean]
        pieces.extend(self.terms[k] for k in sorted(self.terms))
        return sum_functionals(pieces)


def decompose(
    phi: FockFunctional, q_probe: Sequence[float] = DEFAULT_Q_PROBE
) -> DecompositionReport:
    """Full decomposition with residual diagnostics on a dual-level grid.

    The residual table probes every level n from 0 to the termination index;
    at the termination index it is exactly zero because the per-site terms
    are verbatim coefficient selections from phi.
    """
    mean = expect(phi)
    termination = phi.support_max
    terms: Dict[int, FockFunctional] = {}
    for k in range(termination + 1):
        t = co_term(phi, k)
        if t:
            terms[k] = t
    centered = linear_combine(1.0, phi, -1.0, mean)
    residuals: Dict[Tuple[int, float], float] = {}
    # Per-site terms have pairwise disjoint supports, so peeling them off the
    # centered remainder one at a time reproduces each partial-sum residual
    # exactly.
    remainder = centered
    for n in range(termination + 1):
        if n in terms:
            remainder = linear_combine(1.0, remainder, -1.0, terms[n])
        for q in q_probe:
            residuals[(n, float(q))] = norm_dual(remainder, q)
    return DecompositionReport(
        mean=mean,
        terms=terms,
        termination_index=termination,
        residual_norms=residuals,
    )


@dataclass(frozen=True)
class PredictableSequence:
    """Per-site functionals u_k measurable strictly before their site.

    Invariant: every support set of u_k has max <= k - 1, i.e. u_k survives
    cond_expect(. , k - 1) unchanged.  Zero entries are not stored.
    """

    terms: Dict[int, FockFunctional]

    def __post_init__(self):
        for k, u in self.terms.items():
            if k < 0:
                raise ValueError(f"site index must be >= 0, got {k}")
            if cond_expect(u, k - 1) != u:
                raise PredictabilityViolatedError(
                    f"entry at site {k} is not measurable before level {k}"
                )

    def __len__(self) -> int:
        return len(self.terms)


def predictable_sequence(phi: FockFunctional) -> PredictableSequence:
    """The canonical predictable integrand: u_k = E_{k-1}[annihilate(phi, k)].

    Only sites up to the largest support index can contribute; zero entries
    are dropped.
    """
    out: Dict[int, FockFunctional] = {}
    for k in range(phi.support_max + 1):
        u = cond_expect(annihilate(phi, k), k - 1)
        if u:
            out[k] = u
    return PredictableSequence(out)


def integrate(u: PredictableSequence) -> FockFunctional:
    """Stochastic integral of a predictable sequence: sum of create(u_k, k).

    The constructor already enforced predictability, but it is re-checked on
    entry so hand-built sequences fail loudly rather than integrate wrongly.
    """
    for k, uk in u.terms.items():
        if cond_expect(uk, k - 1) != uk:
            raise PredictabilityViolatedError(
                f"entry at site {k} is not measurable before level {k}"
            )
    return sum_functionals(create(u.terms[k], k) for k in sorted(u.terms))


def verify_convergence_window(phi: FockFunctional) -> Tuple[float, float]:
    """Measure the two strong-convergence conditions for the partial sums.

    Returns (pointwise_gap, envelope_excess): the terminal partial sum's
    largest coefficient distance from the centered functional, and the worst
    excess of any partial-sum coefficient magnitude over the corresponding
    source magnitude (0 when the uniform envelope holds).

    Probing phi's support plus the empty set covers the whole lattice: every
    partial sum draws its coefficients verbatim from phi, so all functionals
    involved vanish identically off that finite window.
    """
    smax = phi.support_max
    centered = linear_combine(1.0, phi, -1.0, expect(phi))
    probes = phi.support()
    if EMPTY_SET not in set(probes):
        probes.append(EMPTY_SET)
    terminal = partial_sum(phi, smax) if smax >= 0 else FockFunctional({})
    pointwise = max(
        abs(terminal.coefficient(s) - centered.coefficient(s)) for s in probes
    )
    excess = 0.0
    running = FockFunctional({})
    for n in range(smax + 1):
        running = linear_combine(1.0, running, 1.0, co_term(phi, n))
        for s in probes:
            excess = max(excess, abs(running.coefficient(s)) - abs(phi.coefficient(s)))
    return pointwise, excess


def reconstruct_check(phi: FockFunctional) -> float:
    """Max residual over both decomposition routes, at dual level 0.

    Measures (a) phi minus mean minus the integral of its predictable
    sequence, and (b) the per-site gap between the truncate-after-recombine
    and integrate-the-predictable pipelines.  Both vanish in exact
    arithmetic; the returned value is the larger of the two measured norms.
    """
    mean = expect(phi)
    integral = integrate(predictable_sequence(phi))
    residual = norm_dual(
        linear_combine(1.0, linear_combine(1.0, phi, -1.0, mean), -1.0, integral), 0.0
    )
    form_gap = 0.0
    for k in range(phi.support_max + 1):
        via_truncation = co_term(phi, k)
        via_integrand = create(cond_expect(annihilate(phi, k), k - 1), k)
        gap = norm_dual(linear_combine(1.0, via_truncation, -1.0, via_integrand), 0.0)
        if gap > form_gap:
            form_gap = gap
    return max(residual, form_gap)
