"""Sparse coefficient functionals and the weighted norm chain.

A ``FockFunctional`` is a finite map from subsets to complex coefficients.
The same structure plays two roles, distinguished only by how the caller
reads it: as a square-integrable functional it holds the expansion
coefficients against the canonical orthonormal product basis, and as a
generalized (dual-space) element it holds the coefficient function that
uniquely determines the functional.  The coefficient arrays coincide under
the Riesz identification, so one type suffices.

Pairing conventions, fixed here once for the whole package:

* ``inner_p``      conjugates its FIRST argument (Hermitian inner product of
                   the weighted test-function chain).
* ``inner_dual``   conjugates its SECOND argument (dual-chain pairing).
* ``dual_pair``    conjugates NOTHING (the canonical bilinear form between a
                   dual element and a test functional).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import DuplicateKeyError, EmptySupportError, ExponentTooSmallError
from .gamma import (
    EMPTY_SET,
    GammaCursor,
    SubsetIndex,
    enumerate_gamma,
    gamma_weight_sum_limit,
    lambda_weight,
)


class FockFunctional:
    """Immutable finite map from SubsetIndex to complex coefficient.

    Exact zeros are dropped on construction, so the stored support is the
    true support.  Use ``make_functional`` / ``basis_element`` to build one.
    """

    __slots__ = ("_terms",)

    _terms: Dict[SubsetIndex, complex]

    def __init__(self, terms: Dict[SubsetIndex, complex]):
        object.__setattr__(
            self, "_terms", {s: complex(c) for s, c in terms.items() if complex(c) != 0}
        )

    def __setattr__(self, name, value):
        raise AttributeError("FockFunctional is immutable")

    def coefficient(self, sigma: SubsetIndex) -> complex:
        """Stored coefficient at ``sigma``, or 0 when absent."""
        return self._terms.get(sigma, 0j)

    def items(self) -> List[Tuple[SubsetIndex, complex]]:
        """Term list in ascending bit-mask order (deterministic)."""
        return sorted(self._terms.items(), key=lambda kv: kv[0].mask)

    def support(self) -> List[SubsetIndex]:
        return sorted(self._terms.keys(), key=lambda s: s.mask)

    @property
    def support_max(self) -> int:
        """Largest index appearing in any support set; -1 if none do."""
        return max((s.max_element for s in self._terms), default=-1)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockFunctional):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None  # mutable-dict semantics for equality; not hashable

    def __repr__(self) -> str:
        parts = ", ".join(f"{list(s.elements)}: {c}" for s, c in self.items())
        return f"FockFunctional({{{parts}}})"


def make_functional(terms: Iterable[Tuple[SubsetIndex, complex]]) -> FockFunctional:
    """Build a functional from (subset, coefficient) pairs.

    Zero coefficients are dropped; a repeated subset raises DuplicateKeyError.
    """
    out: Dict[SubsetIndex, complex] = {}
    for sigma, coef in terms:
        if sigma in out:
            raise DuplicateKeyError(f"subset {list(sigma.elements)} appears twice")
        out[sigma] = complex(coef)
    return FockFunctional(out)


def basis_element(sigma: SubsetIndex) -> FockFunctional:
    """The canonical basis functional carrying coefficient 1 at ``sigma``."""
    return FockFunctional({sigma: 1.0 + 0j})


ZERO = FockFunctional({})


def coefficient(phi: FockFunctional, sigma: SubsetIndex) -> complex:
    return phi.coefficient(sigma)


def linear_combine(
    a: complex, phi: FockFunctional, b: complex, psi: FockFunctional
) -> FockFunctional:
    """Coefficient-wise a*phi + b*psi; exact cancellations drop the key."""
    out = {s: a * c for s, c in phi._terms.items()}
    for s, c in psi._terms.items():
        out[s] = out.get(s, 0j) + b * c
    return FockFunctional(out)


def sum_functionals(phis: Iterable[FockFunctional]) -> FockFunctional:
    """Coefficient-wise sum, accumulated in the given order."""
    out: Dict[SubsetIndex, complex] = {}
    for phi in phis:
        for s, c in phi._terms.items():
            out[s] = out.get(s, 0j) + c
    return FockFunctional(out)


def _fsum_complex(parts: Sequence[complex]) -> complex:
    # fsum is exactly rounded, so the result is iteration-order independent.
    return complex(math.fsum(z.real for z in parts), math.fsum(z.imag for z in parts))


def inner_p(xi: FockFunctional, eta: FockFunctional, p: float) -> complex:
    """Weighted inner product sum(weight**(2p) * conj(xi) * eta).

    Conjugate-linear in the first argument, linear in the second.
    """
    parts = []
    for s, c in xi._terms.items():
        other = eta._terms.get(s)
        if other is not None:
            parts.append(lambda_weight(s) ** (2.0 * p) * c.conjugate() * other)
    return _fsum_complex(parts)


def norm_p(xi: FockFunctional, p: float) -> float:
    """Weighted norm sqrt(sum(weight**(2p) * |coef|**2)).

    A basis element at sigma has norm weight(sigma)**p.
    """
    return math.sqrt(
        math.fsum(lambda_weight(s) ** (2.0 * p) * abs(c) ** 2 for s, c in xi._terms.items())
    )


def norm_dual(phi: FockFunctional, p: float) -> float:
    """Dual-chain norm sqrt(sum(weight**(-2p) * |coef|**2))."""
    return math.sqrt(
        math.fsum(lambda_weight(s) ** (-2.0 * p) * abs(c) ** 2 for s, c in phi._terms.items())
    )


def inner_dual(phi: FockFunctional, psi: FockFunctional, p: float) -> complex:
    """Dual-chain pairing sum(weight**(-2p) * phi * conj(psi)).

    Note the conjugate sits on the SECOND argument here, opposite to
    ``inner_p``;  inner_dual(phi, phi, p) equals norm_dual(phi, p)**2.
    """
    parts = []
    for s, c in phi._terms.items():
        other = psi._terms.get(s)
        if other is not None:
            parts.append(lambda_weight(s) ** (-2.0 * p) * c * other.conjugate())
    return _fsum_complex(parts)


def dual_pair(phi: FockFunctional, xi: FockFunctional) -> complex:
    """Canonical bilinear pairing sum(xi_coef * phi_coef); no conjugation.

    ``phi`` is read as a dual element, ``xi`` as a test functional.  Against a
    basis element this picks out phi's coefficient at that subset.
    """
    parts = []
    for s, c in xi._terms.items():
        other = phi._terms.get(s)
        if other is not None:
            parts.append(c * other)
    return _fsum_complex(parts)


@dataclass(frozen=True)
class GrowthEnvelope:
    """Certificate that every coefficient obeys |coef| <= C * weight**p."""

    C: float
    p: float

    def __post_init__(self):
        if self.C < 0 or self.p < 0:
            raise ValueError("envelope constants must be nonnegative")

    def covers(self, phi: FockFunctional) -> bool:
        """Whether the bound holds on every support set of ``phi``.

        Compared in quotient form (|coef| / weight**p <= C), the same
        expression the fitting maximizes, so a fitted envelope covers its
        own functional exactly rather than up to a rounding ulp.
        """
        return all(
            abs(c) / lambda_weight(s) ** self.p <= self.C for s, c in phi._terms.items()
        )


def fit_envelope(phi: FockFunctional, p: float) -> GrowthEnvelope:
    """Minimal-constant envelope at exponent ``p`` for a nonzero functional.

    C is the max of |coef| / weight**p over the support, so the returned
    envelope holds with equality somewhere and cannot be shrunk at this p.
    """
    if not phi:
        raise EmptySupportError("cannot fit an envelope to an empty support")
    c = max(abs(v) / lambda_weight(s) ** p for s, v in phi._terms.items())
    return GrowthEnvelope(C=c, p=p)


def dual_norm_bound(env: GrowthEnvelope, q: float) -> float:
    """Dual-norm ceiling implied by an envelope: C * sqrt(full weight sum).

    Any functional satisfying the envelope has norm_dual(. , q) at most
    C * sqrt(sum over ALL subsets of weight**(-2(q-p))), which converges
    precisely when q > p + 1/2.  The series is evaluated by the certified
    upper machinery in ``gamma_weight_sum_limit``, so the ceiling genuinely
    dominates every truncation.
    """
    if q <= env.p + 0.5:
        raise ExponentTooSmallError(
            f"need q > p + 1/2 for the bound series; got q={q}, p={env.p}"
        )
    if env.C == 0.0:
        return 0.0
    return env.C * math.sqrt(gamma_weight_sum_limit(2.0 * (q - env.p)))


@dataclass(frozen=True)
class StrongConvergenceDiagnostic:
    """Window-level evidence for the two strong-convergence conditions.

    ``pointwise_gaps[n]`` is the max over the probed subsets of the distance
    between the n-th sequence element and the limit; ``tail_gap`` is the last
    of these.  ``envelopes[p]`` is the minimal uniform envelope (over the
    whole sequence) fitted on the probed window at exponent p.  This is a
    diagnostic on the probed window only; it does not certify convergence
    outside it.
    """

    pointwise_gaps: Tuple[float, ...]
    tail_gap: float
    envelopes: Dict[float, GrowthEnvelope]


def check_strong_convergence(
    seq: Sequence[FockFunctional],
    limit: FockFunctional,
    probe: GammaCursor,
    p_grid: Sequence[float] = (0.0, 1.0, 2.0),
) -> StrongConvergenceDiagnostic:
    """Probe pointwise convergence and the uniform growth bound on a window.

    Condition one: per-subset coefficients approach the limit's (reported as
    per-element max gaps over the window).  Condition two: the sup over the
    sequence of each |coefficient| admits an envelope C * weight**p (reported
    as the fitted minimal C for each probed p).
    """
    if not seq:
        raise ValueError("need a nonempty sequence")
    probed = list(enumerate_gamma(probe))
    gaps = tuple(
        max((abs(phi.coefficient(s) - limit.coefficient(s)) for s in probed), default=0.0)
        for phi in seq
    )
    sup: Dict[SubsetIndex, float] = {}
    for phi in seq:
        for s in probed:
            v = abs(phi.coefficient(s))
            if v > sup.get(s, 0.0):
                sup[s] = v
    envelopes = {}
    for p in p_grid:
        c = max((v / lambda_weight(s) ** p for s, v in sup.items()), default=0.0)
        envelopes[float(p)] = GrowthEnvelope(C=c, p=float(p))
    return StrongConvergenceDiagnostic(
        pointwise_gaps=gaps, tail_gap=gaps[-1], envelopes=envelopes
    )
