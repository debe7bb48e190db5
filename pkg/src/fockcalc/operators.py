"""Shift and truncation operators on coefficient functionals.

All four operators act purely on the coefficient map and return fresh
values, so they compose freely:

* ``annihilate(phi, k)``   coefficient at sigma becomes phi(sigma | {k}) when
                           k is absent from sigma, else 0.
* ``create(phi, k)``       coefficient at sigma becomes phi(sigma \\ {k}) when
                           k is a member of sigma, else 0.
* ``cond_expect(phi, k)``  keeps exactly the terms whose support set has
                           maximum <= k; the empty set is always kept.
* ``expect(phi)``          cond_expect at level -1: just the constant term.

Composing create after annihilate at the same site keeps the terms containing
that site; the opposite order keeps the terms missing it.  Their sum is the
identity (the equal-time anti-commutation relation), which ``verify_car``
measures as a residual norm.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadTagError, NegativeIndexError
from .functional import FockFunctional, linear_combine, norm_dual


def annihilate(phi: FockFunctional, k: int) -> FockFunctional:
    """Remove site ``k``: terms containing k shift to their k-less subset."""
    if k < 0:
        raise NegativeIndexError(f"site index must be >= 0, got {k}")
    return FockFunctional(
        {s.without_element(k): c for s, c in phi._terms.items() if k in s}
    )


def create(phi: FockFunctional, k: int) -> FockFunctional:
    """Insert site ``k``: terms missing k shift to their k-extended subset."""
    if k < 0:
        raise NegativeIndexError(f"site index must be >= 0, got {k}")
    return FockFunctional(
        {s.with_element(k): c for s, c in phi._terms.items() if k not in s}
    )


def cond_expect(phi: FockFunctional, k: int) -> FockFunctional:
    """Truncate to the terms measurable at level ``k`` (max of support <= k).

    ``k = -1`` keeps only the constant term, matching ``expect``; the empty
    set (max taken as -1) survives every level.
    """
    if k < -1:
        raise ValueError(f"conditioning level must be >= -1, got {k}")
    return FockFunctional({s: c for s, c in phi._terms.items() if s.max_element <= k})


def expect(phi: FockFunctional) -> FockFunctional:
    """Keep only the constant term (the mean part)."""
    return cond_expect(phi, -1)


def verify_car(phi: FockFunctional, k: int) -> float:
    """Residual norm of (create∘annihilate + annihilate∘create - id) at site k.

    Exactly zero in exact arithmetic for every functional; returns the
    measured dual norm at level 0 so callers can compare against a scaled
    tolerance.
    """
    recombined = linear_combine(
        1.0, create(annihilate(phi, k), k), 1.0, annihilate(create(phi, k), k)
    )
    return norm_dual(linear_combine(1.0, recombined, -1.0, phi), 0.0)


@dataclass(frozen=True)
class NormBoundReport:
    """Measured operator-norm ratios at one site and dual level.

    Each ratio is ||op(phi)|| / ||phi|| in the level-p dual norm (0 when phi
    is zero), compared against its ceiling: (1+k)**p for annihilation,
    (1+k)**-p for creation, and 1 for conditional expectation.
    """

    annihilate_ratio: float
    annihilate_bound: float
    annihilate_ok: bool
    create_ratio: float
    create_bound: float
    create_ok: bool
    cond_expect_ratio: float
    cond_expect_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.annihilate_ok and self.create_ok and self.cond_expect_ok


def verify_norm_bounds(
    phi: FockFunctional, k: int, p: float, slack: float = 1e-12
) -> NormBoundReport:
    """Check the three dual-norm inequalities at site ``k`` and level ``p``.

    Each inequality is allowed relative slack (default 1e-12) to absorb float
    rounding.  Basis witnesses make the first two ceilings tight: the
    single-site element {k} for annihilation, the constant for creation.
    """
    base = norm_dual(phi, p)

    def ratio(value: float) -> float:
        return value / base if base > 0.0 else 0.0

    ann = ratio(norm_dual(annihilate(phi, k), p))
    cre = ratio(norm_dual(create(phi, k), p))
    cnd = ratio(norm_dual(cond_expect(phi, k), p))
    ann_bound = (1.0 + k) ** p
    cre_bound = (1.0 + k) ** (-p)
    return NormBoundReport(
        annihilate_ratio=ann,
        annihilate_bound=ann_bound,
        annihilate_ok=ann <= ann_bound * (1.0 + slack),
        create_ratio=cre,
        create_bound=cre_bound,
        create_ok=cre <= cre_bound * (1.0 + slack),
        cond_expect_ratio=cnd,
        cond_expect_ok=cnd <= 1.0 + slack,
    )


def verify_commutation(phi: FockFunctional, k: int) -> tuple[float, float]:
    """Residual norms of the two conditioning/shift exchange identities.

    First: conditioning at k commutes with creation at k.  Second:
    conditioning at k after annihilation at k equals conditioning at k-1
    (level -1 meaning the plain mean).  Both vanish in exact arithmetic.
    """
    lhs1 = cond_expect(create(phi, k), k)
    rhs1 = create(cond_expect(phi, k), k)
    gap1 = norm_dual(linear_combine(1.0, lhs1, -1.0, rhs1), 0.0)

    lhs2 = cond_expect(annihilate(phi, k), k)
    rhs2 = cond_expect(annihilate(phi, k), k - 1)
    gap2 = norm_dual(linear_combine(1.0, lhs2, -1.0, rhs2), 0.0)
    return gap1, gap2


@dataclass(frozen=True)
class OperatorTag:
    """Parsed pipeline step: one of annihilate/create/condexp/expect.

    ``site`` is unused for expect; condexp admits -1 (the plain mean).
    """

    kind: str
    site: int = -1

    _KINDS = ("annihilate", "create", "condexp", "expect")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise BadTagError(f"unknown operator kind {self.kind!r}")
        if self.kind in ("annihilate", "create") and self.site < 0:
            raise NegativeIndexError(f"{self.kind} needs a site >= 0, got {self.site}")
        if self.kind == "condexp" and self.site < -1:
            raise BadTagError(f"condexp level must be >= -1, got {self.site}")

    def apply(self, phi: FockFunctional) -> FockFunctional:
        if self.kind == "annihilate":
            return annihilate(phi, self.site)
        if self.kind == "create":
            return create(phi, self.site)
        if self.kind == "condexp":
            return cond_expect(phi, self.site)
        return expect(phi)


def parse_pipeline(text: str) -> list[OperatorTag]:
    """Parse a comma-separated pipeline like ``annihilate:2,create:2,expect``.

    Tags apply left to right.  Raises BadTagError on malformed tags and
    NegativeIndexError on negative shift sites.
    """
    tags = []
    for raw in text.split(","):
        part = raw.strip()
        if not part:
            raise BadTagError("empty pipeline step")
        name, sep, arg = part.partition(":")
        if name == "expect":
            if sep:
                raise BadTagError("expect takes no site argument")
            tags.append(OperatorTag("expect"))
            continue
        if not sep:
            raise BadTagError(f"operator {name!r} needs a site, e.g. {name}:0")
        try:
            site = int(arg)
        except ValueError:
            raise BadTagError(f"bad site {arg!r} in {part!r}") from None
        tags.append(OperatorTag(name, site))
    return tags


def apply_pipeline(phi: FockFunctional, pipeline: str) -> FockFunctional:
    """Apply a parsed tag pipeline left to right."""
    out = phi
    for tag in parse_pipeline(pipeline):
        out = tag.apply(out)
    return out
