"""JSON wire formats for functionals and reports.

Functional schema::

    {"terms": [{"set": [0, 2], "coef": [3.0, 0.0]}],
     "envelope": {"C": 1.0, "p": 0.0}}

``set`` must be sorted strictly ascending with nonnegative entries; ``coef``
is [re, im]; ``envelope`` is optional.  Serialization emits terms in
ascending bit-mask order with repr-exact floats, so parse(serialize(phi))
reproduces phi bit for bit.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional, Tuple

from .clark_ocone import DecompositionReport
from .covariance import CovarianceReport
from .errors import DuplicateKeyError, NegativeIndexError, SchemaError
from .functional import FockFunctional, GrowthEnvelope, make_functional
from .gamma import SubsetIndex


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    return float(value)


def parse_subset(raw: Any, where: str = "subset") -> SubsetIndex:
    if not isinstance(raw, list):
        raise SchemaError(f"{where}: expected a list of integers")
    elements: List[int] = []
    for i, entry in enumerate(raw):
        if isinstance(entry, bool) or not isinstance(entry, int):
            raise SchemaError(f"{where}[{i}]: expected an integer, got {entry!r}")
        if entry < 0:
            raise NegativeIndexError(f"{where}[{i}]: negative index {entry}")
        elements.append(entry)
    for i in range(1, len(elements)):
        if elements[i] <= elements[i - 1]:
            raise SchemaError(f"{where}: not sorted strictly ascending at position {i}")
    return SubsetIndex(elements)


def _parse_term(raw: Any, where: str) -> Tuple[SubsetIndex, complex]:
    if not isinstance(raw, dict):
        raise SchemaError(f"{where}: expected an object")
    unknown = set(raw) - {"set", "coef"}
    if unknown:
        raise SchemaError(f"{where}: unknown keys {sorted(unknown)}")
    if "set" not in raw or "coef" not in raw:
        raise SchemaError(f"{where}: needs both 'set' and 'coef'")
    sigma = parse_subset(raw["set"], f"{where}.set")
    coef = raw["coef"]
    if not isinstance(coef, list) or len(coef) != 2:
        raise SchemaError(f"{where}.coef: expected [re, im]")
    re = _number(coef[0], f"{where}.coef[0]")
    im = _number(coef[1], f"{where}.coef[1]")
    return sigma, complex(re, im)


def parse_document(text: str) -> Tuple[FockFunctional, Optional[GrowthEnvelope]]:
    """Parse a functional document, returning the optional envelope too."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise SchemaError("top level: expected an object")
    unknown = set(raw) - {"terms", "envelope"}
    if unknown:
        raise SchemaError(f"top level: unknown keys {sorted(unknown)}")
    if "terms" not in raw or not isinstance(raw["terms"], list):
        raise SchemaError("top level: 'terms' must be a list")
    pairs = [_parse_term(t, f"terms[{i}]") for i, t in enumerate(raw["terms"])]
    seen = set()
    for sigma, _ in pairs:
        if sigma in seen:
            raise DuplicateKeyError(f"subset {list(sigma.elements)} appears twice")
        seen.add(sigma)
    phi = make_functional(pairs)
    envelope = None
    if "envelope" in raw:
        env = raw["envelope"]
        if not isinstance(env, dict) or set(env) != {"C", "p"}:
            raise SchemaError("envelope: expected an object with keys C and p")
        envelope = GrowthEnvelope(
            C=_number(env["C"], "envelope.C"), p=_number(env["p"], "envelope.p")
        )
    return phi, envelope


def parse_functional(text: str) -> FockFunctional:
    """Parse the functional part of a document (envelope ignored if present)."""
    return parse_document(text)[0]


def functional_to_obj(
    phi: FockFunctional, envelope: Optional[GrowthEnvelope] = None
) -> Dict[str, Any]:
    obj: Dict[str, Any] = {
        "terms": [
            {"set": list(sigma.elements), "coef": [coef.real, coef.imag]}
            for sigma, coef in phi.items()
        ]
    }
    if envelope is not None:
        obj["envelope"] = {"C": envelope.C, "p": envelope.p}
    return obj


def serialize_functional(
    phi: FockFunctional, envelope: Optional[GrowthEnvelope] = None, indent: Optional[int] = None
) -> str:
    return json.dumps(functional_to_obj(phi, envelope), indent=indent)


def decomposition_to_obj(report: DecompositionReport) -> Dict[str, Any]:
    """Mean, per-site terms keyed by decimal site, and the residual table."""
    return {
        "mean": functional_to_obj(report.mean),
        "terms": {str(k): functional_to_obj(report.terms[k]) for k in sorted(report.terms)},
        "termination_index": report.termination_index,
        "residuals": [
            {"n": n, "q": q, "residual": report.residual_norms[(n, q)]}
            for n, q in sorted(report.residual_norms)
        ],
    }


def covariance_to_obj(report: CovarianceReport) -> Dict[str, Any]:
    return {
        "lhs": [report.lhs.real, report.lhs.imag],
        "rhs": [report.rhs.real, report.rhs.imag],
        "per_k": {
            str(k): [v.real, v.imag] for k, v in sorted(report.per_site.items())
        },
        "gap": report.gap,
    }
