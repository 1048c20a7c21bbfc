"""Quasi-action data model, the counting verifier, and certificates.

A quasi-action assigns a finite self-map to each group element of a finite
support set.  ``verify`` measures, by exhaustive counting:

  (a) for every ordered pair (e,f) of the checked set F, how far the map of
      e*f is from the composite map of e then f;
  (b) how far the identity element's map is from the identity map;
  (c) for every e in F other than the identity, on how many points its map
      agrees with the identity map (the map must not be (1-eps)-similar to
      the identity, i.e. it must disagree on more than (1-eps)*n points).

Strict mode additionally measures the strengthened conditions: the identity
element maps to the exact identity, every other supported element maps to a
fixpoint-free bijection whose inverse element (when supported) maps to the
exact inverse map, and the maps of distinct elements of F union {1} are
pairwise (1-eps)-different.

All comparisons are exact rational comparisons of integer counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    DomainError,
    GroupMismatchError,
    IncompleteSupportError,
    InvariantViolationError,
)
from .finmap import (
    Defect,
    FiniteMap,
    agreement_count,
    compose,
    fixpoint_count,
    identity_map,
    inverse_map,
    similarity_defect,
)
from .groups import FiniteSubset, GroupHandle, group_from_json, pair_products
from .util import check_epsilon, document_json, format_fraction, parse_fraction

import json


class QuasiAction:
    """A carrier size plus a finite table of group element -> map."""

    def __init__(
        self,
        owner: GroupHandle,
        carrier_n: int,
        assignment: Mapping,
        claimed_f: FiniteSubset,
        claimed_epsilon: Fraction,
    ):
        if claimed_f.owner != owner:
            raise GroupMismatchError("claimed F belongs to a different group")
        self.owner = owner
        self.carrier_n = int(carrier_n)
        self.claimed_f = claimed_f
        self.claimed_epsilon = check_epsilon(claimed_epsilon)
        table = {}
        for elem, fmap in assignment.items():
            owner.check_element(elem)
            if not isinstance(fmap, FiniteMap):
                fmap = FiniteMap(fmap)
            if fmap.n != self.carrier_n:
                raise DomainError(
                    f"map for {owner.element_key(elem)} has carrier {fmap.n}, "
                    f"expected {self.carrier_n}"
                )
            table[elem] = fmap
        self.assignment = table
        self._require_support_closure()

    def _require_support_closure(self):
        g = self.owner
        required = [g.identity]
        required.extend(self.claimed_f)
        for e in self.claimed_f:
            for f in self.claimed_f:
                required.append(g.mul(e, f))
        for elem in required:
            if elem not in self.assignment:
                raise IncompleteSupportError(
                    g.element_key(elem), "needed for the claimed (F, epsilon)"
                )

    @property
    def support(self) -> FiniteSubset:
        return FiniteSubset(self.owner, self.assignment.keys())

    def map_for(self, elem) -> FiniteMap:
        try:
            return self.assignment[elem]
        except KeyError:
            raise IncompleteSupportError(self.owner.element_key(elem)) from None

    def with_map(self, elem, fmap: FiniteMap) -> "QuasiAction":
        """A copy with one assignment replaced (for perturbation studies)."""
        table = dict(self.assignment)
        table[elem] = fmap
        return QuasiAction(
            self.owner, self.carrier_n, table, self.claimed_f, self.claimed_epsilon
        )


def extend_assignment(qa: QuasiAction, elements: Iterable) -> QuasiAction:
    """Explicitly extend the support with canonical padding maps.

    Padding is the fixpoint-free involution pairing 2i <-> 2i+1 when the
    carrier size is even, and the identity map otherwise.  Extension never
    happens implicitly anywhere else.
    """
    n = qa.carrier_n
    if n % 2 == 0:
        images = list(range(n))
        for i in range(0, n, 2):
            images[i], images[i + 1] = images[i + 1], images[i]
        pad = FiniteMap(images)
    else:
        pad = identity_map(n)
    table = dict(qa.assignment)
    for elem in elements:
        qa.owner.check_element(elem)
        if elem not in table:
            table[elem] = pad
    return QuasiAction(qa.owner, n, table, qa.claimed_f, qa.claimed_epsilon)


@dataclass(frozen=True)
class PairDefect:
    left_key: str
    right_key: str
    product_key: str
    defect: Defect


@dataclass(frozen=True)
class ElementFlags:
    element_key: str
    bijective: bool
    fixpoint_free: bool
    inverse_exact: bool | None  # None when the inverse is unsupported


@dataclass(frozen=True)
class StrictChecks:
    epsilon: Fraction
    identity_exact: bool
    element_flags: tuple[ElementFlags, ...]
    pairwise: tuple[tuple[str, str, Defect], ...]
    bprime_pass: bool
    cprime_pass: bool

    @property
    def passed(self) -> bool:
        return self.bprime_pass and self.cprime_pass


@dataclass(frozen=True)
class VerificationReport:
    carrier_n: int
    epsilon: Fraction
    f_keys: tuple[str, ...]
    pair_defects: tuple[PairDefect, ...]
    identity_defect: Defect
    identity_agreements: tuple[tuple[str, int], ...]
    a_pass: bool
    b_pass: bool
    c_pass: bool
    max_defect: Defect
    strict: StrictChecks | None = None

    @property
    def passed(self) -> bool:
        return self.a_pass and self.b_pass and self.c_pass

    def recompute_flags(self) -> tuple[bool, bool, bool]:
        """Re-derive the pass booleans from the stored counts."""
        eps = self.epsilon
        a = all(p.defect.fraction <= eps for p in self.pair_defects)
        b = self.identity_defect.fraction <= eps
        n = self.carrier_n
        c = all(
            Fraction(n - agree, n) > 1 - eps for _, agree in self.identity_agreements
        )
        return a, b, c


def verify(
    qa: QuasiAction,
    f: FiniteSubset | Iterable | None = None,
    epsilon: Fraction | None = None,
    strict: bool = False,
) -> VerificationReport:
    """Measure conditions (a), (b), (c) of qa on F by exhaustive counting."""
    g = qa.owner
    if f is None:
        fset = qa.claimed_f
    elif isinstance(f, FiniteSubset):
        if f.owner != g:
            raise GroupMismatchError("F belongs to a different group")
        fset = f
    else:
        fset = FiniteSubset(g, f)
    eps = check_epsilon(qa.claimed_epsilon if epsilon is None else epsilon)

    one = g.identity
    n = qa.carrier_n
    ident = identity_map(n)

    id_map = qa.map_for(one)
    b_defect = similarity_defect(id_map, ident)
    b_pass = b_defect.fraction <= eps

    pair_defects = []
    a_pass = True
    max_defect = b_defect
    for e in fset:
        for fe in fset:
            prod = g.mul(e, fe)
            d = similarity_defect(
                compose(qa.map_for(e), qa.map_for(fe)), qa.map_for(prod)
            )
            pair_defects.append(
                PairDefect(g.element_key(e), g.element_key(fe), g.element_key(prod), d)
            )
            if d.fraction > eps:
                a_pass = False
            if d.fraction > max_defect.fraction:
                max_defect = d

    agreements = []
    c_pass = True
    for e in fset:
        if e == one:
            continue
        agree = agreement_count(qa.map_for(e), ident)
        agreements.append((g.element_key(e), agree))
        # (1-eps)-different means NOT (1-eps)-similar: disagreements > (1-eps)*n.
        if not Fraction(n - agree, n) > 1 - eps:
            c_pass = False
        if Fraction(agree, n) > max_defect.fraction:
            max_defect = Defect(agree, n)

    strict_checks = None
    if strict:
        support = qa.support
        for e in fset:
            if g.inv(e) not in qa.assignment:
                raise IncompleteSupportError(
                    g.element_key(g.inv(e)), "strict mode needs F^-1 in the support"
                )
        identity_exact = id_map == ident
        flags = []
        bprime = identity_exact
        for e in support:
            if e == one:
                continue
            m = qa.map_for(e)
            bij = m.is_bijection()
            fpf = fixpoint_count(m) == 0
            inv_elem = g.inv(e)
            inverse_exact: bool | None = None
            if inv_elem in qa.assignment:
                inverse_exact = bij and qa.map_for(inv_elem) == inverse_map(m)
            flags.append(
                ElementFlags(g.element_key(e), bij, fpf, inverse_exact)
            )
            if not (bij and fpf) or inverse_exact is False:
                bprime = False
        extended = FiniteSubset(g, list(fset) + [one])
        pairwise = []
        cprime = True
        elems = list(extended)
        for i, e in enumerate(elems):
            for fe in elems[i + 1 :]:
                d = similarity_defect(qa.map_for(e), qa.map_for(fe))
                pairwise.append((g.element_key(e), g.element_key(fe), d))
                if not d.fraction > 1 - eps:
                    cprime = False
        strict_checks = StrictChecks(
            eps, identity_exact, tuple(flags), tuple(pairwise), bprime, cprime
        )

    return VerificationReport(
        carrier_n=n,
        epsilon=eps,
        f_keys=tuple(g.element_key(e) for e in fset),
        pair_defects=tuple(pair_defects),
        identity_defect=b_defect,
        identity_agreements=tuple(agreements),
        a_pass=a_pass,
        b_pass=b_pass,
        c_pass=c_pass,
        max_defect=max_defect,
        strict=strict_checks,
    )


def _defect_to_json(d: Defect) -> str:
    return str(d)


def _defect_from_json(text: str) -> Defect:
    num, den = text.split("/")
    return Defect(int(num), int(den))


def report_to_json(report: VerificationReport) -> dict:
    doc = {
        "carrier_n": report.carrier_n,
        "epsilon": format_fraction(report.epsilon),
        "f": list(report.f_keys),
        "condition_a": [
            {
                "left": p.left_key,
                "right": p.right_key,
                "product": p.product_key,
                "defect": _defect_to_json(p.defect),
            }
            for p in report.pair_defects
        ],
        "condition_b": {"defect": _defect_to_json(report.identity_defect)},
        "condition_c": [
            {"element": key, "agreements": agree}
            for key, agree in report.identity_agreements
        ],
        "a_pass": report.a_pass,
        "b_pass": report.b_pass,
        "c_pass": report.c_pass,
        "passed": report.passed,
        "max_defect": _defect_to_json(report.max_defect),
    }
    if report.strict is None:
        doc["strict"] = None
    else:
        s = report.strict
        doc["strict"] = {
            "epsilon": format_fraction(s.epsilon),
            "identity_exact": s.identity_exact,
            "elements": [
                {
                    "element": fl.element_key,
                    "bijective": fl.bijective,
                    "fixpoint_free": fl.fixpoint_free,
                    "inverse_exact": fl.inverse_exact,
                }
                for fl in s.element_flags
            ],
            "pairwise": [
                {"left": a, "right": b, "defect": _defect_to_json(d)}
                for a, b, d in s.pairwise
            ],
            "bprime_pass": s.bprime_pass,
            "cprime_pass": s.cprime_pass,
            "passed": s.passed,
        }
    return doc


def report_from_json(doc: dict) -> VerificationReport:
    strict = None
    if doc.get("strict") is not None:
        s = doc["strict"]
        strict = StrictChecks(
            epsilon=parse_fraction(s["epsilon"]),
            identity_exact=bool(s["identity_exact"]),
            element_flags=tuple(
                ElementFlags(
                    fl["element"],
                    bool(fl["bijective"]),
                    bool(fl["fixpoint_free"]),
                    fl["inverse_exact"],
                )
                for fl in s["elements"]
            ),
            pairwise=tuple(
                (p["left"], p["right"], _defect_from_json(p["defect"]))
                for p in s["pairwise"]
            ),
            bprime_pass=bool(s["bprime_pass"]),
            cprime_pass=bool(s["cprime_pass"]),
        )
    report = VerificationReport(
        carrier_n=int(doc["carrier_n"]),
        epsilon=parse_fraction(doc["epsilon"]),
        f_keys=tuple(doc["f"]),
        pair_defects=tuple(
            PairDefect(
                p["left"], p["right"], p["product"], _defect_from_json(p["defect"])
            )
            for p in doc["condition_a"]
        ),
        identity_defect=_defect_from_json(doc["condition_b"]["defect"]),
        identity_agreements=tuple(
            (c["element"], int(c["agreements"])) for c in doc["condition_c"]
        ),
        a_pass=bool(doc["a_pass"]),
        b_pass=bool(doc["b_pass"]),
        c_pass=bool(doc["c_pass"]),
        max_defect=_defect_from_json(doc["max_defect"]),
        strict=strict,
    )
    recomputed = report.recompute_flags()
    if recomputed != (report.a_pass, report.b_pass, report.c_pass):
        raise InvariantViolationError(
            "stored pass flags disagree with the stored counts"
        )
    return report


def emit_certificate(qa: QuasiAction, report: VerificationReport) -> str:
    """Deterministic JSON document binding the assignment to its measurements."""
    g = qa.owner
    doc = {
        "group": g.describe(),
        "carrier_n": qa.carrier_n,
        "epsilon": format_fraction(qa.claimed_epsilon),
        "F": [g.element_key(e) for e in qa.claimed_f],
        "assignment": {
            g.element_key(elem): fmap.to_list()
            for elem, fmap in qa.assignment.items()
        },
        "report": report_to_json(report),
    }
    return document_json(doc)


def load_certificate(text: str) -> tuple[QuasiAction, VerificationReport]:
    doc = json.loads(text)
    g = group_from_json(doc["group"])
    assignment = {
        g.decode(json.loads(key)): FiniteMap(images)
        for key, images in doc["assignment"].items()
    }
    claimed_f = FiniteSubset(g, (g.decode(json.loads(key)) for key in doc["F"]))
    qa = QuasiAction(
        g,
        int(doc["carrier_n"]),
        assignment,
        claimed_f,
        parse_fraction(doc["epsilon"]),
    )
    report = report_from_json(doc["report"])
    return qa, report
