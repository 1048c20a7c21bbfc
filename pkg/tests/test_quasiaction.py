import random
from fractions import Fraction

import pytest

from quasiact import (
    FiniteMap,
    FiniteSubset,
    IntegerGroup,
    QuasiAction,
    TableGroup,
    cyclic_group,
    emit_certificate,
    extend_assignment,
    identity_map,
    load_certificate,
    shift_map,
    swap_map,
    verify,
)
from quasiact.errors import DomainError, IncompleteSupportError


def regular_c4():
    g = cyclic_group(4)
    assign = {k: shift_map(4, k) for k in range(4)}
    return QuasiAction(g, 4, assign, FiniteSubset(g, range(4)), Fraction(1, 100))


def integer_shifts(f, m, support, epsilon=Fraction(1, 100)):
    z = IntegerGroup()
    assign = {k: shift_map(m, k) for k in support}
    return QuasiAction(z, m, assign, FiniteSubset(z, f), epsilon)


class TestVerify:
    def test_regular_action_exact(self):
        qa = regular_c4()
        r = verify(qa)
        assert r.passed
        assert all(p.defect.disagreements == 0 for p in r.pair_defects)
        assert r.identity_defect.disagreements == 0
        assert all(agree == 0 for _, agree in r.identity_agreements)
        assert str(r.max_defect) == "0/4"

    def test_condition_b_threshold(self):
        g = TableGroup([[0]])
        qa = QuasiAction(
            g, 10, {0: swap_map(10, 0, 1)}, FiniteSubset(g, [0]), Fraction(1, 5)
        )
        assert verify(qa, epsilon=Fraction(1, 5)).b_pass
        assert not verify(qa, epsilon=Fraction(1, 10)).b_pass

    def test_integer_shifts_on_twelve(self):
        f = [-2, -1, 1, 2]
        support = range(-4, 5)
        qa = integer_shifts(f, 12, support)
        r = verify(qa, epsilon=Fraction(1, 100))
        assert r.passed
        assert r.max_defect.disagreements == 0

    def test_monotone_in_epsilon(self):
        rng = random.Random(9)
        g = cyclic_group(3)
        assign = {
            k: FiniteMap([rng.randrange(6) for _ in range(6)]) for k in range(3)
        }
        qa = QuasiAction(g, 6, assign, FiniteSubset(g, range(3)), Fraction(1, 2))
        values = [Fraction(1, 6), Fraction(1, 3), Fraction(1, 2), Fraction(5, 6)]
        passes = [verify(qa, epsilon=e).passed for e in values]
        # once passing, stays passing at any larger epsilon
        for smaller, larger in zip(passes, passes[1:]):
            assert larger or not smaller

    def test_antimonotone_in_f(self):
        # passing at (F, eps) implies passing at every subset of F
        import itertools

        qa = integer_shifts([-2, -1, 1, 2], 12, range(-4, 5))
        perturbed = qa.assignment[1].to_list()
        perturbed[0] = 3
        qa = qa.with_map(1, FiniteMap(perturbed))
        eps = Fraction(1, 4)
        full = [-2, -1, 1, 2]
        assert verify(qa, f=full, epsilon=eps).passed
        for size in range(1, 4):
            for subset in itertools.combinations(full, size):
                assert verify(qa, f=subset, epsilon=eps).passed

    def test_strict_implies_plain(self):
        qa = regular_c4()
        r = verify(qa, strict=True)
        assert r.strict is not None and r.strict.passed
        assert r.b_pass and r.c_pass

    def test_strict_flags(self):
        qa = regular_c4()
        r = verify(qa, strict=True)
        assert r.strict.identity_exact
        for flags in r.strict.element_flags:
            assert flags.bijective and flags.fixpoint_free
            assert flags.inverse_exact is True

    def test_incomplete_support_names_element(self):
        z = IntegerGroup()
        assign = {k: shift_map(12, k) for k in [-1, 0, 1, 2]}
        qa = QuasiAction(z, 12, assign, FiniteSubset(z, [1]), Fraction(1, 2))
        with pytest.raises(IncompleteSupportError) as err:
            verify(qa, f=[1, 2], epsilon=Fraction(1, 2))
        assert "3" in str(err.value) or "4" in str(err.value)

    def test_construction_requires_ff_support(self):
        z = IntegerGroup()
        assign = {k: shift_map(12, k) for k in [0, 1]}
        with pytest.raises(IncompleteSupportError):
            QuasiAction(z, 12, assign, FiniteSubset(z, [1]), Fraction(1, 2))

    def test_exact_homomorphism_all_epsilons(self):
        qa = integer_shifts([-2, -1, 1, 2], 12, range(-4, 5))
        for eps in [Fraction(1, 1000), Fraction(1, 7), Fraction(9, 10)]:
            assert verify(qa, epsilon=eps).passed


class TestCertificates:
    def test_roundtrip_byte_identical(self):
        qa = regular_c4()
        r = verify(qa)
        cert = emit_certificate(qa, r)
        qa2, r2 = load_certificate(cert)
        assert emit_certificate(qa2, r2) == cert

    def test_max_defect_recorded(self):
        qa = regular_c4()
        cert = emit_certificate(qa, verify(qa))
        assert '"max_defect": "0/4"' in cert

    def test_top_level_schema(self):
        import json

        qa = regular_c4()
        doc = json.loads(emit_certificate(qa, verify(qa)))
        assert set(doc) == {"group", "carrier_n", "F", "epsilon", "assignment", "report"}
        assert doc["epsilon"] == "1/100"
        assert doc["assignment"]["2"] == [2, 3, 0, 1]

    def test_condition_b_defect_recorded(self):
        g = TableGroup([[0]])
        qa = QuasiAction(
            g, 10, {0: swap_map(10, 0, 1)}, FiniteSubset(g, [0]), Fraction(1, 5)
        )
        cert = emit_certificate(qa, verify(qa))
        assert '"defect": "2/10"' in cert

    def test_loaded_values_match(self):
        qa = regular_c4()
        r = verify(qa)
        qa2, r2 = load_certificate(emit_certificate(qa, r))
        assert qa2.carrier_n == qa.carrier_n
        assert qa2.claimed_epsilon == qa.claimed_epsilon
        assert set(qa2.assignment) == set(qa.assignment)
        for k, m in qa.assignment.items():
            assert qa2.assignment[k] == m
        assert r2 == r

    def test_tampered_flags_rejected(self):
        qa = regular_c4()
        cert = emit_certificate(qa, verify(qa))
        bad = cert.replace('"a_pass": true', '"a_pass": false')
        with pytest.raises(Exception):
            load_certificate(bad)


class TestExtendAssignment:
    def test_padding_even(self):
        z = IntegerGroup()
        qa = integer_shifts([1], 12, range(-2, 3))
        out = extend_assignment(qa, [7])
        pad = out.assignment[7]
        assert pad.to_list()[:4] == [1, 0, 3, 2]
        from quasiact import compose, fixpoint_count, identity_map as idm

        assert compose(pad, pad) == idm(12)
        assert fixpoint_count(pad) == 0

    def test_padding_odd(self):
        g = TableGroup([[0]])
        qa = QuasiAction(g, 5, {0: identity_map(5)}, FiniteSubset(g, [0]), Fraction(1, 2))
        out = extend_assignment(qa, [])
        assert out.assignment[0] == identity_map(5)

    def test_epsilon_range_validated(self):
        g = TableGroup([[0]])
        with pytest.raises(DomainError):
            QuasiAction(g, 2, {0: identity_map(2)}, FiniteSubset(g, [0]), Fraction(3, 2))
