from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smodlab.scalars import (B, F, I, INF, N, NINF, OMEGA, RPOS, SEMIRINGS,
                             UNDEF, UNIT, CarrierError, axiom_report,
                             broken_F, format_scalar, naive_complete,
                             normalize_family, parse_scalar)


# ---------------------------------------------------------------------------
# hand-checked sums


def test_I_binary_sum_partial():
    assert I.sum(0, 0) == 0
    assert I.sum(0, 1) == 1
    assert I.sum(1, 1) is UNDEF
    assert I.sum_family(((1, OMEGA),)) is UNDEF
    assert I.sum_family(((0, OMEGA),)) == 0


def test_B_complete_join():
    assert B.sum(1, 1) == 1
    assert B.sum_family(((1, OMEGA),)) == 1
    assert B.is_complete


def test_F_finite_join_only():
    assert F.sum(1, 1) == 1
    assert F.sum_family(((1, OMEGA),)) is UNDEF
    assert F.sum_family(((0, OMEGA), (1, 2))) == 1
    assert F.is_finitely_complete and not F.is_complete


def test_N_sums():
    assert N.sum(2, 3) == 5
    assert N.sum_family(((2, 3),)) == 6
    assert N.sum_family(((1, OMEGA),)) is UNDEF
    assert N.sum_family(((0, OMEGA),)) == 0


def test_NINF_absorbs():
    assert NINF.sum_family(((1, OMEGA),)) is INF
    assert NINF.sum(INF, 3) is INF
    assert NINF.mul(INF, 0) == 0
    assert NINF.mul(INF, 2) is INF


def test_UNIT_threshold():
    h = Fraction(1, 2)
    assert UNIT.sum(h, h) == 1
    assert UNIT.sum(h, Fraction(3, 4)) is UNDEF
    assert UNIT.sum_family(((h, 3),)) is UNDEF
    assert UNIT.mul(h, h) == Fraction(1, 4)


def test_RPOS_total_finite_sums():
    assert RPOS.sum(Fraction(3, 2), Fraction(5, 2)) == 4
    assert RPOS.sum_family(((Fraction(1), OMEGA),)) is UNDEF


def test_carrier_errors():
    with pytest.raises(CarrierError):
        I.sum(1, 2)
    with pytest.raises(CarrierError):
        UNIT.mul(Fraction(1, 2), Fraction(3, 2))
    with pytest.raises(CarrierError):
        N.sum_family(((Fraction(1, 2), 1),))


# ---------------------------------------------------------------------------
# normal forms


def test_normalize_family_merges_and_drops_zeros():
    fam = ((1, 1), (0, 5), (1, 2))
    assert normalize_family(fam) == ((1, 3),)
    assert normalize_family(((1, 2), (1, OMEGA))) == ((1, OMEGA),)
    assert normalize_family(()) == ()


def test_normalize_family_rejects_bad_multiplicity():
    with pytest.raises(ValueError):
        normalize_family(((1, 0),))
    with pytest.raises(ValueError):
        normalize_family(((1, -2),))


@given(st.lists(st.tuples(st.fractions(min_value=0, max_value=1),
                          st.one_of(st.integers(min_value=1, max_value=4),
                                    st.just(OMEGA))),
                max_size=5))
@settings(max_examples=200, deadline=None)
def test_unit_sum_order_invariant(fam):
    fam = tuple(fam)
    assert UNIT.sum_family(fam) == UNIT.sum_family(tuple(reversed(fam)))


@given(st.lists(st.tuples(st.integers(min_value=0, max_value=6),
                          st.integers(min_value=1, max_value=3)),
                max_size=4))
@settings(max_examples=200, deadline=None)
def test_nat_subfamily_definedness(fam):
    fam = tuple(fam)
    if N.sum_family(fam) is not UNDEF:
        for k in range(len(fam)):
            assert N.sum_family(fam[:k]) is not UNDEF


# ---------------------------------------------------------------------------
# axiom reports


@pytest.mark.parametrize("name", sorted(SEMIRINGS))
def test_axiom_report_passes(name):
    rep = axiom_report(SEMIRINGS[name], samples=40)
    assert rep.ok, rep.lines()


def test_broken_F_fails_subfamily_definedness():
    rep = axiom_report(broken_F())
    assert not rep.ok
    failed = {c.axiom for c in rep.checks if not c.passed}
    assert "subfamily definedness" in failed


def test_naive_completion_of_I_passes_axioms():
    s = naive_complete(I)
    assert s.is_complete
    assert s.sum(1, 1) is INF
    assert axiom_report(s).ok


# ---------------------------------------------------------------------------
# formatting


@pytest.mark.parametrize("text,s", [
    ("0", I), ("1", B), ("1/2", UNIT), ("3", N), ("inf", NINF),
])
def test_parse_format_round_trip(text, s):
    assert format_scalar(parse_scalar(text, s)) == text
