from fractions import Fraction

import pytest

from smodlab.basedmod import (EnumeratedP, MembershipError, UNKNOWN, Vector,
                              Web, WebMismatch, classify_submodule,
                              coproduct_module, enumerated_module,
                              free_module, preorder_leq_vec, product_module,
                              scalar_action, vec, vec_sum, web, zero_module)
from smodlab.scalars import (B, F, I, N, OMEGA, UNDEF, UNIT, CarrierError)


def test_vec_construction_and_web_checks():
    w = web("a", "b")
    x = vec(w, {"a": 1})
    assert x.value("a") == 1 and x.value("b") == 0
    assert x.support == frozenset({"a"})
    with pytest.raises(WebMismatch):
        vec(w, {"c": 1})


def test_free_module_sums_follow_the_semiring():
    m = free_module(I, web("a", "b"))
    x, y = vec(m.web, a=1), vec(m.web, b=1)
    assert vec_sum(m, ((x, 1), (y, 1))) == vec(m.web, a=1, b=1)
    assert vec_sum(m, ((x, 2),)) is UNDEF
    assert vec_sum(m, ((x, OMEGA), (y, 1))) is UNDEF


def test_free_module_rational_carrier():
    m = free_module(UNIT, web("a"))
    assert m.admits(vec(m.web, a=Fraction(1, 3)))
    assert not m.admits(vec(m.web, a=Fraction(3, 2)))


def test_enumerated_module_with_sum_rule():
    # {0,1} with join: a B-flavored carrier sitting over the I scalars
    w = web("*")
    vs = (vec(w), vec(w, {"*": 1}))
    join = lambda fam: 1 if any(v == 1 for v, _ in fam) else 0
    m = enumerated_module(I, w, vs, sum_rule=join)
    one = vec(w, {"*": 1})
    assert vec_sum(m, ((one, 1), (one, 1))) == one
    assert m.carrier_vectors() is not None


def test_scalar_action():
    m = free_module(UNIT, web("a", "b"))
    x = vec(m.web, a=Fraction(1, 2), b=1)
    y = scalar_action(m, Fraction(1, 2), x)
    assert y == vec(m.web, a=Fraction(1, 4), b=Fraction(1, 2))


def test_product_and_coproduct():
    m = free_module(I, web("a"))
    n = free_module(I, web("b"))
    p = product_module([m, n])
    assert p.web.atoms == ("0.a", "1.b")
    both = vec(p.web, {"0.a": 1, "1.b": 1})
    assert p.admits(both)
    c = coproduct_module([m, n])
    assert c.admits(vec(c.web, {"0.a": 1}))
    assert not c.admits(vec(c.web, {"0.a": 1, "1.b": 1}))


def test_preorder():
    m = free_module(N, web("a"))
    assert preorder_leq_vec(m, vec(m.web, a=1), vec(m.web, a=3)) is True
    assert preorder_leq_vec(m, vec(m.web, a=3), vec(m.web, a=1)) is False


# ---------------------------------------------------------------------------
# submodule classification


def _scalar_submodule(ambient, values, sum_rule=None):
    w = web("*")
    vs = tuple(vec(w, {"*": v}) for v in values)
    return enumerated_module(ambient, w, vs, sum_rule=sum_rule)


def test_I_inside_F_is_not_sum_reflecting():
    w = web("*")
    sup = free_module(F, w)
    sub = _scalar_submodule(F, (0, 1), sum_rule=I.sum_family)
    verdict = classify_submodule(sub, sup)
    assert verdict.is_submodule
    assert verdict.is_sum_reflecting is False


def test_I_inside_N_is_sum_reflecting():
    w = web("*")
    sup = free_module(N, w)
    sub = _scalar_submodule(N, (0, 1), sum_rule=I.sum_family)
    verdict = classify_submodule(sub, sup)
    assert verdict.is_submodule
    assert verdict.is_sum_reflecting is True


def test_classify_requires_shared_web():
    with pytest.raises(WebMismatch):
        classify_submodule(free_module(I, web("a")), free_module(I, web("b")))


def test_zero_module():
    z = zero_module(I)
    assert z.web.atoms == ()
    assert z.admits(vec(z.web))
