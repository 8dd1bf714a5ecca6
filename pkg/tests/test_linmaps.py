from fractions import Fraction

import pytest

from smodlab.basedmod import IntegrityError, vec, web
from smodlab.linmaps import (DualBasis, LinMap, Matrix, apply, compose,
                             dual_and_eta, format_matrix, functional,
                             identity, is_morphism, linmap, lolli_obj,
                             matrix_of, parse_matrix, semiring_module,
                             tensor_obj, unit_basis, validate_basis,
                             zero_map)
from smodlab.models import (F_embed, H_embed, coherence_module,
                            coherence_space, pcoh_gamma_and_basis,
                            pcoh_space)
from smodlab.scalars import I, UNDEF, UNIT
from smodlab.basedmod import free_module


def tri_mod():
    return coherence_module(coherence_space("A", ("a", "b", "c"), [("a", "b")]))


def simplex_mod():
    P = pcoh_space("S", ("a", "b"), [(1, 0), (0, 1)])
    return H_embed(P), pcoh_gamma_and_basis(P)[1]


# ---------------------------------------------------------------------------
# matrices


def test_matrix_format_parse_round_trip():
    w1, w2 = web("a", "b"), web("x")
    mat = Matrix.make(w1, w2, {("a", "x"): 1})
    text = format_matrix(mat)
    assert parse_matrix(text, w1, w2, I) == mat


def test_matrix_transpose_and_entry():
    w1, w2 = web("a"), web("x", "y")
    mat = Matrix.make(w1, w2, {("a", "y"): 1})
    assert mat.entry("a", "y") == 1 and mat.entry("a", "x") == 0
    assert mat.transpose().entry("y", "a") == 1


# ---------------------------------------------------------------------------
# application and composition


def test_apply_identity_and_zero():
    m = tri_mod()
    x = vec(m.web, a=1, b=1)
    assert apply(identity(m), x) == x
    assert apply(zero_map(m, m), x) == m.zero()


def test_collapsing_coherent_atoms_is_not_a_morphism():
    m = tri_mod()
    # a ⌢ b strictly, so {a,b} is a clique; collapsing both onto a would
    # need 1 + 1 in I
    f = linmap(m, m, {("a", "a"): 1, ("b", "a"): 1})
    assert not is_morphism(f).ok
    # collapsing the incoherent pair {a,c} is fine: they never share a clique
    g = linmap(m, m, {("a", "a"): 1, ("c", "a"): 1})
    assert is_morphism(g).ok


def test_compose_rational():
    m, basis = simplex_mod()
    h = Fraction(1, 2)
    f = linmap(m, m, {("a", "a"): h, ("b", "b"): h})
    ff = compose(f, f)
    assert ff.matrix.entry("a", "a") == Fraction(1, 4)


def test_compose_undefined_entry_raises():
    w = web("a", "b")
    m = free_module(I, w)
    f = linmap(m, m, {("a", "a"): 1, ("a", "b"): 1})
    g = linmap(m, m, {("a", "a"): 1, ("b", "a"): 1})
    with pytest.raises(IntegrityError):
        compose(f, g)  # entry (a,a) needs 1 + 1 in I


# ---------------------------------------------------------------------------
# morphism checks


def test_is_morphism_coherence_strategy():
    m = tri_mod()
    rep = is_morphism(identity(m))
    assert rep.ok and rep.strategy == "coherence"


def test_is_morphism_polytope_strategy():
    m, basis = simplex_mod()
    f = linmap(m, m, {("a", "b"): 1, ("b", "a"): 1})
    rep = is_morphism(f)
    assert rep.ok and rep.strategy == "polytope-generators"
    g = linmap(m, m, {("a", "a"): 1, ("a", "b"): 1})
    assert not is_morphism(g).ok  # image of e_a leaves the simplex


# ---------------------------------------------------------------------------
# bases


def test_validate_basis_coherence_and_pcoh():
    m, basis = F_embed(coherence_space("A", ("a", "b"), [("a", "b")]))
    assert validate_basis(m, basis).valid
    m2, b2 = simplex_mod()
    assert validate_basis(m2, b2).valid


def test_validate_basis_rejects_fake():
    m, basis = F_embed(coherence_space("A", ("a", "b"), []))
    # functional claiming phi_a = phi_b breaks reconstruction
    wrong = DualBasis(tuple(
        (e, functional(m, {"a": 1})) for e, _ in basis.pairs))
    assert not validate_basis(m, wrong).valid


# ---------------------------------------------------------------------------
# tensor / lolli / duality


def test_tensor_obj_coherence():
    m = tri_mod()
    t, tb = tensor_obj(m, m, F_embed(m.presentation.space)[1],
                       F_embed(m.presentation.space)[1])
    assert "(a,b)" in t.web.atoms
    assert t.admits(vec(t.web, {"(a,b)": 1}))
    assert t.admits(vec(t.web, {"(a,a)": 1, "(b,b)": 1}))
    assert not t.admits(vec(t.web, {"(a,a)": 1, "(c,c)": 1}))
    assert validate_basis(t, tb).valid


def test_lolli_obj_semiring_dual():
    s_mod = semiring_module(I)
    m = tri_mod()
    mb = F_embed(m.presentation.space)[1]
    d, db = lolli_obj(m, s_mod, mb, unit_basis(I))
    assert validate_basis(d, db).valid


def test_matrix_of_identity_is_identity():
    m, basis = simplex_mod()
    mat = matrix_of(identity(m), basis, basis)
    assert mat.entry("i0", "j0") == 1 and mat.entry("i1", "j1") == 1
    assert mat.entry("i0", "j1") == 0 and mat.entry("i1", "j0") == 0


def test_dual_and_eta_coherence():
    A = coherence_space("A", ("a", "b"), [("a", "b")])
    m, basis = F_embed(A)
    rep = dual_and_eta(m, basis)
    assert rep.eta_iso and rep.mu_eta_identity


def test_dual_and_eta_pcoh():
    m, basis = simplex_mod()
    rep = dual_and_eta(m, basis)
    assert rep.eta_iso and rep.mu_eta_identity
