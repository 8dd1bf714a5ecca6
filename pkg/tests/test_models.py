from fractions import Fraction

import pytest

from smodlab.basedmod import Web, vec, vec_sum, web
from smodlab.linmaps import apply, is_morphism, matrix_of, validate_basis
from smodlab.models import (BoundExceeded, CoherenceSpace, F_embed, F_invert,
                            F_map, FinitenessSpace, G_embed, ModelError,
                            coherence_dual, coherence_lolli, coherence_module,
                            coherence_space, coherence_tensor, fin_dual,
                            finiteness_module, glue_is_morphism,
                            glue_tight_closure, pcoh_bipolar_member,
                            pcoh_dual, pcoh_gamma_and_basis, pcoh_space,
                            wrel_compose, H_embed, H_map)
from smodlab.scalars import B, I, INF, NINF, OMEGA, UNDEF
from smodlab.linmaps import Matrix


# ---------------------------------------------------------------------------
# coherence spaces


def tri():
    return coherence_space("A", ("a", "b", "c"), [("a", "b")])


def test_coherence_space_closure_and_cliques():
    A = tri()
    assert A.coherent("a", "a") and A.coherent("b", "a")
    assert not A.coherent("a", "c")
    assert frozenset({"a", "b"}) in A.cliques()
    assert frozenset({"a", "c"}) not in A.cliques()


def test_coherence_dual_swaps_strict_parts():
    A = tri()
    D = coherence_dual(A)
    assert D.coherent("a", "c")
    assert not D.coherent("a", "b")
    assert D.coherent("a", "a")


def test_coherence_tensor_and_lolli():
    A = tri()
    B_ = coherence_space("B", ("x", "y"), [("x", "y")])
    T = coherence_tensor(A, B_)
    assert T.coherent("(a,x)", "(b,y)")
    assert not T.coherent("(a,x)", "(c,y)")
    L = coherence_lolli(A, B_)
    # coherent args must go to coherent results
    assert L.coherent("(a,x)", "(b,y)")
    # strictly incoherent results must reflect strict incoherence backwards
    assert not L.coherent("(a,x)", "(b,x)") or A.strictly_incoherent("a", "b")


def test_coherence_module_carrier_is_cliques():
    A = tri()
    m = coherence_module(A)
    assert m.admits(vec(m.web, a=1, b=1))
    assert not m.admits(vec(m.web, a=1, c=1))
    x, y = vec(m.web, a=1), vec(m.web, c=1)
    assert vec_sum(m, ((x, 1), (y, 1))) is UNDEF  # sum leaves the carrier


def test_F_functor_round_trip():
    A = tri()
    B_ = coherence_space("B", ("x", "y"), [("x", "y")])
    rel = frozenset({("a", "x"), ("b", "y")})
    f = F_map(A, B_, rel)
    assert f.verified
    assert F_invert(f) == rel
    # non-clique relations are rejected with a witness
    # a ⌢ b strictly, yet both land on x: violates the ≍ reflection clause
    bad = frozenset({("a", "x"), ("b", "x")})
    with pytest.raises(ModelError):
        F_map(A, B_, bad)


def test_F_embed_basis_validates():
    m, basis = F_embed(tri())
    rep = validate_basis(m, basis)
    assert rep.valid and rep.orthogonal


# ---------------------------------------------------------------------------
# finiteness spaces


def test_finiteness_module_refuses_infinite_multiplicity():
    sp = FinitenessSpace("X", ("a", "b"))
    m = finiteness_module(sp)
    x = vec(m.web, a=1)
    assert vec_sum(m, ((x, OMEGA),)) is UNDEF


def test_fin_dual_at_finite_webs_is_powerset():
    w = web("a", "b")
    supports = frozenset({frozenset(), frozenset({"a"})})
    dual = fin_dual(supports, w)
    assert frozenset({"b"}) in dual and frozenset({"a", "b"}) in dual


def test_G_embed():
    m = G_embed(FinitenessSpace("X", ("a",)))
    assert m.admits(vec(m.web, a=1))


# ---------------------------------------------------------------------------
# probabilistic coherence spaces


def simplex():
    return pcoh_space("S", ("a", "b"), [(1, 0), (0, 1)])


def box():
    return pcoh_space("Bx", ("a", "b"), [(1, 1)])


def test_pcoh_dual_box_simplex():
    assert pcoh_dual(simplex()).generators == box().generators
    assert pcoh_dual(box()).generators == simplex().generators


def test_pcoh_triple_dual_collapse():
    P = pcoh_space("P", ("a", "b"), [(1, Fraction(1, 2))])
    assert pcoh_dual(P).generators == pcoh_dual(pcoh_dual(pcoh_dual(P))).generators


def test_pcoh_dead_atom_rejected():
    with pytest.raises(ModelError):
        pcoh_space("D", ("a", "b"), [(1, 0)])


def test_pcoh_bound_exceeded():
    P = pcoh_space("big", tuple("abcde"), [tuple(1 for _ in "abcde")])
    with pytest.raises(BoundExceeded):
        pcoh_dual(P)


def test_pcoh_bipolar_member():
    S = simplex()
    assert pcoh_bipolar_member(S, (Fraction(1, 2), Fraction(1, 2)))
    assert not pcoh_bipolar_member(S, (Fraction(1, 2), Fraction(3, 4)))
    with pytest.raises(ModelError):
        pcoh_bipolar_member(S, (Fraction(-1, 2), 0))


def test_H_map_accepts_and_rejects():
    S, Bx = simplex(), box()
    f = H_map(S, Bx, [[1, 1], [1, 1]])  # simplex fits in the box
    assert f.verified
    with pytest.raises(ModelError):
        H_map(Bx, S, [[1, 0], [0, 1]])  # box does not fit in the simplex


def test_H_basis_validates():
    S = simplex()
    _, basis = pcoh_gamma_and_basis(S)
    rep = validate_basis(H_embed(S), basis)
    assert rep.valid and rep.orthogonal


# ---------------------------------------------------------------------------
# double gluing


def test_glue_closure_reconstructs_cliques():
    A = tri()
    m = coherence_module(A)
    w = m.web
    cliques = [tuple(1 if a in c else 0 for a in w.atoms) for c in A.cliques()]
    obj = glue_tight_closure(w, cliques, bound=1)
    assert obj.u == frozenset(cliques)
    assert obj.is_tight(bound=1)


def test_glue_morphism_and_wrel():
    w = web("a")
    obj = glue_tight_closure(w, [(0,), (1,)], bound=1)
    ident = Matrix.make(w, w, {("a", "a"): 1})
    assert glue_is_morphism(ident, obj, obj)
    comp = wrel_compose(NINF, ident, ident)
    assert comp == ident
    with pytest.raises(ModelError):
        wrel_compose(I, ident, ident)  # needs a complete semiring


def test_coherence_over_B_rejected():
    # B satisfies x + x = x, which collapses the clique structure
    from smodlab.basedmod import BasedModule, CoherenceP
    A = tri()
    with pytest.raises(ValueError):
        BasedModule(B, Web(A.atoms), CoherenceP(A))
