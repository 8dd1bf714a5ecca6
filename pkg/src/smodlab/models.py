"""Concrete models at finite web scale.

Coherence spaces, finiteness spaces, probabilistic coherence spaces with an
exact-rational bipolar oracle, and the double-gluing / tight-orthogonality
closure over ℕ∞-weighted relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .scalars import F as FSEMI
from .scalars import I as ISEMI
from .scalars import INF, NINF, UNDEF, UNIT, Semiring
from .basedmod import (BasedModule, CoherenceP, FinitenessP, PolytopeP,
                       Vector, Web, WebMismatch, vec)
from .linmaps import (DualBasis, LinMap, Matrix, MorphismReport, apply,
                      functional, is_morphism)
from . import ratlp


class ModelError(Exception):
    pass


class BoundExceeded(ModelError):
    """A computation was refused because its configured size bound was hit."""


# ---------------------------------------------------------------------------
# coherence spaces


@dataclass(frozen=True)
class CoherenceSpace:
    name: str
    atoms: tuple
    coh: frozenset  # symmetric, reflexive set of atom pairs

    def __post_init__(self):
        for (a, b) in self.coh:
            if a not in self.atoms or b not in self.atoms:
                raise ModelError(f"coherence pair ({a},{b}) outside the web")
        for a in self.atoms:
            if (a, a) not in self.coh:
                raise ModelError(f"relation not reflexive at {a}")
        for (a, b) in self.coh:
            if (b, a) not in self.coh:
                raise ModelError(f"relation not symmetric at ({a},{b})")

    @property
    def web(self) -> Web:
        return Web(self.atoms)

    def coherent(self, a, b) -> bool:
        return (a, b) in self.coh

    def strictly_incoherent(self, a, b) -> bool:
        """a ≍ b: equal or incoherent."""
        return a == b or (a, b) not in self.coh

    def is_clique(self, support: Iterable) -> bool:
        sup = list(support)
        return all(self.coherent(a, b) for a, b in
                   itertools.combinations_with_replacement(sup, 2))

    def cliques(self):
        out = []
        for r in range(len(self.atoms) + 1):
            for sup in itertools.combinations(self.atoms, r):
                if self.is_clique(sup):
                    out.append(frozenset(sup))
        return out


def coherence_space(name: str, atoms, coherent_pairs=()) -> CoherenceSpace:
    """Build a space from the strict part of the relation; reflexive and
    symmetric closure is taken automatically."""
    atoms = tuple(atoms)
    rel = {(a, a) for a in atoms}
    for (a, b) in coherent_pairs:
        rel.add((a, b))
        rel.add((b, a))
    return CoherenceSpace(name, atoms, frozenset(rel))


def coherence_dual(A: CoherenceSpace, name: str = "") -> CoherenceSpace:
    rel = {(a, b) for a in A.atoms for b in A.atoms
           if A.strictly_incoherent(a, b)}
    return CoherenceSpace(name or f"{A.name}^", A.atoms, frozenset(rel))


def _pair_atom(a, b) -> str:
    return f"({a},{b})"


def coherence_tensor(A: CoherenceSpace, B: CoherenceSpace,
                     name: str = "") -> CoherenceSpace:
    atoms = tuple(_pair_atom(a, b) for a in A.atoms for b in B.atoms)
    rel = set()
    for (a, b) in itertools.product(A.atoms, B.atoms):
        for (a2, b2) in itertools.product(A.atoms, B.atoms):
            if A.coherent(a, a2) and B.coherent(b, b2):
                rel.add((_pair_atom(a, b), _pair_atom(a2, b2)))
    return CoherenceSpace(name or f"({A.name}⊗{B.name})", atoms, frozenset(rel))


def coherence_lolli(A: CoherenceSpace, B: CoherenceSpace,
                    name: str = "") -> CoherenceSpace:
    atoms = tuple(_pair_atom(a, b) for a in A.atoms for b in B.atoms)
    rel = set()
    for (a, b) in itertools.product(A.atoms, B.atoms):
        for (a2, b2) in itertools.product(A.atoms, B.atoms):
            cond1 = (not A.coherent(a, a2)) or B.coherent(b, b2)
            cond2 = (not B.strictly_incoherent(b, b2)) or A.strictly_incoherent(a, a2)
            if cond1 and cond2:
                rel.add((_pair_atom(a, b), _pair_atom(a2, b2)))
    return CoherenceSpace(name or f"({A.name}⊸{B.name})", atoms, frozenset(rel))


def coherence_module(space: CoherenceSpace, web: Optional[Web] = None) -> BasedModule:
    return BasedModule(ISEMI, web or space.web, CoherenceP(space), space.name)


def F_embed(A: CoherenceSpace):
    """The coherence space as an 𝕀-module with its canonical basis."""
    mod = coherence_module(A)
    pairs = []
    for a in A.atoms:
        e = vec(mod.web, {a: 1})
        pairs.append((e, functional(mod, {a: 1})))
    return mod, DualBasis(tuple(pairs))


def F_map(A: CoherenceSpace, B: CoherenceSpace, rel) -> LinMap:
    """A clique of A⊸B as a matrix; rejects non-cliques with a witness."""
    rel = frozenset(rel)
    lol = coherence_lolli(A, B)
    for p, q in itertools.combinations_with_replacement(sorted(rel), 2):
        if not lol.coherent(_pair_atom(*p), _pair_atom(*q)):
            raise ModelError(f"not a clique of A⊸B: pairs {p} and {q} clash")
    src, _ = F_embed(A)
    dst, _ = F_embed(B)
    entries = {(a, b): 1 for (a, b) in rel}
    return LinMap(src, dst, Matrix.make(src.web, dst.web, entries), verified=True)


def F_invert(g: LinMap) -> frozenset:
    """Recover the relation: (a,b) ∈ f ⇔ b ∈ g({a})."""
    if not g.verified and not is_morphism(g).ok:
        raise ModelError("F_invert requires a verified morphism")
    return frozenset((a, b) for (a, b), v in g.matrix.entries if v == 1)


# ---------------------------------------------------------------------------
# finiteness spaces


@dataclass(frozen=True)
class FinitenessSpace:
    name: str
    atoms: tuple

    @property
    def web(self) -> Web:
        return Web(self.atoms)

    def admits_support(self, support) -> bool:
        return all(a in self.atoms for a in support)

    def supports(self):
        out = []
        for r in range(len(self.atoms) + 1):
            for sup in itertools.combinations(self.atoms, r):
                out.append(frozenset(sup))
        return out


def fin_dual(supports, web: Web):
    """The finiteness dual; at finite webs every intersection is finite,
    so the dual is the full powerset."""
    del supports
    out = []
    for r in range(len(web) + 1):
        for sup in itertools.combinations(web.atoms, r):
            out.append(frozenset(sup))
    return out


def finiteness_module(A: FinitenessSpace, web: Optional[Web] = None) -> BasedModule:
    return BasedModule(FSEMI, web or A.web, FinitenessP(A), A.name)


def G_embed(A: FinitenessSpace) -> BasedModule:
    return finiteness_module(A)


# ---------------------------------------------------------------------------
# probabilistic coherence spaces


@dataclass(frozen=True)
class ProbCohSpace:
    name: str
    atoms: tuple
    generators: tuple  # canonical tuple of tuples of Fraction

    @property
    def web(self) -> Web:
        return Web(self.atoms)

    def gamma(self, a) -> Fraction:
        idx = self.atoms.index(a)
        return max(g[idx] for g in self.generators)


def pcoh_space(name: str, atoms, generators) -> ProbCohSpace:
    atoms = tuple(atoms)
    gens = []
    for g in generators:
        g = tuple(Fraction(x) for x in g)
        if len(g) != len(atoms):
            raise ModelError(f"generator {g} has wrong length")
        if any(x < 0 for x in g):
            raise ModelError(f"generator {g} has a negative coordinate")
        gens.append(g)
    if not gens:
        raise ModelError("at least one generator is required")
    for i, a in enumerate(atoms):
        if max(g[i] for g in gens) == 0:
            raise ModelError(f"dead atom {a}: every generator is 0 there")
    canon = ratlp.prune_dominated(gens)
    return ProbCohSpace(name, atoms, tuple(canon))


def pcoh_bipolar_member(P: ProbCohSpace, u) -> bool:
    u = tuple(Fraction(x) for x in u)
    if len(u) != len(P.atoms):
        raise WebMismatch("vector length does not match the web")
    if any(x < 0 for x in u):
        raise ModelError(f"negative coordinate in {u}")
    return ratlp.in_bipolar(P.generators, u)


def pcoh_dual(P: ProbCohSpace, bound: int = 4) -> ProbCohSpace:
    if len(P.atoms) > bound:
        raise BoundExceeded(
            f"dual generator enumeration refused at web size {len(P.atoms)} "
            f"(bound {bound}); membership queries remain available")
    verts = ratlp.polar_vertices(P.generators, len(P.atoms))
    canon = ratlp.prune_dominated([tuple(v) for v in verts])
    return ProbCohSpace(f"{P.name}^", P.atoms, tuple(canon))


def H_embed(P: ProbCohSpace) -> BasedModule:
    return BasedModule(UNIT, P.web, PolytopeP(generators=P.generators), P.name)


def pcoh_gamma_and_basis(P: ProbCohSpace):
    """γ_a = max generator coordinate; basis (e_a = γ_a·δ_a, φ_a = x(a)/γ_a)."""
    mod = H_embed(P)
    gammas = {a: P.gamma(a) for a in P.atoms}
    pairs = []
    for a in P.atoms:
        e = vec(mod.web, {a: gammas[a]})
        pairs.append((e, functional(mod, {a: Fraction(1) / gammas[a]})))
    return gammas, DualBasis(tuple(pairs))


def H_map(P: ProbCohSpace, Q: ProbCohSpace, rows) -> LinMap:
    """A rational matrix as a map H(P) → H(Q), verified on generators.

    `rows` is indexed rows-by-source-atom, columns-by-target-atom,
    or an existing Matrix.
    """
    src, dst = H_embed(P), H_embed(Q)
    if isinstance(rows, Matrix):
        mat = rows
    else:
        entries = {}
        for a, row in zip(P.atoms, rows):
            for b, v in zip(Q.atoms, row):
                v = Fraction(v)
                if v < 0:
                    raise ModelError(f"negative entry at ({a},{b})")
                if v != 0:
                    entries[(a, b)] = v
        mat = Matrix.make(src.web, dst.web, entries)
    f = LinMap(src, dst, mat)
    rep = is_morphism(f)
    if not rep.ok:
        raise ModelError(f"not a morphism: {rep.counterexample}")
    return LinMap(src, dst, mat, verified=True)


# ---------------------------------------------------------------------------
# double gluing over ℕ∞


@dataclass(frozen=True)
class GlueObject:
    web: Web
    u: frozenset  # vectors, tuples over ℕ∞ in web order
    x: frozenset  # covectors

    def is_tight(self, bound: int = 2) -> bool:
        carrier = _glue_carrier(len(self.web), bound)
        return (self.u == _polar(self.x, carrier)
                and self.x == _polar(self.u, carrier))


def _ninf_mul(a, b):
    if a == 0 or b == 0:
        return 0
    if a is INF or b is INF:
        return INF
    return a * b


def _ninf_sum(terms):
    total = 0
    for t in terms:
        if t is INF:
            return INF
        total += t
    return total


def glue_pairing(u, x):
    return _ninf_sum(_ninf_mul(a, b) for a, b in zip(u, x))


def _glue_carrier(dim: int, bound: int):
    values = tuple(range(bound + 1)) + (INF,)
    return [tuple(v) for v in itertools.product(values, repeat=dim)]


def _polar(vectors, carrier):
    out = set()
    for x in carrier:
        ok = True
        for u in vectors:
            p = glue_pairing(u, x)
            if p is INF or p > 1:
                ok = False
                break
        if ok:
            out.add(x)
    return frozenset(out)


def glue_tight_closure(web: Web, u_vectors, s: Semiring = NINF,
                       bound: int = 2) -> GlueObject:
    """Tight closure (R, U°°, U°) within the {0..bound, ∞}-coordinate carrier."""
    if not s.is_complete:
        raise ModelError(
            f"focused orthogonality needs a complete carrier; {s.name} is not")
    seed = {tuple(v) for v in u_vectors}
    carrier = _glue_carrier(len(web), bound)
    x = _polar(seed, carrier)
    u = _polar(x, carrier)
    assert _polar(u, carrier) == x, "triple polar must collapse"
    return GlueObject(web, frozenset(u), x)


def glue_is_morphism(f: Matrix, A: GlueObject, B: GlueObject) -> bool:
    """f·u ∈ U_B for every u ∈ U_A, and x∘f ∈ X_A for every x ∈ X_B."""
    if f.src_web != A.web or f.dst_web != B.web:
        raise WebMismatch("matrix webs do not match the glue objects")
    for u in A.u:
        img = tuple(_ninf_sum(_ninf_mul(f.entry(a, b), ua)
                              for a, ua in zip(A.web.atoms, u))
                    for b in B.web.atoms)
        if img not in B.u:
            return False
    for x in B.x:
        pre = tuple(_ninf_sum(_ninf_mul(f.entry(a, b), xb)
                              for b, xb in zip(B.web.atoms, x))
                    for a in A.web.atoms)
        if pre not in A.x:
            return False
    return True


def wrel_compose(s: Semiring, f: Matrix, g: Matrix) -> Matrix:
    """Total matrix product over a complete semiring (weighted relations)."""
    if not s.is_complete:
        raise ModelError(
            f"{s.name} is not complete; use linmaps.compose for partial sums")
    if f.dst_web != g.src_web:
        raise WebMismatch("middle webs differ")
    entries = {}
    for a in f.src_web.atoms:
        for c in g.dst_web.atoms:
            fam = [(s._mul_rule(s, g.entry(b, c), f.entry(a, b)), 1)
                   for b in f.dst_web.atoms]
            got = s.sum_family((v, m) for v, m in fam if v != 0)
            assert got is not UNDEF
            if got != 0:
                entries[(a, c)] = got
    return Matrix.make(f.src_web, g.dst_web, entries)
