"""Compositional interpretation of formulas and combinator morphism terms.

Formulas denote based modules with orthogonal dual bases; morphism terms
denote verified linear maps.  The combinator surface:

    id(F)                      identity on the interpretation of F
    comp(f, g)                 g after f
    tensor(f, g)               f ⊗ g
    pair(f, g)                 ⟨f, g⟩ into a product
    proj1(F, G) / proj2(F, G)  product projections
    inj1(F, G) / inj2(F, G)    coproduct injections
    curry(f)                   A ⊗ B → C  ⇒  A → (B -o C)
    apply(F, G)                evaluation (F -o G) * F → G
    promote(F, d, {vec})       point 1 → !d F
    derelict(F, d)             !d F → F
    comult(F, d)               !d F → !d F ⊠ !d F
    <name>                     a workspace matrix, checked as a morphism

Formula arguments are ordinary formula syntax; vector literals are
``{a:1, b:1/2}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..scalars import Semiring, parse_scalar
from ..basedmod import (BasedModule, Vector, Web, coproduct_module,
                        free_module, product_module, vec, zero_module)
from ..linmaps import (DualBasis, LinMap, Matrix, functional, identity,
                       is_morphism, lolli_obj, semiring_module, tensor_obj,
                       unit_basis, verify, _mul_for, _pair_atom)
from ..models import (CoherenceSpace, FinitenessSpace, ProbCohSpace, F_embed,
                      H_embed, pcoh_gamma_and_basis, finiteness_module)
from ..exponential import bang, bang_basis, comult as exp_comult, \
    dereliction, promote as exp_promote
from . import formulas as F
from .workspace import Workspace, WorkspaceError


class InterpretError(ValueError):
    pass


@dataclass(frozen=True)
class Denotation:
    module: BasedModule
    basis: DualBasis


def _free_basis(m: BasedModule) -> DualBasis:
    s = m.semiring
    pairs = []
    for a in m.web.atoms:
        pairs.append((vec(m.web, {a: s.one}), functional(m, {a: s.one})))
    return DualBasis(tuple(pairs))


def _denote_name(ws: Workspace, name: str) -> Denotation:
    if name in ws.formulas:
        return interpret_formula(ws, ws.formulas[name])
    if name in ws.spaces:
        sp = ws.spaces[name]
        if isinstance(sp, CoherenceSpace):
            mod, basis = F_embed(sp)
            return Denotation(mod, basis)
        if isinstance(sp, ProbCohSpace):
            _, basis = pcoh_gamma_and_basis(sp)
            return Denotation(H_embed(sp), basis)
        if isinstance(sp, FinitenessSpace):
            mod = finiteness_module(sp)
            return Denotation(mod, _free_basis(mod))
    if name in ws.modules:
        mod = ws.modules[name]
        return Denotation(mod, _free_basis(mod))
    raise InterpretError(f"unbound atom {name!r}")


def _shift_basis(whole: BasedModule, part: Denotation, prefix: str) -> tuple:
    """Basis pairs of a (co)product component, embedded along the prefix."""
    pairs = []
    for e, phi in part.basis.pairs:
        e2 = vec(whole.web, {f"{prefix}{a}": v for a, v in e.entries})
        coeffs = {f"{prefix}{a}": phi.matrix.entry(a, "*")
                  for a in part.module.web.atoms
                  if phi.matrix.entry(a, "*") != 0}
        pairs.append((e2, functional(whole, coeffs, part.module.semiring)))
    return tuple(pairs)


def interpret_formula(ws: Workspace, ast) -> Denotation:
    s = ws.semiring
    if isinstance(ast, F.Atom):
        return _denote_name(ws, ast.name)
    if isinstance(ast, F.One):
        return Denotation(semiring_module(s), unit_basis(s))
    if isinstance(ast, (F.Zero, F.Top)):
        return Denotation(zero_module(s), DualBasis(()))
    if isinstance(ast, F.Tensor):
        l, r = interpret_formula(ws, ast.left), interpret_formula(ws, ast.right)
        mod, basis = tensor_obj(l.module, r.module, l.basis, r.basis)
        return Denotation(mod, basis)
    if isinstance(ast, F.Lolli):
        l, r = interpret_formula(ws, ast.left), interpret_formula(ws, ast.right)
        mod, basis = lolli_obj(l.module, r.module, l.basis, r.basis)
        return Denotation(mod, basis)
    if isinstance(ast, (F.With, F.Plus)):
        l, r = interpret_formula(ws, ast.left), interpret_formula(ws, ast.right)
        build = product_module if isinstance(ast, F.With) else coproduct_module
        mod = build([l.module, r.module])
        pairs = _shift_basis(mod, l, "0.") + _shift_basis(mod, r, "1.")
        return Denotation(mod, DualBasis(pairs))
    if isinstance(ast, F.Dual):
        body = interpret_formula(ws, ast.body)
        mod, basis = lolli_obj(body.module, semiring_module(body.module.semiring),
                               body.basis, unit_basis(body.module.semiring))
        return Denotation(mod, basis)
    if isinstance(ast, F.Bang):
        body = interpret_formula(ws, ast.body)
        if not body.basis.orthogonal:
            raise InterpretError("'!' needs an orthogonal basis")
        B = bang(body.module, body.basis, ast.degree)
        return Denotation(B.module, bang_basis(B))
    raise InterpretError(f"cannot interpret {ast!r}")


# ---------------------------------------------------------------------------
# morphism terms


def parse_vector(text: str, w: Web, s: Semiring) -> Vector:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise InterpretError(f"bad vector literal {text!r}")
    body = text[1:-1].strip()
    coords = {}
    if body:
        for item in body.split(","):
            if ":" not in item:
                raise InterpretError(f"bad vector entry {item!r}")
            atom, value = item.split(":", 1)
            atom = atom.strip()
            if atom not in w.atoms:
                raise InterpretError(f"unknown atom {atom!r} in vector literal")
            coords[atom] = parse_scalar(value.strip(), s)
    return vec(w, coords)


def _split_args(body: str):
    out = []
    depth = 0
    cur = []
    for ch in body:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    last = "".join(cur).strip()
    if last:
        out.append(last)
    return out


_CALL = re.compile(r"(\w+)\s*\((.*)\)\s*$", re.DOTALL)

_COMBINATORS = {"id", "comp", "tensor", "pair", "proj1", "proj2",
                "inj1", "inj2", "curry", "apply", "promote",
                "derelict", "comult"}


def _check(f: LinMap, what: str) -> LinMap:
    rep = is_morphism(f)
    if not rep.ok:
        raise InterpretError(f"{what} is not a morphism: {rep.counterexample}")
    return LinMap(f.src, f.dst, f.matrix, verified=True)


def _require_composable(f: LinMap, g: LinMap):
    if f.dst.web != g.src.web:
        raise InterpretError(
            f"type mismatch in comp: {f.dst.web!r} vs {g.src.web!r}")


def interpret_morphism(ws: Workspace, text: str) -> LinMap:
    text = text.strip()
    m = _CALL.fullmatch(text)
    if m and m.group(1) in _COMBINATORS:
        head, body = m.group(1), m.group(2)
        args = _split_args(body)
        return _combinator(ws, head, args)
    if text in ws.matrices:
        mat, src, dst = ws.matrices[text]
        f = LinMap(ws.module_named(src), ws.module_named(dst), mat)
        return _check(f, f"matrix {text}")
    raise InterpretError(f"cannot parse morphism term {text!r}")


def _formula_arg(ws: Workspace, text: str) -> Denotation:
    return interpret_formula(ws, F.parse_formula(text))


def _combinator(ws: Workspace, head: str, args) -> LinMap:
    def arity(n):
        if len(args) != n:
            raise InterpretError(f"{head} takes {n} argument(s), got {len(args)}")

    if head == "id":
        arity(1)
        return identity(_formula_arg(ws, args[0]).module)

    if head == "comp":
        arity(2)
        f = interpret_morphism(ws, args[0])
        g = interpret_morphism(ws, args[1])
        _require_composable(f, g)
        from ..linmaps import compose
        return compose(f, g)

    if head == "tensor":
        arity(2)
        f = interpret_morphism(ws, args[0])
        g = interpret_morphism(ws, args[1])
        den_src = _tensor_den(ws, f.src, g.src)
        den_dst = _tensor_den(ws, f.dst, g.dst)
        s = f.src.semiring
        mul = _mul_for(s)
        entries = {}
        for (a, c), v in f.matrix.entries:
            for (b, d), w in g.matrix.entries:
                entries[(_pair_atom(a, b), _pair_atom(c, d))] = mul(v, w)
        raw = LinMap(den_src.module, den_dst.module,
                     Matrix.make(den_src.module.web, den_dst.module.web, entries))
        return _check(raw, "tensor map")

    if head == "pair":
        arity(2)
        f = interpret_morphism(ws, args[0])
        g = interpret_morphism(ws, args[1])
        if f.src.web != g.src.web:
            raise InterpretError("pair needs a shared source")
        dst = product_module([f.dst, g.dst])
        entries = {}
        for (a, b), v in f.matrix.entries:
            entries[(a, f"0.{b}")] = v
        for (a, b), v in g.matrix.entries:
            entries[(a, f"1.{b}")] = v
        raw = LinMap(f.src, dst, Matrix.make(f.src.web, dst.web, entries))
        return _check(raw, "pairing")

    if head in ("proj1", "proj2", "inj1", "inj2"):
        arity(2)
        l = _formula_arg(ws, args[0])
        r = _formula_arg(ws, args[1])
        k = "0." if head.endswith("1") else "1."
        part = l if head.endswith("1") else r
        s = part.module.semiring
        if head.startswith("proj"):
            whole = product_module([l.module, r.module])
            entries = {(f"{k}{a}", a): s.one for a in part.module.web.atoms}
            raw = LinMap(whole, part.module,
                         Matrix.make(whole.web, part.module.web, entries))
        else:
            whole = coproduct_module([l.module, r.module])
            entries = {(a, f"{k}{a}"): s.one for a in part.module.web.atoms}
            raw = LinMap(part.module, whole,
                         Matrix.make(part.module.web, whole.web, entries))
        return _check(raw, head)

    if head == "curry":
        arity(1)
        f = interpret_morphism(ws, args[0])
        # the source must be a tensor: atoms "(a,b)"
        split = _unpair_web(f.src.web)
        if split is None:
            raise InterpretError(
                f"curry needs a tensor source, got web {f.src.web!r}")
        a_atoms, b_atoms = split
        return _curry(ws, f, a_atoms, b_atoms)

    if head == "apply":
        arity(2)
        l = _formula_arg(ws, args[0])
        r = _formula_arg(ws, args[1])
        return _eval_map(ws, l, r)

    if head == "promote":
        arity(3)
        den = _formula_arg(ws, args[0])
        d = int(args[1])
        B = bang(den.module, den.basis, d)
        x = parse_vector(args[2], den.module.web, den.module.semiring)
        if not den.module.admits(x):
            raise InterpretError(f"{x!r} is not a member of {args[0]}")
        px = exp_promote(B, x)
        src = semiring_module(den.module.semiring)
        entries = {("*", a): v for a, v in px.entries}
        raw = LinMap(src, B.module, Matrix.make(src.web, B.module.web, entries))
        return _check(raw, "promotion point")

    if head == "derelict":
        arity(2)
        den = _formula_arg(ws, args[0])
        B = bang(den.module, den.basis, int(args[1]))
        return _check(dereliction(B), "dereliction")

    if head == "comult":
        arity(2)
        den = _formula_arg(ws, args[0])
        B = bang(den.module, den.basis, int(args[1]))
        return exp_comult(B)

    raise InterpretError(f"unknown combinator {head!r}")


def _tensor_den(ws: Workspace, m: BasedModule, n: BasedModule) -> Denotation:
    dl = Denotation(m, _recover_basis(m))
    dr = Denotation(n, _recover_basis(n))
    mod, basis = tensor_obj(m, n, dl.basis, dr.basis)
    return Denotation(mod, basis)


def _recover_basis(m: BasedModule) -> DualBasis:
    from ..basedmod import CoherenceP, PolytopeP
    from ..linmaps import _polytope_generators
    if isinstance(m.presentation, PolytopeP):
        s = m.semiring
        pairs = []
        for a in m.web.atoms:
            idx = m.web.atoms.index(a)
            gamma = max(Fraction(g[idx]) for g in _polytope_generators(m))
            e = vec(m.web, {a: gamma})
            pairs.append((e, functional(m, {a: Fraction(1) / gamma})))
        return DualBasis(tuple(pairs))
    return _free_basis(m)


def _unpair_web(w: Web):
    lefts, rights = [], []
    for atom in w.atoms:
        m = _match_pair(atom)
        if m is None:
            return None
        l, r = m
        if l not in lefts:
            lefts.append(l)
        if r not in rights:
            rights.append(r)
    if len(lefts) * len(rights) != len(w.atoms):
        return None
    return tuple(lefts), tuple(rights)


def _match_pair(atom: str):
    """Split "(l,r)" at the top-level comma."""
    if not (atom.startswith("(") and atom.endswith(")")):
        return None
    body = atom[1:-1]
    depth = 0
    for i, ch in enumerate(body):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1:]
    return None


def _curry(ws: Workspace, f: LinMap, a_atoms, b_atoms) -> LinMap:
    """A ⊗ B → C to A → (B ⊸ C), on raw matrices."""
    from ..basedmod import FreeP
    s = f.src.semiring
    # reconstruct component modules of the tensor source by membership slicing
    a_mod = _component_module(f.src, a_atoms, first=True, other=b_atoms)
    b_mod = _component_module(f.src, b_atoms, first=False, other=a_atoms)
    db = _recover_basis(b_mod)
    dc = _recover_basis(f.dst)
    lol, _ = lolli_obj(b_mod, f.dst, db, dc)
    entries = {}
    for (ab, c), v in f.matrix.entries:
        a, b = _match_pair(ab)
        entries[(a, _pair_atom(b, c))] = v
    raw = LinMap(a_mod, lol, Matrix.make(a_mod.web, lol.web, entries))
    return _check(raw, "curry")


def _component_module(t: BasedModule, atoms, first: bool, other) -> BasedModule:
    """Slice a tensor module down to one factor by fixing the other factor
    to zero; presentations of the shipped tensors restrict coherently."""
    from ..basedmod import CoherenceP, EnumeratedP, PolytopeP, FreeP
    from ..models import CoherenceSpace, coherence_module
    w = Web(tuple(atoms))
    pres = t.presentation
    if isinstance(pres, CoherenceP):
        sp = pres.space
        rel = set()
        for x in atoms:
            for y in atoms:
                pair = (_pair_atom(x, other[0]), _pair_atom(y, other[0])) \
                    if first else (_pair_atom(other[0], x), _pair_atom(other[0], y))
                if sp.coherent(*pair):
                    rel.add((x, y))
        return coherence_module(
            CoherenceSpace(f"{t.name}.{1 if first else 2}", tuple(atoms),
                           frozenset(rel)), w)
    if isinstance(pres, PolytopeP):
        from ..linmaps import _polytope_generators
        gens = set()
        for g in _polytope_generators(t):
            coords = dict(zip(t.web.atoms, g))
            if first:
                sliced = tuple(max(coords[_pair_atom(a, b)] for b in other)
                               for a in atoms)
            else:
                sliced = tuple(max(coords[_pair_atom(b, a)] for b in other)
                               for a in atoms)
            gens.add(sliced)
        from .. import ratlp
        return BasedModule(t.semiring, w,
                           PolytopeP(generators=tuple(
                               ratlp.prune_dominated(list(gens)))),
                           f"{t.name}.{1 if first else 2}")
    return free_module(t.semiring, w)


def _eval_map(ws: Workspace, l: Denotation, r: Denotation) -> LinMap:
    """(L -o R) * L → R."""
    lol, blol = lolli_obj(l.module, r.module, l.basis, r.basis)
    src_mod, _ = tensor_obj(lol, l.module, blol, l.basis)
    s = l.module.semiring
    entries = {}
    for a in l.module.web.atoms:
        for b in r.module.web.atoms:
            atom = _pair_atom(_pair_atom(a, b), a)
            entries[(atom, b)] = s.one
    raw = LinMap(src_mod, r.module,
                 Matrix.make(src_mod.web, r.module.web, entries))
    return _check(raw, "evaluation")
