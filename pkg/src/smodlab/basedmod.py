"""Finite-web based modules: vectors, gated coordinate-wise sums, (co)products.

A module couples a scalar semiring with a finite web of atoms and a
membership presentation saying which web-indexed vectors are carrier
elements.  Sums are coordinate-wise in the semiring and additionally gated
by membership of the result; "undefined" (UNDEF) is a first-class outcome.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .scalars import (INF, OMEGA, RPOS, UNDEF, CarrierError, Semiring,
                      format_scalar)
from . import ratlp

#: verdict for searches that hit their bound
UNKNOWN = "unknown"

ENUMERATION_CAP = 10 ** 6


class WebMismatch(ValueError):
    pass


class MembershipError(ValueError):
    """A vector used where a carrier element is required."""


class IntegrityError(RuntimeError):
    """A presentation or verified morphism broke its own contract."""


@dataclass(frozen=True)
class Web:
    atoms: tuple

    def __post_init__(self):
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("web atoms must be distinct")
        if any(not a for a in self.atoms):
            raise ValueError("web atoms must be non-empty labels")

    def index(self, atom) -> int:
        return self.atoms.index(atom)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __repr__(self):
        return f"Web[{','.join(self.atoms)}]"


def web(*atoms) -> Web:
    return Web(tuple(atoms))


@dataclass(frozen=True)
class Vector:
    """A web-indexed vector; zero coordinates are not stored."""

    web: Web
    entries: tuple  # ((atom, value), ...) in web order, no zeros

    @staticmethod
    def make(w: Web, coords) -> "Vector":
        if isinstance(coords, dict):
            items = coords
        else:
            items = dict(coords)
        unknown = set(items) - set(w.atoms)
        if unknown:
            raise WebMismatch(f"atoms {sorted(unknown)} not in {w}")
        entries = tuple((a, items[a]) for a in w.atoms
                        if a in items and items[a] != 0)
        return Vector(w, entries)

    def value(self, atom):
        for a, v in self.entries:
            if a == atom:
                return v
        return 0

    @property
    def support(self) -> frozenset:
        return frozenset(a for a, _ in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def as_tuple(self) -> tuple:
        return tuple(self.value(a) for a in self.web.atoms)

    def __repr__(self):
        inner = ", ".join(f"{a}:{format_scalar(v)}" for a, v in self.entries)
        return "{" + inner + "}"


def vec(w: Web, coords=None, **kw) -> Vector:
    coords = dict(coords or {})
    coords.update(kw)
    return Vector.make(w, coords)


def zero_vector(w: Web) -> Vector:
    return Vector(w, ())


# ---------------------------------------------------------------------------
# presentations


class Presentation:
    """Membership/definedness discipline of a based module."""

    def check_semiring(self, s: Semiring):
        pass

    def coordinate_values(self, s: Semiring):
        """Values coordinates may take, for enumeration; None if infinite."""
        return s.carrier_elements() if s.is_enumerable else None

    def admits(self, module: "BasedModule", v: Vector) -> bool:
        raise NotImplementedError

    def coord_sum(self, module: "BasedModule", fam):
        """Per-coordinate partial sum; defaults to the semiring's."""
        return module.semiring.sum_family(fam)


@dataclass(frozen=True)
class FreeP(Presentation):
    def admits(self, module, v):
        return all(module.semiring.contains(x) for _, x in v.entries)

    def __repr__(self):
        return "free"


@dataclass(frozen=True)
class CoherenceP(Presentation):
    """0/1 vectors over I whose support is a clique."""

    space: object  # models.CoherenceSpace

    def check_semiring(self, s):
        if s.name != "I":
            raise ValueError(
                f"coherence presentation requires the semiring I, got {s.name}: "
                "x + x = x fails in a general based module")

    def admits(self, module, v):
        if any(x != 1 for _, x in v.entries):
            return False
        return self.space.is_clique(v.support)

    def __repr__(self):
        return f"coherence({self.space.name})"


@dataclass(frozen=True)
class FinitenessP(Presentation):
    """0/1 vectors over F; every support is admitted at a finite web."""

    space: object  # models.FinitenessSpace

    def check_semiring(self, s):
        if s.name != "F":
            raise ValueError(f"finiteness presentation requires F, got {s.name}")

    def admits(self, module, v):
        if any(x != 1 for _, x in v.entries):
            return False
        return self.space.admits_support(v.support)

    def __repr__(self):
        return f"finiteness({self.space.name})"


@dataclass(frozen=True)
class PolytopeP(Presentation):
    """Non-negative rational vectors in a polytope over a [0,1] action.

    Carried either by generators (membership = exact bipolar via the LP
    oracle) or by constraint vectors (membership = all pairings <= 1).
    """

    generators: Optional[tuple] = None   # tuples of Fractions, web order
    constraints: Optional[tuple] = None  # tuples of Fractions, web order

    def check_semiring(self, s):
        if s.name != "unit":
            raise ValueError(f"polytope presentation requires unit, got {s.name}")

    def coordinate_values(self, s):
        return None

    def admits(self, module, v):
        coords = v.as_tuple()
        if any(not isinstance(x, (int, Fraction)) or x < 0 for x in coords):
            return False
        coords = tuple(Fraction(x) for x in coords)
        if self.generators is not None:
            return ratlp.in_bipolar(self.generators, coords)
        return all(
            sum(c * x for c, x in zip(con, coords)) <= 1
            for con in self.constraints)

    def coord_sum(self, module, fam):
        return RPOS.sum_family(fam)  # bound enforced by membership, not per-coordinate

    def __repr__(self):
        if self.generators is not None:
            return f"polytope(gens={len(self.generators)})"
        return f"polytope(cons={len(self.constraints)})"


@dataclass(frozen=True)
class EnumeratedP(Presentation):
    """Explicit finite carrier, optionally a submodule of an ambient module."""

    vectors: frozenset
    ambient: Optional["BasedModule"] = None
    # optional non-coordinatewise sum (value, mult) family -> scalar/UNDEF;
    # lets genuinely exotic module sums (e.g. join) be expressed
    sum_rule: Optional[object] = None

    def coordinate_values(self, s):
        values = set()
        for v in self.vectors:
            values.update(x for _, x in v.entries)
        values.add(s.zero)
        return tuple(values)

    def admits(self, module, v):
        return v in self.vectors

    def coord_sum(self, module, fam):
        if self.sum_rule is not None:
            return self.sum_rule(fam)
        if self.ambient is not None:
            return self.ambient.presentation.coord_sum(self.ambient, fam)
        return module.semiring.sum_family(fam)

    def __repr__(self):
        return f"enumerated({len(self.vectors)})"


@dataclass(frozen=True)
class ProductP(Presentation):
    """Componentwise membership over a partition of the web."""

    parts: tuple  # ((prefix, BasedModule), ...)
    at_most_one: bool = False  # coproduct discipline

    def coordinate_values(self, s):
        vals = set()
        for _, m in self.parts:
            got = m.presentation.coordinate_values(s)
            if got is None:
                return None
            vals.update(got)
        return tuple(vals)

    def split(self, module, v: Vector):
        out = []
        for prefix, part in self.parts:
            coords = {}
            for a, x in v.entries:
                if a.startswith(prefix):
                    coords[a[len(prefix):]] = x
            out.append(Vector.make(part.web, coords))
        return out

    def join(self, module, pieces) -> Vector:
        coords = {}
        for (prefix, _), piece in zip(self.parts, pieces):
            for a, x in piece.entries:
                coords[prefix + a] = x
        return Vector.make(module.web, coords)

    def admits(self, module, v):
        pieces = self.split(module, v)
        if not all(p.admits(piece) for (_, p), piece in zip(self.parts, pieces)):
            return False
        if self.at_most_one:
            nonzero = sum(1 for piece in pieces if not piece.is_zero())
            return nonzero <= 1
        return True

    def coord_sum(self, module, fam):
        # every coordinate belongs to exactly one component
        return module.semiring.sum_family(fam)

    def __repr__(self):
        tag = "coproduct" if self.at_most_one else "product"
        return f"{tag}({len(self.parts)})"


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True)
class BasedModule:
    semiring: Semiring
    web: Web
    presentation: Presentation
    name: str = ""

    def __post_init__(self):
        self.presentation.check_semiring(self.semiring)

    def admits(self, v: Vector) -> bool:
        if v.web != self.web:
            raise WebMismatch(f"{v.web} vs {self.web}")
        return self.presentation.admits(self, v)

    def require(self, v: Vector):
        if not self.admits(v):
            raise MembershipError(f"{v!r} is not a carrier element of {self}")

    def zero(self) -> Vector:
        return zero_vector(self.web)

    def __repr__(self):
        label = self.name or f"{self.semiring.name}^{len(self.web)}"
        return f"Module({label}:{self.presentation!r})"

    # -- enumeration -----------------------------------------------------

    def carrier_vectors(self, cap: int = ENUMERATION_CAP):
        """All carrier vectors, or None when not enumerable within cap."""
        pres = self.presentation
        if isinstance(pres, EnumeratedP):
            return sorted(pres.vectors, key=lambda v: v.entries)
        values = pres.coordinate_values(self.semiring)
        if values is None:
            return None
        n = len(self.web)
        if len(values) ** n > cap:
            return None
        out = []
        for combo in itertools.product(values, repeat=n):
            v = vec(self.web, dict(zip(self.web.atoms, combo)))
            if self.admits(v):
                out.append(v)
        return out


def free_module(s: Semiring, w: Web, name: str = "") -> BasedModule:
    return BasedModule(s, w, FreeP(), name)


def zero_module(s: Semiring) -> BasedModule:
    """The zero object: the free module over the empty web."""
    return BasedModule(s, Web(()), FreeP(), "0")


def enumerated_module(s: Semiring, w: Web, vectors, ambient=None,
                      name: str = "", sum_rule=None) -> BasedModule:
    vectors = frozenset(vectors)
    if len(vectors) > ENUMERATION_CAP:
        raise ValueError("enumerated carrier exceeds cap")
    if zero_vector(w) not in vectors:
        raise ValueError("enumerated carrier must contain the zero vector")
    return BasedModule(s, w, EnumeratedP(vectors, ambient, sum_rule), name)


# ---------------------------------------------------------------------------
# operations


def vec_sum(m: BasedModule, fams):
    """Partial sum of a family of (vector, multiplicity) pairs.

    Coordinate-wise in the semiring, gated by membership of the result.
    Returns a Vector or UNDEF.  Non-member inputs raise MembershipError.
    """
    fams = list(fams)
    for v, _ in fams:
        m.require(v)
    coords = {}
    for a in m.web.atoms:
        fam = tuple((v.value(a), mult) for v, mult in fams if v.value(a) != 0)
        got = m.presentation.coord_sum(m, fam)
        if got is UNDEF:
            return UNDEF
        if got != 0:
            coords[a] = got
    out = Vector.make(m.web, coords)
    if not m.admits(out):
        return UNDEF
    return out


def scalar_action(m: BasedModule, r, v: Vector) -> Vector:
    """Total action of a scalar on a carrier vector."""
    m.semiring.check_scalar(r)
    m.require(v)
    if r == 0:
        return m.zero()
    if isinstance(m.presentation, PolytopeP):
        out = vec(m.web, {a: Fraction(r) * x for a, x in v.entries})
    else:
        out = vec(m.web, {a: m.semiring.mul(r, x) for a, x in v.entries})
    if not m.admits(out):
        raise IntegrityError(
            f"action of {format_scalar(r)} left the carrier: {out!r} -- "
            "the presentation is not a module")
    return out


def product_module(ms: Sequence[BasedModule], name: str = "") -> BasedModule:
    """Product: disjoint-union web, componentwise membership and sums."""
    ms = list(ms)
    if not ms:
        from .scalars import I as _I
        return zero_module(_I)
    s = ms[0].semiring
    if any(m.semiring is not s for m in ms):
        raise ValueError("product requires a shared semiring")
    if len(ms) == 1:
        return ms[0]
    parts = tuple((f"{i}.", m) for i, m in enumerate(ms))
    atoms = tuple(f"{i}.{a}" for i, m in enumerate(ms) for a in m.web.atoms)
    return BasedModule(s, Web(atoms), ProductP(parts), name)


def coproduct_module(ms: Sequence[BasedModule], name: str = "") -> BasedModule:
    """Coproduct: like the product but at most one nonzero component."""
    ms = list(ms)
    if not ms:
        from .scalars import I as _I
        return zero_module(_I)
    s = ms[0].semiring
    if any(m.semiring is not s for m in ms):
        raise ValueError("coproduct requires a shared semiring")
    if len(ms) == 1:
        return ms[0]
    parts = tuple((f"{i}.", m) for i, m in enumerate(ms))
    atoms = tuple(f"{i}.{a}" for i, m in enumerate(ms) for a in m.web.atoms)
    return BasedModule(s, Web(atoms), ProductP(parts, at_most_one=True), name)


def equalizer_submodule(f, g) -> BasedModule:
    """Submodule { x | f(x) = g(x) } of f.src, enumerated within bounds."""
    from .linmaps import apply  # deferred: linmaps builds on this module
    if f.src.web != g.src.web or f.dst.web != g.dst.web:
        raise WebMismatch("equalizer requires parallel maps")
    carrier = f.src.carrier_vectors()
    if carrier is None:
        raise IntegrityError("equalizer needs an enumerable source carrier")
    kept = [x for x in carrier if apply(f, x) == apply(g, x)]
    return enumerated_module(f.src.semiring, f.src.web, kept, ambient=f.src,
                             name="eq")


@dataclass
class SubmoduleVerdict:
    is_submodule: bool
    is_sum_reflecting: object  # bool or UNKNOWN
    is_downward_closed: object
    detail: str = ""


def _module_sum_families(vectors, max_entries, with_omega=True):
    mults = [1, 2] + ([OMEGA] if with_omega else [])
    pairs = [(v, m) for v in vectors for m in mults]
    for k in range(1, max_entries + 1):
        yield from itertools.combinations_with_replacement(pairs, k)


def classify_submodule(sub: BasedModule, sup: BasedModule,
                       max_entries: int = 3, samples: int = 50,
                       seed: int = 0) -> SubmoduleVerdict:
    """Bounded check of the submodule / sum-reflecting / downward-closed flags.

    Enumerates carriers when possible, otherwise samples; a verdict the
    bounds cannot settle is UNKNOWN, never silently False.
    """
    import random
    if sub.web != sup.web:
        raise WebMismatch("classify_submodule requires a shared web")
    rng = random.Random(seed)
    sub_carrier = sub.carrier_vectors(cap=2000)
    sup_carrier = sup.carrier_vectors(cap=2000)
    bounded = sub_carrier is not None and sup_carrier is not None

    if sub_carrier is None:
        sub_carrier = _sample_vectors(sub, rng, samples)
    if not all(sup.admits(v) for v in sub_carrier):
        return SubmoduleVerdict(False, False, False, "carrier not contained")

    is_sub = True
    reflecting = True
    base = sub_carrier if len(sub_carrier) <= 12 else sub_carrier[:12]
    for fam in _module_sum_families(base, max_entries):
        in_sub = vec_sum(sub, fam)
        in_sup = vec_sum(sup, fam)
        if in_sub is not UNDEF:
            if in_sup is UNDEF or in_sup != in_sub:
                is_sub = False
                break
        if in_sup is not UNDEF and sub.admits(in_sup) and in_sub is UNDEF:
            reflecting = False

    down = True
    candidates = sup_carrier if sup_carrier is not None \
        else _sample_vectors(sup, rng, min(samples, 30))
    for y in base:
        for x in candidates:
            le = preorder_leq_vec(sup, x, y)
            if le is UNKNOWN:
                down = UNKNOWN if down is True else down
            elif le is True and not sub.admits(x):
                down = False
                break
        if down is False:
            break

    detail = "exhaustive within bounds" if bounded else "sampled (infinite carrier)"
    return SubmoduleVerdict(is_sub, reflecting, down, detail)


def _sample_vectors(m: BasedModule, rng, count: int):
    out = {m.zero()}
    scalars = m.semiring.sample_scalars(rng, 8)
    tries = 0
    while len(out) < count and tries < count * 30:
        tries += 1
        coords = {a: rng.choice(scalars) for a in m.web.atoms}
        try:
            v = vec(m.web, coords)
        except CarrierError:
            continue
        if m.admits(v):
            out.add(v)
    return sorted(out, key=lambda v: v.entries)


def preorder_leq_vec(m: BasedModule, x: Vector, y: Vector):
    """x <= y iff some admitted z has x + z = y.  True / False / UNKNOWN."""
    m.require(x)
    m.require(y)
    s = m.semiring
    if s.kind in ("unit", "rpos", "nat") or isinstance(m.presentation, PolytopeP):
        # cancellative coordinates: the only candidate witness is y - x
        coords = {}
        for a in m.web.atoms:
            d = y.value(a) - x.value(a)
            if d < 0:
                return False
            if d != 0:
                coords[a] = d
        z = vec(m.web, coords)
        if not m.admits(z):
            return False
        return vec_sum(m, [(x, 1), (z, 1)]) == y
    carrier = m.carrier_vectors(cap=5000)
    if carrier is None:
        return UNKNOWN
    for z in carrier:
        if vec_sum(m, [(x, 1), (z, 1)]) == y:
            return True
    return False
