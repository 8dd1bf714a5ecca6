"""Scalar semirings with partially-defined countable sums.

A countable family with finitely many distinct values is stored as a finite
list of (value, multiplicity) pairs, where a multiplicity is a positive
integer or OMEGA (countably infinite repetition).  "Sum undefined" is a
first-class result (UNDEF), never an exception; exceptions are reserved for
carrier misuse.

Shipped semirings (CLI identifiers in parentheses):

* I      -- {0,1}, 1+1 undefined; the tensor-unit semiring.
* B      -- {0,1}, all sums defined, join.
* F      -- {0,1}, all finite sums defined, infinitely many 1's undefined.
* N      -- naturals, sum undefined on divergence.
* Ninf   -- naturals plus infinity, complete.
* unit   -- exact rationals in [0,1], sum undefined above 1.
* Rpos   -- exact non-negative rationals, sum undefined on divergence.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional


class _Marker:
    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self):
        return self._name

    def __deepcopy__(self, memo):
        return self

    def __copy__(self):
        return self


#: result of a sum that does not converge in the carrier
UNDEF = _Marker("UNDEF")
#: countably-infinite multiplicity
OMEGA = _Marker("OMEGA")


class Inf:
    """The adjoined infinity element.  Larger than every finite scalar."""

    _instance: Optional["Inf"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, Inf)

    def __hash__(self):
        return hash("smodlab-inf")

    def __deepcopy__(self, memo):
        return self


INF = Inf()


class CarrierError(TypeError):
    """A scalar does not belong to the semiring's carrier."""


class CompletionWarning(UserWarning):
    pass


Family = tuple  # tuple of (scalar, multiplicity) pairs


def normalize_family(fam) -> Family:
    """Merge equal-valued entries (ω absorbs finite counts) and drop zeros-free noise.

    Zero-valued entries are kept out of the normal form; by the unit and
    permutation axioms they never change a sum.
    """
    # families are small, so a linear merge on equality beats hashing
    # (Fraction.__hash__ is far more expensive than Fraction.__eq__)
    values = []
    counts = []
    for value, mult in fam:
        if mult is not OMEGA and (not isinstance(mult, int) or mult < 1):
            raise ValueError(f"multiplicity must be a positive int or OMEGA: {mult!r}")
        if value == 0 and value is not INF:
            continue
        for i, seen in enumerate(values):
            if seen == value:
                if mult is OMEGA or counts[i] is OMEGA:
                    counts[i] = OMEGA
                else:
                    counts[i] += mult
                break
        else:
            values.append(value)
            counts.append(mult)
    return tuple(zip(values, counts))


@dataclass(frozen=True)
class Semiring:
    """Descriptor of a Σ-semiring: carrier, partial family-sum, total product."""

    name: str
    kind: str  # 'finite' | 'nat' | 'nat_inf' | 'unit' | 'rpos' | 'completed'
    zero: object
    one: object
    is_complete: bool
    is_finitely_complete: bool
    elements: Optional[tuple] = None  # finite carriers only
    _sum_rule: Callable = field(default=None, repr=False, compare=False)
    _mul_rule: Callable = field(default=None, repr=False, compare=False)
    base: Optional["Semiring"] = None  # for naive completions
    completion_warning: bool = False

    # -- carrier ---------------------------------------------------------

    def contains(self, x) -> bool:
        if self.kind == "finite":
            return x in self.elements
        if self.kind == "completed":
            return x is INF or x == INF or self.base.contains(x)
        if self.kind == "nat":
            return isinstance(x, int) and not isinstance(x, bool) and x >= 0
        if self.kind == "nat_inf":
            return x == INF or (isinstance(x, int) and not isinstance(x, bool) and x >= 0)
        if self.kind == "unit":
            # Fraction is ABC-registered, making isinstance slow on hot paths
            return (type(x) is Fraction or type(x) is int) and 0 <= x <= 1
        if self.kind == "rpos":
            return (type(x) is Fraction or type(x) is int) and x >= 0
        raise AssertionError(self.kind)

    def check_scalar(self, x):
        if not self.contains(x):
            raise CarrierError(f"{x!r} is not in the carrier of {self.name}")

    # -- operations ------------------------------------------------------

    def sum_family(self, fam):
        """Partial sum of a finitely-presented countable family.

        Returns a carrier element or UNDEF.  Raises CarrierError on values
        outside the carrier (a usage error, distinct from UNDEF).
        """
        if type(fam) is not tuple:
            fam = tuple(fam)
        contains = self.contains
        for v, _ in fam:
            if not contains(v):
                raise CarrierError(f"{v!r} is not in the carrier of {self.name}")
        return self._sum_rule(self, normalize_family(fam))

    def sum(self, *values):
        return self.sum_family((v, 1) for v in values)

    def mul(self, a, b):
        self.check_scalar(a)
        self.check_scalar(b)
        return self._mul_rule(self, a, b)

    def leq(self, a, b) -> bool:
        """The associated preorder: a <= b iff some z has a + z = b."""
        self.check_scalar(a)
        self.check_scalar(b)
        if self.is_enumerable:
            for z in self.carrier_elements():
                if self.sum_family(((a, 1), (z, 1))) == b:
                    return True
            return False
        if b == INF:
            return True
        if a == INF:
            return False
        return a <= b  # cancellative numeric carriers: z = b - a works

    def carrier_elements(self) -> tuple:
        if self.kind == "finite":
            return self.elements
        if self.kind == "completed":
            return tuple(self.base.carrier_elements()) + (INF,)
        raise CarrierError(f"{self.name} has an infinite carrier")

    @property
    def is_enumerable(self) -> bool:
        return self.kind == "finite" or (
            self.kind == "completed" and self.base.is_enumerable
        )

    def sample_scalars(self, rng: random.Random, count: int) -> list:
        """Representative scalars for randomized law checking."""
        if self.is_enumerable:
            return list(self.carrier_elements())
        out = {self.zero, self.one}
        span = max(7, count)
        for _ in range(count * 50):
            if len(out) >= count:
                break
            num = rng.randrange(0, span)
            den = rng.randrange(1, span)
            q = Fraction(num, den)
            if self.contains(q):
                out.add(q)
            if self.kind in ("nat", "nat_inf"):
                out.add(rng.randrange(0, span))
            if self.kind == "nat_inf" and rng.random() < 0.2:
                out.add(INF)
        return list(out)[:count]

    def __repr__(self):
        return f"Semiring({self.name})"


# ---------------------------------------------------------------------------
# sum / product rules


def _entry_weight(mult):
    return None if mult is OMEGA else mult


def _sum_I(s, fam):
    # at most one 1 in total; an omega-repeated 1 is infinitely many
    total = 0
    for v, m in fam:
        if v == 1:
            if m is OMEGA or total + m > 1:
                return UNDEF
            total += m
    return total


def _sum_B(s, fam):
    return 1 if any(v == 1 for v, _ in fam) else 0


def _sum_F(s, fam):
    for v, m in fam:
        if v == 1 and m is OMEGA:
            return UNDEF
    return 1 if any(v == 1 for v, _ in fam) else 0


def _sum_nat(s, fam):
    total = 0
    for v, m in fam:
        if m is OMEGA and v != 0:
            return UNDEF
        total += v * m
    return total


def _sum_nat_inf(s, fam):
    total = 0
    for v, m in fam:
        if v == INF or (m is OMEGA and v != 0):
            return INF
        total += v * m
    return total


def _sum_unit(s, fam):
    total = Fraction(0)
    for v, m in fam:
        if m is OMEGA:
            if v != 0:
                return UNDEF
            continue
        total += v * m
    return UNDEF if total > 1 else total


def _sum_rpos(s, fam):
    total = Fraction(0)
    for v, m in fam:
        if m is OMEGA:
            if v != 0:
                return UNDEF
            continue
        total += v * m
    return total


def _sum_completed(s, fam):
    if any(v == INF for v, _ in fam):
        return INF
    base = s.base.sum_family(fam)
    return INF if base is UNDEF else base


def _mul_01(s, a, b):
    return 1 if (a == 1 and b == 1) else 0


def _mul_numeric(s, a, b):
    return a * b


def _mul_with_inf(s, a, b):
    if a == INF or b == INF:
        return 0 if (a == 0 or b == 0) else INF
    return s.base._mul_rule(s.base, a, b) if s.kind == "completed" else a * b


I = Semiring("I", "finite", 0, 1, False, False, (0, 1), _sum_I, _mul_01)
B = Semiring("B", "finite", 0, 1, True, True, (0, 1), _sum_B, _mul_01)
F = Semiring("F", "finite", 0, 1, False, True, (0, 1), _sum_F, _mul_01)
N = Semiring("N", "nat", 0, 1, False, True, None, _sum_nat, _mul_numeric)
NINF = Semiring("Ninf", "nat_inf", 0, 1, True, True, None, _sum_nat_inf, _mul_with_inf)
UNIT = Semiring("unit", "unit", Fraction(0), Fraction(1), False, False, None, _sum_unit, _mul_numeric)
RPOS = Semiring("Rpos", "rpos", Fraction(0), Fraction(1), False, True, None, _sum_rpos, _mul_numeric)

SEMIRINGS = {s.name: s for s in (I, B, F, N, NINF, UNIT, RPOS)}


def naive_complete(s: Semiring) -> Semiring:
    """Adjoin ∞ and send every previously-undefined sum to it.

    The inclusion preserves all defined sums and products; ∞ absorbs sums and
    multiplies by the ∞·0 = 0, ∞·x = ∞ rule.  On an already-complete input
    this returns the input itself with a warning flag set.
    """
    if s.is_complete:
        return Semiring(
            s.name, s.kind, s.zero, s.one, True, True, s.elements,
            s._sum_rule, s._mul_rule, s.base, completion_warning=True,
        )
    elements = None
    if s.kind == "finite":
        elements = s.elements + (INF,)
    return Semiring(
        s.name + "~inf", "completed", s.zero, s.one, True, True, elements,
        _sum_completed, _mul_with_inf, base=s,
    )


# ---------------------------------------------------------------------------
# axiom checking


@dataclass
class AxiomCheck:
    axiom: str
    passed: bool
    checked: int
    counterexample: Optional[str] = None


@dataclass
class AxiomReport:
    semiring: str
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self):
        out = [f"axiom report for {self.semiring}:"]
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            line = f"  [{status}] {c.axiom} ({c.checked} instances)"
            if c.counterexample:
                line += f" -- counterexample: {c.counterexample}"
            out.append(line)
        return out


def _families(values, max_entries, mults):
    pairs = [(v, m) for v in values for m in mults]
    for k in range(max_entries + 1):
        yield from itertools.combinations_with_replacement(pairs, k)


def _subfamilies(fam):
    """Proper reductions: drop entries and lower multiplicities."""
    for keep in itertools.product([0, 1], repeat=len(fam)):
        sub = tuple(e for e, k in zip(fam, keep) if k)
        yield sub
    for i, (v, m) in enumerate(fam):
        if m is OMEGA:
            yield fam[:i] + ((v, 1),) + fam[i + 1:]
        elif m > 1:
            yield fam[:i] + ((v, m - 1),) + fam[i + 1:]


def _two_partitions(fam):
    """Entry-level two-block partitions; ω entries may be split as ω + ω."""
    n = len(fam)
    for mask in range(2 ** n):
        left = tuple(fam[i] for i in range(n) if mask & (1 << i))
        right = tuple(fam[i] for i in range(n) if not mask & (1 << i))
        yield left, right
    for i, (v, m) in enumerate(fam):
        rest = fam[:i] + fam[i + 1:]
        if m is OMEGA:
            yield ((v, OMEGA),), rest + ((v, OMEGA),)
        elif m > 1:
            yield ((v, 1),), rest + ((v, m - 1),)


def axiom_report(s: Semiring, max_entries: int = 4, max_mult: int = 3,
                 samples: int = 0, seed: int = 0) -> AxiomReport:
    """Bounded verification of the sum axioms and distributivity.

    Exhaustive over the carrier when it is finite; otherwise over
    ``samples`` sampled scalars (seeded).  Checks, per family within bounds:
    unit sums, permutation/merge invariance, subfamily definedness, finite
    two-block partition associativity in both directions, and distributivity
    in the Kleene sense.
    """
    if max_entries < 1 or (max_mult is not OMEGA and max_mult < 1):
        raise ValueError("bounds must be >= 1")
    rng = random.Random(seed)
    if s.is_enumerable:
        values = list(s.carrier_elements())
    else:
        values = s.sample_scalars(rng, max(samples, 6))
    mults = list(range(1, (max_mult if max_mult is not OMEGA else 2) + 1)) + [OMEGA]

    if s.is_enumerable:
        fam_pool = list(_families(values, max_entries, mults))
    else:
        # exhaustive enumeration is hopeless over sampled rationals; draw a
        # seeded pool of random families within the same bounds instead
        pairs = [(v, m) for v in values for m in mults]
        fam_pool = [(), *(((v, 1),) for v in values)]
        for _ in range(max(samples, 6) * 25):
            k = rng.randint(1, max_entries)
            fam_pool.append(tuple(rng.choice(pairs) for _ in range(k)))

    checks = []

    def run(axiom, gen):
        # counterexample messages are passed lazily (callables) so the
        # passing path never pays for string formatting
        count = 0
        for passed, cex in gen:
            count += 1
            if not passed:
                checks.append(AxiomCheck(axiom, False, count,
                                         cex() if callable(cex) else cex))
                return
        checks.append(AxiomCheck(axiom, True, count))

    def unit_gen():
        yield s.sum_family(()) == s.zero, "empty sum != 0"
        for v in values:
            got = s.sum_family(((v, 1),))
            yield got == v, lambda v=v, got=got: f"sum[({v},1)] = {got!r}"
            padded = s.sum_family(((v, 1), (s.zero, 2)))
            yield padded == v, lambda v=v: f"zero padding changed sum of {v}"

    def perm_gen():
        for fam in fam_pool:
            ref = s.sum_family(fam)
            rev = s.sum_family(tuple(reversed(fam)))
            yield rev == ref, lambda fam=fam: f"reversal of {fam} changed sum"
            for i, (v, m) in enumerate(fam):
                if m is OMEGA:
                    split = fam[:i] + ((v, 1), (v, OMEGA)) + fam[i + 1:]
                elif m > 1:
                    split = fam[:i] + ((v, 1), (v, m - 1)) + fam[i + 1:]
                else:
                    continue
                got = s.sum_family(split)
                yield got == ref, lambda i=i, fam=fam, ref=ref, got=got: \
                    f"splitting entry {i} of {fam}: {ref!r} vs {got!r}"

    def subfam_gen():
        for fam in fam_pool:
            if s.sum_family(fam) is UNDEF:
                continue
            for sub in _subfamilies(fam):
                yield s.sum_family(sub) is not UNDEF, lambda fam=fam, sub=sub: \
                    f"{fam} defined but subfamily {sub} undefined"

    def partition_gen():
        # every family contributes 2^len two-block splits, so a sampled pool
        # can afford to hand this axiom a smaller slice and still check far
        # more instances than the other axioms see
        pool = fam_pool if s.is_enumerable else fam_pool[:5000]
        for fam in pool:
            whole = s.sum_family(fam)
            for left, right in _two_partitions(fam):
                ls, rs = s.sum_family(left), s.sum_family(right)
                if ls is UNDEF or rs is UNDEF:
                    outer = UNDEF
                else:
                    outer = s.sum_family(((ls, 1), (rs, 1)))
                ok = outer == whole or (outer is UNDEF and whole is UNDEF)
                yield ok, lambda fam=fam, left=left, right=right, whole=whole, outer=outer: \
                    f"{fam} split {left}|{right}: {whole!r} vs {outer!r}"

    def distrib_gen():
        small = min(max_entries, 2)
        fams = [f for f in fam_pool if len(f) <= small][:80]
        for xs in fams:
            sx = s.sum_family(xs)
            if sx is UNDEF:
                continue
            for ys in fams:
                sy = s.sum_family(ys)
                if sy is UNDEF:
                    continue
                prod = s.mul(sx, sy)
                cross = []
                for xv, xm in xs:
                    for yv, ym in ys:
                        p = s.mul(xv, yv)
                        if xm is OMEGA or ym is OMEGA:
                            m = OMEGA
                        else:
                            m = xm * ym
                        cross.append((p, m))
                dbl = s.sum_family(cross)
                yield dbl == prod, lambda xs=xs, ys=ys, prod=prod, dbl=dbl: \
                    f"({xs})*({ys}): product {prod!r}, double sum {dbl!r}"

    run("unit", unit_gen())
    run("permutation/merge invariance", perm_gen())
    run("subfamily definedness", subfam_gen())
    run("finite-partition associativity", partition_gen())
    run("distributivity", distrib_gen())
    return AxiomReport(s.name, checks)


def broken_F() -> Semiring:
    """Negative control: F with the two-fold sum of 1 made undefined.

    1+1+1 stays defined while its subfamily 1+1 is not, violating the
    subfamily-definedness consequence of the association axiom (and the
    partition law itself).
    """

    def bad_sum(s, fam):
        if fam == ((1, 2),):
            return UNDEF
        return _sum_F(s, fam)

    return Semiring("F-broken", "finite", 0, 1, False, True, (0, 1),
                    bad_sum, _mul_01)


def parse_scalar(text: str, s: Semiring):
    """Parse a scalar literal: `p/q`, an integer, or `inf`."""
    text = text.strip()
    if text == "inf":
        value = INF
    elif "/" in text:
        num, den = text.split("/", 1)
        value = Fraction(int(num), int(den))
    else:
        value = int(text)
        if s.kind in ("unit", "rpos"):
            value = Fraction(value)
    s.check_scalar(value)
    return value


def format_scalar(x) -> str:
    if x == INF:
        return "inf"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    return str(x)
