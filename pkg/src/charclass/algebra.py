"""Exact scalars, graded polynomials over presented rings, truncated power series.

Coefficients are either :class:`fractions.Fraction` (the rationals) or plain
``int`` residues in ``[0, p)`` for an odd prime ``p``.  A :class:`GradedPoly`
always lives in a :class:`RingPresentation`, which fixes the generator order,
the rewrite relations (``chi^2 -> p_m``, ``h^3 -> 0``, ...), the coefficient
field and a truncation degree.  Polynomials are kept in normal form.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from sympy import isprime

from .errors import (
    DegreeMismatchError,
    NonIntegralClassError,
    NotInvertibleError,
    ParseError,
    PresentationMismatchError,
)

DEFAULT_TRUNCATION = 64


# --------------------------------------------------------------------------
# scalars

class Field:
    """Coefficient field: the rationals (``prime is None``) or F_p, p odd."""

    __slots__ = ("prime",)

    def __init__(self, prime: int | None = None):
        if prime is not None:
            prime = int(prime)
            if prime == 2:
                raise ValueError("characteristic 2 is not supported")
            if not isprime(prime):
                raise ValueError(f"{prime} is not a prime")
        self.prime = prime

    @property
    def is_rational(self) -> bool:
        return self.prime is None

    @property
    def zero(self):
        return Fraction(0) if self.prime is None else 0

    @property
    def one(self):
        return Fraction(1) if self.prime is None else 1

    def coerce(self, x):
        p = self.prime
        if isinstance(x, PrimeFieldElem):
            if x.prime != p:
                raise ValueError(f"cannot coerce an F_{x.prime} element into {self}")
            return x.value
        if isinstance(x, str):
            x = Fraction(x)
        if p is None:
            return Fraction(x)
        x = Fraction(x)
        if x.denominator % p == 0:
            raise NonIntegralClassError(f"{x} is not {p}-integral")
        return x.numerator * pow(x.denominator, -1, p) % p

    def add(self, a, b):
        return a + b if self.prime is None else (a + b) % self.prime

    def mul(self, a, b):
        return a * b if self.prime is None else (a * b) % self.prime

    def neg(self, a):
        return -a if self.prime is None else (-a) % self.prime

    def inv(self, a):
        if a == 0:
            raise NotInvertibleError("zero is not invertible")
        if self.prime is None:
            return 1 / Fraction(a)
        return pow(a, -1, self.prime)

    def fmt(self, a) -> str:
        if self.prime is None:
            a = Fraction(a)
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Field) and other.prime == self.prime

    def __hash__(self):
        return hash(("Field", self.prime))

    def __repr__(self):
        return "QQ" if self.prime is None else f"GF({self.prime})"


QQ = Field()


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class PrimeFieldElem:
    """An element of F_p for an odd prime p."""

    prime: int
    value: int

    def __post_init__(self):
        Field(self.prime)  # validates
        object.__setattr__(self, "value", self.value % self.prime)

    def _other(self, other):
        if isinstance(other, PrimeFieldElem):
            if other.prime != self.prime:
                raise ValueError("mixed primes")
            return other.value
        return GF(self.prime).coerce(other)

    def __add__(self, other):
        return PrimeFieldElem(self.prime, self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PrimeFieldElem(self.prime, self.value - self._other(other))

    def __mul__(self, other):
        return PrimeFieldElem(self.prime, self.value * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElem(self.prime, -self.value)

    def inverse(self) -> "PrimeFieldElem":
        if self.value == 0:
            raise NotInvertibleError(f"0 has no inverse mod {self.prime}")
        return PrimeFieldElem(self.prime, pow(self.value, -1, self.prime))

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElem):
            return (self.prime, self.value) == (other.prime, other.value)
        if isinstance(other, int):
            return self.value == other % self.prime
        return NotImplemented

    def __hash__(self):
        return hash((self.prime, self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return str(self.value)


# --------------------------------------------------------------------------
# presentations

@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree <= 0:
            raise ValueError(f"generator {self.name} must have positive degree")


Exps = tuple  # exponent vector aligned with RingPresentation.generators


class RingPresentation:
    """Generators, rewrite relations ``g^k -> poly``, coefficient field, truncation.

    Relations are applied left to right until no generator exceeds its
    relation power; with the relations used here (``chi^2 -> p_m``,
    nilpotent truncations, Gysin relations) this is confluent.
    """

    def __init__(
        self,
        generators: Iterable[Generator | tuple[str, int]],
        relations: Iterable[tuple[str, int, object]] = (),
        *,
        truncation: int = DEFAULT_TRUNCATION,
        field: Field = QQ,
        name: str | None = None,
    ):
        gens = tuple(g if isinstance(g, Generator) else Generator(*g) for g in generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names: {names}")
        self.generators = gens
        self.field = field
        self.truncation = int(truncation)
        self.name = name
        self._index = {g.name: i for i, g in enumerate(gens)}
        self.degrees = tuple(g.degree for g in gens)
        self._rules: tuple = ()
        rules = []
        for gname, power, repl in relations:
            if gname not in self._index:
                raise PresentationMismatchError(f"relation on unknown generator {gname}")
            gi = self._index[gname]
            target_deg = power * self.degrees[gi]
            if isinstance(repl, GradedPoly):
                repl = poly_reduce(repl, self.free())
            elif isinstance(repl, str):
                repl = self.free().parse(repl)
            else:
                repl = self.free().const(repl)
            if repl and (not repl.is_homogeneous() or repl.degree() != target_deg):
                raise DegreeMismatchError(
                    f"relation {gname}^{power} -> {repl} is not homogeneous of degree {target_deg}"
                )
            rules.append((gi, int(power), tuple(repl._terms.items())))
        self._rules = tuple(rules)

    # -- identity ---------------------------------------------------------
    def _key(self):
        return (self.generators, self.field, self.truncation, self._rules, self.name)

    def __eq__(self, other):
        return isinstance(other, RingPresentation) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.name:
            return self.name if self.field.is_rational else f"{self.name} over {self.field!r}"
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"RingPresentation([{gens}], field={self.field!r})"

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def relations(self) -> list[tuple[str, int, "GradedPoly"]]:
        free = self.free()
        return [
            (self.generators[gi].name, k, GradedPoly(free, dict(terms), normalized=True))
            for gi, k, terms in self._rules
        ]

    def has(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PresentationMismatchError(f"{name} is not a generator of {self!r}") from None

    def degree_of(self, exps: Exps) -> int:
        return sum(e * d for e, d in zip(exps, self.degrees))

    # -- derived presentations ------------------------------------------------
    def free(self) -> "RingPresentation":
        """Same generators, field and truncation; no relations."""
        if not self._rules:
            return self
        return RingPresentation(
            self.generators, truncation=self.truncation, field=self.field,
            name=f"free({self.name})" if self.name else None,
        )

    def with_field(self, field: Field) -> "RingPresentation":
        if field == self.field:
            return self
        return RingPresentation(
            self.generators,
            [(n, k, str(r)) for n, k, r in self.relations],
            truncation=self.truncation, field=field, name=self.name,
        )

    def with_truncation(self, truncation: int) -> "RingPresentation":
        if truncation == self.truncation:
            return self
        return RingPresentation(
            self.generators,
            [(n, k, str(r)) for n, k, r in self.relations],
            truncation=truncation, field=self.field, name=self.name,
        )

    # -- element constructors --------------------------------------------------
    def zero(self) -> "GradedPoly":
        return GradedPoly(self, {}, normalized=True)

    def one(self) -> "GradedPoly":
        return self.const(1)

    def const(self, c) -> "GradedPoly":
        return GradedPoly(self, {(0,) * len(self.generators): self.field.coerce(c)})

    def gen(self, name: str) -> "GradedPoly":
        e = [0] * len(self.generators)
        e[self.index(name)] = 1
        return GradedPoly(self, {tuple(e): self.field.one})

    def monomial(self, exps: Exps | Mapping[str, int], c=1) -> "GradedPoly":
        return GradedPoly(self, {self._exps(exps): self.field.coerce(c)})

    def _exps(self, exps) -> Exps:
        if isinstance(exps, Mapping):
            e = [0] * len(self.generators)
            for n, k in exps.items():
                e[self.index(n)] = int(k)
            return tuple(e)
        exps = tuple(int(k) for k in exps)
        if len(exps) != len(self.generators):
            raise PresentationMismatchError("exponent vector has the wrong length")
        return exps

    def parse(self, text: str) -> "GradedPoly":
        return parse_poly(text, self)

    def normal_monomials(self, degree: int) -> list[Exps]:
        """Normal-form monomials of the given degree, in canonical order."""
        caps = [None] * len(self.generators)
        for gi, k, _ in self._rules:
            caps[gi] = k - 1
        out: list[Exps] = []

        def rec(i, remaining, acc):
            if i == len(self.generators):
                if remaining == 0:
                    out.append(tuple(acc))
                return
            d = self.degrees[i]
            top = remaining // d
            if caps[i] is not None:
                top = min(top, caps[i])
            for k in range(top + 1):
                acc.append(k)
                rec(i + 1, remaining - k * d, acc)
                acc.pop()

        if degree >= 0 and degree <= self.truncation:
            rec(0, degree, [])
        return sorted(out)

    # -- normal form -----------------------------------------------------------
    def normalize(self, terms: Mapping[Exps, object]) -> dict:
        f = self.field
        p = f.prime
        trunc = self.truncation
        degs = self.degrees
        rules = self._rules
        out: dict = {}
        stack = list(terms.items())
        while stack:
            e, c = stack.pop()
            if c == 0:
                continue
            if sum(a * d for a, d in zip(e, degs)) > trunc:
                continue
            for gi, k, repl in rules:
                if e[gi] >= k:
                    base = list(e)
                    base[gi] -= k
                    for re_, rc in repl:
                        stack.append((tuple(a + b for a, b in zip(base, re_)), f.mul(c, rc)))
                    break
            else:
                v = out.get(e, 0) + c
                out[e] = v % p if p is not None else v
        return {e: c for e, c in out.items() if c != 0}


# --------------------------------------------------------------------------
# polynomials

class GradedPoly:
    """Immutable polynomial in normal form over a :class:`RingPresentation`."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: RingPresentation, terms: Mapping | None = None, *, normalized: bool = False):
        self.ring = ring
        terms = dict(terms or {})
        if normalized:
            self._terms = {e: c for e, c in terms.items() if c != 0}
        else:
            self._terms = ring.normalize({e: ring.field.coerce(c) for e, c in terms.items()})

    # -- access ---------------------------------------------------------------
    @property
    def field(self) -> Field:
        return self.ring.field

    def terms(self) -> list[tuple[Exps, object]]:
        """Terms in canonical order: ascending degree, then ascending exponent vector."""
        deg = self.ring.degree_of
        return sorted(self._terms.items(), key=lambda t: (deg(t[0]), t[0]))

    def __iter__(self) -> Iterator[tuple[Exps, object]]:
        return iter(self.terms())

    def __len__(self):
        return len(self._terms)

    def coefficient(self, exps: Exps | Mapping[str, int]):
        return self._terms.get(self.ring._exps(exps), self.field.zero)

    def constant_term(self):
        return self._terms.get((0,) * len(self.ring.generators), self.field.zero)

    def degree(self) -> int | None:
        if not self._terms:
            return None
        return max(self.ring.degree_of(e) for e in self._terms)

    def min_degree(self) -> int | None:
        if not self._terms:
            return None
        return min(self.ring.degree_of(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({self.ring.degree_of(e) for e in self._terms}) <= 1

    def component(self, degree: int) -> "GradedPoly":
        deg = self.ring.degree_of
        return GradedPoly(self.ring, {e: c for e, c in self._terms.items() if deg(e) == degree}, normalized=True)

    def components(self) -> dict[int, "GradedPoly"]:
        out: dict[int, dict] = {}
        for e, c in self._terms.items():
            out.setdefault(self.ring.degree_of(e), {})[e] = c
        return {d: GradedPoly(self.ring, t, normalized=True) for d, t in sorted(out.items())}

    def truncate(self, max_degree: int) -> "GradedPoly":
        deg = self.ring.degree_of
        return GradedPoly(self.ring, {e: c for e, c in self._terms.items() if deg(e) <= max_degree}, normalized=True)

    def generators_used(self) -> set[str]:
        names = self.ring.generator_names
        return {names[i] for e in self._terms for i, k in enumerate(e) if k}

    # -- arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            if other.ring != self.ring:
                raise PresentationMismatchError(f"cannot combine elements of {self.ring!r} and {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction, PrimeFieldElem)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = f.add(out.get(e, 0), c)
        return GradedPoly(self.ring, out, normalized=True)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return GradedPoly(self.ring, {e: f.neg(c) for e, c in self._terms.items()}, normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PrimeFieldElem)):
            c = self.field.coerce(other)
            f = self.field
            return GradedPoly(self.ring, {e: f.mul(v, c) for e, v in self._terms.items()}, normalized=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        f = self.field
        trunc = ring.truncation
        deg = ring.degree_of
        a = [(e, c, deg(e)) for e, c in self._terms.items()]
        b = [(e, c, deg(e)) for e, c in other._terms.items()]
        acc: dict = {}
        for ea, ca, da in a:
            for eb, cb, db in b:
                if da + db > trunc:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                acc[e] = acc.get(e, 0) + ca * cb
        if f.prime is not None:
            acc = {e: c % f.prime for e, c in acc.items()}
        if ring._rules:
            return GradedPoly(ring, ring.normalize(acc), normalized=True)
        return GradedPoly(ring, acc, normalized=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, PrimeFieldElem)):
            return self * self.field.inv(self.field.coerce(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, GradedPoly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction, PrimeFieldElem)):
            return self._terms == self.ring.const(other)._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -- ring maps ---------------------------------------------------------------
    def reduce_to(self, ring: RingPresentation) -> "GradedPoly":
        return poly_reduce(self, ring)

    def substitute(self, assignment: Mapping[str, "GradedPoly"], target: RingPresentation | None = None) -> "GradedPoly":
        return poly_substitute(self, assignment, target)

    # -- text --------------------------------------------------------------------
    def monomial_str(self, exps: Exps) -> str:
        return monomial_str(self.ring.generator_names, exps)

    def __str__(self):
        return format_terms(self.terms(), self.ring.generator_names, self.field)

    def __repr__(self):
        return f"GradedPoly({str(self)!r}, ring={self.ring!r})"


def monomial_str(names: Sequence[str], exps: Exps) -> str:
    factors = []
    for n, k in zip(names, exps):
        if k == 1:
            factors.append(n)
        elif k > 1:
            factors.append(f"{n}^{k}")
    return "*".join(factors)


def format_terms(terms, names: Sequence[str], field: Field, prefix: str = "") -> str:
    """Render terms as ``7/45*p2 - 1/45*p1^2``; ``prefix`` is glued onto every monomial."""
    parts: list[str] = []
    for e, c in terms:
        mono = monomial_str(names, e)
        if prefix:
            mono = f"{prefix}*{mono}" if mono else prefix
        if field.is_rational:
            neg, a = c < 0, abs(c)
        else:
            neg, a = False, c
        if not mono:
            body = field.fmt(a)
        elif a == 1:
            body = mono
        else:
            body = f"{field.fmt(a)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts) or "0"


_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_FACTOR_RE = re.compile(rf"^(?:(?P<num>\d+)(?:/(?P<den>\d+))?|(?P<name>{_NAME})(?:\^(?P<exp>\d+))?)$")


def split_terms(text: str) -> list[tuple[int, str]]:
    """Split ``a - b + c`` into signed term bodies (a ``-`` right after ``_`` is part of a name)."""
    out: list[tuple[int, str]] = []
    sign, buf = 1, []
    for i, ch in enumerate(text):
        if ch in "+-" and not (ch == "-" and i and text[i - 1] == "_"):
            body = "".join(buf).strip()
            if body:
                out.append((sign, body))
                sign = 1
            elif out or any(c.strip() for c in buf):
                raise ParseError(f"cannot parse polynomial {text!r}")
            sign = sign * (-1 if ch == "-" else 1)
            buf = []
        else:
            buf.append(ch)
    body = "".join(buf).strip()
    if not body:
        raise ParseError(f"cannot parse polynomial {text!r}")
    out.append((sign, body))
    return out


def parse_poly(text: str, ring: RingPresentation) -> GradedPoly:
    """Parse the polynomial text grammar (unit coefficients may be omitted)."""
    f = ring.field
    n = len(ring.generators)
    terms: dict = {}
    for sign, body in split_terms(text):
        coeff = Fraction(sign)
        exps = [0] * n
        for factor in body.split("*"):
            m = _FACTOR_RE.match(factor.strip())
            if not m:
                raise ParseError(f"bad factor {factor!r} in {text!r}")
            if m.group("num") is not None:
                den = int(m.group("den") or 1)
                if den == 0:
                    raise ParseError(f"zero denominator in {text!r}")
                coeff *= Fraction(int(m.group("num")), den)
            else:
                exps[ring.index(m.group("name"))] += int(m.group("exp") or 1)
        e = tuple(exps)
        terms[e] = terms.get(e, Fraction(0)) + coeff
    return GradedPoly(ring, {e: f.coerce(c) for e, c in terms.items()})


# --------------------------------------------------------------------------
# ring maps

def poly_reduce(p: GradedPoly, ring: RingPresentation) -> GradedPoly:
    """Re-home ``p`` into ``ring`` by generator name and bring it to normal form.

    Coefficients are coerced into the target field, so this doubles as
    reduction mod p when the target is over F_p.
    """
    src = p.ring.generator_names
    idx = []
    for name in src:
        idx.append(ring._index.get(name))
    n = len(ring.generators)
    terms: dict = {}
    for e, c in p._terms.items():
        out = [0] * n
        for i, k in enumerate(e):
            if k == 0:
                continue
            j = idx[i]
            if j is None:
                raise PresentationMismatchError(f"generator {src[i]} is not in {ring!r}")
            if ring.degrees[j] != p.ring.degrees[i]:
                raise PresentationMismatchError(f"generator {src[i]} has a different degree in {ring!r}")
            out[j] = k
        key = tuple(out)
        c = ring.field.coerce(c if p.field.is_rational else PrimeFieldElem(p.field.prime, c)) \
            if ring.field != p.field else c
        terms[key] = ring.field.add(terms.get(key, 0), c)
    return GradedPoly(ring, terms)


def poly_substitute(
    p: GradedPoly,
    assignment: Mapping[str, GradedPoly],
    target: RingPresentation | None = None,
) -> GradedPoly:
    """Ring map sending each generator to its image (same-named generator by default)."""
    if target is None:
        target = next(iter(assignment.values())).ring if assignment else p.ring
    images = []
    for g in p.ring.generators:
        img = assignment.get(g.name)
        if img is None:
            img = target.gen(g.name) if target.has(g.name) else None
        elif not isinstance(img, GradedPoly):
            img = target.const(img)
        elif img.ring != target:
            img = poly_reduce(img, target)
        if img is not None and img and (not img.is_homogeneous() or img.degree() != g.degree):
            raise DegreeMismatchError(f"image of {g.name} is not homogeneous of degree {g.degree}: {img}")
        images.append(img)
    powers: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            powers[key] = images[i] ** k
        return powers[key]

    result = target.zero()
    for e, c in p._terms.items():
        term = target.const(c if p.field.is_rational else PrimeFieldElem(p.field.prime, c))
        for i, k in enumerate(e):
            if k == 0:
                continue
            if images[i] is None:
                raise PresentationMismatchError(f"no image given for generator {p.ring.generators[i].name}")
            term = term * power(i, k)
            if not term:
                break
        result = result + term
    return result


def field_reduce(p: GradedPoly, prime: int) -> GradedPoly:
    """Coefficientwise reduction of a rational class mod an odd prime."""
    if not p.field.is_rational:
        raise ValueError("field_reduce expects a polynomial over the rationals")
    return poly_reduce(p, p.ring.with_field(GF(prime)))


# --------------------------------------------------------------------------
# BSO(n)

@lru_cache(maxsize=None)
def bso(n: int, prime: int | None = None, truncation: int = DEFAULT_TRUNCATION) -> RingPresentation:
    """Cohomology presentation of BSO(n) away from characteristic 2.

    Odd n = 2m+1: F[p1..pm].  Even n = 2m: F[p1..pm, chi]/(chi^2 - pm).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = n // 2
    gens = [Generator(f"p{i}", 4 * i) for i in range(1, m + 1)]
    relations = []
    if n % 2 == 0 and m >= 1:
        gens.append(Generator("chi", n))
        relations.append(("chi", 2, f"p{m}"))
    field = QQ if prime is None else GF(prime)
    return RingPresentation(gens, relations, truncation=truncation, field=field, name=f"BSO({n})")


def parse_bso_name(name: str | None) -> int | None:
    m = re.fullmatch(r"BSO\((\d+)\)", name or "")
    return int(m.group(1)) if m else None


def pontryagin_ring(m: int, truncation: int = DEFAULT_TRUNCATION, prime: int | None = None) -> RingPresentation:
    """Free polynomial ring on p1..pm (the stable range, equal to BSO(2m+1))."""
    return bso(2 * m + 1, prime, truncation)


# --------------------------------------------------------------------------
# power series

class PowerSeries:
    """Truncated univariate power series ``c0 + c1 x + ... + c_order x^order``."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Iterable, field: Field = QQ):
        self.field = field
        self.coeffs = tuple(field.coerce(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a power series needs at least one coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        if k < 0 or k > self.order:
            raise IndexError(f"coefficient {k} is beyond truncation order {self.order}")
        return self.coeffs[k]

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: order + 1], self.field)

    def _check(self, other: "PowerSeries"):
        if other.field != self.field:
            raise ValueError("power series over different fields")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PowerSeries([other], self.field).pad(self.order)
        self._check(other)
        n = min(self.order, other.order)
        f = self.field
        return PowerSeries([f.add(self.coeffs[k], other.coeffs[k]) for k in range(n + 1)], f)

    def __neg__(self):
        return PowerSeries([self.field.neg(c) for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-other)

    def pad(self, order: int) -> "PowerSeries":
        """Extend with zero coefficients (only meaningful for polynomials)."""
        return PowerSeries(list(self.coeffs) + [0] * max(0, order - self.order), self.field)

    def __mul__(self, other):
        f = self.field
        if isinstance(other, (int, Fraction)):
            c = f.coerce(other)
            return PowerSeries([f.mul(a, c) for a in self.coeffs], f)
        self._check(other)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            s = sum(a[i] * b[k - i] for i in range(k + 1))
            out.append(s % f.prime if f.prime is not None else s)
        return PowerSeries(out, f)

    __rmul__ = __mul__

    def inverse(self) -> "PowerSeries":
        f = self.field
        a = self.coeffs
        if a[0] == 0:
            raise NotInvertibleError("constant term is not invertible")
        inv0 = f.inv(a[0])
        out = [inv0]
        for k in range(1, len(a)):
            s = sum(a[i] * out[k - i] for i in range(1, k + 1))
            out.append(f.mul(f.neg(s % f.prime if f.prime is not None else s), inv0))
        return PowerSeries(out, f)

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """``self(inner(x))``; requires ``inner(0) == 0``."""
        self._check(inner)
        if inner.coeffs[0] != 0:
            raise ValueError("composition requires an inner series with zero constant term")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        result = PowerSeries([self.coeffs[n] if n <= self.order else 0], self.field).pad(n)
        for k in range(n - 1, -1, -1):
            result = result * inner + PowerSeries([self.coeffs[k]], self.field).pad(n)
        return result

    def __eq__(self, other):
        return (
            isinstance(other, PowerSeries)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def to_str(self, var: str = "x") -> str:
        terms = [((k,), c) for k, c in enumerate(self.coeffs) if c != 0]
        body = format_terms(terms, [var], self.field)
        return f"{body} + O({var}^{self.order + 1})"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"PowerSeries({self.to_str()!r})"


def series_arith(op: str, a: PowerSeries, b: PowerSeries | None = None) -> PowerSeries:
    """Dispatch ``multiply``, ``invert`` or ``compose`` on truncated series."""
    if op == "multiply":
        return a * b
    if op == "invert":
        return a.inverse()
    if op == "compose":
        return a.compose(b)
    raise ValueError(f"unknown series operation {op!r}")
