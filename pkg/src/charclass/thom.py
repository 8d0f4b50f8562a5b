"""Thom-module cohomology of MTSO(n), Leray-Hirsch bundle models and fibre integration."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .algebra import (
    DEFAULT_TRUNCATION,
    Field,
    GF,
    QQ,
    GradedPoly,
    RingPresentation,
    bso,
    format_terms,
    monomial_str,
    parse_bso_name,
    parse_poly,
    poly_reduce,
    poly_substitute,
    pontryagin_ring,
    split_terms,
)
from .errors import (
    DegreeMismatchError,
    ModelError,
    ParseError,
    PresentationMismatchError,
)
from .genus import characteristic_sequence


# --------------------------------------------------------------------------
# Thom elements

@dataclass(frozen=True)
class ThomElement:
    """``u_shift * payload``; ``suspension`` counts desuspensions picked up by restriction."""

    shift: int
    payload: GradedPoly
    suspension: int = 0

    @property
    def ring(self) -> RingPresentation:
        return self.payload.ring

    @property
    def label(self) -> str:
        return f"u_{self.shift}"

    def degree(self) -> int | None:
        if not self.payload or not self.payload.is_homogeneous():
            return None
        return self.shift + self.payload.degree()

    def components(self) -> dict[int, "ThomElement"]:
        return {self.shift + d: ThomElement(self.shift, p, self.suspension) for d, p in self.payload.components().items()}

    def _same(self, other: "ThomElement"):
        if not isinstance(other, ThomElement) or other.shift != self.shift:
            raise PresentationMismatchError("Thom elements with different shifts cannot be added")

    def __add__(self, other):
        self._same(other)
        return ThomElement(self.shift, self.payload + other.payload, self.suspension)

    def __sub__(self, other):
        self._same(other)
        return ThomElement(self.shift, self.payload - other.payload, self.suspension)

    def __neg__(self):
        return ThomElement(self.shift, -self.payload, self.suspension)

    def __mul__(self, other):
        # module action of the base ring (and of scalars)
        if isinstance(other, GradedPoly):
            other = poly_reduce(other, self.ring) if other.ring != self.ring else other
        return ThomElement(self.shift, self.payload * other, self.suspension)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.payload)

    def is_zero(self) -> bool:
        return not self.payload

    def __str__(self):
        return format_terms(self.payload.terms(), self.ring.generator_names, self.ring.field, prefix=self.label)

    def to_dict(self) -> dict:
        return {
            "shift": self.shift,
            "suspension": self.suspension,
            "ring": self.ring.name,
            "prime": self.ring.field.prime,
            "element": str(self),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThomElement":
        n = parse_bso_name(d["ring"])
        if n is None:
            raise ParseError(f"cannot rebuild ring {d['ring']!r}")
        el = parse_thom(d["element"], bso(n, d.get("prime")), shift=d["shift"])
        return cls(el.shift, el.payload, d.get("suspension", 0))


_U_RE = re.compile(r"^u_(-?\d+)$")


def parse_thom(text: str, ring: RingPresentation, shift: int | None = None) -> ThomElement:
    """Parse ``u_-4*p1*p2 + 2*u_-4*p1^3``; ``"0"`` needs an explicit ``shift``."""
    if text.strip() == "0":
        if shift is None:
            raise ParseError("the zero Thom element needs an explicit shift")
        return ThomElement(shift, ring.zero())
    bodies = []
    for sign, body in split_terms(text):
        factors = [f.strip() for f in body.split("*")]
        us = [f for f in factors if _U_RE.match(f)]
        if len(us) != 1:
            raise ParseError(f"term {body!r} must contain exactly one Thom class factor")
        s = int(_U_RE.match(us[0]).group(1))
        if shift is None:
            shift = s
        elif s != shift:
            raise ParseError(f"mixed Thom classes in {text!r}")
        rest = [f for f in factors if f is not us[0]] or ["1"]
        bodies.append(("-" if sign < 0 else "+") + "*".join(rest))
    return ThomElement(shift, parse_poly(" ".join(bodies), ring))


def thom_promote(c: GradedPoly, n: int) -> ThomElement:
    """Thom isomorphism H^*(BSO(n)) -> H^{*-n}(MTSO(n)), c -> u_{-n} c."""
    ring = bso(n, c.field.prime, c.ring.truncation)
    return ThomElement(-n, poly_reduce(c, ring))


def restrict_bso(c: GradedPoly, n: int) -> GradedPoly:
    """Restriction H^*(BSO(n+1)) -> H^*(BSO(n)) along L_n + R = L_{n+1}.

    p_i goes to p_i when BSO(n) still has it and to 0 otherwise; chi goes to 0.
    """
    target = bso(n, c.field.prime, c.ring.truncation)
    assignment = {}
    for g in c.ring.generators:
        if g.name == "chi" or not target.has(g.name):
            assignment[g.name] = target.zero()
        else:
            assignment[g.name] = target.gen(g.name)
    return poly_substitute(c, assignment, target)


def eta_restrict(e: ThomElement) -> ThomElement:
    """Pull a class on MTSO(n+1) back along eta: Sigma^{-1} MTSO(n) -> MTSO(n+1)."""
    n1 = parse_bso_name(e.ring.name)
    if n1 is None or n1 < 1:
        raise PresentationMismatchError(f"{e.ring!r} is not a BSO(n+1) presentation")
    payload = restrict_bso(e.payload, n1 - 1)
    return ThomElement(e.shift + 1, payload, e.suspension + 1)


@dataclass(frozen=True)
class ManifoldBasisReport:
    n: int
    degree: int
    field: Field
    basis: tuple

    def __len__(self):
        return len(self.basis)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "degree": self.degree,
            "field": repr(self.field),
            "basis": [str(b) for b in self.basis],
        }


def mtso_basis(n: int, degree: int, prime: int | None = None, truncation: int = DEFAULT_TRUNCATION) -> ManifoldBasisReport:
    """Monomial basis of H^degree(MTSO(n); F) as Thom elements u_{-n} * monomial."""
    field_ = QQ if prime is None else GF(prime)
    ring = bso(n, prime, max(truncation, degree + n))
    basis = tuple(ThomElement(-n, ring.monomial(e)) for e in ring.normal_monomials(degree + n))
    return ManifoldBasisReport(n, degree, field_, basis)


# --------------------------------------------------------------------------
# bundle models

@dataclass(frozen=True)
class BundleModel:
    """Leray-Hirsch model of an oriented fibre bundle f: E -> B.

    ``total`` is the presentation of H^*(E): base generators followed by fibre
    generators, with relations expressing powers of fibre generators over the
    base.  H^*(E) is free over H^*(B) on the normal-form fibre monomials; the
    one of top degree ``fibre_dim`` integrates to 1.
    ``vertical`` sends each generator of BSO(fibre_dim) to its value on T_vE.
    ``base_tangent`` gives p_i(TB) (missing entries are zero, i.e. a framed base).
    """

    name: str
    base: RingPresentation
    total: RingPresentation
    fibre_generators: tuple
    fibre_dim: int
    vertical: Mapping[str, GradedPoly]
    base_tangent: Mapping[str, GradedPoly] = field(default_factory=dict)
    fundamental: tuple | None = None
    fibre_basis: tuple = field(init=False)
    top: tuple = field(init=False)

    def __post_init__(self):
        names = self.total.generator_names
        nb = len(self.base.generators)
        if names[:nb] != self.base.generator_names or names[nb:] != tuple(self.fibre_generators):
            raise ModelError("total presentation must list base generators, then fibre generators")
        caps = {}
        for gname, k, repl in self.total.relations:
            gi = self.total.index(gname)
            if gi < nb:
                if repl.generators_used() - set(self.base.generator_names):
                    raise ModelError(f"base relation on {gname} involves fibre generators")
            else:
                caps[gi - nb] = k - 1
        if set(caps) != set(range(len(self.fibre_generators))):
            raise ModelError("every fibre generator needs a power relation (finite fibre cohomology)")
        basis = [()]
        for i in range(len(self.fibre_generators)):
            basis = [b + (k,) for b in basis for k in range(caps[i] + 1)]
        fdeg = self.total.degrees[nb:]

        def degree(b):
            return sum(k * d for k, d in zip(b, fdeg))

        basis.sort(key=lambda b: (degree(b), b))
        top_deg = degree(basis[-1])
        tops = [b for b in basis if degree(b) == top_deg]
        if len(tops) != 1 or top_deg != self.fibre_dim:
            raise ModelError(f"fibre basis must have a unique element of degree {self.fibre_dim}")
        object.__setattr__(self, "fibre_basis", tuple(basis))
        object.__setattr__(self, "top", tops[0])

        vring = self.vertical_ring
        vertical = {}
        for g in vring.generators:
            img = self.vertical.get(g.name, 0)
            img = self._as_total(img)
            if img and (not img.is_homogeneous() or img.degree() != g.degree):
                raise DegreeMismatchError(f"vertical {g.name} must be homogeneous of degree {g.degree}")
            vertical[g.name] = img
        extra = set(self.vertical) - set(vertical)
        if extra:
            raise ModelError(f"vertical data for unknown classes {sorted(extra)}")
        object.__setattr__(self, "vertical", vertical)
        tangent = {}
        for k, v in self.base_tangent.items():
            v = v if isinstance(v, GradedPoly) and v.ring == self.base else (
                self.base.parse(v) if isinstance(v, str) else poly_reduce(v, self.base))
            tangent[k] = v
        object.__setattr__(self, "base_tangent", tangent)
        if self.fundamental is not None:
            fund = tuple(self.fundamental)
            d = self.base.degree_of(fund)
            if self.base.normal_monomials(d) != [fund]:
                raise ModelError("the fundamental class must span the top degree of the base")
            object.__setattr__(self, "fundamental", fund)

    def _as_total(self, x) -> GradedPoly:
        if isinstance(x, str):
            return self.total.parse(x)
        if isinstance(x, GradedPoly):
            return x if x.ring == self.total else poly_reduce(x, self.total)
        return self.total.const(x)

    @property
    def vertical_ring(self) -> RingPresentation:
        return bso(self.fibre_dim, self.base.field.prime, max(self.total.truncation, DEFAULT_TRUNCATION))

    @property
    def base_dim(self) -> int | None:
        return None if self.fundamental is None else self.base.degree_of(self.fundamental)

    def fibre_basis_labels(self) -> list[str]:
        return [monomial_str(self.fibre_generators, b) or "1" for b in self.fibre_basis]

    def fibre_euler_characteristic(self) -> int:
        fdeg = self.total.degrees[len(self.base.generators):]
        return sum((-1) ** sum(k * d for k, d in zip(b, fdeg)) for b in self.fibre_basis)

    def pullback(self, b: GradedPoly) -> GradedPoly:
        """f^*: H^*(B) -> H^*(E)."""
        if b.ring != self.base:
            b = poly_reduce(b, self.base)
        return poly_reduce(b, self.total)

    def element(self, text: str) -> GradedPoly:
        return self.total.parse(text)

    def vertical_class(self, c: GradedPoly) -> GradedPoly:
        """c(T_vE) for c in H^*(BSO(fibre_dim))."""
        unknown = c.generators_used() - set(self.vertical)
        if unknown:
            raise PresentationMismatchError(
                f"{sorted(unknown)} are not characteristic classes of rank-{self.fibre_dim} bundles"
            )
        return poly_substitute(c, self.vertical, self.total)

    def split(self, x: GradedPoly) -> dict[tuple, GradedPoly]:
        """Leray-Hirsch coordinates: fibre-basis element -> base coefficient."""
        if x.ring != self.total:
            x = poly_reduce(x, self.total)
        nb = len(self.base.generators)
        out: dict = {}
        for e, c in x._terms.items():
            out.setdefault(e[nb:], {})[e[:nb]] = c
        return {b: GradedPoly(self.base, t, normalized=True) for b, t in out.items()}

    def integrate(self, x: GradedPoly) -> GradedPoly:
        return fiber_integrate(self, x)


def fiber_integrate(model: BundleModel, x: GradedPoly) -> GradedPoly:
    """Umkehr map f_!: H^*(E) -> H^{*-n}(B): coefficient of the top fibre-basis element."""
    return model.split(x).get(model.top, model.base.zero())


def mmm_class(model: BundleModel, c: GradedPoly) -> GradedPoly:
    """Generalized MMM class kappa_c = f_!(c(T_vE))."""
    return fiber_integrate(model, model.vertical_class(c))


def tangent_class(model: BundleModel, kind: str = "L") -> GradedPoly:
    """A stable characteristic class of TB evaluated from ``model.base_tangent``."""
    if not model.base_tangent:
        return model.base.one()
    m = max(int(k[1:]) for k in model.base_tangent)
    top = model.base_dim if model.base_dim is not None else model.base.truncation
    ring = pontryagin_ring(m, truncation=max(top, 4))
    c = characteristic_sequence(kind, ring, max(top, 4))
    return poly_substitute(c, {k: v for k, v in model.base_tangent.items()}, model.base)


def signature_via_L(model: BundleModel) -> Fraction:
    """<L(TB) f_!(L(T_vE)), [B]>."""
    if model.fundamental is None:
        raise ModelError(f"model {model.name!r} has no fundamental class on its base")
    d = model.base_dim
    lv = characteristic_sequence("L", model.vertical_ring, d + model.fibre_dim)
    kappa = mmm_class(model, lv)
    integrand = tangent_class(model, "L") * kappa
    return Fraction(integrand.coefficient(model.fundamental))


def transfer_sides(model: BundleModel, y: GradedPoly) -> tuple[GradedPoly, GradedPoly]:
    """``(f_!(y(T_v) chi(T_v)), chi(F) * base part of y(T_v))``."""
    if model.fibre_dim % 2:
        raise ModelError("the transfer identity needs an even-dimensional fibre")
    chi = model.vertical.get("chi")
    if chi is None:
        raise ModelError("model has no vertical Euler class")
    yv = model.vertical_class(y)
    lhs = fiber_integrate(model, yv * chi)
    zero_fibre = (0,) * len(model.fibre_generators)
    base_part = model.split(yv).get(zero_fibre, model.base.zero())
    rhs = base_part * model.fibre_euler_characteristic()
    return lhs, rhs


def transfer_pullback_check(model: BundleModel, y: GradedPoly) -> bool:
    lhs, rhs = transfer_sides(model, y)
    return lhs == rhs


# --------------------------------------------------------------------------
# model constructors

def _total_ring(base: RingPresentation, fibre: list[tuple[str, int]], relations) -> RingPresentation:
    gens = list(base.generators) + list(fibre)
    rels = [(n, k, str(r)) for n, k, r in base.relations] + list(relations)
    return RingPresentation(gens, rels, truncation=base.truncation, field=base.field)


def sphere_bundle_model(
    rank: int,
    base: RingPresentation,
    pontryagin: Mapping[str, GradedPoly | str],
    euler: GradedPoly | str | int = 0,
    *,
    z_square: GradedPoly | str | None = None,
    name: str | None = None,
    base_tangent: Mapping | None = None,
    fundamental=None,
) -> BundleModel:
    """Sphere bundle S(V) -> B of an oriented rank-``rank`` vector bundle V.

    Fibre basis {1, z} with deg z = rank - 1 and T_v + R = f^*V.  For even rank,
    Leray-Hirsch needs e(V) = 0 unless ``z_square`` is supplied.  For odd rank,
    z = chi(T_v)/2 and z^2 = p_top(V)/4 by default.
    """
    if rank < 2:
        raise ModelError("rank must be at least 2")

    def as_base(x):
        if isinstance(x, str):
            return base.parse(x)
        if isinstance(x, GradedPoly):
            return poly_reduce(x, base)
        return base.const(x)

    pont = {k: as_base(v) for k, v in pontryagin.items()}
    for k, v in pont.items():
        i = int(k[1:])
        if v and (not v.is_homogeneous() or v.degree() != 4 * i):
            raise DegreeMismatchError(f"{k}(V) must have degree {4 * i}")
    e = as_base(euler)
    if rank % 2 == 0:
        if e and (not e.is_homogeneous() or e.degree() != rank):
            raise DegreeMismatchError(f"e(V) must have degree {rank}")
        top = pont.get(f"p{rank // 2}", base.zero())
        if top != e * e:
            raise ModelError(f"p{rank // 2}(V) must equal e(V)^2 for an oriented rank-{rank} bundle")
    elif e:
        raise ModelError("the rational Euler class of an odd-rank bundle vanishes")
    zdeg = rank - 1
    if z_square is None:
        if rank % 2 == 0:
            if e:
                raise ModelError("e(V) != 0: supply the Gysin relation via z_square")
            z_square = "0"
        else:
            z_square = str(pont.get(f"p{(rank - 1) // 2}", base.zero()) * Fraction(1, 4))
    total = _total_ring(base, [("z", zdeg)], [("z", 2, str(z_square))])
    vertical = {}
    vring = bso(rank - 1, base.field.prime)
    for g in vring.generators:
        if g.name == "chi":
            vertical["chi"] = total.parse("2*z")
        else:
            vertical[g.name] = poly_reduce(pont.get(g.name, base.zero()), total)
    return BundleModel(
        name or f"S(V) rank {rank}",
        base, total, ("z",), rank - 1, vertical,
        base_tangent or {}, fundamental,
    )


def projective_bundle_model(
    base: RingPresentation,
    c1: GradedPoly | str,
    c2: GradedPoly | str | int = 0,
    *,
    name: str | None = None,
    base_tangent: Mapping | None = None,
    fundamental=None,
) -> BundleModel:
    """CP^1-bundle P(W) -> B of a complex rank-2 bundle W.

    z = c1 of the dual tautological line, z^2 = -c1(W) z - c2(W),
    T_v = Hom(L, W/L) so chi(T_v) = 2z + c1(W) and p1(T_v) = chi(T_v)^2.
    """
    c1s, c2s = str(c1), str(c2)
    total = _total_ring(base, [("z", 2)], [("z", 2, _gysin(base, c1s, c2s))])
    chi = total.parse("2*z") + poly_reduce(base.parse(c1s), total)
    return BundleModel(
        name or "P(W)", base, total, ("z",), 2,
        {"chi": chi, "p1": chi * chi},
        base_tangent or {}, fundamental,
    )


def _gysin(base: RingPresentation, c1: str, c2: str) -> str:
    # -c1*z - c2 rendered in the total-ring grammar
    ring = _total_ring(base, [("z", 2)], [])
    rel = -(poly_reduce(base.parse(c1), ring) * ring.gen("z")) - poly_reduce(base.parse(c2), ring)
    return str(rel)


def trivial_bundle_model(
    base: RingPresentation,
    fibre: list[tuple[str, int]],
    fibre_relations: list[tuple[str, int, str]],
    fibre_dim: int,
    vertical: Mapping[str, str] | None = None,
    *,
    name: str | None = None,
    base_tangent: Mapping | None = None,
    fundamental=None,
) -> BundleModel:
    """Product bundle B x M; vertical classes come from M alone."""
    total = _total_ring(base, fibre, fibre_relations)
    return BundleModel(
        name or "B x M", base, total, tuple(n for n, _ in fibre), fibre_dim,
        dict(vertical or {}), base_tangent or {}, fundamental,
    )
