"""Mod-p Steenrod reduced powers driven by configurable action tables.

A :class:`SteenrodTable` lists P^i on each ring generator and the total power
of Thom classes (Wu data).  Everything else follows from the Cartan formula:
the total power P = sum_i P^i is a ring homomorphism, so P(u * a) = P(u) P(a).
Compositions are expanded step by step; no Adem relations are used.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .algebra import (
    DEFAULT_TRUNCATION,
    GF,
    GradedPoly,
    PowerSeries,
    PrimeFieldElem,
    RingPresentation,
    bso,
    poly_reduce,
)
from .errors import ConfigurationError, InconsistencyError
from .symmetric import monomial_to_elementary, symmetric_poly_to_partitions
from .thom import ThomElement, eta_restrict, parse_thom


@dataclass(frozen=True)
class SteenrodTable:
    name: str
    prime: int
    ring: RingPresentation
    actions: Mapping[str, Mapping[int, GradedPoly]]
    wu: Mapping[int, tuple] = field(default_factory=dict)  # shift -> (total class, known degree)

    def __post_init__(self):
        if self.ring.field != GF(self.prime):
            raise ConfigurationError(f"table ring must be over GF({self.prime})")
        for g, acts in self.actions.items():
            self.ring.index(g)
            for i, v in acts.items():
                if v.ring != self.ring:
                    raise ConfigurationError(f"P^{i}({g}) lives in the wrong ring")

    @property
    def step(self) -> int:
        """Degree of P^1, 2(p-1)."""
        return 2 * (self.prime - 1)

    def _degree(self, g: str) -> int:
        return self.ring.degrees[self.ring.index(g)]

    def action(self, g: str, i: int) -> GradedPoly:
        """P^i(g), using the unstability axioms where the table is silent."""
        deg = self._degree(g)
        given = self.actions.get(g, {})
        if i == 0:
            return self.ring.gen(g)
        if 2 * i > deg:
            return self.ring.zero()
        if i in given:
            return given[i]
        if 2 * i == deg:
            return self.ring.gen(g) ** self.prime
        raise ConfigurationError(f"table {self.name!r} does not define P^{i}({g})")

    def generator_total(self, g: str, max_i: int) -> GradedPoly:
        out = self.ring.zero()
        for i in range(0, min(max_i, self._degree(g) // 2) + 1):
            out = out + self.action(g, i)
        return out

    def wu_total(self, shift: int, max_i: int) -> GradedPoly:
        if shift not in self.wu:
            raise ConfigurationError(f"table {self.name!r} has no Wu data for u_{shift}")
        cls, known = self.wu[shift]
        need = max_i * self.step
        if need > known:
            raise ConfigurationError(
                f"Wu data for u_{shift} known through degree {known}, need {need}"
            )
        return cls.truncate(need)

    def missing_entries(self) -> list[str]:
        out = []
        for g in self.actions:
            deg = self._degree(g)
            for i in range(1, (deg + 1) // 2):
                if 2 * i < deg and i not in self.actions[g]:
                    out.append(f"P^{i}({g})")
        return out

    def unstability_violations(self) -> list[str]:
        """Entries contradicting P^i g = 0 (2i > deg g), P^{deg/2} g = g^p, or the degree of P^i."""
        out = []
        for g, acts in self.actions.items():
            deg = self._degree(g)
            for i, v in sorted(acts.items()):
                if 2 * i > deg and v:
                    out.append(f"P^{i}({g}) should vanish")
                elif 2 * i == deg and v != self.ring.gen(g) ** self.prime:
                    out.append(f"P^{i}({g}) should be {g}^{self.prime}")
                elif v and (not v.is_homogeneous() or v.degree() != deg + i * self.step):
                    out.append(f"P^{i}({g}) has the wrong degree")
        return out

    def sign_flipped(self) -> "SteenrodTable":
        """The table with P^i replaced by (-1)^i P^i everywhere (generators and Wu data)."""
        acts = {g: {i: v * (-1) ** i for i, v in a.items()} for g, a in self.actions.items()}
        wu = {}
        for s, (cls, known) in self.wu.items():
            flipped = self.ring.zero()
            for d, comp in cls.components().items():
                flipped = flipped + comp * (-1) ** (d // self.step)
            wu[s] = (flipped, known)
        return SteenrodTable(self.name + "-signflip", self.prime, self.ring, acts, wu)

    def to_fixture(self) -> dict:
        gens = {}
        for g, acts in self.actions.items():
            entry = {"degree": self._degree(g)}
            entry.update({f"P^{i}": str(v) for i, v in sorted(acts.items())})
            gens[g] = entry
        return {
            "name": self.name,
            "prime": self.prime,
            "presentation": self.ring.name,
            "generators": gens,
            "wu": {f"u_{s}": {"P(u)": f"u * ({cls})", "known_degree": known} for s, (cls, known) in self.wu.items()},
        }


@dataclass(frozen=True)
class TotalPowerResult:
    input: object
    prime: int
    components: Mapping[int, object]

    def __getitem__(self, i: int):
        if i in self.components:
            return self.components[i]
        x = self.input
        if isinstance(x, ThomElement):
            return ThomElement(x.shift, x.ring.zero(), x.suspension)
        return x.ring.zero()

    def to_dict(self) -> dict:
        return {
            "input": str(self.input),
            "prime": self.prime,
            "components": {str(i): str(c) for i, c in sorted(self.components.items()) if c},
        }


def _poly_total(a: GradedPoly, table: SteenrodTable, max_i: int) -> GradedPoly:
    ring = table.ring
    totals: dict = {}
    out = ring.zero()
    for e, c in a.terms():
        bound = ring.degree_of(e) + max_i * table.step
        term = ring.const(c)
        for gi, k in enumerate(e):
            if not k:
                continue
            g = ring.generators[gi].name
            if g not in totals:
                totals[g] = table.generator_total(g, max_i)
            for _ in range(k):
                term = (term * totals[g]).truncate(bound)
        out = out + term
    return out


def total_power(x, table: SteenrodTable, max_i: int | None = None) -> TotalPowerResult:
    """Components P^i(x), i <= max_i, by the Cartan formula and the table."""
    ring = table.ring
    step = table.step
    if isinstance(x, ThomElement):
        payload = x.payload if x.ring == ring else poly_reduce(x.payload, ring)
        x = ThomElement(x.shift, payload, x.suspension)
    else:
        payload = x if x.ring == ring else poly_reduce(x, ring)
        x = payload
    if max_i is None:
        lo = payload.min_degree() or 0
        max_i = max(0, (ring.truncation - lo) // step)
    comps: dict = {}
    for d, part in payload.components().items():
        tot = _poly_total(part, table, max_i)
        if isinstance(x, ThomElement):
            tot = (table.wu_total(x.shift, max_i) * tot).truncate(d + max_i * step)
        for i in range(max_i + 1):
            piece = tot.component(d + i * step)
            if piece:
                comps[i] = comps[i] + piece if i in comps else piece
    if isinstance(x, ThomElement):
        comps = {i: ThomElement(x.shift, p, x.suspension) for i, p in comps.items()}
    return TotalPowerResult(x, table.prime, dict(sorted(comps.items())))


def compose_powers(ops: Sequence[int], x, table: SteenrodTable):
    """P^{ops[0]} P^{ops[1]} ... applied right to left."""
    for i in reversed(list(ops)):
        x = total_power(x, table, max_i=i)[i]
    return x


# --------------------------------------------------------------------------
# Wu series on MTSO(3)

def wu_series(p: int, order: int) -> PowerSeries:
    """(z + z^p)(1 + z^r)^{-1} over Q, r = (p-1)/2."""
    r = (p - 1) // 2
    num = [0] * (order + 1)
    for k in (1, p):
        if k <= order:
            num[k] += 1
    den = [0] * (order + 1)
    den[0] = 1
    if r <= order:
        den[r] += 1
    return PowerSeries(num) * PowerSeries(den).inverse()


def wu_series_closed_form(p: int, order: int) -> PowerSeries:
    """sum_{l >= 0} (-1)^l (z^{rl+1} + z^{rl+p}), truncated."""
    r = (p - 1) // 2
    c = [0] * (order + 1)
    l = 0
    while r * l + 1 <= order:
        for k in (r * l + 1, r * l + p):
            if k <= order:
                c[k] += (-1) ** l
        l += 1
    return PowerSeries(c)


def wu_coefficient(p: int, i: int) -> PrimeFieldElem:
    """Coefficient of z^{ri+1} in the Wu series, reduced mod p; always a unit."""
    GF(p)  # validates p
    r = (p - 1) // 2
    k = r * i + 1
    c = wu_series(p, k)[k]
    value = PrimeFieldElem(p, GF(p).coerce(c))
    if not value:
        raise InconsistencyError(f"Wu coefficient vanishes for p={p}, i={i}")
    return value


def wu_thom_power_bso3(k: int, p: int, max_i: int | None = None,
                       truncation: int = DEFAULT_TRUNCATION) -> TotalPowerResult:
    """Total power of u_{-3} p1^k from P(u_{-3}) = u_{-3}(1 + x^r)^{-1} and P(x) = x + x^p, x = p1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    r = (p - 1) // 2
    step = 4 * r
    if max_i is None:
        max_i = max(0, (truncation - 4 * k) // step)
    top = 4 * k + max_i * step
    ring = bso(3, p, max(truncation, top))
    x = ring.gen("p1")
    wu = ring.zero()
    for l in range(top // (4 * r) + 1):
        wu = wu + x ** (r * l) * (-1) ** l
    tot = (wu * (x + x ** p) ** k).truncate(top)
    comps = {}
    for i in range(max_i + 1):
        piece = tot.component(4 * k + i * step)
        if piece:
            comps[i] = ThomElement(-3, piece)
    return TotalPowerResult(ThomElement(-3, x ** k), p, comps)


# --------------------------------------------------------------------------
# splitting obstruction at p = 3

@dataclass(frozen=True)
class SplittingReport:
    table: str
    q_u4: ThomElement
    restriction: ThomElement
    splits: bool | None  # False: splitting ruled out; None: this Q does not decide

    def to_dict(self) -> dict:
        return {
            "table": self.table,
            "Q_u4": str(self.q_u4),
            "restriction": str(self.restriction),
            "splits": self.splits,
        }

    @classmethod
    def from_dict(cls, d: dict, ring: RingPresentation | None = None) -> "SplittingReport":
        ring = ring or bso(4, 3)
        return cls(d["table"], parse_thom(d["Q_u4"], ring, shift=-4),
                   parse_thom(d["restriction"], bso(3, ring.field.prime), shift=-3), d["splits"])

    def summary(self) -> str:
        return (
            f"Q(u_-4) = {self.q_u4}; restriction = {self.restriction}; "
            f"splits: {'undetermined' if self.splits is None else str(self.splits).lower()}"
        )


def splitting_obstruction(table: SteenrodTable) -> SplittingReport:
    """Evaluate Q = P^3 - P^2 P^1 on u_{-4} and restrict along eta.

    A splitting of eta would force Q(u_{-4}) = 0 whenever eta^*(Q u_{-4}) = 0,
    so a nonzero Q(u_{-4}) with vanishing restriction rules it out.
    """
    if table.prime != 3:
        raise ConfigurationError("the obstruction Q = P^3 - P^2 P^1 is evaluated at p = 3")
    u = ThomElement(-4, table.ring.one())
    q = total_power(u, table, max_i=3)[3] - compose_powers([2, 1], u, table)
    res = eta_restrict(q)
    splits = False if (q and not res) else None
    return SplittingReport(table.name, q, res, splits)


# --------------------------------------------------------------------------
# splitting-principle oracle

def _root_ring(m: int, truncation: int) -> RingPresentation:
    return RingPresentation([(f"t{i}", 4) for i in range(1, m + 1)], truncation=truncation)


def _to_pontryagin(sym: GradedPoly, m: int, ring: RingPresentation) -> GradedPoly:
    elem = monomial_to_elementary(symmetric_poly_to_partitions(sym._terms), m)
    terms = {}
    n = len(ring.generators)
    for mu, c in elem.items():
        e = [0] * n
        for part in mu:
            e[ring.index(f"p{part}")] += 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return GradedPoly(ring, {e: ring.field.coerce(Fraction(c)) for e, c in terms.items()})


def derive_table_splitting(rank: int, p: int, max_deg: int | None = None) -> SteenrodTable:
    """Action table for BSO(rank) at p from degree-2 roots x_i with P(x) = x + x^p.

    With t = x^2 a degree-4 root, P(t) = t (1 + t^r)^2; the Thom class of
    -L_rank has P(u) = u prod (1 + t_i^r)^{-1}.
    """
    GF(p)
    if rank < 2:
        raise ValueError("rank must be at least 2")
    m = rank // 2
    r = (p - 1) // 2
    if max_deg is None:
        max_deg = 4 * m * p
    trunc = max(DEFAULT_TRUNCATION, 4 * m * p, max_deg)
    roots = _root_ring(m, trunc)
    ring = bso(rank, p, trunc)
    ts = [roots.gen(f"t{i}") for i in range(1, m + 1)]
    powered = [t * (1 + t ** r) ** 2 for t in ts]
    step = 2 * (p - 1)
    actions: dict = {}
    for j in range(1, m + 1):
        ej = roots.zero()
        for combo in combinations(powered, j):
            prod = roots.one()
            for f in combo:
                prod = prod * f
            ej = ej + prod
        total = _to_pontryagin(ej, m, ring)
        actions[f"p{j}"] = {
            i: total.component(4 * j + i * step) for i in range(1, 2 * j + 1)
        }
    if rank % 2 == 0:
        prod = roots.one()
        for t in ts:
            prod = prod * (1 + t ** r)
        chi = ring.gen("chi")
        total = chi * _to_pontryagin(prod, m, ring)
        actions["chi"] = {i: total.component(rank + i * step) for i in range(1, rank // 2 + 1)}
    # Wu data for the Thom class of -L_rank
    kmax = max_deg // 4
    inv_roots = RingPresentation(roots.generators, truncation=4 * kmax)
    inv = inv_roots.one()
    for i in range(1, m + 1):
        t = inv_roots.gen(f"t{i}")
        series = inv_roots.zero()
        l = 0
        while r * l <= kmax:
            series = series + t ** (r * l) * (-1) ** l
            l += 1
        inv = inv * series
    wu_cls = _to_pontryagin(poly_reduce(inv, roots), m, ring)
    wu = {-rank: (wu_cls.truncate(4 * kmax), 4 * kmax)}
    return SteenrodTable(f"oracle-p{p}", p, ring, actions, wu)


# --------------------------------------------------------------------------
# comparisons

@dataclass(frozen=True)
class Discrepancy:
    what: str
    configured: str
    oracle: str
    kind: str  # "sign" or "value"

    def to_dict(self) -> dict:
        return {"what": self.what, "configured": self.configured, "oracle": self.oracle, "kind": self.kind}


def compare_tables(configured: SteenrodTable, oracle: SteenrodTable) -> list[Discrepancy]:
    """Entrywise comparison of a configured table against an oracle table."""
    out = []
    if configured.prime != oracle.prime:
        raise ConfigurationError("tables at different primes")
    ring = configured.ring
    for g, acts in sorted(configured.actions.items()):
        for i, v in sorted(acts.items()):
            try:
                w = poly_reduce(oracle.action(g, i), ring)
            except ConfigurationError:
                continue
            if v != w:
                kind = "sign" if v == -w else "value"
                out.append(Discrepancy(f"P^{i}({g})", str(v), str(w), kind))
    for s, (cls, known) in sorted(configured.wu.items()):
        if s not in oracle.wu:
            continue
        ocls, oknown = oracle.wu[s]
        upto = min(known, oknown)
        a = cls.truncate(upto)
        b = poly_reduce(ocls, ring).truncate(upto)
        for d in range(0, upto + 1, configured.step):
            ca, cb = a.component(d), b.component(d)
            if ca != cb:
                kind = "sign" if ca == -cb else "value"
                out.append(Discrepancy(f"P^{d // configured.step}(u_{s})", str(ca), str(cb), kind))
    return out


def sign_pattern(discrepancies: Sequence[Discrepancy]) -> dict[str, str]:
    """Summarize discrepancies by operation: 'sign' when every entry differs by sign only."""
    by_op: dict[str, set] = {}
    for d in discrepancies:
        op = d.what.split("(")[0]
        by_op.setdefault(op, set()).add(d.kind)
    return {op: ("sign" if kinds == {"sign"} else "value") for op, kinds in sorted(by_op.items())}


def wu_formula_vs_oracle(p: int, k: int = 1, max_i: int = 4) -> list[tuple[int, str, str]]:
    """Components where the printed Wu formula for u_{-3} p1^k and the root oracle disagree."""
    printed = wu_thom_power_bso3(k, p, max_i=max_i)
    oracle = derive_table_splitting(3, p, 4 * k + max_i * 4 * ((p - 1) // 2))
    x = ThomElement(-3, oracle.ring.gen("p1") ** k)
    derived = total_power(x, oracle, max_i=max_i)
    out = []
    for i in range(max_i + 1):
        a = str(printed[i])
        b = str(derived[i])
        if a != b:
            out.append((i, a, b))
    return out
