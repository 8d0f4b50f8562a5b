"""Bernoulli numbers, genus series and multiplicative sequences in Pontrjagin classes."""
from __future__ import annotations

import threading
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, factorial
from typing import Iterator

from .algebra import (
    DEFAULT_TRUNCATION,
    GradedPoly,
    PowerSeries,
    RingPresentation,
    bso,
    poly_reduce,
    pontryagin_ring,
)
from .errors import InconsistencyError
from .symmetric import monomial_to_elementary, partitions

_bernoulli_cache = [Fraction(1), Fraction(-1, 2)]
_bernoulli_lock = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2; only n = 1 or even n are accepted."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    if n > 1 and n % 2:
        raise ValueError(f"odd index {n} > 1 (B_n vanishes there and is not used)")
    if n < len(_bernoulli_cache):
        return _bernoulli_cache[n]
    with _bernoulli_lock:
        cache = _bernoulli_cache
        while len(cache) <= n:
            m = len(cache)
            if m % 2 and m > 1:
                cache.append(Fraction(0))
                continue
            s = sum(comb(m + 1, j) * cache[j] for j in range(m))
            cache.append(-s / (m + 1))
    return _bernoulli_cache[n]


# --------------------------------------------------------------------------
# genus series

GENUS_KINDS = ("L", "Ltilde", "inv_linear", "total_p")


@dataclass(frozen=True)
class GenusSpec:
    kind: str
    series: PowerSeries

    @classmethod
    def custom(cls, series: PowerSeries) -> "GenusSpec":
        return cls("custom", series)


def genus_series(kind: str, order: int) -> PowerSeries:
    """Series in the Pontrjagin-root variable x (a degree-4 class).

    ``L``: sqrt(x) coth(sqrt(x)), coefficient 2^{2k} B_{2k} / (2k)!.
    ``Ltilde``: sqrt(x) coth(sqrt(x)/2), coefficient 2 B_{2k} / (2k)!.
    ``inv_linear``: (1+x)^-1.  ``total_p``: 1+x.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    ks = range(order + 1)
    if kind == "L":
        coeffs = [2 ** (2 * k) * bernoulli(2 * k) / factorial(2 * k) for k in ks]
    elif kind == "Ltilde":
        coeffs = [2 * bernoulli(2 * k) / factorial(2 * k) for k in ks]
    elif kind == "inv_linear":
        coeffs = [(-1) ** k for k in ks]
    elif kind == "total_p":
        coeffs = [1, 1] + [0] * (order - 1)
        coeffs = coeffs[: order + 1]
    else:
        raise ValueError(f"unknown genus kind {kind!r}; expected one of {GENUS_KINDS}")
    return PowerSeries(coeffs)


def genus_spec(kind: str, order: int) -> GenusSpec:
    return GenusSpec(kind, genus_series(kind, order))


# --------------------------------------------------------------------------
# multiplicative sequences

@dataclass
class SequencePolys:
    """Homogeneous components K_k (degree 4k) of a genus, in a fixed ring."""

    ring: RingPresentation
    polys: dict = field(default_factory=dict)  # degree 4k -> GradedPoly
    num_roots: int = 0

    def __getitem__(self, degree: int) -> GradedPoly:
        if degree % 4:
            return self.ring.zero()
        return self.polys.get(degree, self.ring.zero())

    def __iter__(self) -> Iterator[tuple[int, GradedPoly]]:
        return iter(sorted(self.polys.items()))

    def total(self) -> GradedPoly:
        out = self.ring.zero()
        for _, p in self:
            out = out + p
        return out

    @property
    def max_degree(self) -> int:
        return max(self.polys, default=0)


def _series_coeffs(Q, kmax: int) -> list:
    series = Q.series if isinstance(Q, GenusSpec) else Q
    if series.order < kmax:
        raise ValueError(f"series known to order {series.order}, need {kmax}")
    if not series.field.is_rational:
        raise ValueError("genus series must have rational coefficients")
    return list(series.coeffs[: kmax + 1])


def _expand_product(q: list, nroots: int, kmax: int, num_p: int, ring: RingPresentation) -> SequencePolys:
    # coefficient of m_lambda in prod_{i<=N} Q(t_i) is q_0^{N - len} * prod q_{lambda_j}
    out = SequencePolys(ring, {}, nroots)
    q0 = q[0]
    names = [f"p{j}" for j in range(1, num_p + 1)]
    for name in names:
        ring.index(name)
    idx = [ring.index(n) for n in names]
    zero_exps = [0] * len(ring.generators)
    for k in range(kmax + 1):
        f = {}
        for lam in partitions(k, max_len=nroots):
            c = q0 ** (nroots - len(lam))
            for part in lam:
                c *= q[part]
            if c:
                f[lam] = c
        elem = monomial_to_elementary(f, nroots)
        terms = {}
        for mu, c in elem.items():
            if mu and mu[0] > num_p:
                continue  # e_j = p_j = 0 for j > num_p
            e = list(zero_exps)
            for part in mu:
                e[idx[part - 1]] += 1
            terms[tuple(e)] = c
        poly = GradedPoly(ring, terms)
        if poly:
            out.polys[4 * k] = poly
    return out


def multiplicative_sequence(
    Q,
    num_p: int,
    max_deg: int,
    *,
    num_roots: int | None = None,
    ring: RingPresentation | None = None,
) -> SequencePolys:
    """Multiplicative sequence of a series with Q(0) = 1, in p1..p_num_p.

    Expands prod Q(t_i) over ``num_roots`` formal degree-4 roots (default
    ceil(max_deg/4), which is enough for stability) and rewrites the result in
    elementary symmetric functions e_j = p_j, with p_j = 0 for j > num_p.
    """
    if num_p < 1:
        raise ValueError("num_p must be at least 1")
    kmax = max_deg // 4
    q = _series_coeffs(Q, kmax)
    if q[0] != 1:
        raise ValueError("Q(0) != 1: use genus_product for series with a different constant term")
    if num_roots is None:
        num_roots = max(1, ceil(max_deg / 4))
    if ring is None:
        ring = pontryagin_ring(num_p, truncation=max(max_deg, DEFAULT_TRUNCATION))
    return _expand_product(q, num_roots, kmax, num_p, ring)


def genus_product(Q, m: int, max_deg: int, *, ring: RingPresentation | None = None) -> SequencePolys:
    """Expansion of prod_{i=1..m} Q(t_i) in p1..pm; Q(0) is arbitrary."""
    if m < 1:
        raise ValueError("m must be at least 1")
    kmax = max_deg // 4
    q = _series_coeffs(Q, kmax)
    if ring is None:
        ring = pontryagin_ring(m, truncation=max(max_deg, DEFAULT_TRUNCATION))
    return _expand_product(q, m, kmax, m, ring)


def hirzebruch_L(ring: RingPresentation | int, max_deg: int | None = None) -> GradedPoly:
    """Total L-class (truncated) in a BSO(n)-style ring containing p1, p2, ..."""
    if isinstance(ring, int):
        ring = bso(ring)
    return characteristic_sequence("L", ring, max_deg)


@lru_cache(maxsize=256)
def characteristic_sequence(kind: str, ring: RingPresentation, max_deg: int | None = None) -> GradedPoly:
    """Total class of a stable genus (``L``, ``inv_linear``, ``total_p``) in ``ring``."""
    if max_deg is None:
        max_deg = ring.truncation
    num_p = sum(1 for g in ring.generators if g.name.startswith("p") and g.name[1:].isdigit())
    if num_p == 0:
        return ring.one()
    seq = multiplicative_sequence(genus_series(kind, max_deg // 4), num_p, max_deg)
    return poly_reduce(seq.total(), ring)


# --------------------------------------------------------------------------
# the Ltilde / L scaling relation

@dataclass(frozen=True)
class ScalingReport:
    m: int
    k: int
    ratio: Fraction
    is_power_of_two: bool
    exponent: int | None
    printed_exponent: int

    @property
    def agrees(self) -> bool:
        return self.exponent == self.printed_exponent

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "ratio": str(self.ratio),
            "is_power_of_two": self.is_power_of_two,
            "exponent": self.exponent,
            "printed_exponent": self.printed_exponent,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScalingReport":
        return cls(
            m=d["m"], k=d["k"], ratio=Fraction(d["ratio"]),
            is_power_of_two=d["is_power_of_two"], exponent=d["exponent"],
            printed_exponent=d["printed_exponent"],
        )


def power_of_two_exponent(x: Fraction) -> int | None:
    x = Fraction(x)
    if x <= 0:
        return None
    num, den = x.numerator, x.denominator
    if num & (num - 1) == 0 and den == 1:
        return num.bit_length() - 1
    if den & (den - 1) == 0 and num == 1:
        return -(den.bit_length() - 1)
    return None


def scaling_relation_report(m: int, k: int) -> ScalingReport:
    """Compare the degree-4k parts of prod Ltilde(t_i) and L in H^{4k}(BSO(2m); Q).

    The ratio is computed, not assumed; a non-proportional pair raises
    :class:`InconsistencyError`.
    """
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive")
    ring = bso(2 * m, None, max(DEFAULT_TRUNCATION, 4 * k))
    lt = poly_reduce(genus_product(genus_series("Ltilde", k), m, 4 * k)[4 * k], ring)
    l_ = poly_reduce(multiplicative_sequence(genus_series("L", k), m, 4 * k)[4 * k], ring)
    if not l_:
        raise InconsistencyError(f"L_{4 * k} vanishes in BSO({2 * m})")
    e, c = next(iter(l_))
    ratio = Fraction(lt.coefficient(e)) / Fraction(c)
    if lt != l_ * ratio:
        raise InconsistencyError(f"Ltilde_{4 * k} = {lt} is not proportional to L_{4 * k} = {l_}")
    exponent = power_of_two_exponent(ratio)
    return ScalingReport(m, k, ratio, exponent is not None, exponent, m - k)
