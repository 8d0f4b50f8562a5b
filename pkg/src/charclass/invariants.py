"""Manifold invariants, pi_0(MTSO(n)) reports and prime tables built on Bernoulli numbers."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from sympy import primerange

from .algebra import GF
from .errors import InvalidDescriptorError, NoSplittingNeeded
from .genus import bernoulli


@dataclass(frozen=True)
class ManifoldDescriptor:
    """Closed oriented manifold given by its real Betti numbers and signature."""

    name: str
    dim: int
    betti: tuple
    signature: int = 0

    def __post_init__(self):
        object.__setattr__(self, "betti", tuple(self.betti))
        self.validate()

    def violations(self) -> list[str]:
        n, b = self.dim, self.betti
        out = []
        if n < 0:
            return ["negative dimension"]
        if len(b) != n + 1:
            return [f"expected {n + 1} Betti numbers, got {len(b)}"]
        if any(not isinstance(x, int) or x < 0 for x in b):
            out.append("Betti numbers must be nonnegative integers")
            return out
        for i in range(n + 1):
            if b[i] != b[n - i]:
                out.append(f"duality: b_{i} = {b[i]} but b_{n - i} = {b[n - i]}")
                break
        chi = sum((-1) ** i * x for i, x in enumerate(b))
        if n % 4 != 0 and self.signature != 0:
            out.append("signature is defined only in dimensions divisible by 4")
        if n % 4 == 2 and chi % 2:
            out.append(f"Euler characteristic {chi} must be even in dimension {n}")
        if n % 4 == 0 and (self.signature + chi) % 2:
            out.append("signature + Euler characteristic must be even")
        if n % 4 == 0 and n and abs(self.signature) > b[n // 2]:
            out.append("|signature| exceeds the middle Betti number")
        return out

    def validate(self) -> None:
        bad = self.violations()
        if bad:
            raise InvalidDescriptorError(f"{self.name}: " + "; ".join(bad))

    def to_dict(self) -> dict:
        return {"name": self.name, "dim": self.dim, "betti": list(self.betti), "signature": self.signature}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ManifoldDescriptor":
        return cls(d["name"], int(d["dim"]), tuple(d["betti"]), int(d.get("signature", 0)))


# A few standard examples, used by the CLI and tests.
STANDARD_MANIFOLDS = {
    "S1": ManifoldDescriptor("S1", 1, (1, 1)),
    "S2": ManifoldDescriptor("S2", 2, (1, 0, 1)),
    "S4": ManifoldDescriptor("S4", 4, (1, 0, 0, 0, 1)),
    "S5": ManifoldDescriptor("S5", 5, (1, 0, 0, 0, 0, 1)),
    "S6": ManifoldDescriptor("S6", 6, (1, 0, 0, 0, 0, 0, 1)),
    "T2": ManifoldDescriptor("T2", 2, (1, 2, 1)),
    "T5": ManifoldDescriptor("T5", 5, (1, 5, 10, 10, 5, 1)),
    "CP2": ManifoldDescriptor("CP2", 4, (1, 0, 1, 0, 1), 1),
    "HP2": ManifoldDescriptor("HP2", 8, (1, 0, 0, 0, 1, 0, 0, 0, 1), 1),
    "S2xS2": ManifoldDescriptor("S2xS2", 4, (1, 0, 2, 0, 1), 0),
}


def euler_characteristic(M: ManifoldDescriptor) -> int:
    M.validate()
    return sum((-1) ** i * b for i, b in enumerate(M.betti))


def kervaire_semicharacteristic(M: ManifoldDescriptor) -> int:
    """sum b_{2i} mod 2, for dimension 1 mod 4."""
    M.validate()
    if M.dim % 4 != 1:
        raise InvalidDescriptorError(f"semi-characteristic needs dimension 1 mod 4, got {M.dim}")
    return sum(M.betti[0:M.dim:2]) % 2


def euler_subgroup(n: int) -> int:
    """Nonnegative generator of the subgroup of Z spanned by Euler numbers of closed n-manifolds."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2:
        return 0
    return 2 if n % 4 == 2 else 1


# --------------------------------------------------------------------------
# pi_0(MTSO(n))

_SPLITTINGS = {
    0: "[M] -> (sign(M) + chi(M))/2",
    1: "[M] -> kerv(M)",
    2: "[M] -> chi(M)/2",
    3: "none needed",
}


@dataclass(frozen=True)
class Pi0Report:
    """Extension 0 -> Z/eul_{n+1} -> pi_0(MTSO(n)) -> Omega_n -> 0."""

    n: int
    eul: int
    torsion: str
    bordism: str
    group: str
    splitting: str

    def to_dict(self) -> dict:
        return {
            "n": self.n, "eul": self.eul, "torsion": self.torsion,
            "bordism": self.bordism, "group": self.group, "splitting": self.splitting,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Pi0Report":
        return cls(**{k: d[k] for k in ("n", "eul", "torsion", "bordism", "group", "splitting")})


def _cyclic(m: int) -> str:
    if m == 0:
        return "Z"
    if m == 1:
        return "0"
    return f"Z/{m}"


def _direct_sum(a: str, b: str) -> str:
    if a == "0":
        return b
    if b == "0":
        return a
    return f"{a}+{b}"


def pi0_report(n: int, bordism_table: Mapping[int, str]) -> Pi0Report:
    """Assemble pi_0(MTSO(n)) from Z/eul_{n+1} and the supplied oriented bordism group.

    The sequence splits in every case (the splitting map is named), so the
    group is the direct sum.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n not in bordism_table:
        raise KeyError(f"bordism table has no entry for n = {n}")
    eul = euler_subgroup(n + 1)
    torsion = _cyclic(eul)
    bordism = str(bordism_table[n]).strip()
    return Pi0Report(n, eul, torsion, bordism, _direct_sum(torsion, bordism), _SPLITTINGS[n % 4])


def splitting_value(M: ManifoldDescriptor) -> int:
    """Value of the splitting map on M; its meaning depends on n mod 4."""
    M.validate()
    r = M.dim % 4
    if r == 3:
        raise NoSplittingNeeded(f"dimension {M.dim}: Z/eul_{M.dim + 1} = 0, nothing to split")
    if r == 1:
        return kervaire_semicharacteristic(M)
    chi = euler_characteristic(M)
    if r == 2:
        return chi // 2
    return (M.signature + chi) // 2


# --------------------------------------------------------------------------
# number-theoretic gates

def _odd_primes(bound: int) -> list[int]:
    return [int(p) for p in primerange(3, bound + 1)]


def valuation(x, p: int) -> int | None:
    """p-adic valuation of a rational (None for zero)."""
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def adams_m(r: int) -> int:
    """m(r) = prod_p p^{floor(r/(p-1))} over all primes p."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    out = 1
    for p in primerange(2, r + 2):
        out *= int(p) ** (r // (int(p) - 1))
    return out


def vanishing_primes(k: int, bound: int) -> list[int]:
    """Odd primes p <= bound with p >= 2k and p not dividing the numerator of B_{2k}."""
    if k < 1:
        raise ValueError("k must be positive")
    num = abs(bernoulli(2 * k).numerator)
    return [p for p in _odd_primes(bound) if p >= 2 * k and num % p]


@dataclass(frozen=True)
class KappaCoefficient:
    k: int
    prime: int
    value: Fraction  # |B_{2k}/(2k)! * m(2k)|; the sign is not determined
    p_integral: bool
    unit_mod_p: bool
    sign_known: bool = False

    def to_dict(self) -> dict:
        return {
            "k": self.k, "prime": self.prime, "value": str(self.value),
            "p_integral": self.p_integral, "unit_mod_p": self.unit_mod_p,
            "sign_known": self.sign_known,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "KappaCoefficient":
        return cls(d["k"], d["prime"], Fraction(d["value"]), d["p_integral"], d["unit_mod_p"], d["sign_known"])


def kappa_coefficient_unit(k: int, p: int) -> KappaCoefficient:
    """|B_{2k}/(2k)!| m(2k), tested for being a p-adic unit (the sign is left open)."""
    if k < 1:
        raise ValueError("k must be positive")
    GF(p)
    value = abs(bernoulli(2 * k) / factorial(2 * k) * adams_m(2 * k))
    v = valuation(value, p)
    return KappaCoefficient(k, p, value, v >= 0, v == 0)


def wu_vanishing_degrees(p: int, kmax: int) -> list[int]:
    """k <= kmax of the form (p-1)i/2 with i >= 1."""
    GF(p)
    r = (p - 1) // 2
    return list(range(r, kmax + 1, r))


def prime_table(ks: Sequence[int], bound: int) -> list[tuple[int, list[int]]]:
    return [(k, vanishing_primes(k, bound)) for k in ks]
