"""Symmetric functions in the monomial and elementary bases.

A symmetric function of degree k is stored as ``{partition: coefficient}`` in
the monomial basis ``m_lambda``.  :func:`monomial_to_elementary` rewrites it as
a polynomial in ``e_1, e_2, ...`` by leading-term elimination, using the
classical expansion ``e_mu = sum_lambda M(mu, lambda) m_lambda`` where
``M`` counts 0-1 matrices with row sums ``mu`` and column sums ``lambda``.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Iterator, Mapping

from .errors import InconsistencyError

Partition = tuple


def partitions(n: int, max_part: int | None = None, max_len: int | None = None) -> Iterator[Partition]:
    """Partitions of n as weakly decreasing tuples, in decreasing lexicographic order."""
    if max_part is None:
        max_part = n
    if max_len is not None and max_len < 0:
        return
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first, None if max_len is None else max_len - 1):
            yield (first,) + rest


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0]))


@lru_cache(maxsize=None)
def _count01(rows: tuple, cols: tuple) -> int:
    # rows: sorted multiset of remaining row sums; cols: remaining column sums
    if not cols:
        return 1 if all(r == 0 for r in rows) else 0
    c = cols[0]
    groups: dict[int, int] = {}
    for r in rows:
        if r > 0:
            groups[r] = groups.get(r, 0) + 1
    values = sorted(groups)
    if sum(groups.values()) < c:
        return 0
    total = 0

    def rec(i, left, weight, chosen):
        nonlocal total
        if i == len(values):
            if left == 0:
                new_rows = []
                for v, a in zip(values, chosen):
                    m = groups[v]
                    new_rows += [v] * (m - a) + [v - 1] * a
                new_rows += [0] * (len(rows) - sum(groups.values()))
                total += weight * _count01(tuple(sorted(new_rows)), cols[1:])
            return
        v = values[i]
        for a in range(min(groups[v], left) + 1):
            rec(i + 1, left - a, weight * comb(groups[v], a), chosen + [a])

    rec(0, c, 1, [])
    return total


@lru_cache(maxsize=None)
def elementary_in_monomials(mu: Partition) -> dict:
    """``e_mu`` in the monomial basis (infinitely many variables)."""
    n = sum(mu)
    rows = tuple(sorted(mu))
    out = {}
    for lam in partitions(n, max_part=len(mu)):
        k = _count01(rows, lam)
        if k:
            out[lam] = k
    return out


def monomial_to_elementary(f: Mapping[Partition, object], nvars: int | None = None) -> dict:
    """Rewrite ``sum c_lambda m_lambda`` as ``sum d_mu e_mu`` (e_mu = prod e_{mu_i}).

    With ``nvars`` set, monomial functions of length > nvars are zero, so the
    computation is that of symmetric polynomials in ``nvars`` variables.
    """
    work: dict = {lam: c for lam, c in f.items() if c != 0}
    if nvars is not None:
        work = {lam: c for lam, c in work.items() if len(lam) <= nvars}
    out: dict = {}
    for n in sorted({sum(lam) for lam in work}):
        for lam in partitions(n, max_len=nvars):
            c = work.get(lam, 0)
            if c == 0:
                continue
            mu = conjugate(lam)
            out[mu] = out.get(mu, 0) + c
            for nu, k in elementary_in_monomials(mu).items():
                if nvars is not None and len(nu) > nvars:
                    continue
                work[nu] = work.get(nu, 0) - c * k
    leftover = {lam: c for lam, c in work.items() if c != 0 and (nvars is None or len(lam) <= nvars)}
    if leftover:
        raise InconsistencyError(f"elimination left residual terms {leftover}")
    return {mu: c for mu, c in out.items() if c != 0}


def symmetric_poly_to_partitions(terms: Mapping[tuple, object]) -> dict:
    """Monomial-basis coefficients of a symmetric polynomial given by exponent vectors.

    The coefficient of ``m_lambda`` is read off the sorted exponent vector; the
    caller is trusted to pass a symmetric polynomial.
    """
    out: dict = {}
    for e, c in terms.items():
        if list(e) == sorted(e, reverse=True):
            lam = tuple(k for k in e if k)
            out[lam] = c
    return out
