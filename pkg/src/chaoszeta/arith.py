"""Exact integer arithmetic: factorization, totients, unit groups mod q and discrete logs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# discrete logs are tabulated up to this modulus; baby-step giant-step beyond
TABLE_LIMIT = 10**6

_WHEEL_INCREMENTS = (4, 2, 4, 2, 4, 6, 2, 6)


class NotCoprimeError(ValueError):
    pass


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n`` as ``[(p, e), ...]`` sorted by prime.

    Trial division with a 2·3·5 wheel. ``factorize(1) == []``.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    d, i = 7, 0
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += _WHEEL_INCREMENTS[i]
        i = (i + 1) & 7
    if n > 1:
        out.append((n, 1))
    return out


def distinct_primes(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def totient(q: int) -> int:
    if q < 1:
        raise ValueError(f"totient needs q >= 1, got {q}")
    phi = q
    for p, _ in factorize(q):
        phi = phi // p * (p - 1)
    return phi


def primes_up_to(n: int) -> np.ndarray:
    """All primes ``<= n`` (sieve of Eratosthenes), as an int64 array."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for i in range(3, math.isqrt(n) + 1, 2):
        if sieve[i]:
            sieve[i * i :: 2 * i] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def multiplicative_order(a: int, n: int, group_order: int) -> int:
    """Order of ``a`` modulo ``n``, given a multiple ``group_order`` of it."""
    order = group_order
    for p, _ in factorize(group_order):
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order


def primitive_root(m: int) -> int:
    """Smallest primitive root modulo ``m`` (``m`` = 2, 4, p^k or 2p^k)."""
    if m == 2:
        return 1
    if m == 4:
        return 3
    phi = totient(m)
    cofactors = [phi // p for p, _ in factorize(phi)]
    for g in range(2, m):
        if math.gcd(g, m) == 1 and all(pow(g, c, m) != 1 for c in cofactors):
            return g
    raise ValueError(f"no primitive root modulo {m}")


@dataclass(frozen=True)
class CyclicFactor:
    generator: int  # residue mod q
    order: int
    prime: int  # prime of the CRT component this factor lives on
    modulus: int  # prime-power component p^k


@dataclass(frozen=True)
class UnitGroupStructure:
    """Cyclic decomposition of (Z/qZ)^* obtained through CRT.

    Each generator is 1 modulo every prime-power component except its own.
    """

    q: int
    factors: tuple[CyclicFactor, ...]

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(c.order for c in self.factors)

    @property
    def generators(self) -> tuple[int, ...]:
        return tuple(c.generator for c in self.factors)

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def exponent(self) -> int:
        """Least common multiple of the cyclic orders (1 for the trivial group)."""
        return math.lcm(*self.orders) if self.factors else 1

    def power(self, exponents) -> int:
        """Residue ``prod g_i^{e_i} mod q``."""
        r = 1 % self.q
        for c, e in zip(self.factors, exponents):
            r = r * pow(c.generator, int(e), self.q) % self.q
        return r


def _crt_lift(residue: int, modulus: int, q: int) -> int:
    """Residue mod q congruent to ``residue`` mod ``modulus`` and to 1 mod q/modulus."""
    rest = q // modulus
    if rest == 1:
        return residue % q
    # x = residue + modulus * t with x = 1 (mod rest)
    t = (1 - residue) * pow(modulus, -1, rest) % rest
    return (residue + modulus * t) % q


@lru_cache(maxsize=256)
def unit_group_structure(q: int) -> UnitGroupStructure:
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    factors = []
    for p, k in factorize(q):
        pk = p**k
        if p == 2:
            if k == 1:
                continue
            factors.append(CyclicFactor(_crt_lift(pk - 1, pk, q), 2, 2, pk))
            if k >= 3:
                factors.append(CyclicFactor(_crt_lift(5, pk, q), 2 ** (k - 2), 2, pk))
        else:
            g = primitive_root(pk)
            factors.append(CyclicFactor(_crt_lift(g, pk, q), pk - pk // p, p, pk))
    return UnitGroupStructure(q, tuple(factors))


def _bsgs(g: int, h: int, n: int, order: int) -> int:
    """Solve ``g^x = h (mod n)`` with ``0 <= x < order``."""
    m = math.isqrt(order) + 1
    baby = {}
    e = 1
    for j in range(m):
        baby.setdefault(e, j)
        e = e * g % n
    step = pow(g, -m, n)
    gamma = h % n
    for i in range(m):
        j = baby.get(gamma)
        if j is not None:
            return (i * m + j) % order
        gamma = gamma * step % n
    raise ValueError(f"{h} is not a power of {g} modulo {n}")


@lru_cache(maxsize=32)
def _log_table(q: int) -> np.ndarray:
    """Row ``n`` holds the exponent vector of ``n``; rows with gcd(n, q) > 1 are -1."""
    st = unit_group_structure(q)
    r = len(st.factors)
    table = np.full((q, r), -1, dtype=np.int64)
    residues = np.array([1 % q], dtype=np.int64)
    for c in st.factors:
        powers = np.empty(c.order, dtype=np.int64)
        acc = 1
        for e in range(c.order):
            powers[e] = acc
            acc = acc * c.generator % q
        residues = (residues[:, None] * powers[None, :] % q).ravel()
    # residues enumerates exponent vectors in C (row-major) order
    if r:
        idx = np.arange(residues.size)
        table[residues] = np.stack(np.unravel_index(idx, st.orders), axis=1)
    table.setflags(write=False)
    return table


def log_table(q: int) -> np.ndarray:
    """Full discrete-log table for ``q <= TABLE_LIMIT`` (shape ``(q, r)``)."""
    if q > TABLE_LIMIT:
        raise ValueError(f"log table only available for q <= {TABLE_LIMIT}")
    return _log_table(q)


def _component_logs(st: UnitGroupStructure, n: int) -> tuple[int, ...]:
    out = []
    factors = st.factors
    i = 0
    while i < len(factors):
        c = factors[i]
        pk = c.modulus
        a = n % pk
        if c.prime == 2:
            sign = 0 if a % 4 == 1 else 1
            out.append(sign)
            if i + 1 < len(factors) and factors[i + 1].modulus == pk:
                nxt = factors[i + 1]
                b = a if sign == 0 else (-a) % pk
                out.append(_bsgs(5, b, pk, nxt.order))
                i += 1
        else:
            out.append(_bsgs(c.generator % pk, a, pk, c.order))
        i += 1
    return tuple(out)


def discrete_log(structure: UnitGroupStructure, n: int) -> tuple[int, ...]:
    """Exponent vector ``e`` with ``prod g_i^{e_i} = n (mod q)``."""
    q = structure.q
    n = int(n)
    if math.gcd(n, q) != 1:
        raise NotCoprimeError(f"gcd({n}, {q}) > 1 has no discrete log")
    if q <= TABLE_LIMIT:
        return tuple(int(e) for e in _log_table(q)[n % q])
    return _component_logs(structure, n)
