"""Dirichlet characters modulo q.

A character is stored by its exponent vector ``(a_i)`` over the cyclic
decomposition of the unit group: it sends the i-th generator to
``exp(2*pi*i * a_i / order_i)``.  Values are kept as exact angles ``k / D``
(``D`` the group exponent) and only rendered to complex numbers on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .arith import discrete_log, log_table, totient, unit_group_structure, TABLE_LIMIT


@lru_cache(maxsize=64)
def _roots_of_unity(d: int) -> np.ndarray:
    k = np.arange(d)
    roots = np.exp(2j * np.pi * k / d)
    roots[0] = 1
    if d % 2 == 0:
        roots[d // 2] = -1
    if d % 4 == 0:
        roots[d // 4] = 1j
        roots[3 * d // 4] = -1j
    roots.setflags(write=False)
    return roots


def render(numerators: np.ndarray, denominator: int) -> np.ndarray:
    """Complex values of angle numerators ``k / D``; ``-1`` marks a zero value."""
    numerators = np.asarray(numerators)
    roots = _roots_of_unity(denominator)
    out = roots[np.where(numerators < 0, 0, numerators)]
    return np.where(numerators < 0, 0, out)


@dataclass(frozen=True)
class Character:
    q: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        orders = unit_group_structure(self.q).orders
        if len(orders) != len(self.exponents):
            raise ValueError(f"exponent vector of length {len(self.exponents)} for modulus {self.q}")
        object.__setattr__(
            self, "exponents", tuple(int(a) % o for a, o in zip(self.exponents, orders))
        )

    @cached_property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @property
    def structure(self):
        return unit_group_structure(self.q)

    @property
    def denominator(self) -> int:
        return self.structure.exponent

    @property
    def index(self) -> int:
        """Mixed-radix rank of the exponent vector (0 for the principal character)."""
        orders = self.structure.orders
        return int(np.ravel_multi_index(self.exponents, orders)) if orders else 0

    def angle(self, n: int) -> Fraction | None:
        """``chi(n) = exp(2*pi*i*angle)``; ``None`` when ``gcd(n, q) > 1``."""
        if math.gcd(int(n), self.q) != 1:
            return None
        logs = discrete_log(self.structure, n)
        return Fraction(
            sum(a * e * Fraction(1, o) for a, e, o in zip(self.exponents, logs, self.structure.orders))
            % 1
        )

    def numerators(self, n) -> np.ndarray:
        """Angle numerators over ``self.denominator`` for an array of n (-1 where chi vanishes)."""
        return character_table(self.q, n, [self.exponents])[0]

    def values(self, n) -> np.ndarray:
        return render(self.numerators(n), self.denominator)

    def __call__(self, n: int) -> complex:
        return evaluate(self, n)

    def conjugate(self) -> "Character":
        return Character(self.q, tuple(-a for a in self.exponents))

    def __mul__(self, other: "Character") -> "Character":
        if other.q != self.q:
            raise ValueError("characters of different moduli")
        return Character(self.q, tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __repr__(self):
        return f"Character(q={self.q}, exponents={self.exponents})"


def evaluate(chi: Character, n: int) -> complex:
    a = chi.angle(n)
    if a is None:
        return 0j
    d = chi.denominator
    return complex(render(np.array([a.numerator * (d // a.denominator)]), d)[0])


def character_exponents(q: int) -> np.ndarray:
    """Exponent vectors of all characters mod q, rows in mixed-radix order."""
    orders = unit_group_structure(q).orders
    if not orders:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(math.prod(orders))
    return np.stack(np.unravel_index(idx, orders), axis=1).astype(np.int64)


def enumerate_characters(q: int) -> list[Character]:
    """All ``phi(q)`` characters modulo q; index 0 is the principal one."""
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    return [Character(q, tuple(int(a) for a in row)) for row in character_exponents(q)]


def _exponent_rows(q: int, n: np.ndarray) -> np.ndarray:
    st = unit_group_structure(q)
    if q <= TABLE_LIMIT:
        return log_table(q)[n % q]
    rows = np.full((n.size, len(st.factors)), -1, dtype=np.int64)
    for j, v in enumerate(n.tolist()):
        if math.gcd(v, q) == 1:
            rows[j] = discrete_log(st, v)
    return rows


def character_table(q: int, n, exponents=None) -> np.ndarray:
    """Angle numerators ``k`` (over the group exponent D) of chi(n).

    Shape ``(n_characters, len(n))``; entries are -1 where gcd(n, q) > 1.
    ``exponents`` defaults to every character mod q in enumeration order.
    """
    st = unit_group_structure(q)
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    if exponents is None:
        A = character_exponents(q)
    else:
        A = np.asarray(exponents, dtype=np.int64).reshape(len(exponents), len(st.factors))
    coprime = np.gcd(n, q) == 1
    d = st.exponent
    if not st.factors:
        table = np.zeros((A.shape[0], n.size), dtype=np.int64)
    else:
        scale = np.array([d // o for o in st.orders], dtype=np.int64)
        E = _exponent_rows(q, n)
        E = np.where(coprime[:, None], E, 0)
        table = (A * scale) @ E.T % d
    table[:, ~coprime] = -1
    return table


def orthogonality_sum(q: int, n: int, m: int) -> complex:
    """``sum_chi chi(n) * conj(chi(m))`` over all characters mod q."""
    if math.gcd(n, q) != 1 or math.gcd(m, q) != 1:
        return 0j
    d = unit_group_structure(q).exponent
    t = character_table(q, [n, m])
    counts = np.bincount((t[:, 0] - t[:, 1]) % d, minlength=d)
    # group equal angles before rendering: only the final sum rounds
    return complex(np.dot(counts, _roots_of_unity(d)))


def value_table_rows(q: int):
    """Rows ``(n, [angle per character])`` for n = 1..q; ``"-"`` marks chi(n) = 0."""
    d = unit_group_structure(q).exponent
    table = character_table(q, np.arange(1, q + 1))
    for j, n in enumerate(range(1, q + 1)):
        yield n, ["-" if k < 0 else str(Fraction(int(k), d)) for k in table[:, j]]


__all__ = [
    "Character",
    "character_exponents",
    "character_table",
    "enumerate_characters",
    "evaluate",
    "orthogonality_sum",
    "render",
    "totient",
    "value_table_rows",
]
