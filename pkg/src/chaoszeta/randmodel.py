"""Random characters, i.i.d. unit-circle variables omega_p and their exact moments."""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .arith import factorize, primes_up_to, totient, unit_group_structure
from .characters import Character


def _key_int(key) -> int:
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError("stream keys must be non-negative")
        return int(key)
    digest = hashlib.blake2b(str(key).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class RandomStream:
    """A (seed, key path) pair naming one reproducible stream of draws.

    Draws depend only on the seed and the path, never on the order in which
    streams are created, so samples can be produced in any schedule.
    """

    seed: int
    path: tuple = ()

    def child(self, *keys) -> "RandomStream":
        return RandomStream(self.seed, self.path + tuple(keys))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=tuple(_key_int(k) for k in self.path))
        return np.random.Generator(np.random.Philox(key=ss.generate_state(2, np.uint64)))


@dataclass(frozen=True)
class OmegaAssignment:
    """omega_p = exp(2*pi*i*theta_p) for every prime p <= N, stored as angles."""

    N: int
    primes: np.ndarray = field(repr=False)
    angles: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.primes.shape != self.angles.shape:
            raise ValueError("one angle per prime required")
        self.primes.setflags(write=False)
        self.angles.setflags(write=False)

    @classmethod
    def constant(cls, N: int, angle: float = 0.0) -> "OmegaAssignment":
        """Degenerate assignment with every omega_p equal to exp(2*pi*i*angle)."""
        p = primes_up_to(N)
        return cls(N, p, np.full(p.size, float(angle)))

    @property
    def values(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.angles)

    def angle_of(self, n: int) -> float:
        n = int(n)
        if n < 1:
            raise ValueError("omega_n needs n >= 1")
        total = 0.0
        for p, e in factorize(n):
            if p > self.N:
                raise ValueError(f"prime factor {p} of {n} exceeds cutoff N={self.N}")
            i = int(np.searchsorted(self.primes, p))
            total += e * self.angles[i]
        return total % 1.0


def sample_omega_angles(N: int, stream: RandomStream, n_samples: int, start: int = 0) -> np.ndarray:
    """Angles theta_p for primes p <= N; row j comes from ``stream.child(start + j)``.

    Within a row the i-th prime takes the i-th draw, so assignments for
    different cutoffs share their common primes.
    """
    P = primes_up_to(N).size
    out = np.empty((n_samples, P))
    for j in range(n_samples):
        out[j] = stream.child(start + j).generator().random(P)
    return out


def sample_omegas(N: int, stream: RandomStream) -> OmegaAssignment:
    if N < 1:
        raise ValueError(f"cutoff must be >= 1, got {N}")
    p = primes_up_to(N)
    return OmegaAssignment(N, p, stream.generator().random(p.size))


def sample_character(q: int, stream: RandomStream) -> Character:
    """Uniform draw from the phi(q) characters modulo q."""
    orders = unit_group_structure(q).orders
    idx = int(stream.generator().integers(totient(q)))
    exps = np.unravel_index(idx, orders) if orders else ()
    return Character(q, tuple(int(a) for a in exps))


def sample_character_indices(q: int, stream: RandomStream, n_samples: int, start: int = 0) -> np.ndarray:
    phi = totient(q)
    return np.array(
        [stream.child(start + j).generator().integers(phi) for j in range(n_samples)], dtype=np.int64
    )


def smallest_prime_factors(M: int) -> np.ndarray:
    spf = np.zeros(M + 1, dtype=np.int64)
    for p in primes_up_to(M):
        block = spf[p :: p]
        block[block == 0] = p
    return spf


def multiplicative_angles(theta: np.ndarray, primes: np.ndarray, M: int) -> np.ndarray:
    """Angles of omega_n for n = 0..M (column 0 unused), completely multiplicatively.

    ``theta`` has shape ``(..., len(primes))``; every prime <= M must be present.
    """
    theta = np.asarray(theta, dtype=float)
    needed = primes_up_to(M)
    if primes.size < needed.size or not np.array_equal(primes[: needed.size], needed):
        raise ValueError(f"omega_n for n <= {M} needs all primes <= {M}")
    spf = smallest_prime_factors(M)
    pos = {int(p): i for i, p in enumerate(primes)}
    out = np.zeros(theta.shape[:-1] + (M + 1,))
    for n in range(2, M + 1):
        p = int(spf[n])
        out[..., n] = (out[..., n // p] + theta[..., pos[p]]) % 1.0
    return out


def omega_of(n: int, assignment: OmegaAssignment) -> complex:
    return complex(np.exp(2j * np.pi * assignment.angle_of(n)))


def _prime_exponents(tuples, which: int) -> Counter:
    total = Counter()
    for t in tuples:
        n, e = t[0], t[which]
        for p, a in factorize(n):
            total[p] += a * e
    return Counter({p: e for p, e in total.items() if e})


def chi_moment_oracle(q: int, tuples) -> int:
    """Exact E[prod chi(n_i)^k_i conj(chi(n_i))^m_i] for chi uniform mod q.

    Factors with k_i = m_i = 0 are identically 1 and do not enter the
    coprimality condition.
    """
    active = [(n, k, m) for n, k, m in tuples if k or m]
    if math.gcd(math.prod(n for n, _, _ in active), q) != 1:
        return 0
    lhs = math.prod(pow(n, k, q) for n, k, _ in active) % q
    rhs = math.prod(pow(n, m, q) for n, _, m in active) % q
    return int(lhs == rhs)


def omega_moment_oracle(tuples) -> int:
    """Exact E[prod omega_{n_i}^k_i conj(omega_{n_i})^m_i]."""
    return int(_prime_exponents(tuples, 1) == _prime_exponents(tuples, 2))
