"""Exact and closed-form reference computations.

Everything here is either an exact finite computation (an average over
all characters, a finite double sum) or a closed form with a stated
truncation bound, so that the experiments always have a second route.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import exp1

from .arith import primes_up_to, totient, unit_group_structure
from .characters import Character, _roots_of_unity, character_table, enumerate_characters, render
from .randmodel import RandomStream
from .testfn import FourierCache, TestFunction, fourier_at


class NonSummableError(ValueError):
    pass


# Summation lemmas over residues r, t in 1..q-1


@dataclass(frozen=True)
class KernelSumSpec:
    """Parameters of the double sums over residues with kernel ``delta_rt - 1/phi(q)``.

    ``weight`` names the table f(r) used by :func:`lemma_sum_zero`:
    ``"one"``, ``"square"`` (r^2), ``"power"`` (r^a) or ``"random"``
    (complex Gaussian drawn from ``weight_seed``).
    """

    q: int
    m: int = 0
    s: int = 0
    a: int = 0
    b: int = 0
    sigma: float = 0.5
    weight: str = "one"
    weight_seed: int = 0

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("kernel sums need q >= 2")
        if min(self.m, self.s, self.a, self.b) < 0:
            raise ValueError("offsets and exponents must be non-negative")
        if self.sigma < 0.5:
            raise ValueError("sigma must be >= 1/2")

    def weights(self) -> np.ndarray:
        r = np.arange(1, self.q, dtype=float)
        if self.weight == "one":
            return np.ones(r.size, dtype=complex)
        if self.weight == "square":
            return (r**2).astype(complex)
        if self.weight == "power":
            return (r**self.a).astype(complex)
        if self.weight == "random":
            g = RandomStream(self.weight_seed, ("lemma-weight", self.q)).generator()
            return g.standard_normal(r.size) + 1j * g.standard_normal(r.size)
        raise ValueError(f"unknown weight {self.weight!r}")


def _coprime_mask(q: int, offset: int = 0) -> np.ndarray:
    """``1_{(offset*q + r, q) = 1}`` for r = 1..q-1."""
    r = np.arange(1, q, dtype=np.int64)
    return np.gcd(offset * q + r, q) == 1


def lemma_sum_zero(spec: KernelSumSpec) -> complex:
    """``sum_{r,t} 1_(mq+r,q)=1 1_(sq+t,q)=1 (delta_rt - 1/phi(q)) f(r)``, computed as a literal double sum."""
    q = spec.q
    cr = _coprime_mask(q, spec.m).astype(float)
    ct = _coprime_mask(q, spec.s).astype(float)
    kernel = np.eye(q - 1) - 1.0 / totient(q)
    return complex(np.einsum("r,t,rt,r->", cr, ct, kernel, spec.weights()))


def _residues(q: int):
    r = np.arange(1, q, dtype=float)
    return r, _coprime_mask(q), r / q


def lemma_sum_ratio2_raw(q: int, a: int, b: int, sigma: float) -> float:
    """``q^-2sigma sum_{r,t} 1 1 |(delta_rt - 1/phi)(r/q)^a (t/q)^b|`` in O(q)."""
    phi = totient(q)
    r, c, x = _residues(q)
    xa = np.where(c, x**a, 0.0)
    xb = np.where(c, x**b, 0.0)
    diag = np.sum(xa * xb)
    # |delta - 1/phi| is 1 - 1/phi on the diagonal and 1/phi off it
    total = diag * (1 - 1 / phi) + (np.sum(xa) * np.sum(xb) - diag) / phi
    return float(total * q ** (-2 * sigma))


def lemma_sum_ratio2(q: int, a: int, b: int, sigma: float) -> float:
    """The second summation bound normalized by its claimed rate ``q^-2(sigma - 1/2)``."""
    return lemma_sum_ratio2_raw(q, a, b, sigma) * q ** (2 * (sigma - 0.5))


def lemma_sum_ratio3_raw(q: int, a: int, b: int, sigma: float) -> float:
    """``(phi q^sigma)^-1 sum_{r,t} 1 1 r^-sigma (r/q)^a (t/q)^b`` in O(q); the sum factorizes."""
    phi = totient(q)
    r, c, x = _residues(q)
    sr = np.sum(np.where(c, r ** (-sigma) * x**a, 0.0))
    st = np.sum(np.where(c, x**b, 0.0))
    return float(sr * st / (phi * q**sigma))


def lemma_sum_ratio3(q: int, a: int, b: int, sigma: float) -> float:
    """The third summation bound normalized by its claimed rate ``q^-(sigma - 1/2)``."""
    return lemma_sum_ratio3_raw(q, a, b, sigma) * q ** (sigma - 0.5)


def lemma_sum_ratio2_direct(q: int, a: int, b: int, sigma: float) -> float:
    """Literal O(q^2) version of :func:`lemma_sum_ratio2_raw` (test oracle)."""
    r = np.arange(1, q, dtype=float)
    c = _coprime_mask(q).astype(float)
    K = np.abs(np.eye(q - 1) - 1.0 / totient(q)) * np.outer(c * (r / q) ** a, c * (r / q) ** b)
    return float(K.sum() * q ** (-2 * sigma))


# Expectations over the uniform law on characters


def exact_expectation(q: int, evaluator: Callable[[Character], complex], characters=None) -> complex:
    """``(1/phi(q)) sum_chi evaluator(chi)``, the exact expectation for chi uniform mod q."""
    chars = enumerate_characters(q) if characters is None else characters
    total = math.fsum(complex(evaluator(c)).real for c in chars) + 1j * math.fsum(
        complex(evaluator(c)).imag for c in chars
    )
    return total / totient(q)


def character_moment(q: int, tuples) -> complex:
    """``E[prod chi(n_i)^k_i conj(chi(n_i))^m_i]`` by enumerating all characters mod q.

    Angles are combined as exact integers over the group exponent before
    rendering, so the only rounding is in the final average.
    """
    st = unit_group_structure(q)
    d = st.exponent
    active = [(n, k, m) for n, k, m in tuples if k or m]
    if not active:
        return 1 + 0j
    table = character_table(q, [n for n, _, _ in active])
    if np.any(table < 0):
        return 0j
    e = np.array([k - m for _, k, m in active], dtype=np.int64)
    angles = (table * e).sum(axis=1) % d
    counts = np.bincount(angles, minlength=d)
    return complex(np.dot(counts, _roots_of_unity(d)) / st.size)


# The variance decomposition


@dataclass(frozen=True)
class KernelSum:
    """Kernel double sum at finite truncation and its split into block terms.

    ``total = S_M + S_L + conj(S_L) + S_LL``: S_M pairs two residues of the
    first block beyond M, S_L pairs a later block with the first block and
    S_LL pairs two later blocks.
    """

    total: float
    S_M: float
    S_L: complex
    S_LL: float
    q: int
    M: int
    L_cutoff: int

    @property
    def S_L_bar(self) -> complex:
        return self.S_L.conjugate()


def kernel_coefficients(q: int, M: int, cache: FourierCache, L_cutoff: int) -> np.ndarray:
    """``a_n`` for n = 1..L q, zeroed where gcd(n, q) > 1 or n <= M."""
    N = L_cutoff * q
    if N > cache.n_max:
        raise ValueError(f"kernel sum needs the cache up to {N}, it holds {cache.n_max}")
    n = np.arange(1, N + 1)
    a = cache.upto(N) / np.sqrt(n)
    return np.where((np.gcd(n, q) == 1) & (n > M), a, 0)


def variance_kernel_sum(q: int, M: int, cache: FourierCache, L_cutoff: int = 3) -> KernelSum:
    """``sum_{n,l = M+1}^{Lq} 1 1 (nl)^-1/2 (1_{n = l mod q} - 1/phi) fhat_n conj(fhat_l)``.

    The kernel only sees residue classes, so the double sum collapses to
    ``sum_r |A_r|^2 - |sum_r A_r|^2 / phi`` with ``A_r`` the class sums of
    ``a_n``: O(Lq) work instead of O((Lq)^2).
    """
    if q < 2:
        raise ValueError("the variance kernel needs q >= 2")
    phi = totient(q)
    a = kernel_coefficients(q, M, cache, L_cutoff).reshape(L_cutoff, q)
    b0 = a[0]
    c = a[1:].sum(axis=0)
    B0, C = b0.sum(), c.sum()
    S_M = float(np.sum(np.abs(b0) ** 2) - abs(B0) ** 2 / phi)
    S_L = complex(np.dot(c, b0.conj()) - C * B0.conjugate() / phi)
    S_LL = float(np.sum(np.abs(c) ** 2) - abs(C) ** 2 / phi)
    return KernelSum(S_M + 2 * S_L.real + S_LL, S_M, S_L, S_LL, q, M, L_cutoff)


def kernel_double_sum(q: int, M: int, cache: FourierCache, L_cutoff: int = 3) -> complex:
    """Literal O((Lq)^2) evaluation of the kernel double sum (test oracle for small q)."""
    a = kernel_coefficients(q, M, cache, L_cutoff)
    n = np.arange(1, a.size + 1)
    K = (n[:, None] % q == n[None, :] % q) - 1.0 / totient(q)
    return complex(a @ K @ a.conj())


def enumeration_variance(q: int, M: int, cache: FourierCache, L_cutoff: int = 3) -> float:
    """``(1/phi) sum_{chi != chi_0} |sum_{M < n <= Lq} chi(n) a_n|^2`` by enumerating characters."""
    N = L_cutoff * q
    a = kernel_coefficients(q, M, cache, L_cutoff)
    d = unit_group_structure(q).exponent
    vals = render(character_table(q, np.arange(1, N + 1)), d)
    partial = vals[1:] @ a
    return float(np.sum(np.abs(partial) ** 2) / totient(q))


def S_M_bound(q: int, M: int, cache: FourierCache) -> float:
    """``sum_{M<r<q} |fhat_r|^2 / r + (phi^-1/2 sum_{M<r<q} r^-1/2 |fhat_r|)^2``."""
    if q - 1 <= M:
        return 0.0
    r = np.arange(M + 1, q)
    fh = np.abs(cache.upto(q - 1)[M:])
    return float(np.sum(fh**2 / r) + (np.sum(fh / np.sqrt(r)) / math.sqrt(totient(q))) ** 2)


def fourier_tail(cache: FourierCache, M: int, N: int | None = None) -> float:
    """``sum_{M < n <= N} |fhat(log n / 2pi)|^2 / n`` (N defaults to the cache length)."""
    N = cache.n_max if N is None else N
    if M >= N:
        return 0.0
    n = np.arange(M + 1, N + 1)
    return float(np.sum(np.abs(cache.upto(N)[M:]) ** 2 / n))


# Smooth numbers


def smooth_numbers(M2: int, cutoff: int) -> np.ndarray:
    """Sorted M2-smooth integers ``<= cutoff``, generated prime by prime."""
    if cutoff < 1:
        return np.zeros(0, dtype=np.int64)
    vals = np.array([1], dtype=np.int64)
    for p in primes_up_to(M2).tolist():
        parts = [vals]
        cur = vals
        while True:
            cur = cur[cur <= cutoff // p] * p
            if not cur.size:
                break
            parts.append(cur)
        vals = np.concatenate(parts)
    return np.sort(vals)


def iter_smooth(M2: int, cutoff: int):
    """M2-smooth integers ``<= cutoff`` in increasing order, from a priority queue."""
    primes = primes_up_to(M2).tolist()
    heap = [1]
    seen = {1}
    while heap:
        n = heapq.heappop(heap)
        yield n
        for p in primes:
            m = n * p
            if m <= cutoff and m not in seen:
                seen.add(m)
                heapq.heappush(heap, m)


def reciprocal_euler_product(M2: int) -> float:
    """``prod_{p <= M2} (1 - 1/p)^-1 = sum over M2-smooth n of 1/n``."""
    p = primes_up_to(M2).astype(float)
    return float(np.prod(1.0 / (1.0 - 1.0 / p)))


@dataclass(frozen=True)
class SmoothSum:
    value: float
    tail_bound: float
    count: int
    cutoff: int


def _default_envelope(weight, cutoff: int) -> float:
    # sup of n * w(n) beyond the cutoff, sampled on a geometric grid
    n = np.unique(np.geomspace(cutoff + 1, min(float(cutoff + 1) ** 4, 9e18), 4000).astype(np.int64))
    nw = n * np.asarray(weight(n), dtype=float)
    if not np.all(np.isfinite(nw)):
        raise NonSummableError("weight is not finite beyond the cutoff")
    if nw[-1] > nw[0] and nw[-1] >= nw.max():
        raise NonSummableError("n * weight(n) grows beyond the cutoff; the smooth series may diverge")
    return float(nw.max())


def smooth_series(M2: int, weight, cutoff: int, envelope: float | None = None) -> SmoothSum:
    """``sum`` of ``weight(n)`` over M2-smooth ``n <= cutoff``, with a bound on the rest.

    ``weight`` maps an int64 array to non-negative reals.  The rest is
    bounded by ``envelope * (prod_{p <= M2}(1 - 1/p)^-1 - sum_{smooth n <= cutoff} 1/n)``
    where ``envelope >= n * weight(n)`` for every n beyond the cutoff; when
    not given it is estimated on a geometric grid.
    """
    n = smooth_numbers(M2, cutoff)
    w = np.asarray(weight(n), dtype=float)
    if np.any(w < 0):
        raise ValueError("smooth_series needs a non-negative weight")
    env = _default_envelope(weight, cutoff) if envelope is None else float(envelope)
    rest = max(reciprocal_euler_product(M2) - math.fsum((1.0 / n).tolist()), 0.0)
    return SmoothSum(math.fsum(w.tolist()), env * rest, int(n.size), int(cutoff))


def _fourier_envelope(f: TestFunction, k0: float, span: float = 64.0) -> float:
    """Estimate of ``sup_{k >= k0} |fhat(k)|^2`` from a fine grid."""
    k = np.linspace(k0, k0 + span, int(span * 256) + 1)
    return float(np.max(np.abs(fourier_at(f, k)) ** 2))


@dataclass(frozen=True)
class M1M2Terms:
    first: float
    second: float
    third: SmoothSum

    @property
    def value(self) -> float:
        return self.first - 2 * self.second + self.third.value


def E_M1M2_terms(cache: FourierCache, M1: int, M2: int, cutoff: int = 10**8) -> M1M2Terms:
    """The three sums of the closed form with weight ``|fhat(log n / 2pi)|^2 / n``."""
    if cutoff < M1:
        raise ValueError("cutoff must be >= M1")
    if M1 > cache.n_max:
        raise ValueError(f"cache holds n <= {cache.n_max}, asked for M1={M1}")

    def weight(n):
        return np.abs(cache.hat(n)) ** 2 / n

    n1 = np.arange(1, M1 + 1)
    w1 = weight(n1)
    smooth1 = smooth_numbers(M2, M1)
    env = _fourier_envelope(cache.f, math.log(cutoff) / (2 * math.pi))
    third = smooth_series(M2, weight, cutoff, envelope=env)
    return M1M2Terms(math.fsum(w1.tolist()), math.fsum(w1[smooth1 - 1].tolist()), third)


def E_M1M2_closed(cache: FourierCache, M1: int, M2: int, cutoff: int = 10**8) -> float:
    """``E|L_{M1,omega}(f) - zeta_{M2,rand}(f)|^2`` in closed form.

    ``sum_{n <= M1} w_n - 2 sum_{n <= M1, M2-smooth} w_n + sum_{M2-smooth} w_n``
    with ``w_n = |fhat(log n / 2pi)|^2 / n``.
    """
    if M1 == 1 and M2 == 1:
        return 0.0
    return E_M1M2_terms(cache, M1, M2, cutoff).value


def E_analytic_closed(s, M1: int, M2: int, cutoff: int | None = None) -> float:
    """``sum_{k <= M1} k^-2sigma - 2 sum_{k <= M1, M2-smooth} k^-2sigma + sum_{M2-smooth} k^-2sigma``.

    Depends on s only through sigma = Re s.  The last sum is the Euler
    product ``prod_{p <= M2}(1 - p^-2sigma)^-1`` unless a cutoff asks for
    the truncated smooth series instead.
    """
    sigma = float(np.real(s))
    if sigma <= 0.5:
        raise ValueError("the closed form needs Re s > 1/2")
    if M1 == 1 and M2 == 1:
        return 0.0
    k = np.arange(1, M1 + 1, dtype=float)
    w = k ** (-2 * sigma)
    first = math.fsum(w.tolist())
    second = math.fsum(w[smooth_numbers(M2, M1) - 1].tolist())
    if cutoff is None:
        p = primes_up_to(M2).astype(float)
        third = float(np.prod(1.0 / (1.0 - p ** (-2 * sigma))))
    else:
        third = smooth_series(M2, lambda n: n.astype(float) ** (-2 * sigma), cutoff).value
    return first - 2 * second + third


# Covariance of the Gaussian part


def gaussian_covariance_closed(u, N: int):
    """``sum_{p <= N} p^(-1 - iu)``."""
    if N < 2:
        raise ValueError("need N >= 2")
    logp = np.log(primes_up_to(N).astype(float))
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.array([np.sum(np.exp(-(1 + 1j * ui) * logp)) for ui in u_arr.ravel()])
    out = out.reshape(u_arr.shape)
    return complex(out[0]) if np.ndim(u) == 0 else out.reshape(np.shape(u))


def prime_power_log_series(u, N: int, K: int = 30):
    """``sum_{p <= N} sum_{k <= K} p^(-k(1 + iu)) / k``, the truncated log Euler product at 1 + iu."""
    logp = np.log(primes_up_to(N).astype(float))
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.empty(u_arr.size, dtype=complex)
    for i, ui in enumerate(u_arr.ravel()):
        z = np.exp(-(1 + 1j * ui) * logp)
        # sum_k z^k / k, innermost term first
        acc = np.zeros_like(z)
        for k in range(K, 0, -1):
            acc = z * (acc + 1.0 / k)
        out[i] = np.sum(acc)
    return complex(out[0]) if np.ndim(u) == 0 else out.reshape(np.shape(u))


def prime_power_correction(u, N: int, K: int = 30):
    """``sum_{p <= N} sum_{2 <= k <= K} p^(-k(1 + iu)) / k``; added to the prime sum it gives the log series."""
    return prime_power_log_series(u, N, K) - gaussian_covariance_closed(u, N)


def prime_tail_estimate(u, N: int):
    """``E_1(iu log N)``, the prime-number-theorem estimate of ``sum_{p > N} p^(-1 - iu)``."""
    u_arr = np.asarray(u, dtype=float)
    out = exp1(1j * u_arr * math.log(N))
    return complex(out) if np.ndim(u) == 0 else out


__all__ = [
    "E_M1M2_closed",
    "E_M1M2_terms",
    "E_analytic_closed",
    "KernelSum",
    "KernelSumSpec",
    "M1M2Terms",
    "NonSummableError",
    "S_M_bound",
    "SmoothSum",
    "character_moment",
    "enumeration_variance",
    "exact_expectation",
    "fourier_tail",
    "gaussian_covariance_closed",
    "iter_smooth",
    "kernel_coefficients",
    "kernel_double_sum",
    "lemma_sum_ratio2",
    "lemma_sum_ratio2_direct",
    "lemma_sum_ratio2_raw",
    "lemma_sum_ratio3",
    "lemma_sum_ratio3_raw",
    "lemma_sum_zero",
    "prime_power_correction",
    "prime_power_log_series",
    "prime_tail_estimate",
    "reciprocal_euler_product",
    "smooth_numbers",
    "smooth_series",
    "variance_kernel_sum",
]
