import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chaoszeta.arith import totient
from chaoszeta.characters import (
    Character,
    character_table,
    enumerate_characters,
    evaluate,
    orthogonality_sum,
    value_table_rows,
)


@pytest.mark.parametrize("q, count", [(1, 1), (2, 1), (5, 4), (12, 4), (100, 40)])
def test_enumeration_size_and_distinct(q, count):
    chars = enumerate_characters(q)
    assert len(chars) == count == totient(q)
    assert chars[0].is_principal
    tables = {tuple(np.round(c.values(np.arange(1, q + 1)), 12)) for c in chars}
    assert len(tables) == count


def test_evaluate_examples():
    chars = enumerate_characters(5)
    assert evaluate(chars[0], 3) == 1
    assert all(evaluate(c, 10) == 0 for c in chars)
    chi = Character(5, (1,))
    g = chi.structure.generators[0]
    assert g == 2
    assert evaluate(chi, 2) == 1j
    assert chi.angle(2) == 1 / 4


@pytest.mark.parametrize("n, m, expected", [(2, 7, 4), (2, 3, 0), (5, 2, 0)])
def test_orthogonality_examples(n, m, expected):
    assert orthogonality_sum(5, n, m) == expected


def test_orthogonality_small_moduli():
    for q in range(1, 51):
        phi = totient(q)
        for n in range(1, q):
            for m in range(1, q):
                want = phi if (n % q == m % q and math.gcd(n, q) == 1) else 0
                assert abs(orthogonality_sum(q, n, m) - want) <= 1e-10


@pytest.mark.parametrize("q", [3, 4, 8, 9, 15, 24, 49, 60, 97, 100])
def test_multiplicative_and_periodic(q):
    n = np.arange(1, 3 * q + 1)
    T = np.stack([c.values(n) for c in enumerate_characters(q)])
    for m in range(1, 3 * q + 1):
        prod_vals = np.stack([c.values(m * n) for c in enumerate_characters(q)])
        assert np.allclose(prod_vals, T[:, m - 1 : m] * T, atol=1e-12)
    assert np.allclose(T[:, q:], T[:, :-q], atol=0)
    coprime = np.gcd(n, q) == 1
    assert np.all(T[:, ~coprime] == 0)
    assert np.allclose(np.abs(T[:, coprime]), 1, atol=1e-15)


@given(st.integers(2, 300), st.data())
@settings(max_examples=60, deadline=None)
def test_group_closure(q, data):
    chars = enumerate_characters(q)
    a = data.draw(st.sampled_from(chars))
    b = data.draw(st.sampled_from(chars))
    c = a * b
    assert c in chars
    n = np.arange(1, q + 1)
    assert np.allclose(c.values(n), a.values(n) * b.values(n), atol=1e-12)
    assert np.allclose(a.conjugate().values(n), np.conj(a.values(n)), atol=1e-15)


def test_index_is_mixed_radix_rank():
    for q in (8, 15, 21):
        for j, c in enumerate(enumerate_characters(q)):
            assert c.index == j


def test_values_match_scalar_evaluate():
    for q in (7, 16, 45):
        for c in enumerate_characters(q):
            assert np.allclose(c.values(np.arange(1, 40)), [evaluate(c, n) for n in range(1, 40)], atol=0)


def test_table_angles_are_exact():
    # quarter-turn angles render to exact complex units
    vals = Character(5, (1,)).values(np.arange(1, 5))
    assert vals.tolist() == [1, 1j, -1j, -1]
    assert character_table(5, [5, 10]).tolist() == [[-1, -1]] * 4


def test_value_table_rows():
    rows = list(value_table_rows(5))
    assert len(rows) == 5
    assert rows[1] == (2, ["0", "1/4", "1/2", "3/4"])
    assert rows[4] == (5, ["-"] * 4)


def test_bad_exponent_vector():
    with pytest.raises(ValueError):
        Character(8, (1,))
