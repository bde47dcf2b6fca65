import itertools
import math
import json

import numpy as np
import pytest
from hypothesis import given

from pstforge.errors import InvalidInputError
from pstforge.permutation import (
    Cycle,
    SitePermutation,
    antidiagonal_permutation,
    count_transfer_permutations,
    cycle_decompose,
    enumerate_transfer_permutations,
    make_transfer_permutation,
    one_cycle_permutation,
    recompose,
)
from strategies import transfer_permutations


def test_four_sites_give_six_permutations():
    perms = list(enumerate_transfer_permutations(4))
    assert len(perms) == 6
    assert len({p.image for p in perms}) == 6


def test_two_sites_is_swap():
    p = make_transfer_permutation(2, [])
    assert p.image == (2, 1)
    np.testing.assert_array_equal(p.matrix(), [[0, 1], [1, 0]])


def test_shift_permutation_matrix_pattern():
    P = one_cycle_permutation(5).matrix()
    expected = np.zeros((5, 5))
    for a in range(4):
        expected[a, a + 1] = 1
    expected[4, 0] = 1
    np.testing.assert_array_equal(P, expected)
    assert make_transfer_permutation(5, [1, 2, 3]) == one_cycle_permutation(5)


@pytest.mark.parametrize("order", [[2, 2], [0, 1], [4, 1], [1]])
def test_bad_intermediate_order(order):
    with pytest.raises(InvalidInputError):
        make_transfer_permutation(4, order)


def test_image_must_send_first_to_last():
    with pytest.raises(InvalidInputError):
        SitePermutation(3, (1, 3, 2))
    with pytest.raises(InvalidInputError):
        SitePermutation(3, (3, 3, 1))


def test_cycles_of_antidiagonal():
    assert cycle_decompose(antidiagonal_permutation(4)) == [Cycle((1, 4)), Cycle((2, 3))]


def test_cycles_of_shift_permutation():
    (c,) = cycle_decompose(one_cycle_permutation(6))
    assert c.length == 6
    assert c.sites[0] == 1


def test_swap_with_two_fixed_points():
    p = SitePermutation(4, (4, 2, 3, 1))
    assert [c.length for c in cycle_decompose(p)] == [2, 1, 1]


@pytest.mark.parametrize("n, expected", [(2, 1), (4, 6), (6, 120)])
def test_count(n, expected):
    assert count_transfer_permutations(n) == expected
    assert len(list(enumerate_transfer_permutations(n))) == expected


@pytest.mark.parametrize("n", range(2, 8))
def test_one_cycle_count_by_enumeration(n):
    one_cycle = sum(p.is_one_cycle for p in enumerate_transfer_permutations(n))
    assert one_cycle == math.factorial(n - 2)


@given(transfer_permutations())
def test_first_basis_vector_goes_to_last(p):
    e1 = np.zeros(p.n)
    e1[0] = 1
    out = p.matrix() @ e1
    assert out[-1] == 1 and out.sum() == 1


@given(transfer_permutations())
def test_cycles_partition_and_recompose(p):
    cycles = cycle_decompose(p)
    sites = [s for c in cycles for s in c.sites]
    assert sorted(sites) == list(range(1, p.n + 1))
    assert [c.sites[0] for c in cycles] == sorted(c.sites[0] for c in cycles)
    assert all(c.sites[0] == min(c.sites) for c in cycles)
    assert any(1 in c.sites and p.n in c.sites for c in cycles)
    for c in cycles:
        for k, s in enumerate(c.sites):
            assert p(s) == c.sites[(k + 1) % c.length]
    assert recompose(cycles, p.n) == p


def test_json_round_trip():
    p = make_transfer_permutation(5, [3, 1, 4])
    text = json.dumps(p.to_dict())
    assert json.loads(text) == {"n": 5, "image": [5, 3, 1, 4, 2]}
    assert SitePermutation.from_dict(json.loads(text)) == p


def test_enumeration_matches_brute_force():
    brute = {
        perm for perm in itertools.permutations(range(1, 6)) if perm[0] == 5
    }
    assert {p.image for p in enumerate_transfer_permutations(5)} == brute
