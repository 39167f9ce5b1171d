"""Flattening ranks, measures, and matmul recognition."""

import random

import pytest

import slicerank as sr
from slicerank import rank_tools

from helpers import oracle_rank, random_tensor, scramble


@pytest.mark.parametrize("a,b,c", [(1, 1, 1), (2, 3, 4), (3, 3, 3), (1, 4, 2)])
def test_matmul_flattening_ranks(a, b, c):
    t = sr.make_matmul(a, b, c)
    assert sr.x_rank(t) == a * b
    assert sr.y_rank(t) == b * c
    assert sr.z_rank(t) == c * a


@pytest.mark.parametrize("q", [1, 3, 5])
def test_independent_ranks(q):
    t = sr.make_independent(q)
    assert sr.x_rank(t) == sr.y_rank(t) == sr.z_rank(t) == q
    assert oracle_rank(t, "x") == q
    mat = sr.flattening(t, "x")
    assert (len(mat.row_labels), len(mat.col_labels)) == (q, q * q)


@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_cw_ranks(q):
    t = sr.make_cw(q)
    assert sr.x_rank(t) == q + 2
    assert oracle_rank(t, "x") == q + 2


def test_cw_small_rank():
    t = sr.make_cw_small(2)
    assert sr.x_rank(t) == 3
    assert oracle_rank(t, "x") == 3


def test_rank_against_oracles_random():
    rng = random.Random(101)
    for _ in range(100):
        t = random_tensor(rng, max_dim=4)
        for axis in "xyz":
            assert sr.flattening_rank(t, axis) == oracle_rank(t, axis)


def test_rank_against_sympy():
    sympy = pytest.importorskip("sympy")
    rng = random.Random(55)
    from helpers import flattening_dense
    for _ in range(15):
        t = random_tensor(rng, max_dim=3)
        rows = flattening_dense(t, "x")
        mat = sympy.Matrix([[sympy.Rational(v) for v in row] for row in rows])
        assert sr.x_rank(t) == mat.rank()


def test_max_flattening_rank():
    assert sr.max_flattening_rank(sr.make_independent(4)) == 4
    assert sr.max_flattening_rank(sr.make_matmul(2, 3, 4)) == 12
    assert sr.max_flattening_rank(sr.make_cw(2)) == 4


@pytest.mark.parametrize("t,mu", [
    (sr.make_independent(3), 27),
    (sr.make_cw(2), 64),
    (sr.make_t112(2), 96),
])
def test_measure(t, mu):
    assert sr.measure(t) == mu


def test_measure_trims():
    from slicerank.tensor_core import Tensor
    t = Tensor(range(5), range(2), range(2), {(0, 0, 0): 1, (1, 1, 1): 1})
    assert sr.measure(t) == 2 * 2 * 2


def test_slice_rank_flattening_bound():
    assert sr.slice_rank_flattening_bound(sr.make_matmul(2, 3, 4)) == 6
    assert sr.slice_rank_flattening_bound(sr.make_independent(4)) == 4
    assert sr.slice_rank_flattening_bound(sr.make_cw(1)) == 3


# -- recognition ---------------------------------------------------------------

@pytest.mark.parametrize("dims", [(1, 1, 1), (2, 3, 4), (1, 1, 5), (2, 2, 2),
                                  (4, 1, 2)])
def test_recognize_matmul_scrambled(dims):
    rng = random.Random(sum(dims))
    for _ in range(10):
        t = scramble(sr.make_matmul(*dims), rng)
        w = sr.recognize_matmul(t)
        assert w is not None and (w.a, w.b, w.c) == dims


def test_recognize_rotation():
    w = sr.recognize_matmul(sr.rotate(sr.make_matmul(2, 3, 4)))
    assert (w.a, w.b, w.c) == (3, 4, 2)


def test_recognize_rejects_non_matmul():
    for q in (1, 2, 3):
        assert sr.recognize_matmul(sr.make_cw(q)) is None
    assert sr.recognize_matmul(sr.make_cw_small(2)) is None
    assert sr.recognize_matmul(sr.make_t112(2)) is None


def test_recognize_cw_blocks():
    q = 3
    bs = sr.blocks(sr.make_cw(q), sr.cw_partition(q))
    expect = {(0, 0, 2): (1, 1, 1), (0, 2, 0): (1, 1, 1), (2, 0, 0): (1, 1, 1),
              (0, 1, 1): (1, 1, q), (1, 0, 1): (q, 1, 1), (1, 1, 0): (1, q, 1)}
    for key, dims in expect.items():
        w = sr.recognize_matmul(bs[key])
        assert (w.a, w.b, w.c) == dims


def test_recognize_handles_sign_scalings():
    from fractions import Fraction
    from slicerank.tensor_core import Tensor
    t = sr.make_matmul(2, 1, 2)
    entries = dict(t.entries)
    # flip the sign of one x variable's row: fixable by scaling
    for key in list(entries):
        if key[0] == 0:
            entries[key] = Fraction(-1)
    w = sr.recognize_matmul(Tensor(t.x_labels, t.y_labels, t.z_labels, entries))
    assert w is not None and (w.a, w.b, w.c) == (2, 1, 2)


def test_recognize_rejects_unscalable_coefficients():
    from fractions import Fraction
    from slicerank.tensor_core import Tensor
    t = sr.make_matmul(2, 2, 2)
    entries = dict(t.entries)
    # a single flipped term in <2,2,2> is not a coboundary
    entries[(0, 0, 0)] = Fraction(-1)
    assert sr.recognize_matmul(
        Tensor(t.x_labels, t.y_labels, t.z_labels, entries)) is None


def test_recognize_requires_minimal():
    from slicerank.tensor_core import Tensor
    t = sr.make_matmul(2, 2, 2)
    padded = Tensor(range(5), t.y_labels, t.z_labels, t.entries)
    assert sr.recognize_matmul(padded) is None
