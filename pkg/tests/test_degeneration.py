"""Degeneration maps: verification, composition, and the zeroing search."""

import random
from fractions import Fraction

import pytest

import slicerank as sr
from slicerank.degeneration import (
    DegenerationMap,
    LambdaPoly,
    apply_degeneration,
    compose,
    parse_degeneration_map,
    write_degeneration_map,
)

from helpers import random_tensor


def random_monomial_map(rng, t1, dst_shape, general=False):
    """Random degeneration map from t1's axes onto dst_shape."""
    maps = []
    for src_n, dst_n in zip(t1.shape, dst_shape):
        m = {}
        for src in range(src_n):
            for dst in rng.sample(range(dst_n), rng.randint(0, min(2, dst_n))):
                if general and rng.random() < 0.5:
                    poly = LambdaPoly({rng.randint(0, 2): rng.choice((1, 2, -1)),
                                       rng.randint(3, 4): rng.choice((1, -2))})
                else:
                    poly = LambdaPoly({rng.randint(0, 3): rng.choice((1, 2, -1))})
                m[(src, dst)] = poly
        maps.append(m)
    return maps


def random_verified_instance(rng, general=False):
    """A (t1, t2, map) triple that verifies by construction."""
    while True:
        t1 = random_tensor(rng, max_dim=3)
        dst_shape = tuple(rng.randint(1, 3) for _ in range(3))
        maps = random_monomial_map(rng, t1, dst_shape, general=general)
        d = DegenerationMap(maps[0], maps[1], maps[2], order=0)
        h, t2 = apply_degeneration(t1, d, dst_shape)
        if t2 is None:
            continue
        return t1, t2, DegenerationMap(maps[0], maps[1], maps[2], order=h)


def test_identity():
    t = sr.make_cw(2)
    assert sr.verify_degeneration(t, t, sr.identity_map(t)).ok


def test_zeroing_to_blocks_families():
    cases = [
        (sr.make_cw(q), sr.cw_partition(q)) for q in (1, 2, 3)
    ] + [
        (sr.make_cw_small(q), sr.cw_small_partition(q)) for q in (1, 2, 3)
    ] + [
        (sr.make_t112(q), sr.t112_partition(q)) for q in (1, 2)
    ]
    for q in (1, 2, 3):
        t = sr.make_cyclic(q)
        cases.append((t, sr.singleton_partition(t)))
        t = sr.make_cyclic_lower(q)
        cases.append((t, sr.singleton_partition(t)))
    for t, p in cases:
        bs = sr.blocks(t, p)
        for key in bs.keys():
            dmap = sr.zeroing_to_block(bs, key)
            assert dmap.kind == "zeroing"
            res = sr.verify_degeneration(t, bs[key], dmap)
            assert res.ok, (t.meta.get("family"), key, res.detail)


def test_zero_map_diagnostic():
    t = sr.make_cw(1)
    target = sr.make_independent(1)
    res = sr.verify_degeneration(t, target, DegenerationMap({}, {}, {}, 0))
    assert not res.ok
    assert "zero tensor" in res.detail


def test_domain_mismatch_is_input_error():
    t = sr.make_independent(2)
    bad = DegenerationMap({(5, 0): LambdaPoly.one()}, {}, {}, 0)
    with pytest.raises(ValueError):
        sr.verify_degeneration(t, t, bad)


def test_low_degree_diagnostic():
    # map <1> -> <1> with an extra lambda^0 leak below the order
    one = sr.make_independent(1)
    d = DegenerationMap({(0, 0): LambdaPoly({0: 1})},
                        {(0, 0): LambdaPoly({0: 1})},
                        {(0, 0): LambdaPoly({0: 1})}, order=1)
    res = sr.verify_degeneration(one, one, d)
    assert not res.ok and "lambda^0" in res.detail


def test_wrong_coefficient_diagnostic():
    one = sr.make_independent(1)
    d = DegenerationMap({(0, 0): LambdaPoly({0: 2})},
                        {(0, 0): LambdaPoly({0: 1})},
                        {(0, 0): LambdaPoly({0: 1})}, order=0)
    res = sr.verify_degeneration(one, one, d)
    assert not res.ok and "expected" in res.detail


def test_random_instances_verify():
    rng = random.Random(77)
    for i in range(60):
        t1, t2, d = random_verified_instance(rng, general=(i % 2 == 0))
        assert sr.verify_degeneration(t1, t2, d).ok


def test_composition_property():
    rng = random.Random(404)
    checked = 0
    while checked < 50:
        t1, t2, d1 = random_verified_instance(rng, general=(checked % 3 == 0))
        t2b, t3, d2 = random_verified_instance(rng)
        # rebuild the second stage from t2 itself so the chain matches
        maps = random_monomial_map(rng, t2, t3.shape)
        d2 = DegenerationMap(maps[0], maps[1], maps[2], order=0)
        h, t3 = apply_degeneration(t2, d2, t3.shape)
        if t3 is None:
            continue
        d2 = DegenerationMap(maps[0], maps[1], maps[2], order=h)
        composed = compose(d1, d2)
        assert sr.verify_degeneration(t1, t3, composed).ok
        checked += 1


def test_composition_kind_and_order():
    t = sr.make_cw(2)
    bs = sr.blocks(t, sr.cw_partition(2))
    d1 = sr.zeroing_to_block(bs, (0, 1, 1))
    block = bs[(0, 1, 1)]
    d2 = sr.identity_map(block)
    comp = compose(d1, d2)
    assert comp.kind == "zeroing" and comp.order == 0
    assert sr.verify_degeneration(t, block, comp).ok


def test_map_kinds():
    zero = DegenerationMap({(0, 0): LambdaPoly.one()}, {}, {}, 0)
    assert zero.kind == "zeroing"
    mono = DegenerationMap({(0, 0): LambdaPoly({2: Fraction(3)})}, {}, {}, 0)
    assert mono.kind == "monomial"
    split = DegenerationMap({(0, 0): LambdaPoly.one(),
                             (0, 1): LambdaPoly.one()}, {}, {}, 0)
    assert split.kind == "general"
    poly = DegenerationMap({(0, 0): LambdaPoly({0: 1, 1: 1})}, {}, {}, 0)
    assert poly.kind == "general"


# -- zeroing search -------------------------------------------------------------

def test_search_independent():
    for q in range(1, 7):
        res = sr.search_zeroing_independent(sr.make_independent(q))
        assert res.size == q


def test_search_matmul_222():
    # zeroing alone reaches 2; the monomial-degeneration guarantee
    # ceil(0.75 * abc / max) = 3 needs degenerations outside this search
    res = sr.search_zeroing_independent(sr.make_matmul(2, 2, 2))
    assert res.size == 2
    assert 0.75 * 8 / 2 == 3.0


def test_search_cw_small_one():
    assert sr.search_zeroing_independent(sr.make_cw_small(1)).size == 1


def test_search_cw_one():
    # keep {x0,x2} x {y0,y1} x {z0,z1}: x2 y0 z0 + x0 y1 z1 survives, so
    # the maximum is 2 (no three pairwise disjoint terms exist)
    res = sr.search_zeroing_independent(sr.make_cw(1))
    assert res.size == 2


def test_search_witness_is_diagonal():
    rng = random.Random(9)
    for _ in range(40):
        t = random_tensor(rng, max_dim=3, unit=True)
        res = sr.search_zeroing_independent(t)
        xs = {e[0] for e in res.terms}
        ys = {e[1] for e in res.terms}
        zs = {e[2] for e in res.terms}
        assert len(xs) == len(ys) == len(zs) == res.size
        survivors = {e for e in t.entries
                     if e[0] in res.kept_x and e[1] in res.kept_y
                     and e[2] in res.kept_z}
        assert survivors == set(res.terms)


def test_search_monotone_under_direct_sum():
    rng = random.Random(31)
    for _ in range(50):
        a = random_tensor(rng, max_dim=2, unit=True)
        b = random_tensor(rng, max_dim=2, unit=True)
        ra = sr.search_zeroing_independent(a).size
        rb = sr.search_zeroing_independent(b).size
        rs = sr.search_zeroing_independent(sr.direct_sum(a, b)).size
        assert rs >= ra + rb


def test_search_power_and_cap():
    res = sr.search_zeroing_independent(sr.make_cw(1), n=2)
    assert res.size >= 4
    with pytest.raises(ValueError):
        sr.search_zeroing_independent(sr.make_cw(2), n=2)  # 16 vars > cap
    with pytest.raises(ValueError):
        sr.search_zeroing_independent(sr.make_independent(2), n=3)


def test_map_roundtrip():
    rng = random.Random(5)
    for i in range(20):
        t1, _, d = random_verified_instance(rng, general=(i % 2 == 0))
        back = parse_degeneration_map(write_degeneration_map(d))
        assert back.order == d.order
        assert back.alpha == d.alpha and back.beta == d.beta and back.gamma == d.gamma
        assert back.kind == d.kind


def test_map_parse_errors():
    from slicerank.tensor_core import ParseError
    with pytest.raises(ParseError):
        parse_degeneration_map("alpha 0 0 1\n")  # missing coefficient
    with pytest.raises(ParseError):
        parse_degeneration_map("delta 0 0 0 1/1\n")
    with pytest.raises(ParseError):
        parse_degeneration_map("alphaP 0 0 0 1/1 2\n")  # unpaired poly
