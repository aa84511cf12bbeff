import random

import numpy as np
import pytest

from quivergrass.fields import PrimeField
from quivergrass.quiver import parse_arrow_spec
from quivergrass.reps import (Representation, direct_sum, hom_basis,
                              quotient_rep, random_rep, simple_rep,
                              subrep_from_bases, zero_rep)

A2 = parse_arrow_spec("1->2")


def _rep(field, dims, mats):
    return Representation(A2, field, dims,
                          tuple(np.array(m, dtype=np.int64) for m in mats))


def test_hom_simples():
    f = PrimeField(3)
    s1 = simple_rep(A2, f, 0)
    s2 = simple_rep(A2, f, 1)
    assert len(hom_basis(s1, s1)) == 1
    assert len(hom_basis(s1, s2)) == 0
    assert len(hom_basis(s2, s1)) == 0


def test_hom_respects_structure():
    f = PrimeField(5)
    rng = random.Random(1)
    x = random_rep(A2, f, rng)
    y = random_rep(A2, f, rng)
    for h in hom_basis(x, y):
        for k, (s, t) in enumerate(A2.arrows_idx):
            left = f.matmul(y.mats[k], h[s])
            right = f.matmul(h[t], x.mats[k])
            assert np.array_equal(left, right)


def test_direct_sum_dims_and_hom_additivity():
    f = PrimeField(2)
    s1 = simple_rep(A2, f, 0)
    p1 = _rep(f, (1, 1), [[[1]]])
    d = direct_sum(s1, p1)
    assert d.dims == (2, 1)
    assert len(hom_basis(d, d)) == (
        len(hom_basis(s1, s1)) + len(hom_basis(s1, p1))
        + len(hom_basis(p1, s1)) + len(hom_basis(p1, p1)))


def test_subrep_and_quotient():
    f = PrimeField(3)
    m = _rep(f, (2, 2), [[[1, 0], [0, 1]]])
    bases = (np.array([[1], [0]], dtype=np.int64),
             np.array([[1], [0]], dtype=np.int64))
    sub, incl = subrep_from_bases(m, bases)
    assert sub.dims == (1, 1)
    for k, (s, t) in enumerate(A2.arrows_idx):
        assert np.array_equal(
            f.matmul(m.mats[k], incl[s]),
            f.matmul(incl[t], sub.mats[k]))
    quot, proj = quotient_rep(m, bases)
    assert quot.dims == (1, 1)
    for k, (s, t) in enumerate(A2.arrows_idx):
        assert np.array_equal(
            f.matmul(quot.mats[k], proj[s]),
            f.matmul(proj[t], m.mats[k]))


def test_subrep_rejects_non_invariant():
    f = PrimeField(3)
    m = _rep(f, (1, 1), [[[1]]])
    bases = (np.array([[1]], dtype=np.int64), f.zeros(1, 0))
    with pytest.raises(ValueError):
        subrep_from_bases(m, bases)


def test_zero_rep():
    f = PrimeField(2)
    z = zero_rep(A2, f)
    assert z.dims == (0, 0)
    assert len(hom_basis(z, z)) == 0
