import numpy as np
import pytest

from quivergrass.ar import indec_table
from quivergrass.fields import PrimeField
from quivergrass.grassmannian import (BudgetExceededError, count_points,
                                      count_polynomial, gaussian_binomial,
                                      stratify, subspaces,
                                      subspaces_containing, tangent_dim)
from quivergrass.quiver import parse_arrow_spec
from quivergrass.reps import Representation

A2 = parse_arrow_spec("1->2")


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(3, 1, 3) == 13
    assert gaussian_binomial(3, 0, 5) == 1
    assert gaussian_binomial(2, 3, 2) == 0


@pytest.mark.parametrize("p,n,k", [(2, 4, 2), (3, 3, 1), (2, 3, 3)])
def test_subspaces_enumeration(p, n, k):
    f = PrimeField(p)
    seen = set()
    for b in subspaces(f, n, k):
        assert b.shape == (n, k)
        assert f.rank(b) == k
        seen.add(tuple(map(tuple, f.row_space(b.T))))
    assert len(seen) == gaussian_binomial(n, k, p)


def test_subspaces_containing():
    f = PrimeField(2)
    l = np.array([[1], [0], [0], [0]], dtype=np.int64)
    subs = list(subspaces_containing(f, 4, 2, l))
    assert len(subs) == gaussian_binomial(3, 1, 2)
    for b in subs:
        assert f.rank(np.concatenate([b, l], axis=1)) == 2


def _blowup(p):
    f = PrimeField(p)
    return Representation(A2, f, (3, 2), (np.array(
        [[1, 0, 0], [0, 1, 0]], dtype=np.int64),))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_count_points_closed_form(p):
    c, _ = count_points(_blowup(p), (1, 2))
    assert c == 1 + p + p * p


def test_count_collect_matches_shortcut():
    m = _blowup(3)
    c1, _ = count_points(m, (1, 2))
    c2, pts = count_points(m, (1, 2), collect=True)
    assert c1 == c2 == len(pts)


def test_count_budget():
    with pytest.raises(BudgetExceededError):
        count_points(_blowup(5), (1, 2), collect=True, budget=2)


def test_count_infeasible_dims():
    assert count_points(_blowup(2), (4, 1))[0] == 0


def test_stratify_blowup():
    m = _blowup(2)
    table = indec_table(A2, m.field)
    strata = stratify(m, (1, 2), table)
    sizes = sorted(len(s.points) for s in strata)
    assert sum(sizes) == 7
    # top stratum is smooth, the special point has a bigger tangent space
    assert strata[0].dim == 2 and strata[0].tangent == 2
    assert any(s.tangent > s.dim for s in strata[1:])


def test_tangent_dim_smooth_grassmannian():
    # the ordinary Grassmannian Gr(1, 3) has dimension 2 everywhere
    f = PrimeField(2)
    q = parse_arrow_spec("1->2")
    m = Representation(q, f, (3, 0), (f.zeros(0, 3),))
    _, pts = count_points(m, (1, 0), collect=True)
    assert len(pts) == 7
    assert all(tangent_dim(m, pt) == 2 for pt in pts)


def test_count_polynomial_fit_and_verify():
    cp = count_polynomial({2: 7, 3: 13, 5: 31, 7: 57})
    assert cp.coeffs == (1, 1, 1)
    assert cp.verified
    assert cp.pretty() == "1 + q + q^2"
    bad = count_polynomial({2: 7, 3: 13, 5: 31, 7: 58})
    assert not bad.verified


def test_count_polynomial_needs_three_primes():
    with pytest.raises(ValueError):
        count_polynomial({2: 3, 3: 4})
