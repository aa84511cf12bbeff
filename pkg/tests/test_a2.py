import random

import pytest

from quivergrass import a2
from quivergrass.grassmannian import count_points


def test_blowup_instance_closed_forms():
    # dims (3, 2), rank 2 arrow, target (1, 2)
    inst = a2.A2Instance(3, 2, 2, 1, 2)
    assert a2.is_nonempty(inst)
    assert a2.is_irreducible(inst)
    assert sorted(a2.orbit_params(inst)) == [(0, 0), (1, 0)]
    assert a2.dim(inst) == 2
    # e2 = d2, so the second subspace is forced and the variety is a
    # projective plane; the collapsing map still has a jump fibre over it
    assert a2.is_smooth_variety(inst)
    assert a2.maximal_orbits(inst) == [(1, 0)]
    # the singular point has fibre a projective line, the rest are singletons
    assert a2.fibre_count(inst, 1, 0, 3) == 1
    assert a2.fibre_count(inst, 0, 0, 3) == 4
    assert not a2.is_small(inst)
    assert not a2.one_to_one_over_smooth(inst)


def test_degenerate_flag_instance():
    inst = a2.A2Instance(3, 3, 2, 1, 2)
    assert a2.is_irreducible(inst)
    assert a2.is_small(inst)
    assert a2.one_to_one_over_smooth(inst)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_orbit_counts_sum_to_total(q):
    inst = a2.A2Instance(3, 2, 2, 1, 2)
    counts = a2.orbit_point_counts(inst, q)
    assert sum(counts.values()) == 1 + q + q * q
    m = a2.standard_rep(inst, q)
    brute, _ = count_points(m, (inst.e1, inst.e2))
    assert brute == a2.total_count(inst, q)


def test_orbit_labels_match_enumeration():
    inst = a2.A2Instance(2, 2, 1, 1, 1)
    m = a2.standard_rep(inst, 3)
    _, pts = count_points(m, (1, 1), collect=True)
    seen = {}
    for pt in pts:
        lab = a2.point_orbit(inst, m, pt)
        seen[lab] = seen.get(lab, 0) + 1
    assert seen == a2.orbit_point_counts(inst, 3)
    assert set(seen) == set(a2.orbit_params(inst))


def test_reducible_components():
    # r = 0: the variety is a product of Grassmannians only when e-compatible;
    # here it splits into several components indexed by a
    inst = a2.A2Instance(2, 2, 1, 1, 1)
    labels = a2.component_labels(inst)
    assert labels == [0, 1]
    assert len(a2.maximal_orbits(inst)) == 2


def test_empty_instance():
    # a full line mapping isomorphically cannot sit over the zero subspace
    bad = a2.A2Instance(1, 1, 1, 1, 0)
    assert not a2.is_nonempty(bad)
    assert a2.component_labels(bad) == []
    assert count_points(a2.standard_rep(bad, 2), (1, 0))[0] == 0


def test_orbit_count_degree_matches_dim():
    inst = a2.A2Instance(3, 3, 2, 1, 2)
    for o in a2.orbit_params(inst):
        assert a2.orbit_count_degree(inst, *o) == a2.orbit_dim(inst, *o)


def test_sweep_small():
    summary = a2.sweep(dmax=2, primes=(2, 3), rng=random.Random(0))
    assert summary["failures"] == []
    assert summary["instances"] > 0
    assert summary["checks"] > 0
