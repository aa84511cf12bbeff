import numpy as np
import pytest

from quivergrass.ar import indec_table
from quivergrass.desing import (DesingInstance, desing_report, fibre_count,
                                generic_candidates, iso_name)
from quivergrass.fields import PrimeField
from quivergrass.grassmannian import count_points, stratify
from quivergrass.hqbq import QHat, mhat_explicit
from quivergrass.quiver import parse_arrow_spec

A2 = parse_arrow_spec("1->2")

BLOWUP = DesingInstance(A2, (3, 2), (np.array(
    [[1, 0, 0], [0, 1, 0]], dtype=np.int64),), (1, 2))
DEGFLAG = DesingInstance(A2, (3, 3), (np.array(
    [[1, 0, 0], [0, 0, 0], [0, 0, 1]], dtype=np.int64),), (1, 2))


@pytest.fixture(scope="module")
def blowup_report():
    return desing_report(BLOWUP, [2, 3, 5, 7], deep_primes=[2, 3, 5])


def test_generic_candidates_blowup():
    p = 2
    m = BLOWUP.rep(p)
    table = indec_table(A2, m.field)
    qh = QHat(A2, m.field)
    strata = stratify(m, BLOWUP.e, table)
    cands = generic_candidates(qh, strata)
    assert [iso_name(table, c) for c in cands] == ["[01]+[11]"]


def test_fibre_counts_blowup():
    p = 3
    m = BLOWUP.rep(p)
    table = indec_table(A2, m.field)
    qh = QHat(A2, m.field)
    mh = mhat_explicit(qh, m)
    strata = stratify(m, BLOWUP.e, table)
    nhat = qh.mhat_dim_iso(generic_candidates(qh, strata)[0])
    fibres = sorted(
        fibre_count(mh, pt, nhat) for s in strata for pt in s.points)
    # one special point carries a projective line, the rest are singletons
    assert fibres == [1] * (p * p + p) + [p + 1]
    total, _ = count_points(mh.rep, nhat)
    assert sum(fibres) == total


def test_blowup_report_polynomials(blowup_report):
    r = blowup_report
    assert r["base_polynomial"]["coeffs"] == [1, 1, 1]
    assert r["base_polynomial"]["verified"]
    assert r["total_polynomial"]["coeffs"] == [1, 2, 1]
    assert r["total_polynomial"]["verified"]
    assert r["dim"] == 2


def test_blowup_report_verdicts(blowup_report):
    v = blowup_report["verdicts"]["[01]+[11]"]
    assert v["one_to_one_over_smooth"] is False
    assert v["small"] is False
    entry = blowup_report["per_candidate"]["[01]+[11]"]
    assert entry["identity_ok"]
    assert entry["component_dim"] == 2
    jump = entry["fibre_jumps"][0]
    assert jump["fibre_poly_coeffs"] == [1, 1]
    assert jump["locus_poly_coeffs"] == [1]


def test_degflag_report():
    r = desing_report(DEGFLAG, [2, 3, 5, 7, 11], deep_primes=[2, 3, 5])
    assert r["total_polynomial"]["coeffs"] == [1, 3, 3, 1]
    assert r["total_polynomial"]["verified"]
    v = r["verdicts"]["[01]+[11]"]
    assert v["one_to_one_over_smooth"] is True
    assert v["small"] is True


def test_report_rejects_bad_prime_sets():
    with pytest.raises(ValueError):
        desing_report(BLOWUP, [2, 3])
    with pytest.raises(ValueError):
        desing_report(BLOWUP, [2, 3, 5], deep_primes=[7])
