import math

import pytest

import skewvnj as sv

FAST = sv.SearchConfig(grid_theta=96, grid_t=16, refine_rounds=10, multistart=4)


def test_norms_and_descriptors():
    l1 = sv.Space.lp(1)
    assert l1(3, -4) == pytest.approx(7)
    assert sv.Space.parse("lp:inf")(3, -4) == pytest.approx(4)
    img = sv.Space.parse("img:1,1,1,-1:lp:inf")
    assert img(0.3, -1.2) == pytest.approx(1.5)
    assert img.describe() == "img:1,1,1,-1:lp:inf"
    assert sv.Space.lp(3).dual().describe() == "lp:1.5"
    assert sv.Space.lp(1).dual_eval(3, -4) == pytest.approx(4)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        sv.Space.parse("lp:zz")
    with pytest.raises(ValueError):
        sv.Space.lp(0.5)
    with pytest.raises(NotImplementedError):
        sv.Space.regular_polygon(4).dual()
    with pytest.raises(ValueError):
        sv.SearchConfig(grid_theta=4)


def test_estimates():
    q = sv.Query(sv.ConstantKind.CP_MINUS_INF, 1.0, 1.0, 2.0)
    assert sv.estimate_constant(sv.Space.lp(1), q, FAST).value == pytest.approx(2, abs=1e-3)
    e = sv.estimate_constant(sv.Space.lp(2), q, FAST)
    assert e.value == pytest.approx(1, abs=1e-3)
    assert 0 <= e.witness.t <= 1
    j = sv.estimate_constant(sv.Space.lp(2), sv.Query(sv.ConstantKind.JAMES), FAST)
    assert j.value == pytest.approx(math.sqrt(2), abs=1e-3)


def test_audit_and_bm():
    rep = sv.run_full_audit([sv.Space.lp(1), sv.Space.lp(2)], [sv.AuditParams(1, 1, 2)], FAST)
    assert rep.n_failed == 0
    assert rep.n_passed == len(rep.records) == 12
    assert {r.theorem_id for r in rep.records} >= {"bounds", "dual", "james_bounds"}
    bm = sv.bm_upper_bound(sv.Space.lp(1), sv.Space.lp(2))
    assert bm.upper_bound == pytest.approx(math.sqrt(2), abs=1e-2)
    assert len(bm.transform) == 4


def test_reproduce_and_corpus():
    assert len(sv.standard_corpus()) == 8
    rows = sv.reproduce_paper(FAST)
    assert all(r.passed for r in rows)
    assert rows[-1].expected == 1.0
