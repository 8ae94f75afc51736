import pytest
from hypothesis import given, settings, strategies as st

from heightlab import families
from heightlab.gridrep import validate_gridrep
from heightlab.homotopy import validate_homotopy
from heightlab.planar import enumerate_stacked_triangulations, k3, k4
from heightlab.solvers import (
    BudgetExceeded,
    ChainViolation,
    gmh_grid_oracle,
    hh_exact,
    lower_bound,
    min_feasible_height,
    shh_exact,
    threads,
    verify_chain,
)


def test_k3_k4():
    assert shh_exact(k3())[0] == 2
    assert shh_exact(k4())[0] == 3
    assert hh_exact(k4())[0] == 3


def test_fig1_at_most_four():
    t = families.fig1_graph()
    k, h = shh_exact(t)
    assert k <= 4
    assert validate_homotopy(t, h) is None


def test_apex_strip_small():
    assert hh_exact(families.apex_strip(7))[0] <= 4


def test_search_from_one_agrees():
    for t in (k3(), k4(), families.nested_triangles(2)):
        assert shh_exact(t, start=1)[0] == shh_exact(t)[0]
        assert hh_exact(t, start=1)[0] == hh_exact(t)[0]


@given(n=st.integers(5, 9), seed=st.integers(0, 10_000))
@settings(max_examples=30)
def test_hh_at_most_shh(n, seed):
    (t,) = enumerate_stacked_triangulations(n, seed=seed, count=1)
    hh, a = hh_exact(t)
    shh, b = shh_exact(t)
    assert lower_bound(t) <= hh <= shh
    assert validate_homotopy(t, a) is None and validate_homotopy(t, b) is None


def test_oracle_k3():
    r = gmh_grid_oracle(k3(), 2, 2)
    assert r.verdict == "feasible"
    assert validate_gridrep(k3(), r.rep) is None and r.rep.height == 2
    assert gmh_grid_oracle(k3(), 1, 6).verdict == "infeasible"


def test_oracle_k4():
    r = gmh_grid_oracle(k4(), 3, 6)
    assert r.verdict == "feasible" and validate_gridrep(k4(), r.rep) is None
    assert gmh_grid_oracle(k4(), 2, 8).verdict == "infeasible"


def test_min_feasible_height():
    assert min_feasible_height(k3()) == 2
    assert min_feasible_height(k4()) == 3


def test_verify_chain_k4():
    r = verify_chain(k4())
    assert (r.pw, r.hh, r.shh, r.op) == (3, 3, 3, 2)
    assert r.ok and r.to_dict()["violations"] == []


def test_verify_chain_nested():
    r = verify_chain(families.nested_triangles(2))
    assert r.pw == 3 <= r.hh and 2 * r.op - 1 <= r.hh


def test_verify_chain_corpus():
    for t in enumerate_stacked_triangulations(7, seed=11, count=15):
        assert verify_chain(t).ok


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as e:
        shh_exact(families.apex_strip(11), budget=50)
    assert e.value.lower >= 1
    if e.value.cert is not None:
        assert e.value.cert.height == e.value.bound


def test_chain_violation_type():
    assert issubclass(ChainViolation, AssertionError)


def test_threads_env(monkeypatch):
    monkeypatch.setenv("HEIGHTLAB_THREADS", "3")
    assert threads() == 3
    monkeypatch.setenv("HEIGHTLAB_THREADS", "junk")
    assert threads() == 1
