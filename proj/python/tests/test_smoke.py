import copy

import pytest

import toricnef as tn

SIMPLEX = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, -1, -1, -1]]


def test_instances():
    assert set(tn.instance_names()) >= {"quintic-quotient", "p4", "p1xp3"}


@pytest.mark.parametrize("name", ["p4", "p1xp3"])
def test_control_pipelines(name):
    r = tn.verify(name)
    assert r["passed"]
    assert "certificate" not in r
    cert = {c["name"]: c for c in r["checks"]}["certificate"]
    assert cert["status"] == "pass"


def test_timing_is_opt_in():
    assert "seconds" not in str(tn.verify("p4"))
    assert "seconds" in str(tn.verify("p4", timing=True))


def test_quotient_dual_and_census():
    inv = tn.invariant_lattice(5, [[0, 1, 2, 3, 4], [0, 1, 3, 1, 0]])
    assert inv["index"] == 25
    delta = [[4, -1, -1, -1], [-1, 4, -1, -1], [-1, -1, 4, -1], [-1, -1, -1, 4], [-1, -1, -1, -1]]
    assert sorted(tn.polar_dual(delta)) == sorted(SIMPLEX)
    assert sorted(tn.polar_dual(tn.polar_dual(delta))) == sorted(delta)
    assert tn.census(SIMPLEX) == [5, 0, 0, 0, 1]
    assert len(tn.lattice_points(delta)) == 126


def test_custom_instance():
    r = tn.verify(custom={"name": "trivial", "order": "1", "weights": [[0, 0, 0, 0, 0]]})
    assert r["instance"] == "trivial"
    assert r["passed"]


def test_normal_forms():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    D, U, V = tn.snf(A)
    assert [D[i][i] for i in range(3)] == [2, 6, 12]
    H, U = tn.hnf(A)
    prod = [[sum(U[i][k] * A[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert prod == H


def test_circuit_and_singularities():
    c = tn.circuit([[1, 0], [0, 1], [-1, -1]], [0, 1, 2])
    assert c["coeffs"] == [1, 1, 1]
    assert tn.circuit([[1, 0], [2, 0]], [0]) is None
    fan = {"rays": [[1, 0], [1, 5]], "max_cones": [[0, 1]]}
    top = [s for s in tn.singularities(fan) if s["dim"] == 2]
    assert top[0]["multiplicity"] == 5
    assert not top[0]["smooth"]
    p2 = tn.face_fan([[1, 0], [0, 1], [-1, -1]])
    assert all(s["smooth"] for s in tn.singularities(p2))


def test_errors():
    with pytest.raises(tn.InputError):
        tn.polar_dual("not a polytope")
    with pytest.raises(tn.InputError):
        tn.check_certificate({"kind": "report"})
    with pytest.raises(tn.ToricError):
        tn.verify("no-such-instance")


@pytest.fixture(scope="module")
def quintic(tmp_path_factory):
    cache = tmp_path_factory.mktemp("cache") / "quintic.jsonl"
    return tn.verify("quintic-quotient", graph_cache=cache)


def test_quintic_certificate(quintic):
    cert = quintic["certificate"]
    assert tn.check_certificate(cert)["pass"]
    bad = copy.deepcopy(cert)
    bad["face"]["D"][0] = "12345"
    out = tn.check_certificate(bad)
    assert not out["pass"]
    assert out["failure"]
