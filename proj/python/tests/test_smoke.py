import json
from pathlib import Path

import pytest

import latticeforge as lf

FIXTURES = Path(lf.FIXTURE_DIR)


def test_fixture_report_matches_expectations():
    s = lf.load_scenario(FIXTURES / "quaternion_zeta5.json")
    report = lf.run_scenario(s)
    assert report["summary"]["kissing"] == 240
    assert report["summary"]["certificate"] == "E8"
    assert lf.mismatches(s, report) == []


def test_run_accepts_text_and_path():
    path = FIXTURES / "f7_squared.json"
    a = lf.run_scenario(path)
    b = lf.run_scenario(path.read_text())
    assert json.dumps(a) == json.dumps(b)


def test_list_divisors_x4_plus_1_mod_3():
    t = lf.list_divisors(FIXTURES / "table_x4p1.json")
    row = t["tables"][0]
    assert row["p"] == 3
    assert sum(d["self_dual"] for d in row["divisors"]) == 2


def test_factor_over_f3():
    # X^4 + 1 = (X^2 + X + 2)(X^2 + 2X + 2) mod 3
    assert sorted(lf.factor(3, [1, 0, 0, 0, 1])) == [([2, 1, 1], 1), ([2, 2, 1], 1)]


def test_invariants_and_kissing_of_e8():
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = 2
    for a, b in [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]:
        g[a - 1][b - 1] = g[b - 1][a - 1] = -1
    gram = [[str(x) for x in row] for row in g]
    inv = lf.lattice_invariants(gram)
    assert inv == {"rank": 8, "det": "1", "integral": True, "even": True, "unimodular": True}
    assert lf.minimum_and_kissing(gram) == ("2", 240)


def test_errors_map_to_python_exceptions():
    s = lf.load_scenario(FIXTURES / "quaternion_zeta5.json")
    s["lambda"] = "5"
    with pytest.raises(lf.PreconditionError):
        lf.run_scenario(s)
    big = [["1" if i == j else "0" for j in range(40)] for i in range(40)]
    with pytest.raises(lf.UnsupportedError):
        lf.minimum_and_kissing(big)
    with pytest.raises(ValueError):
        lf.lattice_invariants([["0.5"]])


def test_quick_selfcheck():
    passed, failed, log = lf.selfcheck(quick=True)
    assert failed == 0
    assert passed >= 20
