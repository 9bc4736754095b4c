"""CLI: JSON schemas, exit codes, deterministic rendered output."""

import json
import os

import pytest

from padicperiods.cli import main

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_roots_command(tmp_path, capsys):
    poly = _write(tmp_path, "poly.json",
                  {"ctx": {"p": 5, "prec": 24}, "coeffs": [-4, 0, 1]})
    code, out, _ = _run(capsys, ["roots", "--poly", poly])
    assert code == 0
    data = json.loads(out)
    assert len(data["roots"]) == 2
    assert all(r["multiplicity"] == 1 for r in data["roots"])
    # the square roots of 4 are +-2: residues 2 and 3 mod 5
    residues = sorted(int(r["root"]["unit_base10"]) % 5 for r in data["roots"])
    assert residues == [2, 3]


def test_recognize_command(tmp_path, capsys):
    inp = _write(tmp_path, "rec.json", {
        "field": {"minpoly": [-2, 3, -1, 1]},
        "embedding": {"p": {"p": 5, "prec": 40}, "residue": 3},
        "value": 7,
        "height_bound": 100, "denom_bound": 3,
    })
    code, out, _ = _run(capsys, ["recognize", "--input", inp])
    assert code == 0
    assert json.loads(out)["coeffs"] == ["7", "0", "0"]


def test_recognize_failure_is_exit_1(tmp_path, capsys):
    inp = _write(tmp_path, "rec.json", {
        "field": {"minpoly": [-2, 3, -1, 1]},
        "embedding": {"p": {"p": 5, "prec": 40}, "residue": 3},
        "value": [{"v": 0, "unit": 987654321987654321, "prec": 40,
                   "coord": "1"}],
        "height_bound": 10, "denom_bound": 2,
    })
    code, out, _ = _run(capsys, ["recognize", "--input", inp])
    assert code == 1
    data = json.loads(out)
    assert data["type"] == "NotFound"


def test_schema_error_pointer(tmp_path, capsys):
    lat = _write(tmp_path, "lat.json", {
        "ctx": {"p": 5, "prec": 30},
        "matrix": [[[{"v": 0, "unit": 2, "coord": "1"}], 3], [2, 7]],
    })
    rhs = _write(tmp_path, "rhs.json", {
        "ctx": {"p": 5, "prec": 30},
        "matrix": [[6, 3], [2, 7]],
    })
    code, _, err = _run(capsys, ["isogeny", "--lhs", lat, "--rhs", rhs])
    assert code == 2
    assert "/matrix/0/0/0/prec" in err


def test_missing_file_is_exit_2(tmp_path, capsys):
    code, _, err = _run(capsys, ["roots", "--poly", str(tmp_path / "nope.json")])
    assert code == 2


def test_prec_floor_enforced(tmp_path, capsys):
    poly = _write(tmp_path, "poly.json",
                  {"ctx": {"p": 5}, "coeffs": [-4, 0, 1]})
    code, _, err = _run(capsys, ["roots", "--poly", poly, "--prec", "10"])
    assert code == 2
    assert "at least 20" in err


def test_isogeny_command_planted(tmp_path, capsys):
    # W = V^B for B = (2 1; 1 1); the search returns a verified pair
    p, prec = 5, 40
    import random
    rng = random.Random(90)

    def elt(v):
        u = rng.randrange(1, p ** prec)
        while u % p == 0:
            u = rng.randrange(1, p ** prec)
        return [{"v": v, "unit": u, "prec": v + prec, "coord": "1"}]

    V = [[elt(1), elt(2)], [elt(3), elt(1)]]

    def as_num(e):
        return e[0]["unit"] * p ** e[0]["v"]

    lhs = _write(tmp_path, "lhs.json", {"ctx": {"p": p, "prec": prec}, "matrix": V})
    B = [[2, 1], [1, 1]]
    W = [[None, None], [None, None]]
    for i in range(2):
        for j in range(2):
            val = B[i][0] * V[0][j][0]["v"] + B[i][1] * V[1][j][0]["v"]
            unit = (pow(V[0][j][0]["unit"], B[i][0], p ** prec)
                    * pow(V[1][j][0]["unit"], B[i][1], p ** prec)) % p ** prec
            W[i][j] = [{"v": val, "unit": unit, "prec": val + prec, "coord": "1"}]
    rhs = _write(tmp_path, "rhs.json", {"ctx": {"p": p, "prec": prec}, "matrix": W})
    code, out, _ = _run(capsys, ["isogeny", "--lhs", lhs, "--rhs", rhs])
    assert code == 0
    data = json.loads(out)
    assert data["verified"] is True


def test_linv_command_on_fixture(tmp_path, capsys):
    lattice = json.load(open(os.path.join(FIXTURES, "lattice_5adic_W.json")))
    hecke = json.load(open(os.path.join(FIXTURES, "hecke_5adic.json")))
    path = _write(tmp_path, "linv.json", {
        "lattice": {"ctx": lattice["ctx"], "matrix": lattice["matrix"]},
        "hecke": {"matrix": hecke["matrix"], "charpoly": hecke["charpoly"]},
    })
    code, out, _ = _run(capsys, ["linv", "--input", path])
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"a", "b", "convention", "prec"}
    assert data["a"]["v"] == "2"
    assert data["b"]["v"] == "1"


def test_linv_charpoly_mismatch(tmp_path, capsys):
    lattice = json.load(open(os.path.join(FIXTURES, "lattice_5adic_W.json")))
    path = _write(tmp_path, "linv.json", {
        "lattice": {"ctx": lattice["ctx"], "matrix": lattice["matrix"]},
        "hecke": {"matrix": [[-2, 2], [1, 1]], "charpoly": [1, 0, -4]},
    })
    code, _, err = _run(capsys, ["linv", "--input", path])
    assert code == 2
    assert "/hecke/charpoly" in err


def test_invariants_command(tmp_path, capsys):
    # a small synthetic period matrix with admissible valuations
    p, prec = 5, 24
    mat = _write(tmp_path, "mat.json", {
        "ctx": {"p": p, "prec": prec},
        "A": [{"v": -2, "unit": 1 + 2 * 5 + 5 ** 3, "prec": prec - 2, "coord": "1"}],
        "B": [{"v": 0, "unit": 2 + 5 ** 2, "prec": prec, "coord": "1"}],
        "D": [{"v": -2, "unit": 3 + 5 + 5 ** 2, "prec": prec - 2, "coord": "1"}],
    })
    code, out, _ = _run(capsys, ["invariants", "--matrix", mat])
    assert code == 0
    data = json.loads(out)
    assert set(data) >= {"i1", "i2", "i3", "prec"}


def test_out_file_matches_stdout(tmp_path, capsys):
    poly = _write(tmp_path, "poly.json",
                  {"ctx": {"p": 7, "prec": 22}, "coeffs": [-1, 0, 0, 1]})
    dest = tmp_path / "result.json"
    code, out, _ = _run(capsys, ["roots", "--poly", poly, "--out", str(dest)])
    assert code == 0
    assert dest.read_text() == out
    # deterministic: a second run produces byte-identical output
    code2, out2, _ = _run(capsys, ["roots", "--poly", poly])
    assert out2 == out


def test_no_command_prints_help(capsys):
    code, out, _ = _run(capsys, [])
    assert code == 2
