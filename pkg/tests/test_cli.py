import json
import shutil

import pytest

from gridfloer.cli import main


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_unknot(capsys, corpus):
    code, out, _ = run(capsys, "compute", corpus / "unknot.grid", "--spec", "minus")
    assert code == 0
    assert "FREE ×2, TOR: none, Ord=0" in out


def test_compute_trefoil(capsys, corpus):
    code, out, _ = run(capsys, "compute", corpus / "t23.grid")
    assert code == 0 and "max torsion order 1" in out


def test_compute_full_is_check_only(capsys, corpus):
    code, out, _ = run(capsys, "compute", corpus / "t23.grid", "--spec", "full")
    assert code == 0
    assert out.startswith("d^2 = 0 verified") and "FREE" not in out


def test_compute_json(capsys, corpus):
    code, out, _ = run(capsys, "compute", corpus / "t23.grid", "--spec", "eq", "--json")
    data = json.loads(out)
    assert data["max_torsion_order"] == 1 and "delta" in data["homology"]["torsion"][0]


def test_bounds_text(capsys, corpus):
    code, out, _ = run(capsys, "bounds", corpus / "t34.grid")
    assert "d_ot(K,U) >= 2" in out.splitlines() and "br(K) >= 3" in out.splitlines()


def test_bounds_unknot(capsys, corpus):
    _, out, _ = run(capsys, "bounds", corpus / "unknot.grid", "--json")
    data = json.loads(out)
    assert data["ord_minus"] == data["ord_eq"] == 0


def test_bounds_json_schema(capsys, corpus):
    _, out, _ = run(capsys, "bounds", corpus / "t25.grid", "--json")
    data = json.loads(out)
    assert set(data) == {"name", "n", "components", "ord_minus", "ord_eq", "bounds", "homology",
                         "timing_ms", "convention"}
    assert data["ord_minus"] == 1 and data["ord_eq"] == 1
    assert data["convention"] == "grid-standard-v1"
    assert set(data["bounds"][0]) == {"quantity", "op", "value", "provenance"}
    assert set(data["homology"]) == {"free", "torsion"}
    assert set(data["homology"]["torsion"][0]) == {"k", "m", "a"}


def test_bounds_json_deterministic(capsys, corpus):
    outs = []
    for threads in (1, 2):
        _, out, _ = run(capsys, "bounds", corpus / "t23.grid", "--json", "--threads", threads)
        data = json.loads(out)
        data.pop("timing_ms")
        outs.append(json.dumps(data))
    assert outs[0] == outs[1]


def test_pair(capsys, corpus):
    _, out, _ = run(capsys, "pair", corpus / "t34.grid", corpus / "unknot.grid")
    assert "d_ot(K1,K2) >= 2" in out
    _, out, _ = run(capsys, "pair", corpus / "t23.grid", corpus / "t23.grid")
    assert "d_ot(K1,K2) >= 0" in out and "d_t(K1,K2) >= 0" in out
    _, out, _ = run(capsys, "pair", corpus / "t34.grid", corpus / "t23.grid")
    assert "d_ot(K1,K2) >= 1" in out


def test_torus(capsys, tmp_path):
    code, out, err = run(capsys, "torus", 2, 3)
    assert code == 0 and out.splitlines()[1:] == ["5", "X 3 4 0 1 2", "O 0 1 2 3 4"]
    assert err == ""
    _, _, err = run(capsys, "torus", 4, 6)
    assert "2 components" in err
    target = tmp_path / "t.grid"
    run(capsys, "torus", 2, 5, "-o", target)
    assert target.read_text().startswith("# T(2,5)\n7\n")


def test_torus_bounds(capsys):
    _, out, _ = run(capsys, "torus", 3, 4, "--bounds")
    assert "Ord=2" in out and "d_ot(K,U) >= 2" in out


def test_parse_error_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.grid"
    bad.write_text("3\nX 0 1\nO 1 2 0\n")
    code, _, err = run(capsys, "compute", bad)
    assert code == 2 and "bad.grid" in err and "line 2" in err


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "bounds", tmp_path / "nope.grid")
    assert code == 2 and "nope.grid" in err


def test_size_limit_exit_3(capsys, corpus):
    code, _, err = run(capsys, "compute", corpus / "t34.grid", "--max-grid-size", 5)
    assert code == 3 and "limit" in err
    code, _, _ = run(capsys, "compute", corpus / "t34.grid", "--max-generators", 100)
    assert code == 3


def test_bad_flag_values(capsys, corpus):
    with pytest.raises(SystemExit):
        main(["compute", str(corpus / "t23.grid"), "--threads", "0"])
    with pytest.raises(SystemExit):
        main(["compute", str(corpus / "t23.grid"), "--spec", "plus"])


def test_selftest_skips_large_grids(capsys):
    code, out, _ = run(capsys, "selftest", "--max-grid-size", 5)
    assert code == 0
    assert "skipped" in out and "FAIL" not in out


def test_selftest_corrupted_corpus(capsys, corpus, tmp_path):
    bad = tmp_path / "corpus"
    shutil.copytree(corpus, bad)
    (bad / "t25.grid").write_text("7\nX 0 0 0\n")
    code, _, err = run(capsys, "selftest", "--corpus", bad, "--max-grid-size", 5)
    assert code == 2 and "t25.grid" in err


def test_selftest_env_corpus(capsys, corpus, tmp_path, monkeypatch):
    bad = tmp_path / "corpus"
    shutil.copytree(corpus, bad)
    (bad / "manifest.json").write_text("{not json")
    monkeypatch.setenv("FLOER_CORPUS", str(bad))
    code, _, err = run(capsys, "selftest", "--max-grid-size", 5)
    assert code == 2 and "manifest.json" in err
