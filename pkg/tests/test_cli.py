"""Command-line surface: schemas, exit codes, determinism."""

import json

from wpimod import tableau_to_json
from wpimod.cli import run

from helpers import GL2, bad_pattern_upper, gl2_tableau, rel, standard_gl2
from test_gt_module import reducible_gl3_pair


def write_relations(tmp_path, name, C):
    obj = {"v": 1, "pyramid": C.pyramid.to_json(), **C.to_json()}
    p = tmp_path / name
    p.write_text(json.dumps(obj) + "\n", encoding="utf-8")
    return str(p)


def write_tableau(tmp_path, name, l):
    obj = {"v": 1, **tableau_to_json(l)}
    p = tmp_path / name
    p.write_text(json.dumps(obj) + "\n", encoding="utf-8")
    return str(p)


def write_weights(tmp_path, name, weights):
    obj = {"v": 1, "weights": [[str(x) for x in w] for w in weights]}
    p = tmp_path / name
    p.write_text(json.dumps(obj) + "\n", encoding="utf-8")
    return str(p)


def invoke(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    assert out.endswith("\n")
    return code, json.loads(out)


def test_check_admissible_standard(tmp_path, capsys):
    path = write_relations(tmp_path, "s.json", standard_gl2())
    code, report = invoke(capsys, ["check-admissible", "--relations", path])
    assert code == 0
    assert report["admissible"] is True
    assert report["v"] == 1


def test_check_admissible_negative(tmp_path, capsys):
    path = write_relations(tmp_path, "bad.json", bad_pattern_upper())
    code, report = invoke(capsys, ["check-admissible", "--relations", path])
    assert code == 3
    assert report["admissible"] is False
    assert report["certificate"]["reason"] == "unbridged"


def test_malformed_json_reports_position(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text('{"v": 1,\n  "edges": [}\n', encoding="utf-8")
    code, report = invoke(capsys, ["check-admissible", "--relations", str(p)])
    assert code == 4
    assert "line 2" in report["error"] and "column" in report["error"]


def test_missing_file_and_bad_version(tmp_path, capsys):
    code, report = invoke(
        capsys, ["check-admissible", "--relations", str(tmp_path / "none.json")]
    )
    assert code == 4 and "not found" in report["error"]
    p = tmp_path / "v0.json"
    p.write_text('{"v": 2, "edges": []}\n', encoding="utf-8")
    code, report = invoke(capsys, ["check-admissible", "--relations", str(p)])
    assert code == 4 and '"v": 1' in report["error"]


def test_reduce_drops_implied_edge(tmp_path, capsys):
    S = standard_gl2()
    from wpimod import RelationSet

    C = RelationSet(GL2, list(S.edges) + [rel((1, 2, 1), (1, 2, 2), False)])
    path = write_relations(tmp_path, "c.json", C)
    code, report = invoke(capsys, ["reduce", "--relations", path])
    assert code == 0
    assert report["edges"] == S.to_json()["edges"]


def test_rr_remove(tmp_path, capsys):
    path = write_relations(tmp_path, "s.json", standard_gl2())
    code, report = invoke(
        capsys, ["rr-remove", "--relations", path, "--triple", "1,2,2"]
    )
    assert code == 0
    assert len(report["edges"]) == 1
    code, report = invoke(
        capsys, ["rr-remove", "--relations", path, "--triple", "1,1,1"]
    )
    assert code == 4  # interior triple is not extremal


def test_enumerate_basis(tmp_path, capsys):
    rels = write_relations(tmp_path, "s.json", standard_gl2())
    tab = write_tableau(tmp_path, "l.json", gl2_tableau(2, -1, 1))
    code, report = invoke(
        capsys,
        ["enumerate-basis", "--relations", rels, "--tableau", tab, "--radius", "2"],
    )
    assert code == 0
    assert report["count"] == 3


def test_verify_relations_pass_and_overflow(tmp_path, capsys):
    rels = write_relations(tmp_path, "s.json", standard_gl2())
    tab = write_tableau(tmp_path, "l.json", gl2_tableau(2, -1, 1))
    base = ["verify-relations", "--relations", rels, "--tableau", tab,
            "--budget", "2", "--instantiations", "1"]
    code, report = invoke(capsys, base + ["--radius", "2"])
    assert code == 0 and report["passes"] is True
    code, report = invoke(capsys, base + ["--radius", "1"])
    assert code == 5 and "overflow" in report


def test_irreducible_exit_codes(tmp_path, capsys):
    rels = write_relations(tmp_path, "s.json", standard_gl2())
    tab = write_tableau(tmp_path, "l.json", gl2_tableau(2, -1, 0))
    code, report = invoke(capsys, ["irreducible", "--relations", rels, "--tableau", tab])
    assert code == 0 and report["irreducible"] is True
    C, l = reducible_gl3_pair()
    rels = write_relations(tmp_path, "c3.json", C)
    tab = write_tableau(tmp_path, "l3.json", l)
    code, report = invoke(capsys, ["irreducible", "--relations", rels, "--tableau", tab])
    assert code == 3 and report["irreducible"] is False


def test_tensor_check(tmp_path, capsys):
    from fractions import Fraction

    path = write_weights(tmp_path, "w.json", [(1, 0), (1, 0)])
    code, report = invoke(
        capsys, ["tensor-check", "--weights", path, "--depth", "1",
                 "--mode", "integral"]
    )
    assert code == 0
    assert report["conditions"]["integral"] is True
    assert report["only_top_line"] is True
    bad = write_weights(
        tmp_path, "bad.json", [(1, 0), (3, 1)]
    )
    code, report = invoke(
        capsys, ["tensor-check", "--weights", bad, "--depth", "2",
                 "--mode", "integral"]
    )
    assert code == 3
    assert report["conditions"]["integral"] is False
    assert report["singular_dimensions"]["1"] >= 1


def test_reports_are_byte_identical(tmp_path, capsys):
    rels = write_relations(tmp_path, "s.json", standard_gl2())
    tab = write_tableau(tmp_path, "l.json", gl2_tableau(2, -1, 1))
    argv = ["verify-relations", "--relations", rels, "--tableau", tab,
            "--radius", "2", "--budget", "2", "--instantiations", "2",
            "--seed", "7"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    second = capsys.readouterr().out
    assert first == second
