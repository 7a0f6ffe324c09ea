import json

import pytest

from orbitcoh.cli import main


def run_cli(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def write_json(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def c2_file(tmp_path):
    return write_json(tmp_path, "c2.json", {"order": 2, "table": [[0, 1], [1, 0]]})


@pytest.fixture
def z_trivial_file(tmp_path):
    return write_json(tmp_path, "z-trivial.json", {"rank": 1, "torsion": []})


def test_cohomology_full_family(capsys, c2_file, z_trivial_file):
    code, out, _ = run_cli(capsys, "cohomology", "--group", c2_file,
                           "--family", "full", "--module", z_trivial_file,
                           "--degrees", "0..2")
    assert code == 0
    doc = json.loads(out)
    assert [r["rank"] for r in doc["results"]] == [1, 0, 0]
    assert [r["torsion"] for r in doc["results"]] == [[], [], []]


def test_cohomology_trivial_family(capsys, c2_file, z_trivial_file):
    code, out, _ = run_cli(capsys, "cohomology", "--group", c2_file,
                           "--family", "trivial-only",
                           "--module", z_trivial_file, "--degrees", "0..2")
    assert code == 0
    doc = json.loads(out)
    shapes = [(r["rank"], r["torsion"]) for r in doc["results"]]
    assert shapes == [(1, []), (0, []), (0, [2])]


def test_cohomology_single_degree_and_builtins(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--group", "c4",
                           "--family", "full", "--module", "z-trivial",
                           "--degrees", "2", "--check")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"] == [{"degree": 2, "rank": 0, "torsion": []}]
    assert doc["checks"][0]["method"] == "characters"
    assert doc["checks"][0]["passed"] is True


def test_cohomology_check_degree_zero_and_one(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--group", "c2",
                           "--family", "trivial-only", "--module", "z-sign",
                           "--degrees", "0..1", "--check")
    assert code == 0
    doc = json.loads(out)
    assert [c["method"] for c in doc["checks"]] == ["limit", "derivations"]
    assert all(c["passed"] for c in doc["checks"])
    assert doc["results"][1]["torsion"] == [2]


def test_family_file_with_closure(capsys, tmp_path):
    fam = write_json(tmp_path, "fam.json",
                     {"subgroups": [[0, 1]], "close_conjugation": True,
                      "close_subgroups": True})
    code, out, _ = run_cli(capsys, "family-close", "--group", "s3",
                           "--family", fam)
    assert code == 0
    doc = json.loads(out)
    # one transposition subgroup closes to all three plus the trivial one
    assert len(doc["subgroups"]) == 4


def test_oracle_command(capsys):
    code, out, _ = run_cli(capsys, "oracle", "--group", "c4",
                           "--module", "z-trivial", "--degrees", "0..3")
    assert code == 0
    doc = json.loads(out)
    assert [(r["rank"], r["torsion"]) for r in doc["results"]] == [
        (1, []), (0, []), (0, [4]), (0, [])]


def test_structures_command(capsys):
    code, out, _ = run_cli(capsys, "structures", "--group", "c2",
                           "--family", "trivial-only", "--module", "z2-trivial",
                           "--check")
    assert code == 0
    doc = json.loads(out)
    assert doc["classes"] == 2
    assert doc["h2_order"] == 2
    assert doc["witnesses"][doc["split_index"]]["split"] is True

    code, out, _ = run_cli(capsys, "structures", "--group", "c2",
                           "--family", "full", "--module", "z2-trivial",
                           "--check")
    assert code == 0
    doc = json.loads(out)
    assert doc["classes"] == 1
    assert doc["split_index"] == 0


def test_derivations_command(capsys):
    code, out, _ = run_cli(capsys, "derivations", "--group", "c2",
                           "--family", "trivial-only", "--module", "z2-trivial",
                           "--check")
    assert code == 0
    doc = json.loads(out)
    assert doc["derivation_quotient"] == {"rank": 0, "torsion": [2]}
    assert doc["splitting_classes"] == 2
    assert doc["check_passed"] is True


def test_characters_command(capsys):
    code, out, _ = run_cli(capsys, "characters", "--group", "s3",
                           "--family", "trivial-only")
    assert code == 0
    doc = json.loads(out)
    assert doc["rank"] == 0 and doc["torsion"] == [2]
    assert doc["generators"]


def test_galois_command(capsys):
    code, out, _ = run_cli(capsys, "galois", "--p", "2", "--n", "4", "--d", "1",
                           "--family", "full", "--check")
    assert code == 0
    doc = json.loads(out)
    assert doc["all_zero"] is True
    assert doc["unit_group_order"] == 15
    assert doc["h3"]["torsion"] == []


def test_group_file_from_permutations(capsys, tmp_path):
    path = write_json(tmp_path, "s3.json",
                      {"degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
    code, out, _ = run_cli(capsys, "characters", "--group", path,
                           "--family", "trivial-only")
    assert code == 0
    assert json.loads(out)["torsion"] == [2]


def test_module_file_with_action(capsys, tmp_path):
    mod = write_json(tmp_path, "frob.json",
                     {"rank": 0, "torsion": [3],
                      "action": {"generators": [1], "matrices": [[[2]]]}})
    code, out, _ = run_cli(capsys, "cohomology", "--group", "c2",
                           "--family", "full", "--module", mod,
                           "--degrees", "0..2")
    assert code == 0
    doc = json.loads(out)
    assert all(r["rank"] == 0 and r["torsion"] == [] for r in doc["results"])


def test_unknown_keys_rejected(capsys, tmp_path):
    bad = write_json(tmp_path, "bad.json",
                     {"order": 2, "table": [[0, 1], [1, 0]], "extra": 1})
    code, _, err = run_cli(capsys, "cohomology", "--group", bad,
                           "--family", "full", "--module", "z-trivial",
                           "--degrees", "0")
    assert code == 2
    assert "unknown keys" in json.loads(err)["error"]["message"]


def test_invalid_table_rejected(capsys, tmp_path):
    bad = write_json(tmp_path, "bad.json", {"table": [[1, 0], [0, 1]]})
    code, _, err = run_cli(capsys, "cohomology", "--group", bad,
                           "--family", "full", "--module", "z-trivial",
                           "--degrees", "0")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "validation"


def test_unknown_suite_exits_2(capsys):
    code, _, err = run_cli(capsys, "check", "nonsense")
    assert code == 2
    assert "unknown suite" in json.loads(err)["error"]["message"]


def test_empty_degree_range(capsys):
    code, _, err = run_cli(capsys, "cohomology", "--group", "c2",
                           "--family", "full", "--module", "z-trivial",
                           "--degrees", "x")
    assert code == 2


def test_size_cap_exit_code(capsys):
    code, _, err = run_cli(capsys, "--size-cap", "10",
                           "cohomology", "--group", "c2xc2",
                           "--family", "full", "--module", "z-trivial",
                           "--degrees", "2")
    assert code == 3
    assert json.loads(err)["error"]["type"] == "size-limit"


def test_output_file_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    for out, threads in ((out1, "1"), (out2, "3")):
        code, _, _ = run_cli(capsys, "--threads", threads,
                             "--output", str(out),
                             "cohomology", "--group", "s3",
                             "--family", "full", "--module", "z-trivial",
                             "--degrees", "0..2")
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_empty_degree_range_is_vacuous(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--group", "c2",
                           "--family", "full", "--module", "z-trivial",
                           "--degrees", "3..2")
    assert code == 0
    assert json.loads(out)["results"] == []


def test_check_suite_via_cli(capsys):
    code, out, _ = run_cli(capsys, "check", "galois")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert doc["reports"][0]["suite"] == "galois"
    assert all(c["passed"] for c in doc["reports"][0]["checks"])


def test_cyclic_family_shorthand(capsys):
    code, out, _ = run_cli(capsys, "cohomology", "--group", "q8",
                           "--family", "cyclic", "--module", "z-trivial",
                           "--degrees", "0")
    assert code == 0
    doc = json.loads(out)
    # the five proper subgroups of Q8 are cyclic; Q8 itself is not
    assert len(doc["family"]) == 5
