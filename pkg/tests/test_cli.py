import json

import pytest

from ccmu.cli import main
from ccmu.lts import make_model, model_to_json

ACTIONS = ("a", "b")


@pytest.fixture
def model_file(tmp_path):
    m = make_model(ACTIONS, ["s0"], [], {"p": ["s0"]})
    path = tmp_path / "m0.json"
    path.write_text(model_to_json(m, "s0"))
    return str(path)


@pytest.fixture
def chain_file(tmp_path):
    m = make_model(ACTIONS, ["s", "t"], [("s", "a", "t")], {"p": ["t"]})
    path = tmp_path / "m1.json"
    path.write_text(model_to_json(m, "s"))
    return str(path)


class TestCheck:
    def test_true_exit(self, model_file):
        assert main(["check", "--model", f"{model_file}#s0",
                     "--formula", "E{a;b} p"]) == 0

    def test_false_exit(self, model_file):
        assert main(["check", "--model", model_file,
                     "--formula", "E{a;b} <b>true"]) == 1

    def test_undetermined_exit(self, model_file):
        assert main(["check", "--model", model_file,
                     "--formula", "E{a;}p"]) == 2

    def test_json_verdict(self, model_file, capsys):
        assert main(["--json", "check", "--model", model_file,
                     "--formula", "E{a;b} p"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc == {"verdict": "true"}

    def test_undetermined_reason_distinct_from_false(self, model_file, capsys):
        main(["--json", "check", "--model", model_file,
              "--formula", "E{a;}<b>true", "--fallback-bound", "2"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["verdict"] == "undetermined"
        assert doc["reason"] == "BoundExhausted"


class TestRefines:
    def test_reflexive(self, chain_file):
        assert main(["refines", "--spec", f"{chain_file}#s",
                     "--impl", f"{chain_file}#s",
                     "--cov", "a", "--contra", "b"]) == 0

    def test_emitted_relation_reverifies(self, chain_file, tmp_path, capsys):
        out = tmp_path / "rel.json"
        code = main(["--json", "refines", "--spec", f"{chain_file}#s",
                     "--impl", f"{chain_file}#s", "--cov", "a", "--contra", "b",
                     "--emit-relation", str(out)])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        emitted = [tuple(p) for p in json.loads(out.read_text())]
        assert sorted(emitted) == [tuple(p) for p in doc["pairs"]]
        from ccmu.ccref import verify_relation
        from ccmu.lts import load_pointed
        from ccmu.syntax import signature

        pm = load_pointed(f"{chain_file}#s")
        assert verify_relation(
            emitted, pm.model, pm.model, (), signature(["a"], ["b"])
        )


class TestTranslate:
    def test_prints_translation(self, capsys):
        assert main(["translate", "--formula", "E{a;b} <b>p"]) == 0
        assert capsys.readouterr().out.strip() == "<b>p"

    def test_structured_error(self, capsys):
        assert main(["--json", "translate", "--formula", "E{a;b} mu q. (q & p)"]) == 2
        doc = json.loads(capsys.readouterr().out)
        assert doc["error"]["kind"] == "NotDisjunctive"


class TestWitness:
    def test_witness_roundtrip(self, model_file, tmp_path, capsys):
        out = tmp_path / "wit.json"
        code = main(["--json", "witness", "--model", f"{model_file}#s0",
                     "--cov", "a", "--contra", "b", "--formula", "<a>true",
                     "--max-states", "3", "--emit", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["found"]
        from ccmu.ccref import verify_relation
        from ccmu.lts import load_pointed, model_from_json
        from ccmu.syntax import signature

        witness, root = model_from_json(json.dumps(doc["model"]))
        spec = load_pointed(f"{model_file}#s0")
        assert verify_relation(
            [tuple(p) for p in doc["relation"]],
            spec.model,
            witness,
            (),
            signature(["a"], ["b"]),
        )

    def test_no_witness_exit(self, model_file):
        assert main(["witness", "--model", model_file, "--cov", "a",
                     "--contra", "b", "--formula", "!p",
                     "--max-states", "2"]) == 1


class TestDnfAndTableau:
    def test_dnf(self, capsys):
        assert main(["dnf", "--formula", "<a>true"]) == 0
        assert capsys.readouterr().out.strip() == "nabla_a {true}"

    def test_dnf_error(self):
        assert main(["dnf", "--formula", "mu q. (q & p)"]) == 2

    def test_tableau_dot(self, model_file, tmp_path, capsys):
        dot = tmp_path / "t.dot"
        code = main(["tableau", "--formula", "p", "--model", f"{model_file}#s0",
                     "--dot", str(dot)])
        assert code == 0
        assert "digraph" in dot.read_text()

    def test_tableau_no_marking_exit(self, model_file):
        assert main(["tableau", "--formula", "nabla_a {p}",
                     "--model", f"{model_file}#s0"]) == 1


def test_parse_error_exit(model_file):
    assert main(["check", "--model", model_file, "--formula", "p &"]) == 2
