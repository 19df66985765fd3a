import io
import json
import subprocess
import sys

import pytest

from towers.automata import Automaton, serialize_automaton
from towers.cli import VERBS, build_parser, run
from towers.constructions import gen_dfas_tight, gen_thm02B


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def write_pair(tmp_path, inst, prefix=""):
    k, l = tmp_path / f"{prefix}A.json", tmp_path / f"{prefix}B.json"
    k.write_text(serialize_automaton(inst.A))
    l.write_text(serialize_automaton(inst.B))
    return str(k), str(l)


@pytest.fixture
def thm_pair(tmp_path):
    return write_pair(tmp_path, gen_thm02B(1, 1))


def test_height_reports_finite_json(thm_pair):
    k, l = thm_pair
    status, out, _ = call("height", "--order", "subsequence", "--k", k, "--l", l)
    doc = json.loads(out)
    assert status == 0 and doc["verdict"] == "finite" and doc["height"] == 4
    assert "witness" not in doc
    status, out, _ = call("height", "--order", "subsequence", "--k", k, "--l", l, "--witness")
    assert len(json.loads(out)["witness"]) == 4


def test_outputs_are_byte_identical(thm_pair):
    k, l = thm_pair
    first = call("height", "--order", "prefix", "--k", k, "--l", l, "--witness")
    second = call("height", "--order", "prefix", "--k", k, "--l", l, "--witness")
    assert first == second


def test_generate_bundle_matches_golden(tmp_path, data_dir):
    status, _, _ = call("generate", "--family", "expdfa", "--n", "3", "--out", str(tmp_path / "bundle"))
    assert status == 0
    bundle = tmp_path / "bundle"
    assert {p.name for p in bundle.iterdir()} == {"A.json", "B.json", "witness.json", "predictions.json"}
    witness = json.loads((bundle / "witness.json").read_text())
    golden = json.loads((data_dir / "figtower_n3.json").read_text())
    assert witness["words"] == golden["words"]
    predictions = json.loads((bundle / "predictions.json").read_text())
    assert predictions["height"] == 8


def test_generate_with_params_and_presets(tmp_path):
    status, out, _ = call("generate", "--family", "lower_bound", "--params", "mA=1", "mB=1", "e0=1", "d=[1]", "e=[1]")
    assert status == 0 and json.loads(out)["predictions"]["height"] == 10
    status, out, _ = call("generate", "--preset", "cor:A2", "--n", "3", "--dot", "--out", str(tmp_path / "b"))
    assert status == 0 and (tmp_path / "b" / "A.dot").exists()
    status, _, err = call("generate", "--family", "thm02B", "--d", "1", "--e", "2")
    assert status == 2 and "odd" in err


def test_infinite_prefix_finite_only(tmp_path):
    starts_a = Automaton(["0", "1", "2"], ["a", "b"], ["0"], ["1"], [("0", "a", "1"), ("1", "b", "2"), ("2", "a", "1")])
    starts_b = Automaton(["0", "1", "2"], ["a", "b"], ["0"], ["1"], [("0", "b", "1"), ("1", "a", "2"), ("2", "b", "1")])
    (tmp_path / "L1.json").write_text(serialize_automaton(starts_a))
    (tmp_path / "L2.json").write_text(serialize_automaton(starts_b))
    status, out, _ = call("infinite", "--order", "prefix", "--k", str(tmp_path / "L1.json"), "--l", str(tmp_path / "L2.json"))
    assert status == 0 and json.loads(out) == {"verdict": "finite-only", "pattern": None}


def test_infinite_is_a_success(tmp_path):
    loop = Automaton(["0"], ["a"], ["0"], ["0"], [("0", "a", "0")])
    path = tmp_path / "loop.json"
    path.write_text(serialize_automaton(loop))
    for order in ("prefix", "subsequence"):
        status, out, _ = call("infinite", "--order", order, "--k", str(path), "--l", str(path))
        assert status == 0 and json.loads(out)["verdict"] == "infinite"
    status, out, _ = call("pattern", "--k", str(path), "--l", str(path), "--out", str(tmp_path / "p"))
    assert json.loads(out)["pattern"] is not None
    assert (tmp_path / "p" / "pattern.dot").exists()


def test_exit_codes(thm_pair, tmp_path, monkeypatch):
    k, l = thm_pair
    assert call("frobnicate")[0] == 2
    assert call("height", "--k", k, "--l", l)[0] == 2
    assert call("validate", str(tmp_path / "missing.json"))[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"states": ["0"]}')
    status, _, err = call("validate", str(bad))
    assert status == 3 and "missing key" in err
    status, out, _ = call("height", "--order", "subsequence", "--k", k, "--l", l, "--budget", "1")
    assert status == 4 and json.loads(out)["verdict"] == "undecided"
    monkeypatch.setenv("TOWER_BUDGET", "1")
    assert call("height", "--order", "subsequence", "--k", k, "--l", l)[0] == 4
    monkeypatch.setenv("TOWER_BUDGET", "100")
    assert call("height", "--order", "subsequence", "--k", k, "--l", l)[0] == 0


def test_bound_report(tmp_path):
    k, l = write_pair(tmp_path, gen_thm02B(5, 5), "t")
    doc = json.loads(call("bound", "--k", k, "--l", l)[1])
    assert doc["subseq_bound"] == 43 and doc["prefix_bound_dfa"] is None
    k, l = write_pair(tmp_path, gen_dfas_tight(5, 5), "d")
    doc = json.loads(call("bound", "--k", k, "--l", l)[1])
    assert doc["prefix_bound_dfa"] == 31 and doc["states"] == [10, 6]
    tiny = Automaton(["0"], ["a"], ["0"], ["0"], [])
    (tmp_path / "tiny.json").write_text(serialize_automaton(tiny))
    doc = json.loads(call("bound", "--k", str(tmp_path / "tiny.json"), "--l", str(tmp_path / "tiny.json"))[1])
    assert all(doc[key] >= 1 for key in ("subseq_bound", "prefix_bound_dfa", "prefix_bound_nfa"))


def test_automaton_verbs(thm_pair, tmp_path):
    k, l = thm_pair
    assert json.loads(call("validate", k)[1])["states"] == 2
    assert json.loads(call("determinize", k)[1])["states"]
    assert json.loads(call("minimize", k)[1])["states"]
    assert json.loads(call("product", "--k", k, "--l", l)[1])["states"]
    for kind in ("down", "prefix"):
        status, out, _ = call("closure", "--kind", kind, k, "--out", str(tmp_path / kind))
        assert status == 0 and (tmp_path / kind / f"{kind}_closure.json").exists()
    status, out, _ = call("dot", k, "--name", "K")
    assert status == 0 and out.startswith('digraph "K"')


def test_transforms(thm_pair, tmp_path):
    k, l = thm_pair
    for kind in ("det1", "det2", "binarize"):
        status, out, _ = call("transform", "--kind", kind, "--k", k, "--l", l, "--out", str(tmp_path / kind))
        assert status == 0
        assert (tmp_path / kind / "A.json").exists()
    assert "codes" in json.loads(call("transform", "--kind", "binarize", "--k", k, "--l", l)[1])


def test_verify_verb(tmp_path):
    call("generate", "--family", "thm02B", "--d", "2", "--e", "1", "--out", str(tmp_path))
    args = ["verify", "--tower", str(tmp_path / "witness.json"), "--k", str(tmp_path / "A.json"), "--l", str(tmp_path / "B.json")]
    status, out, _ = call(*args)
    assert status == 0 and json.loads(out)["valid"]
    status, out, _ = call(*args, "--order", "prefix")
    assert not json.loads(out)["valid"]


def test_pretty_output(thm_pair):
    k, l = thm_pair
    status, out, _ = call("bound", "--k", k, "--l", l, "--pretty")
    assert status == 0 and out.splitlines()[0].startswith("states")


def test_help_covers_every_verb_and_flag():
    parser = build_parser()
    text = parser.format_help()
    for verb in VERBS:
        assert verb in text
    sub = parser._subparsers._group_actions[0].choices
    for verb, p in sub.items():
        help_text = p.format_help()
        for action in p._actions:
            for flag in action.option_strings:
                assert flag in help_text, (verb, flag)


def test_console_entry_point(thm_pair):
    k, l = thm_pair
    proc = subprocess.run(
        [sys.executable, "-m", "towers", "height", "--order", "subsequence", "--k", k, "--l", l],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["height"] == 4
