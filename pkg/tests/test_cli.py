import json
import random
import subprocess
import sys

import pytest
from hypothesis import given

from tropvol.arrangement import LinearForms
from tropvol.cli import run
from tropvol.cone import Cone
from tropvol.fan import Fan
from tropvol.grassmann import build_instance
from tropvol.jsonio import (
    arrangement_from_json,
    canonical_json,
    cone_from_json,
    config_from_json,
    fan_from_json,
    parse_label,
    label_key,
)
from tropvol.normalfan import PointConfiguration, normal_fan

from strategies import generator_sets

SQUARE = {"m_rank": 2, "points": {"a": [0, 0], "b": [1, 0], "c": [0, 1], "d": [1, 1]}}
BAD_FAN = {"ambient_rank": 2, "cones": [{"rays": [[1, 0], [0, 1]]}, {"rays": [[1, 1], [-1, 1]]}]}


def roundtrip(value, parse):
    return parse(json.loads(canonical_json(value)))


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


class TestJson:
    @given(generator_sets())
    def test_cone_roundtrip(self, ng):
        n, gens = ng
        c = Cone.from_generators(gens, n)
        assert roundtrip(c, cone_from_json) == c

    def test_fan_roundtrip(self):
        f = build_instance(4, 2).base_fan()
        assert roundtrip(f, fan_from_json) == f

    def test_config_roundtrip(self):
        u = build_instance(4, 2).configuration()
        assert roundtrip(u, config_from_json) == u
        v = config_from_json(SQUARE)
        assert roundtrip(v, config_from_json) == v

    def test_arrangement_roundtrip(self):
        lf = LinearForms([(1, 0), (0, 1), (1, -1)])
        back = roundtrip(lf, arrangement_from_json)
        assert back.forms == lf.forms and back.labels == lf.labels

    def test_labels(self):
        for a in [0, -3, "x", (1, 0, 2), ()]:
            assert parse_label(label_key(a)) == a

    def test_integers_are_strings(self):
        data = json.loads(canonical_json(Cone.from_generators([(10**30, 1)], 2)))
        assert data["rays"] == [[str(10**30), "1"]]

    def test_permuted_cone_order(self):
        f = normal_fan(config_from_json(SQUARE))
        cones = list(f.cones)
        random.Random(0).shuffle(cones)
        assert canonical_json(Fan(2, cones)) == canonical_json(f)

    def test_unserializable(self):
        with pytest.raises(TypeError):
            canonical_json(object())


class TestRun:
    def test_normal_fan(self, tmp_path, capsysbinary):
        assert run(["normal-fan", "--config", write(tmp_path, "sq.json", SQUARE)]) == 0
        f = fan_from_json(json.loads(capsysbinary.readouterr().out))
        assert len(f.maximal_cones()) == 4

    def test_bad_fan(self, tmp_path, capsysbinary):
        assert run(["fan", "--validate", write(tmp_path, "bad.json", BAD_FAN)]) == 1
        out = json.loads(capsysbinary.readouterr().out)
        assert not out["valid"] and len(out["bad_pairs"]) == 1

    def test_malformed(self, tmp_path, capsys):
        assert run(["fan", write(tmp_path, "m.json", '{"ambient_rank": 2,\n  "cones": [}')]) == 2
        assert ":2:" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run(["cone", str(tmp_path / "nope.json")]) == 2

    def test_bad_shape(self, tmp_path):
        assert run(["cone", write(tmp_path, "c.json", {"ambient_rank": 2, "rays": [[1, 2, 3]]})]) == 2

    def test_unknown_command(self):
        assert run(["frobnicate"]) == 2

    def test_cone(self, tmp_path, capsysbinary):
        assert run(["cone", write(tmp_path, "c.json", {"ambient_rank": "2", "rays": [["1", "0"], ["1", "1"], ["1", "2"]]})]) == 0
        out = json.loads(capsysbinary.readouterr().out)
        assert out["cone"]["rays"] == [["1", "0"], ["1", "2"]] and out["unimodular"] is False

    def test_bergman(self, tmp_path, capsysbinary):
        arr = {"n": "1", "forms": {"0": ["1", "0"], "1": ["0", "1"], "2": ["1", "-1"]}}
        assert run(["bergman", write(tmp_path, "a.json", arr)]) == 0
        assert len(fan_from_json(json.loads(capsysbinary.readouterr().out))) == 4

    def test_degenerate_and_ledger(self, tmp_path, capsysbinary):
        fan = {"ambient_rank": "1", "cones": [{"rays": []}, {"rays": [["1"]]}, {"rays": [["-1"]]}]}
        cfg = {"m_rank": "1", "points": {"a": ["0"], "b": ["2"]}, "kappa": {"a": "0", "b": "1"}}
        fp, cp = write(tmp_path, "f.json", fan), write(tmp_path, "u.json", cfg)
        assert run(["degenerate", "--fan", fp, "--config", cp, "--prepare"]) == 0
        out = json.loads(capsysbinary.readouterr().out)
        assert out["l"] == "2" and all(out["properties"].values())
        assert run(["ledger", "--fan", fp, "--config", cp]) == 0
        led = json.loads(capsysbinary.readouterr().out)
        assert led["signed_sum"] == "1" and len(led["entries"]) == 1

    def test_deterministic_bytes(self, tmp_path):
        fp = write(tmp_path, "sq.json", SQUARE)
        outs = []
        for seed, threads in [(0, 1), (7, 1), (0, 2)]:
            o = tmp_path / f"o{seed}{threads}.json"
            assert run(["normal-fan", "--config", fp, "--seed", str(seed), "--threads", str(threads), "--out", str(o)]) == 0
            outs.append(o.read_bytes())
        assert outs[0] == outs[1] == outs[2]


def test_module_entry_point(tmp_path):
    p = tmp_path / "r.json"
    r = subprocess.run([sys.executable, "-m", "tropvol", "grassmann", "--n", "4", "--d", "3", "--l", "1", "--out", str(p)], capture_output=True)
    assert r.returncode == 0, r.stderr
    assert json.loads(p.read_text())["pass"] is True
