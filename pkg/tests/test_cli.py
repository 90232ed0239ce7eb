"""Command-line surface: verbs, exit codes, JSON schemas, determinism."""

from __future__ import annotations

import json

import pytest

from ekk.cli import main
from ekk.dgca import model_s4, toroidify
from ekk.reports import model_from_payload, model_payload


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_verify_pass_exit_zero(capsys):
    code, out = run(capsys, "verify", "--k", "3",
                    "--checks", "chain,cartan,ef,serre,weight")
    assert code == 0
    assert "chain: pass" in out


def test_verify_rejects_bad_inputs(capsys):
    assert main(["verify", "--k", "12"]) == 2
    assert main(["verify", "--k", "3", "--checks", "nope"]) == 2


def test_usage_error_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_parabolic_json_schema(capsys):
    code, out = run(capsys, "parabolic", "--k", "8", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"m": 63, "a": 1, "n": 92, "total": 248}


def test_parabolic_out_of_range(capsys):
    assert main(["parabolic", "--k", "9"]) == 2


def test_derivations_json(capsys):
    code, out = run(capsys, "derivations", "--k", "1", "--mode", "full",
                    "--format", "json")
    assert code == 0
    assert json.loads(out) == {"dimension": 5}
    assert main(["derivations", "--k", "2", "--mode", "full"]) == 2


def test_derivations_linear_mode(capsys):
    code, out = run(capsys, "derivations", "--k", "2", "--mode", "linear",
                    "--format", "json")
    assert code == 0
    assert json.loads(out) == {"dimension": 5}


def test_roots_counts_and_range(capsys):
    code, out = run(capsys, "roots", "--k", "8", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 120
    assert len(payload["positive"]) == 120
    assert main(["roots", "--k", "9"]) == 2


def test_model_json_roundtrip(capsys):
    code, out = run(capsys, "model", "--k", "2", "--space", "torus",
                    "--format", "json")
    assert code == 0
    report = json.loads(out)
    payload = report["payload"]
    rebuilt = model_from_payload(payload)
    original = toroidify(model_s4(), 2)
    assert rebuilt.generator_set == original.generator_set
    assert all(rebuilt.diff[g] == original.diff[g]
               for g in original.generators)
    # every rational in the export is an exact p/q string
    for entry in payload["differential"]:
        for term in entry["terms"]:
            assert isinstance(term["coeff"], str)


def test_report_determinism_modulo_wall_time(capsys):
    def one():
        _, out = run(capsys, "verify", "--k", "2", "--format", "json")
        data = json.loads(out)
        data.pop("wall_ms")
        return json.dumps(data, sort_keys=False)
    assert one() == one()


GOLDEN_RANK3_LATEX = r"""
d w_{1} &= 0
d w_{2} &= 0
d w_{3} &= 0
d g_{4} &= s_{1} g_{4} \cdot w_{1} + s_{2} g_{4} \cdot w_{2} + s_{3} g_{4} \cdot w_{3}
d s_{1} g_{4} &= -s_{1} s_{2} g_{4} \cdot w_{2} - s_{1} s_{3} g_{4} \cdot w_{3}
d s_{1} s_{2} g_{4} &= s_{1} s_{2} s_{3} g_{4} \cdot w_{3}
d s_{1} s_{2} s_{3} g_{4} &= 0
d s_{1} s_{3} g_{4} &= -s_{1} s_{2} s_{3} g_{4} \cdot w_{2}
d s_{2} g_{4} &= s_{1} s_{2} g_{4} \cdot w_{1} - s_{2} s_{3} g_{4} \cdot w_{3}
d s_{2} s_{3} g_{4} &= s_{1} s_{2} s_{3} g_{4} \cdot w_{1}
d s_{3} g_{4} &= s_{1} s_{3} g_{4} \cdot w_{1} + s_{2} s_{3} g_{4} \cdot w_{2}
d g_{7} &= -\tfrac{1}{2} \, g_{4}^{2} + s_{1} g_{7} \cdot w_{1} + s_{2} g_{7} \cdot w_{2} + s_{3} g_{7} \cdot w_{3}
d s_{1} g_{7} &= g_{4} \cdot s_{1} g_{4} - s_{1} s_{2} g_{7} \cdot w_{2} - s_{1} s_{3} g_{7} \cdot w_{3}
d s_{1} s_{2} g_{7} &= -g_{4} \cdot s_{1} s_{2} g_{4} - s_{1} g_{4} \cdot s_{2} g_{4} + s_{1} s_{2} s_{3} g_{7} \cdot w_{3}
d s_{1} s_{2} s_{3} g_{7} &= g_{4} \cdot s_{1} s_{2} s_{3} g_{4} + s_{1} g_{4} \cdot s_{2} s_{3} g_{4} + s_{1} s_{2} g_{4} \cdot s_{3} g_{4} - s_{1} s_{3} g_{4} \cdot s_{2} g_{4}
d s_{1} s_{3} g_{7} &= -g_{4} \cdot s_{1} s_{3} g_{4} - s_{1} g_{4} \cdot s_{3} g_{4} - s_{1} s_{2} s_{3} g_{7} \cdot w_{2}
d s_{2} g_{7} &= g_{4} \cdot s_{2} g_{4} + s_{1} s_{2} g_{7} \cdot w_{1} - s_{2} s_{3} g_{7} \cdot w_{3}
d s_{2} s_{3} g_{7} &= -g_{4} \cdot s_{2} s_{3} g_{4} - s_{2} g_{4} \cdot s_{3} g_{4} + s_{1} s_{2} s_{3} g_{7} \cdot w_{1}
d s_{3} g_{7} &= g_{4} \cdot s_{3} g_{4} + s_{1} s_{3} g_{7} \cdot w_{1} + s_{2} s_{3} g_{7} \cdot w_{2}
""".strip()


def _normalize(text):
    lines = []
    for line in text.splitlines():
        line = " ".join(line.replace(r"\\", " ").split()).strip()
        if line and not line.startswith(("\\begin", "\\end")):
            lines.append(line)
    return lines


def test_model_latex_golden(capsys):
    code, out = run(capsys, "model", "--k", "3", "--format", "latex")
    assert code == 0
    assert _normalize(out) == _normalize(GOLDEN_RANK3_LATEX)


def test_cyclic_model_display_names(capsys):
    code, out = run(capsys, "model", "--k", "1", "--space", "cyclic")
    assert code == 0
    assert "d g4 = sg4*w" in out
    assert "w1" not in out.replace("sw1", "")


def test_table1_contents(capsys):
    code, out = run(capsys, "table1", "--kmin", "3", "--kmax", "6",
                    "--format", "json")
    assert code == 0
    rows = json.loads(out)["payload"]["rows"]
    by_k = {r["k"]: r for r in rows}
    assert by_k[3]["nilradical"] == 1
    assert by_k[6]["nilradical"] == 21
    assert by_k[6]["levi"] == 35
    assert by_k[6]["det"] == 3
    assert by_k[5]["positive_roots"] == 20
    assert all(r["verified"] for r in rows)


def test_table1_high_rank_cartan_only(capsys):
    code, out = run(capsys, "table1", "--kmin", "10", "--kmax", "10",
                    "--format", "json")
    assert code == 0
    row = json.loads(out)["payload"]["rows"][0]
    assert row["det"] == -1
    assert "positive_roots" not in row
    assert "verified" not in row


def test_out_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = main(["parabolic", "--k", "5", "--format", "json",
                 "--out", str(path)])
    assert code == 0
    assert json.loads(path.read_text()) == \
        {"m": 24, "a": 1, "n": 10, "total": 45}


def test_adjunction_demo(capsys):
    code, out = run(capsys, "adjunction-demo", "--k", "2", "--seed", "3",
                    "--samples", "4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "pass"
    assert len(data["payload"]["samples"]) == 4


def test_model_spaces(capsys):
    code, out = run(capsys, "model", "--k", "0", "--space", "sphere")
    assert code == 0 and "d g7 = -1/2*g4^2" in out
    code, out = run(capsys, "model", "--k", "2", "--space", "loop",
                    "--format", "json")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert len(payload["generators"]) == 8  # no w generators
    assert all(not g["name"].startswith("w")
               for g in payload["generators"])


def test_model_untruncated_flag(capsys):
    code, out = run(capsys, "model", "--k", "4", "--untruncated",
                    "--format", "json")
    assert code == 0
    payload = json.loads(out)["payload"]
    # the untruncated rank-4 model keeps the degree-0 decoration of g4
    names = {g["name"] for g in payload["generators"]}
    assert "s1s2s3s4g4" in names
    truncated_names = {g.name for g in toroidify(model_s4(), 4).generators}
    assert "s1s2s3s4g4" not in truncated_names


def test_jobs_env_override(monkeypatch):
    from ekk.cli import _default_jobs
    monkeypatch.setenv("EKK_JOBS", "3")
    assert _default_jobs() == 3
    monkeypatch.setenv("EKK_JOBS", "junk")
    assert _default_jobs() >= 1


def test_verify_payload_schema(capsys):
    code, out = run(capsys, "verify", "--k", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "pass"
    for entry in data["payload"]["checks"]:
        assert set(entry) == {"k", "check", "status", "failures"}
        assert entry["k"] == 2
