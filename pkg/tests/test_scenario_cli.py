import json
import math

import pytest

from diskflow import Scenario, ScenarioError
from diskflow.cli import main


def write_config(tmp_path, payload, name="scenario.json"):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


HALFPLANE_EXPLICIT = {
    "name": "halfplane-explicit",
    "type": "nonelliptic",
    "koenigs": {"chain": [{"op": "mobius", "a": [1, 0], "b": [1, 0],
                           "c": [-1, 0], "d": [1, 0]}]},
    "domain": {"kind": "halfplane", "orientation": "right", "offset": 0.0},
    "start_points": [[0, 0]],
    "forward_grid": {"kind": "explicit", "values": [0.0, 1.0, 2.0]},
}


class TestScenarioParsing:
    def test_builtin_shorthand(self):
        sc = Scenario.parse({"builtin": "halfplane"})
        assert sc.kind == "nonelliptic"
        assert sc.start_points == (0j,)
        sg = sc.resolve_semigroup()
        assert sg.name == "halfplane"

    def test_canonical_roundtrip(self):
        sc = Scenario.parse(HALFPLANE_EXPLICIT)
        again = Scenario.parse(sc.to_dict())
        assert again.canonical_json() == sc.canonical_json()
        assert again.digest() == sc.digest()

    def test_unknown_top_key_rejected(self):
        with pytest.raises(ScenarioError):
            Scenario.parse({"builtin": "halfplane", "colour": "blue"})

    def test_unknown_grid_key_rejected(self):
        bad = dict(HALFPLANE_EXPLICIT)
        bad["forward_grid"] = {"kind": "linear", "t0": 0, "t1": 1, "n": 5,
                               "step": 0.1}
        with pytest.raises(ScenarioError):
            Scenario.parse(bad)

    def test_unknown_heuristic_key_rejected(self):
        with pytest.raises(ScenarioError):
            Scenario.parse({"builtin": "strip", "heuristic": {"rho": 2}})

    def test_builtin_overrides_rejected(self):
        with pytest.raises(ScenarioError):
            Scenario.parse({"builtin": "strip", "type": "nonelliptic"})

    def test_elliptic_needs_mu(self):
        bad = dict(HALFPLANE_EXPLICIT)
        bad["type"] = "elliptic"
        with pytest.raises(ScenarioError):
            Scenario.parse(bad)

    def test_nonelliptic_rejects_mu(self):
        bad = dict(HALFPLANE_EXPLICIT)
        bad["mu"] = [1, 0]
        with pytest.raises(ScenarioError):
            Scenario.parse(bad)

    def test_needs_start(self):
        bad = {k: v for k, v in HALFPLANE_EXPLICIT.items()
               if k != "start_points"}
        with pytest.raises(ScenarioError):
            Scenario.parse(bad)

    def test_start_w_track(self):
        sc = Scenario.parse({
            "name": "example2",
            "type": "nonelliptic",
            "koenigs": None,
            "domain": {"kind": "channel", "profile": "inv_log"},
            "start_w": [[0, 0]],
        })
        tracks = sc.tracks()
        assert len(tracks) == 1
        assert tracks[0].semigroup is None

    def test_resolved_semigroup_matches_builtin(self):
        sc = Scenario.parse(HALFPLANE_EXPLICIT)
        sg = sc.resolve_semigroup()
        assert sg.phi(1.0, 0j) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_explicit_elliptic_scenario(self):
        sc = Scenario.parse({
            "type": "elliptic",
            "mu": [1, 1],
            "koenigs": {"chain": [{"op": "affine", "a": [1, 0], "b": [0, 0]}]},
            "domain": {"kind": "disk", "center": [0, 0], "radius": 1.0},
            "start_points": [[0.5, 0]],
        })
        sg = sc.resolve_semigroup()
        assert sg.mu == 1 + 1j
        import cmath
        assert sg.phi(1.0, 0.5 + 0j) == pytest.approx(
            0.5 * cmath.exp(-(1 + 1j)), abs=1e-12)

    def test_linear_grid_hits_endpoint_exactly(self):
        from diskflow.scenario import GridSpec
        g = GridSpec.parse({"kind": "linear", "t0": 0.0, "t1": 10.0, "n": 7},
                           "grid")
        ts = g.times()
        assert ts[0] == 0.0 and ts[-1] == 10.0 and len(ts) == 7


class TestTraceCommand:
    def test_halfplane_rows(self, tmp_path, capsys):
        cfg = write_config(tmp_path, HALFPLANE_EXPLICIT)
        rc = main(["trace", "--config", cfg, "--out", str(tmp_path / "out")])
        assert rc == 0
        csv = (tmp_path / "out" / "trace_p000_forward.csv").read_text()
        lines = csv.strip().splitlines()
        assert lines[0] == "t,re,im,w_re,w_im,g_abs,delta_disk,delta_omega"
        rows = [line.split(",") for line in lines[1:]]
        assert [float(r[1]) for r in rows] == pytest.approx(
            [0.0, 1.0 / 3.0, 0.5], abs=1e-12)
        # t = 0 row is exactly the starting point
        assert float(rows[0][1]) == 0.0 and float(rows[0][2]) == 0.0
        manifest = json.loads(
            (tmp_path / "out" / "trace_manifest.json").read_text())
        assert manifest["meta"]["tool_version"]
        assert manifest["meta"]["scenario_hash"]

    def test_backward_grid_beyond_horizon_exits_2(self, tmp_path, capsys):
        payload = dict(HALFPLANE_EXPLICIT)
        payload["backward_grid"] = {"kind": "explicit",
                                    "values": [0.0, 0.5, 1.5]}
        cfg = write_config(tmp_path, payload)
        rc = main(["trace", "--config", cfg, "--out", str(tmp_path / "out")])
        assert rc == 2
        err = capsys.readouterr().err
        assert "T_z=1" in err.replace(" ", "")

    def test_backward_rows(self, tmp_path):
        payload = dict(HALFPLANE_EXPLICIT)
        payload["backward_grid"] = {"kind": "explicit", "values": [0.0, 0.5]}
        cfg = write_config(tmp_path, payload)
        assert main(["trace", "--config", cfg,
                     "--out", str(tmp_path / "out")]) == 0
        csv = (tmp_path / "out" / "trace_p000_backward.csv").read_text()
        last = csv.strip().splitlines()[-1].split(",")
        assert float(last[1]) == pytest.approx(-1.0 / 3.0, abs=1e-12)

    def test_missing_config_exits_2(self, tmp_path):
        assert main(["trace", "--config", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path)]) == 2

    def test_mapless_scenario_cannot_trace(self, tmp_path):
        payload = {
            "type": "nonelliptic", "koenigs": None,
            "domain": {"kind": "channel", "profile": "inv_log"},
            "start_w": [[0, 0]],
        }
        cfg = write_config(tmp_path, payload)
        assert main(["trace", "--config", cfg,
                     "--out", str(tmp_path / "out")]) == 2


class TestCriterionCommand:
    def test_halfplane_fixture(self, tmp_path):
        cfg = write_config(tmp_path, {"builtin": "halfplane"})
        rc = main(["criterion", "--config", cfg,
                   "--out", str(tmp_path / "out")])
        assert rc == 0
        rep = json.loads(
            (tmp_path / "out" / "criterion_p000.json").read_text())
        assert rep["verdict"] == "Certified"
        assert rep["bound"] == pytest.approx(0.5, abs=1e-9)
        assert rep["heuristic"]["window"] == 5
        csv = (tmp_path / "out" / "criterion_p000_samples.csv").read_text()
        assert csv.splitlines()[0] == "t,ratio_lo,ratio_hi,g_abs"

    def test_example2_fixture(self, tmp_path):
        payload = {
            "name": "example2",
            "type": "nonelliptic",
            "koenigs": None,
            "domain": {"kind": "channel", "profile": "inv_log"},
            "start_w": [[0, 0]],
        }
        cfg = write_config(tmp_path, payload)
        assert main(["criterion", "--config", cfg,
                     "--out", str(tmp_path / "out")]) == 0
        rep = json.loads(
            (tmp_path / "out" / "criterion_p000.json").read_text())
        assert rep["verdict"] == "Certified"

    def test_example1_fixture_carries_note(self, tmp_path):
        dom = json.loads(json.dumps(
            __import__("diskflow").example1_domain(12).to_dict()))
        payload = {
            "name": "example1",
            "type": "nonelliptic",
            "koenigs": None,
            "domain": dom,
            "start_w": [[0, 0]],
        }
        cfg = write_config(tmp_path, payload)
        assert main(["criterion", "--config", cfg,
                     "--out", str(tmp_path / "out")]) == 0
        rep = json.loads(
            (tmp_path / "out" / "criterion_p000.json").read_text())
        assert rep["verdict"] in ("Certified", "Inconclusive")
        assert rep["notes"]["discrepancy"]
        assert rep["truncation"] == 12


class TestExamplesCommand:
    def test_example1(self, tmp_path):
        rc = main(["examples", "--id", "1", "--truncation", "40",
                   "--out", str(tmp_path / "out")])
        assert rc == 0
        rep = json.loads(
            (tmp_path / "out" / "example1_report.json").read_text())
        assert rep["delta_at_origin"] == 2.0
        row8 = [r for r in rep["sigma_distances"] if r["t"] == 8.0][0]
        assert row8["displayed_expression"] == pytest.approx(1.9375, abs=1e-12)
        assert row8["exact"] == pytest.approx(16.0 * math.pi, abs=1e-6)
        assert all(c["violations"] == 0 for c in rep["sigma_containment"])
        assert rep["discrepancy_note"]
        assert rep["criterion"]["notes"]["discrepancy"]
        summary = (tmp_path / "out" / "example1_summary.txt").read_text()
        assert "delta_Omega(0) = 2.0" in summary

    def test_example2(self, tmp_path):
        rc = main(["examples", "--id", "2", "--out", str(tmp_path / "out")])
        assert rc == 0
        rep = json.loads(
            (tmp_path / "out" / "example2_report.json").read_text())
        assert rep["regularity"] == "NonRegular"
        assert rep["euclidean_test"]["pass"] is True
        assert rep["criterion"]["verdict"] == "Certified"

    def test_example3(self, tmp_path):
        rc = main(["examples", "--id", "3", "--out", str(tmp_path / "out")])
        assert rc == 0
        rep = json.loads(
            (tmp_path / "out" / "example3_report.json").read_text())
        assert rep["regularity"] == "NonRegular"
        assert rep["criterion"]["verdict"] == "Certified"
        assert rep["contains_strip_S"]["violations"] == 0

    def test_bad_id_exits_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["examples", "--id", "7", "--out", str(tmp_path)])
        assert exc.value.code == 2


class TestAuditCommand:
    def test_haymanwu_suite(self, tmp_path, capsys):
        rc = main(["audit", "--suite", "haymanwu",
                   "--out", str(tmp_path / "out")])
        assert rc == 0
        out = capsys.readouterr().out
        assert "PASS halfplane:hayman_wu" in out
        rep = json.loads(
            (tmp_path / "out" / "audit_haymanwu.json").read_text())
        assert rep["pass"] is True
        assert rep["counts"]["failed"] == 0

    def test_unknown_suite_exits_2(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["audit", "--suite", "nonsense", "--out", str(tmp_path)])
        assert exc.value.code == 2

    def test_determinism_bytes(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["audit", "--suite", "metrics", "--seed", "7",
                     "--out", str(out1)]) == 0
        assert main(["audit", "--suite", "metrics", "--seed", "7",
                     "--out", str(out2)]) == 0
        b1 = (out1 / "audit_metrics.json").read_bytes()
        b2 = (out2 / "audit_metrics.json").read_bytes()
        assert b1 == b2

    def test_trace_determinism_bytes(self, tmp_path):
        cfg = write_config(tmp_path, HALFPLANE_EXPLICIT)
        for sub in ("a", "b"):
            assert main(["trace", "--config", cfg, "--seed", "11",
                         "--out", str(tmp_path / sub)]) == 0
        for name in ("trace_p000_forward.csv", "trace_manifest.json"):
            assert (tmp_path / "a" / name).read_bytes() == \
                (tmp_path / "b" / name).read_bytes()

    def test_examples_determinism_bytes(self, tmp_path):
        for sub in ("a", "b"):
            assert main(["examples", "--id", "1", "--seed", "5",
                         "--out", str(tmp_path / sub)]) == 0
        assert (tmp_path / "a" / "example1_report.json").read_bytes() == \
            (tmp_path / "b" / "example1_report.json").read_bytes()

    def test_elliptic_builtin_trace(self, tmp_path):
        import math
        payload = {
            "builtin": "dilation",
            "forward_grid": {"kind": "explicit", "values": [0.0, 1.0]},
            "backward_grid": {"kind": "explicit", "values": [0.0, 0.5]},
        }
        cfg = write_config(tmp_path, payload)
        assert main(["trace", "--config", cfg,
                     "--out", str(tmp_path / "out")]) == 0
        fwd = (tmp_path / "out" / "trace_p000_forward.csv").read_text()
        last = fwd.strip().splitlines()[-1].split(",")
        assert float(last[1]) == pytest.approx(0.5 / math.e, abs=1e-9)
        bwd = (tmp_path / "out" / "trace_p000_backward.csv").read_text()
        last = bwd.strip().splitlines()[-1].split(",")
        assert float(last[1]) == pytest.approx(0.5 * math.exp(0.5), abs=1e-6)
