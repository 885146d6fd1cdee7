"""
Command configs, run outcomes and the record_tools entry point.
"""

import json

import pandas as pd
import pytest

from experiments import (
    AnalyticsConfig,
    CodecConfig,
    CompareConfig,
    ExitCode,
    NamedLaw,
    PhaseConfig,
    RunOutcome,
    RunSettings,
    SimulateConfig,
    expected_class,
    record_spec,
    reference_spec,
)
from experiments.experiments import main
from increments import IncrementLaw
from recorder import ExplorationClass
from utils.config_utils import ConfigError

NEGATIVE = [[-1, 0.75], [1, 0.25]]
ZERO = [[-1, 0.5], [1, 0.5]]
POSITIVE = [[-1, 0.25], [1, 0.75]]

# ---- Helpers ----


def write_config(tmp_path, text):
    path = tmp_path / "config.toml"
    path.write_text(text)
    return str(path)


def read_report(path):
    with open(path) as f:
        return json.load(f)


def run(tmp_path, command, config_text, *flags):
    out = tmp_path / "out"
    argv = [command, "--config", write_config(tmp_path, config_text), "--out", str(out)]
    return main([*argv, "--threads", "1", *flags]), out


# ---- Outcomes ----


class TestRunOutcome:
    def test_clean_run_passes(self):
        outcome = RunOutcome("phase")
        outcome.check(True, "fine")
        assert outcome.checks == 1
        assert outcome.exit_code is ExitCode.PASS

    def test_statistical_failure(self):
        outcome = RunOutcome("compare")
        assert not outcome.check(False, "tv too large")
        assert outcome.exit_code is ExitCode.STATISTICAL_FAILURE

    def test_invariant_violation_wins(self):
        outcome = RunOutcome("codec")
        outcome.check(False, "tv too large")
        outcome.check(False, "mismatch", invariant=True)
        assert outcome.exit_code is ExitCode.INVARIANT_VIOLATION
        assert outcome.invariant_violations == ["mismatch"]


# ---- Config sections ----


class TestConfigs:
    def test_phase_defaults(self):
        config = PhaseConfig.from_dict({})
        assert config.samples == 200
        assert [law.name for law in config.laws] == ["negative", "zero", "positive"]
        assert config.queues == [{"lambda": 1.0, "mu": 2.0}]
        assert config.radius is None

    def test_threads_from_environment(self, monkeypatch):
        monkeypatch.setenv("RECORD_TOOLS_THREADS", "3")
        assert PhaseConfig.from_dict({}).threads == 3
        assert PhaseConfig.from_dict({"threads": 2}).threads == 2

    @pytest.mark.parametrize(
        "section",
        [
            {"samples": 0},
            {"radius": -1},
            {"logging_level": "loud"},
            {"laws": []},
        ],
    )
    def test_bad_common_values(self, section):
        with pytest.raises(ConfigError):
            PhaseConfig.from_dict(section)

    def test_named_laws(self):
        laws = [{"atoms": ZERO, "name": "fair"}, {"atoms": NEGATIVE}]
        config = AnalyticsConfig.from_dict({"laws": laws})
        assert [law.name for law in config.laws] == ["fair", "law_1"]
        assert config.laws[0].law == IncrementLaw.from_atoms(ZERO)

    def test_law_file(self, tmp_path):
        path = tmp_path / "law.json"
        path.write_text(json.dumps({"atoms": POSITIVE}))
        config = CompareConfig.from_dict({"law_file": str(path)})
        assert config.law.law == IncrementLaw.from_atoms(POSITIVE)
        assert config.radius == 2

    def test_compare_needs_two_samplers(self):
        with pytest.raises(ConfigError):
            CompareConfig.from_dict({"samplers": [{"family": "gw"}]})
        with pytest.raises(ConfigError):
            CompareConfig.from_dict({"samplers": ["gw", "tgwt"]})

    def test_codec_actions_exclusive(self):
        with pytest.raises(ConfigError):
            CodecConfig.from_dict({"tree": "a.txt", "seq": "b.txt"})
        with pytest.raises(ConfigError):
            CodecConfig.from_dict({"half_window": 0})

    def test_simulate_needs_a_sampler(self):
        with pytest.raises(ConfigError):
            SimulateConfig.from_dict({})

    def test_simulate_section_overrides_the_spec(self):
        sampler = {"family": "tgwt", "pi": [[0, 0.5], [1, 0.5]], "seed": 3}
        assert SimulateConfig.from_dict({"sampler": dict(sampler)}).seed == 3
        config = SimulateConfig.from_dict({"sampler": dict(sampler), "seed": 5, "radius": 2})
        assert config.sampler["seed"] == 5
        assert config.sampler["radius"] == 2

    def test_sampler_file(self, tmp_path):
        path = tmp_path / "sampler.json"
        path.write_text(json.dumps({"family": "gw", "pi": [[0, 1.0]], "radius": 4}))
        config = SimulateConfig.from_dict({"sampler_file": str(path)})
        assert config.sampler["family"] == "gw"
        assert config.radius == 4


class TestReferenceSamplers:
    def test_family_by_drift(self):
        settings = RunSettings()
        assert reference_spec(IncrementLaw.from_atoms(NEGATIVE), 3, settings, 50).family == "tgwt"
        assert reference_spec(IncrementLaw.from_atoms(ZERO), 3, settings, 50).family == "egwt"
        positive = reference_spec(IncrementLaw.from_atoms(POSITIVE), 3, settings, 50)
        assert positive.family == "ekt_unimodular"
        assert [k for k, _ in positive.alpha] == [0, 1]
        assert [p for _, p in positive.alpha] == pytest.approx([0.75, 0.25])

    def test_expected_class(self):
        settings = RunSettings()
        spec = record_spec(IncrementLaw.from_atoms(NEGATIVE), None, settings, 1000)
        assert expected_class(spec) is ExplorationClass.FINITE_COMPONENT_CERTIFIED
        spec = record_spec(IncrementLaw.from_atoms(ZERO), None, settings, 1000)
        assert expected_class(spec) is ExplorationClass.ALL_DESCENDANTS_FINITE_EVIDENCE

    def test_named_law_round_trip(self):
        named = NamedLaw.from_dict({"atoms": NEGATIVE, "name": "down"})
        assert named.atoms == NEGATIVE


# ---- Entry point ----


class TestMain:
    def test_analytics(self, tmp_path):
        code, out = run(tmp_path, "analytics", "[analytics]\ndepth = 20\n", "--samples", "500")
        assert code == ExitCode.PASS
        report = read_report(out / "analytics_report.json")
        assert report["format_version"] == 1
        assert report["command"] == "analytics"
        names = [law["name"] for law in report["results"]["laws"]]
        assert names == ["negative", "zero", "positive"]
        positive = report["results"]["laws"][2]
        assert positive["derived"]["c"] == pytest.approx(1 / 3)

    def test_global_section_is_inherited(self, tmp_path):
        text = '[record_tools]\nlogging_level = "errors_only"\n\n[analytics]\n'
        code, out = run(tmp_path, "analytics", text, "--samples", "200")
        assert code == ExitCode.PASS
        config = read_report(out / "analytics_report.json")["config"]
        assert config["logging_level"] == "errors_only"

    def test_codec_round_trips(self, tmp_path):
        text = "[codec]\nfuzz_windows = 30\nfuzz_length = 8\ngw_samples = 30\nhalf_window = 3\n"
        code, out = run(tmp_path, "codec", text, "--samples", "4")
        assert code == ExitCode.PASS
        results = read_report(out / "codec_report.json")["results"]
        assert results["fuzz"]["mismatches"] == 0
        assert results["roundtrip"]["mismatches"] == 0
        assert results["finite_code"]["failed"] == 0

    def test_codec_encode(self, tmp_path):
        tree = tmp_path / "tree.txt"
        tree.write_text("[(),()]\n")
        code, out = run(tmp_path, "codec", "[codec]\n", "--tree", str(tree))
        assert code == ExitCode.PASS
        results = read_report(out / "codec_encode.json")["results"]
        assert results["code"] == {"lo": -3, "hi": 0, "values": [-1, -1, 1]}

    def test_codec_decode(self, tmp_path):
        seq = tmp_path / "seq.txt"
        seq.write_text("-1 -1 1\n")
        code, out = run(tmp_path, "codec", "[codec]\n", "--seq", str(seq))
        assert code == ExitCode.PASS
        assert read_report(out / "codec_decode.json")["results"]["tree"] == "^0[-1(),-2()]"

    def test_bad_tree_is_a_config_error(self, tmp_path):
        tree = tmp_path / "tree.txt"
        tree.write_text("0[-1(]")
        code, _ = run(tmp_path, "codec", "[codec]\n", "--tree", str(tree))
        assert code == ExitCode.CONFIG_ERROR

    def test_simulate(self, tmp_path):
        text = '[simulate]\nsampler = { family = "tgwt", pi = [[0, 0.5], [1, 0.5]] }\n'
        code, out = run(tmp_path, "simulate", text, "--samples", "20", "--dump")
        assert code == ExitCode.PASS
        lines = (out / "simulate_tgwt_trees.txt").read_text().splitlines()
        assert len(lines) == 20
        rows = pd.read_json(out / "simulate_tgwt_vertices.jsonl", lines=True)
        assert set(rows["sample"]) == set(range(20))
        summary = read_report(out / "simulate_tgwt_summary.json")["results"]
        assert summary["censored_rate"] == 0.0

    def test_compare_identical_samplers(self, tmp_path):
        text = (
            "[compare]\n"
            'samplers = [{ family = "gw", pi = [[0, 1.0]] }, { family = "gw", pi = [[0, 1.0]] }]\n'
        )
        code, out = run(tmp_path, "compare", text, "--samples", "50")
        assert code == ExitCode.PASS
        assert read_report(out / "compare_report.json")["results"]["tv"] == 0.0

    @pytest.mark.parametrize(
        "atoms, checks",
        [
            (NEGATIVE, {"no_parent", "parent_offspring"}),
            (ZERO, {"independence"}),
            (POSITIVE, {"spine_offspring", "bush_offspring"}),
        ],
    )
    def test_compare_reports_drift_checks(self, tmp_path, atoms, checks):
        text = f"[compare]\natoms = {atoms}\n"
        code, out = run(tmp_path, "compare", text, "--samples", "200")
        assert code in (ExitCode.PASS, ExitCode.STATISTICAL_FAILURE)
        drift = read_report(out / "compare_report.json")["results"]["drift_checks"]
        assert set(drift) == checks
        for check in drift.values():
            assert isinstance(check["passed"], bool)
            assert check["n"] > 0

    def test_compare_negative_drift_targets(self, tmp_path):
        text = f"[compare]\natoms = {NEGATIVE}\n"
        _, out = run(tmp_path, "compare", text, "--samples", "200")
        drift = read_report(out / "compare_report.json")["results"]["drift_checks"]
        assert drift["no_parent"]["expected"] == pytest.approx(0.5)
        # pi = {0: 0.75, 2: 0.25}, size-biased to a point mass at 2
        assert drift["parent_offspring"]["expected"] == {"2": 1.0}

    def test_compare_without_drift_checks(self, tmp_path):
        text = f"[compare]\natoms = {NEGATIVE}\ndrift_checks = false\n"
        _, out = run(tmp_path, "compare", text, "--samples", "50")
        assert read_report(out / "compare_report.json")["results"]["drift_checks"] is None

    def test_mtp(self, tmp_path):
        text = (
            "[mtp]\nfamily_size = 6\ncontrol_z = 5.0\n\n"
            "[[mtp.laws]]\nname = \"negative\"\natoms = [[-1, 0.75], [1, 0.25]]\n"
        )
        code, out = run(tmp_path, "mtp", text, "--samples", "300")
        assert code == ExitCode.PASS
        rows = pd.read_csv(out / "mtp_suite.csv", comment="#")
        assert set(rows["sampler"]) == {"negative", "negative_control"}
        assert len(rows) == 12

    def test_phase_writes_every_sample(self, tmp_path):
        text = (
            "[phase]\nhorizon = 500\nancestor_depth = 40\nqueues = []\n\n"
            "[[phase.laws]]\nname = \"negative\"\natoms = [[-1, 0.75], [1, 0.25]]\n"
        )
        code, out = run(tmp_path, "phase", text, "--samples", "5")
        assert code in (ExitCode.PASS, ExitCode.STATISTICAL_FAILURE)
        rows = pd.read_csv(out / "phase_sweep.csv", comment="#")
        assert list(rows["sample"]) == [0, 1, 2, 3, 4]
        assert set(rows["expected"]) == {"finite_component_certified"}

    def test_missing_section(self, tmp_path):
        code, _ = run(tmp_path, "simulate", "[codec]\n")
        assert code == ExitCode.CONFIG_ERROR

    def test_bad_value(self, tmp_path):
        code, _ = run(tmp_path, "analytics", "[analytics]\nsamples = 0\n")
        assert code == ExitCode.CONFIG_ERROR

    def test_missing_config_file(self, tmp_path):
        assert main(["analytics", "--config", str(tmp_path / "nope.toml")]) == ExitCode.CONFIG_ERROR
