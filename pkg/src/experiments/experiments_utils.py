import time
from dataclasses import asdict
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, TypeVar

import numpy as np
import pandas as pd

from codec import (
    CodeSequence,
    RoundtripReport,
    compare_with_window,
    decode_sequence_text,
    encode_tree_text,
    finite_code_check,
    psi_R,
    roundtrip_check,
)
from experiments.experiments_types import (
    AnalyticsConfig,
    CodecConfig,
    CompareConfig,
    MtpConfig,
    NamedLaw,
    PhaseConfig,
    RunOutcome,
    RunSettings,
    SimulateConfig,
)
from increments import IncrementLaw, OffspringLaw, TrajectoryWindow, drift_sign, iid_window
from recorder import (
    ExplorationClass,
    RecorderConfig,
    Resolved,
    ball_vertex_table,
    classify_exploration,
    spine_offspring,
)
from samplers import Sample, SamplerSpec, size_biased
from stats import (
    LawEstimate,
    collect,
    collect_windows,
    empirical_local_law,
    independence_check,
    law_differences,
    law_estimate,
    law_from_values,
    mtp_suite,
    scalar_estimate,
    transport_family,
    tv_distance,
)
from trees import OrderedTree, serialize
from utils.output_utils import write_csv, write_json_report, write_jsonl, write_text_lines
from utils.parallel_utils import run_sharded
from utils.rich_utils import (
    align_columns,
    console,
    create_table,
    level_at_least,
    progress_bar,
    status_text,
)
from walk_analytics import (
    HittingQuery,
    derived_laws,
    simulate_hitting_fraction,
    weak_record_enumerate,
    weak_record_joint,
)

T = TypeVar("T")

# tv limits of the ball-law comparison, by sign of the drift
TV_LIMITS = {-1: 0.02, 0: 0.02, 1: 0.03}
PROGRESS_BLOCKS = 20
BRACKET_TOLERANCE = 1e-12


def _banner(title: str, subtitle: str, settings: RunSettings) -> None:
    if not level_at_least(settings.logging_level, "summary"):
        return
    console.print()
    console.rule(f"[bold]{title}[/]")
    console.print(f"[italic]{subtitle}[/]", justify="center")
    console.print(
        f"seed={settings.seed}  samples={settings.samples}  threads={settings.threads}",
        justify="center",
    )
    console.print()


def _report_failures(outcome: RunOutcome, settings: RunSettings) -> None:
    for message in outcome.invariant_violations:
        console.print(f"[bold red]Invariant violated:[/] {message}")
    for message in outcome.statistical_failures:
        console.print(f"[red]Outside tolerance:[/] {message}")
    if level_at_least(settings.logging_level, "summary"):
        passed = outcome.checks - len(outcome.invariant_violations)
        passed -= len(outcome.statistical_failures)
        console.print(f"\n{status_text(outcome.exit_code == 0)} {passed}/{outcome.checks} checks")
        console.rule()


def _debug_timing(settings: RunSettings, label: str, started: float) -> None:
    if level_at_least(settings.logging_level, "debug"):
        console.print(f"[dim]{label}: {time.perf_counter() - started:.2f}s[/]")


def _offset_task(
    task: Callable[[int, int], List[T]], offset: int, start: int, stop: int
) -> List[T]:
    return task(offset + start, offset + stop)


def _run_in_blocks(
    task: Callable[[int, int], List[T]],
    n: int,
    settings: RunSettings,
    description: str,
) -> List[T]:
    """run_sharded over [0, n) in a few blocks, so the progress bar can move."""
    block = max(1, -(-n // PROGRESS_BLOCKS))
    results: List[T] = []
    with progress_bar(settings.logging_level) as progress:
        task_id = progress.add_task(description, total=n)
        for offset in range(0, n, block):
            size = min(block, n - offset)
            started = time.perf_counter()
            results.extend(run_sharded(partial(_offset_task, task, offset), size, settings.threads))
            progress.update(task_id, advance=size)
            _debug_timing(settings, f"{description} [{offset}, {offset + size})", started)
    return results


def record_spec(
    law: IncrementLaw, radius: Optional[int], settings: RunSettings, extension_budget: int
) -> SamplerSpec:
    return SamplerSpec(
        family="record",
        law=[[v, p] for v, p in law.atoms],
        radius=radius,
        node_budget=settings.node_budget,
        extension_budget=extension_budget,
        seed=settings.seed,
    )


def reference_spec(
    law: IncrementLaw, radius: int, settings: RunSettings, size_cap: int
) -> SamplerSpec:
    """The sampler whose ball law the record graph of `law` should match.

    TGWT(pi) for negative mean, EGWT(pi) for zero mean and the unimodularised ECS
    EKT(pi_bar, pi_tilde) for positive mean.
    """
    derived = derived_laws(law)
    sign = drift_sign(law)
    common = {"radius": radius, "node_budget": settings.node_budget, "seed": settings.seed}
    if sign < 0:
        return SamplerSpec(family="tgwt", pi=derived.offspring.to_list(), **common)
    if sign == 0:
        return SamplerSpec(family="egwt", pi=derived.offspring.to_list(), **common)
    assert derived.pi_bar is not None and derived.pi_tilde is not None
    return SamplerSpec(
        family="ekt_unimodular",
        alpha=derived.pi_bar.to_list(),
        beta=derived.pi_tilde.to_list(),
        size_cap=size_cap,
        **common,
    )


def _spec_from_dict(
    spec: Dict[str, Any], radius: Optional[int], settings: RunSettings
) -> SamplerSpec:
    defaults = {"radius": radius, "node_budget": settings.node_budget, "seed": settings.seed}
    return SamplerSpec.from_dict({**defaults, **spec})


# Phase transition sweep


def expected_class(spec: SamplerSpec) -> ExplorationClass:
    if spec.family == "record_queue":
        return ExplorationClass.SPINE_EVIDENCE
    sign = drift_sign(IncrementLaw.from_atoms(spec.law or []))
    if sign < 0:
        return ExplorationClass.FINITE_COMPONENT_CERTIFIED
    if sign > 0:
        return ExplorationClass.SPINE_EVIDENCE
    return ExplorationClass.ALL_DESCENDANTS_FINITE_EVIDENCE


def _classify_range(
    spec: SamplerSpec, seed: int, horizon: int, config: RecorderConfig, start: int, stop: int
) -> List[str]:
    return [
        classify_exploration(spec.window([seed, i]), horizon, config).value
        for i in range(start, stop)
    ]


def run_phase(config: PhaseConfig) -> RunOutcome:
    """Classify the component of 0 seed by seed across drifts, plus the M/M/1 chain."""
    outcome = RunOutcome("phase")
    _banner("Record Graph Phase Sweep", "Exploration classes by drift", config)
    recorder_config = RecorderConfig(
        node_budget=config.node_budget, ancestor_depth=config.ancestor_depth
    )

    cases: List[Tuple[str, float, SamplerSpec]] = []
    for named in config.laws:
        law = named.law
        mean = float(sum(v * p for v, p in law.atoms))
        cases.append((named.name, mean, record_spec(law, None, config, config.extension_budget)))
    for queue in config.queues:
        name = f"mm1_{queue['lambda']:g}_{queue['mu']:g}"
        spec = SamplerSpec(
            family="record_queue",
            queue=queue,
            node_budget=config.node_budget,
            extension_budget=config.extension_budget,
            seed=config.seed,
        )
        cases.append((name, 0.0, spec))

    table = create_table(columns=["Law", "Mean", "Expected", "Agreement", "Status"])
    rows: List[Dict[str, Any]] = []
    for name, mean, spec in cases:
        expected = expected_class(spec)
        task = partial(_classify_range, spec, config.seed, config.horizon, recorder_config)
        outcomes = _run_in_blocks(task, config.samples, config, f"Classifying {name}")
        agreement = sum(o == expected.value for o in outcomes) / len(outcomes)
        if expected is ExplorationClass.ALL_DESCENDANTS_FINITE_EVIDENCE or spec.queue:
            # zero-mean cases only need a majority
            passed = agreement > 0.5
        else:
            passed = agreement >= config.min_agreement
        outcome.check(passed, f"{name}: {expected.value} on {agreement:.3f} of seeds")
        for i, o in enumerate(outcomes):
            rows.append(
                {
                    "law": name,
                    "family": spec.family,
                    "mean": mean,
                    "sample": i,
                    "outcome": o,
                    "expected": expected.value,
                    "agrees": o == expected.value,
                }
            )
        table.add_row(name, f"{mean:+.4f}", expected.value, f"{agreement:.4f}", status_text(passed))
        if level_at_least(config.logging_level, "verbose"):
            counts = pd.Series(outcomes).value_counts()
            console.print(f"[dim]{name}: {counts.to_dict()}[/]")

    if level_at_least(config.logging_level, "summary"):
        align_columns(table, {"Mean": "right", "Agreement": "right"})
        console.print(table)
    outcome.outputs.append(
        write_csv(
            "phase_sweep",
            pd.DataFrame(rows),
            config.output_file_path,
            "phase",
            config.to_dict(),
            config.timestamp_file,
        )
    )
    _report_failures(outcome, config)
    return outcome


# Ball-law comparison


def _spine_pair(
    config: RecorderConfig, w: TrajectoryWindow
) -> Optional[Tuple[int, Optional[int]]]:
    found = spine_offspring(w, config)
    return found.value if isinstance(found, Resolved) else None


def _atoms(law: OffspringLaw) -> Dict[int, float]:
    return {int(k): float(p) for k, p in law.atoms}


def _law_check(
    outcome: RunOutcome, estimate: LawEstimate, expected: Dict[int, float], sigmas: float
) -> Dict[str, Any]:
    passed = outcome.check(
        estimate.within(expected, sigmas),
        f"{estimate.statistic} law is {estimate.max_z(expected):.2f} sigma from its target",
    )
    return {**estimate.to_dict(expected), "passed": passed}


def _drift_checks(
    config: CompareConfig, law: IncrementLaw, left: SamplerSpec, outcome: RunOutcome
) -> Dict[str, Any]:
    """Checks on the record samples that depend on the sign of the drift."""
    derived = derived_laws(law)
    sign = drift_sign(law)
    seed = config.seed + 2
    checks: Dict[str, Any] = {}
    if sign < 0:
        parents = scalar_estimate(left, "has_parent", config.samples, seed, config.threads)
        # P[no parent] = -E[X_0]
        target = -float(derived.mean)
        passed = outcome.check(
            parents.within(1.0 - target, config.sigmas),
            f"P[no parent] {1.0 - parents.mean:.5f} is not within "
            f"{config.sigmas} sigma of {target:.5f}",
        )
        checks["no_parent"] = {
            "estimate": 1.0 - parents.mean,
            "expected": target,
            "stderr": parents.stderr,
            "n": parents.n,
            "passed": passed,
        }
        degrees = law_estimate(left, "parent_degree", config.samples, seed, config.threads)
        expected = _atoms(size_biased(derived.offspring))
        checks["parent_offspring"] = _law_check(outcome, degrees, expected, config.sigmas)
    elif sign == 0:
        report = independence_check(
            left, config.samples, seed, left.radius or 2, config.permutations, config.threads
        )
        passed = outcome.check(
            report.tv < config.independence_limit,
            f"Independence TV {report.tv:.5f} is not below {config.independence_limit}",
        )
        checks["independence"] = {
            **report.to_dict(),
            "limit": config.independence_limit,
            "passed": passed,
        }
    else:
        assert derived.pi_bar is not None and derived.pi_tilde is not None
        reduce = partial(_spine_pair, RecorderConfig(node_budget=config.node_budget))
        pairs, dropped = collect_windows(left, reduce, config.samples, seed, config.threads)
        spine = law_from_values("spine_offspring", [a for a, _ in pairs])
        spine.dropped += dropped
        bush = law_from_values("bush_offspring", [b for _, b in pairs])
        checks["spine_offspring"] = _law_check(
            outcome, spine, _atoms(derived.pi_bar), config.sigmas
        )
        checks["bush_offspring"] = _law_check(
            outcome, bush, _atoms(derived.pi_tilde), config.sigmas
        )

    if level_at_least(config.logging_level, "summary"):
        table = create_table(columns=["Check", "Kept", "Result"])
        for name, check in checks.items():
            table.add_row(name, str(check["n"]), status_text(check["passed"]))
        align_columns(table, {"Kept": "right"})
        console.print(table)
    return checks


def run_compare(config: CompareConfig) -> RunOutcome:
    """TV distance between the radius-r ball laws of two samplers.

    By default the record graph of the configured law against its reference sampler.
    """
    outcome = RunOutcome("compare")
    radius = 2 if config.radius is None else config.radius
    derived: Optional[Dict[str, Any]] = None
    if config.samplers is not None:
        left = _spec_from_dict(config.samplers[0], radius, config)
        right = _spec_from_dict(config.samplers[1], radius, config)
        tv_limit = config.tv_limit if config.tv_limit is not None else TV_LIMITS[0]
    else:
        law = config.law.law
        left = record_spec(law, radius, config, config.extension_budget)
        right = reference_spec(law, radius, config, config.size_cap)
        derived = derived_laws(law).to_dict()
        default_limit = TV_LIMITS[drift_sign(law)]
        tv_limit = config.tv_limit if config.tv_limit is not None else default_limit
    _banner("Ball Law Comparison", f"{left.family} vs {right.family} at radius {radius}", config)

    laws = []
    with progress_bar(config.logging_level) as progress:
        task_id = progress.add_task("Sampling balls", total=2)
        for offset, spec in enumerate((left, right)):
            started = time.perf_counter()
            seed = config.seed + offset
            laws.append(
                empirical_local_law(spec, radius, config.samples, seed, config.threads)
            )
            progress.update(task_id, advance=1)
            _debug_timing(config, spec.family, started)
    left_law, right_law = laws

    tv = tv_distance(left_law, right_law)
    passed = outcome.check(tv < tv_limit, f"TV {tv:.5f} is not below {tv_limit}")
    differences = law_differences(left_law, right_law, config.top_differences)

    if level_at_least(config.logging_level, "summary"):
        table = create_table(columns=["Sampler", "Kept", "Dropped", "Distinct balls"])
        for spec, emp in ((left, left_law), (right, right_law)):
            table.add_row(spec.family, str(emp.total), str(emp.dropped), str(len(emp.counts)))
        align_columns(table, {"Kept": "right", "Dropped": "right", "Distinct balls": "right"})
        console.print(table)
        console.print(f"TV distance: {tv:.5f} (limit {tv_limit}) {status_text(passed)}")
    if level_at_least(config.logging_level, "verbose"):
        diff_table = create_table(columns=["Ball", left.family, right.family])
        for row in differences[:10]:
            diff_table.add_row(str(row["key"]), f"{row['p_a']:.5f}", f"{row['p_b']:.5f}")
        console.print(diff_table)

    drift: Optional[Dict[str, Any]] = None
    if config.samplers is None and config.drift_checks:
        drift = _drift_checks(config, config.law.law, left, outcome)

    report = {
        "radius": radius,
        "left": left.to_dict(),
        "right": right.to_dict(),
        "derived_laws": derived,
        "tv": tv,
        "tv_limit": tv_limit,
        "passed": passed,
        "left_law": {"kept": left_law.total, "dropped": left_law.dropped},
        "right_law": {"kept": right_law.total, "dropped": right_law.dropped},
        "differences": differences,
        "drift_checks": drift,
    }
    outcome.outputs.append(
        write_json_report(
            "compare_report",
            report,
            config.output_file_path,
            "compare",
            config.to_dict(),
            config.timestamp_file,
        )
    )
    _report_failures(outcome, config)
    return outcome


# Mass transport suite


def run_mtp(config: MtpConfig) -> RunOutcome:
    """Mass-transport checks of every reference sampler, plus the GW negative control."""
    outcome = RunOutcome("mtp")
    radius = 3 if config.radius is None else config.radius
    family = transport_family(config.family_size, config.transport_seed)
    _banner(
        "Mass Transport Suite",
        f"{len(family)} transports: {', '.join(h.name for h in family)}",
        config,
    )

    targets: List[Tuple[str, SamplerSpec]] = [
        (named.name, reference_spec(named.law, radius, config, config.size_cap))
        for named in config.laws
    ]
    targets += [
        (
            str(spec.get("name", spec["family"])),
            _spec_from_dict(_without_name(spec), radius, config),
        )
        for spec in config.samplers
    ]
    control = None
    if config.negative_control is not None:
        control = _spec_from_dict(_without_name(config.negative_control), radius, config)
        targets.append(("negative_control", control))

    rows: List[Dict[str, Any]] = []
    table = create_table(columns=["Sampler", "Family", "Kept", "Max |z|", "Status"])
    with progress_bar(config.logging_level) as progress:
        task_id = progress.add_task("Transport checks", total=len(targets))
        for name, spec in targets:
            started = time.perf_counter()
            reports = mtp_suite(spec, family, config.samples, config.seed, config.threads)
            progress.update(task_id, advance=1)
            _debug_timing(config, name, started)

            max_z = max(abs(r.z_score) for r in reports)
            is_control = spec is control
            if is_control:
                passed = outcome.check(
                    max_z > config.control_z,
                    f"negative control max |z| = {max_z:.2f} is not above {config.control_z}",
                )
            else:
                passed = True
                for r in reports:
                    passed &= outcome.check(
                        r.passed(config.z_limit),
                        f"{name}/{r.transport}: |z| = {abs(r.z_score):.2f} >= {config.z_limit}",
                    )
            for r in reports:
                rows.append({"sampler": name, "family": spec.family, **r.to_dict()})
            kept = min(r.n for r in reports)
            table.add_row(name, spec.family, str(kept), f"{max_z:.2f}", status_text(passed))
            if level_at_least(config.logging_level, "verbose"):
                for r in reports:
                    console.print(
                        f"[dim]{name}/{r.transport}: out {r.mean_out:.4f}"
                        f" in {r.mean_in:.4f} z {r.z_score:+.2f}[/]"
                    )

    if level_at_least(config.logging_level, "summary"):
        align_columns(table, {"Kept": "right", "Max |z|": "right"})
        console.print(table)
    outcome.outputs.append(
        write_csv(
            "mtp_suite",
            pd.DataFrame(rows),
            config.output_file_path,
            "mtp",
            config.to_dict(),
            config.timestamp_file,
        )
    )
    _report_failures(outcome, config)
    return outcome


def _without_name(spec: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v for k, v in spec.items() if k != "name"}


# Walk analytics


def _law_analytics(named: NamedLaw, config: AnalyticsConfig, outcome: RunOutcome) -> Dict[str, Any]:
    law = named.law
    derived = derived_laws(law)
    tol = config.normalization_tolerance
    sums = {
        "doob": sum(p for _, p in derived.doob.atoms),
        "pi_tilde": None if derived.pi_tilde is None else float(derived.pi_tilde.probs.sum()),
        "pi_bar": None if derived.pi_bar is None else float(derived.pi_bar.probs.sum()),
    }
    for name, total in sums.items():
        if total is not None:
            outcome.check(
                abs(total - 1.0) <= tol, f"{named.name}: {name} sums to {total!r}", invariant=True
            )
    c = derived.c
    harmonic = sum(p * c ** (v + 1) for v, p in law.atoms)
    outcome.check(
        abs(harmonic - c) <= tol,
        f"{named.name}: sum_k p_k c^(k+1) = {harmonic!r}, c = {c!r}",
        invariant=True,
    )
    doob_mean = float(sum(v * p for v, p in derived.doob.atoms))
    if derived.mean > 0:
        outcome.check(
            doob_mean < 0, f"{named.name}: Doob mean {doob_mean} is not negative", invariant=True
        )

    brackets = []
    for k in range(0, law.max_value + 1):
        for j in range(0, k + 1):
            closed = weak_record_joint(law, j, k)
            lower, residual = weak_record_enumerate(law, j, k, config.depth)
            inside = lower - BRACKET_TOLERANCE <= closed <= lower + residual + BRACKET_TOLERANCE
            outcome.check(
                inside,
                f"{named.name}: weak record ({j}, {k}) = {closed} outside "
                f"[{lower}, {lower + residual}]",
                invariant=True,
            )
            brackets.append(
                {
                    "j": j,
                    "k": k,
                    "closed_form": closed,
                    "lower_bound": lower,
                    "residual": residual,
                    "tight": residual < config.residual_limit,
                }
            )

    hitting = None
    if derived.mean != 0:
        query = HittingQuery(target=-1, horizon=config.hitting_horizon)
        fraction = simulate_hitting_fraction(law, query, config.samples, config.seed)
        sigma = np.sqrt(c * (1 - c) / config.samples)
        allowed = 4 * sigma + 1e-3
        outcome.check(
            abs(fraction - c) <= allowed,
            f"{named.name}: hitting fraction {fraction:.5f} vs c = {c:.5f}",
        )
        hitting = {"fraction": fraction, "c": c, "allowed": allowed, "query": query}

    return {
        "name": named.name,
        "derived": derived.to_dict(),
        "sums": sums,
        "doob_mean": doob_mean,
        "weak_record": brackets,
        "hitting": hitting,
    }


def run_analytics(config: AnalyticsConfig) -> RunOutcome:
    outcome = RunOutcome("analytics")
    _banner("Walk Analytics", "c, Doob transform and derived offspring laws", config)

    results = []
    table = create_table(columns=["Law", "Mean", "c", "Doob mean", "pi_tilde", "pi_bar"])
    with progress_bar(config.logging_level) as progress:
        task_id = progress.add_task("Deriving laws", total=len(config.laws))
        for named in config.laws:
            result = _law_analytics(named, config, outcome)
            results.append(result)
            progress.update(task_id, advance=1)
            derived = result["derived"]
            table.add_row(
                named.name,
                f"{derived['mean']:+.4f}",
                f"{derived['c']:.10f}",
                f"{result['doob_mean']:+.4f}",
                str(derived["pi_tilde"]),
                str(derived["pi_bar"]),
            )
            if level_at_least(config.logging_level, "verbose"):
                console.print(f"[dim]{named.name}: doob {derived['doob']}[/]")

    if level_at_least(config.logging_level, "summary"):
        align_columns(table, {"Mean": "right", "c": "right", "Doob mean": "right"})
        console.print(table)
    outcome.outputs.append(
        write_json_report(
            "analytics_report",
            {"laws": results},
            config.output_file_path,
            "analytics",
            config.to_dict(),
            config.timestamp_file,
        )
    )
    _report_failures(outcome, config)
    return outcome


# Codec


def fuzz_code(seed: int, index: int, max_length: int) -> CodeSequence:
    """A random code with values in {-1, ..., 2} on a window holding index 0."""
    rng = np.random.default_rng([seed, index])
    length = int(rng.integers(1, max_length + 1))
    lo = -int(rng.integers(1, length + 1))
    values = tuple(int(v) for v in rng.integers(-1, 3, size=length))
    return CodeSequence(lo=lo, values=values)


def _fuzz_range(seed: int, max_length: int, start: int, stop: int) -> List[RoundtripReport]:
    reports = []
    for i in range(start, stop):
        y = fuzz_code(seed, i, max_length)
        reports.append(compare_with_window(psi_R(y), y, -y.lo - 1, y.hi))
    return reports


def _roundtrip_range(
    law: IncrementLaw,
    seed: int,
    half_window: int,
    radius: Optional[int],
    extension_budget: int,
    start: int,
    stop: int,
) -> List[RoundtripReport]:
    return [
        roundtrip_check(iid_window(law, [seed, i], extension_budget), half_window, radius)
        for i in range(start, stop)
    ]


def finite_code_passed(t: OrderedTree) -> Optional[bool]:
    """finite_code_check on a whole resolved tree; None for censored samples."""
    if not t.is_fully_resolved():
        return None
    return finite_code_check(t).passed


def _merged(reports: List[RoundtripReport]) -> RoundtripReport:
    total = RoundtripReport()
    for report in reports:
        total.merge(report)
    return total


def _codec_action(config: CodecConfig, outcome: RunOutcome) -> None:
    if config.tree is not None:
        code = encode_tree_text(Path(config.tree).read_text())
        console.print(f"lo = {code.lo}")
        console.print(code.to_text())
        report: Dict[str, Any] = {"action": "encode", "code": code.to_dict()}
        name = "codec_encode"
    else:
        assert config.seq is not None
        tree = decode_sequence_text(Path(config.seq).read_text(), config.lo)
        text = serialize(tree)
        console.print(text)
        report = {"action": "decode", "tree": text}
        name = "codec_decode"
    outcome.outputs.append(
        write_json_report(
            name, report, config.output_file_path, "codec", config.to_dict(), config.timestamp_file
        )
    )


def run_codec(config: CodecConfig) -> RunOutcome:
    """Round trips of the tree codec, or a single encode/decode action."""
    outcome = RunOutcome("codec")
    if config.tree is not None or config.seq is not None:
        _codec_action(config, outcome)
        return outcome
    _banner("Codec Round Trips", "phi_R and psi_R against each other and the walk", config)

    fuzz = _merged(
        _run_in_blocks(
            partial(_fuzz_range, config.seed, config.fuzz_length),
            config.fuzz_windows,
            config,
            "Deterministic windows",
        )
    )
    outcome.check(fuzz.passed, f"psi_R then phi_R: {fuzz.mismatches} mismatches", invariant=True)

    roundtrip = _merged(
        _run_in_blocks(
            partial(
                _roundtrip_range,
                config.law.law,
                config.seed,
                config.half_window,
                config.radius,
                config.extension_budget,
            ),
            config.samples,
            config,
            "Record components",
        )
    )
    outcome.check(
        roundtrip.passed,
        f"record components: {roundtrip.mismatches} mismatched indices",
        invariant=True,
    )

    gw = SamplerSpec(
        family="gw", pi=config.gw_pi, node_budget=config.node_budget, seed=config.seed
    )
    verdicts, dropped = collect(
        gw, finite_code_passed, config.gw_samples, config.seed, config.threads
    )
    failed = sum(1 for v in verdicts if not v)
    outcome.check(failed == 0, f"finite code check failed on {failed} GW trees", invariant=True)

    if level_at_least(config.logging_level, "summary"):
        table = create_table(columns=["Check", "Compared", "Censored", "Mismatches", "Status"])
        for label, r in (("psi_R -> phi_R", fuzz), ("walk -> phi_R", roundtrip)):
            table.add_row(
                label, str(r.compared), str(r.censored), str(r.mismatches), status_text(r.passed)
            )
        table.add_row(
            "finite code", str(len(verdicts)), str(dropped), str(failed), status_text(failed == 0)
        )
        align_columns(table, {"Compared": "right", "Censored": "right", "Mismatches": "right"})
        console.print(table)

    report = {
        "fuzz": fuzz.to_dict(),
        "roundtrip": roundtrip.to_dict(),
        "finite_code": {"checked": len(verdicts), "dropped": dropped, "failed": failed},
    }
    outcome.outputs.append(
        write_json_report(
            "codec_report",
            report,
            config.output_file_path,
            "codec",
            config.to_dict(),
            config.timestamp_file,
        )
    )
    _report_failures(outcome, config)
    return outcome


# Simulation


def vertex_rows(spec: SamplerSpec, seed: List[int], sample: Sample) -> List[Dict[str, Any]]:
    """Per-vertex rows of one sample; record balls also carry type and L."""
    t = sample.tree
    if spec.family in ("record", "record_queue"):
        return [
            {"sample": seed[1], **asdict(row)}
            for row in ball_vertex_table(spec.window(seed), t)
        ]
    return [
        {
            "sample": seed[1],
            "vertex": v,
            "label": t.labels[v],
            "parent": t.parent[v],
            "child_rank": t.child_rank(v),
            "out_degree": t.out_degree(v),
            "flag": t.flags[v].value,
            "is_root": v == t.root,
        }
        for v in t.vertices()
    ]


def _simulate_range(
    spec: SamplerSpec, seed: int, dump: bool, start: int, stop: int
) -> List[Dict[str, Any]]:
    out = []
    for i in range(start, stop):
        sample = spec([seed, i])
        t = sample.tree
        has_parent = t.has_parent(t.root)
        out.append(
            {
                "index": i,
                "text": serialize(t),
                "size": t.size,
                "root_degree": t.out_degree(t.root) if t.children_known(t.root) else None,
                "has_parent": has_parent,
                "censored": sample.meta.censored,
                "rejected": sample.meta.rejected_count,
                "overflow": sample.meta.overflow_count,
                "rows": vertex_rows(spec, [seed, i], sample) if dump else [],
            }
        )
    return out


def _mean_of(values: List[Any]) -> Optional[float]:
    known = [float(v) for v in values if v is not None]
    return float(np.mean(known)) if known else None


def run_simulate(config: SimulateConfig) -> RunOutcome:
    outcome = RunOutcome("simulate")
    spec = SamplerSpec.from_dict(config.sampler)
    _banner("Sampler Simulation", f"{spec.family} trees", config)

    results = _run_in_blocks(
        partial(_simulate_range, spec, spec.seed, config.dump),
        config.samples,
        config,
        f"Sampling {spec.family}",
    )

    def column(key: str) -> List[Any]:
        return [r[key] for r in results]

    summary = {
        "sampler": spec.to_dict(),
        "samples": len(results),
        "mean_size": _mean_of(column("size")),
        "mean_root_degree": _mean_of(column("root_degree")),
        "has_parent_rate": _mean_of(column("has_parent")),
        "censored_rate": _mean_of(column("censored")),
        "rejected": sum(column("rejected")),
        "overflow": sum(column("overflow")),
    }

    if level_at_least(config.logging_level, "summary"):
        table = create_table(columns=["Statistic", "Value"])
        for key, value in summary.items():
            if key != "sampler":
                table.add_row(key, "-" if value is None else f"{value:.6g}")
        align_columns(table, {"Value": "right"})
        console.print(table)
    if level_at_least(config.logging_level, "verbose"):
        for r in results[:5]:
            console.print(f"[dim]{r['text']}[/]")

    name = f"simulate_{spec.family}"
    outcome.outputs.append(
        write_text_lines(
            f"{name}_trees",
            [r["text"] for r in results],
            config.output_file_path,
            config.timestamp_file,
        )
    )
    if config.dump:
        rows = [row for r in results for row in r["rows"]]
        outcome.outputs.append(
            write_jsonl(f"{name}_vertices", rows, config.output_file_path, config.timestamp_file)
        )
    outcome.outputs.append(
        write_json_report(
            f"{name}_summary",
            summary,
            config.output_file_path,
            "simulate",
            config.to_dict(),
            config.timestamp_file,
        )
    )
    _report_failures(outcome, config)
    return outcome
