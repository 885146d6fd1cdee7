import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional, Tuple

import toml
from dotenv import load_dotenv

from codec import CodecError
from experiments.experiments_types import (
    AnalyticsConfig,
    CodecConfig,
    CompareConfig,
    ExitCode,
    MtpConfig,
    PhaseConfig,
    RunOutcome,
    SimulateConfig,
)
from experiments.experiments_utils import (
    run_analytics,
    run_codec,
    run_compare,
    run_mtp,
    run_phase,
    run_simulate,
)
from increments import IncrementLawError
from samplers import SamplerError
from trees import TreeParseError
from utils.config_utils import ConfigError, get_optional_config
from utils.rich_utils import console
from walk_analytics import AnalyticsError

ConfigFactory = Callable[[Dict[str, Any]], Any]
Runner = Callable[[Any], RunOutcome]

COMMANDS: Dict[str, Tuple[ConfigFactory, Runner, str]] = {
    "phase": (PhaseConfig.from_dict, run_phase, "Classify record components across drifts"),
    "compare": (CompareConfig.from_dict, run_compare, "Compare record balls with a sampler"),
    "mtp": (MtpConfig.from_dict, run_mtp, "Mass-transport checks of the samplers"),
    "analytics": (AnalyticsConfig.from_dict, run_analytics, "Derived laws of skip-free walks"),
    "codec": (CodecConfig.from_dict, run_codec, "Tree codec round trips, encode or decode"),
    "simulate": (SimulateConfig.from_dict, run_simulate, "Draw trees from a sampler family"),
}

CONFIG_ERRORS = (
    ConfigError,
    FileNotFoundError,
    KeyError,
    json.JSONDecodeError,
    toml.TomlDecodeError,
    IncrementLawError,
    SamplerError,
    AnalyticsError,
    CodecError,
    TreeParseError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="record_tools", description="Record graph experiments on random walks"
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name, (_, _, description) in COMMANDS.items():
        sub = commands.add_parser(name, help=description, description=description)
        sub.add_argument("--config", help="config file (default: config.toml)")
        sub.add_argument("--seed", type=int)
        sub.add_argument("--samples", type=int)
        sub.add_argument("--radius", type=int)
        sub.add_argument("--budget", type=int, help="node budget per sample")
        sub.add_argument("--threads", type=int)
        sub.add_argument("--out", help="output directory")
        if name == "simulate":
            sub.add_argument("--dump", action="store_true", help="write JSONL vertex tables")
        if name == "codec":
            sub.add_argument("--tree", help="encode the tree in this file")
            sub.add_argument("--seq", help="decode the code sequence in this file")
            sub.add_argument("--lo", type=int, help="index of the first code value")
    return parser


def overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Config keys set on the command line."""
    values = {
        "seed": args.seed,
        "samples": args.samples,
        "radius": args.radius,
        "node_budget": args.budget,
        "threads": args.threads,
        "output_file_path": args.out,
        "tree": getattr(args, "tree", None),
        "seq": getattr(args, "seq", None),
        "lo": getattr(args, "lo", None),
    }
    if getattr(args, "dump", False):
        values["dump"] = True
    return {k: v for k, v in values.items() if v is not None}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    factory, runner, _ = COMMANDS[args.command]
    try:
        load_dotenv(override=True)
        section = get_optional_config(args.command, args.config)
        config = factory({**section, **overrides(args)})
        outcome = runner(config)
        return int(outcome.exit_code)

    except CONFIG_ERRORS as e:
        console.print(f"[bold red]Configuration error:[/] {e}")
        return int(ExitCode.CONFIG_ERROR)
    except Exception as e:
        console.print(f"[bold red]Fatal error:[/] {e}")
        return int(ExitCode.UNEXPECTED_ERROR)


if __name__ == "__main__":
    sys.exit(main())
