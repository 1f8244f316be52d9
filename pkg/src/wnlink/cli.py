"""Command-line entry point: ``wnlink <subcommand> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields
from pathlib import Path

from . import __version__
from .errors import FormatError, InvariantError
from .pipeline import FORMAT_VERSION, STAGES, PipelineConfig, run_pipeline
from .synthgen import FILES, WorldSpec, generate_world

EXIT_INPUT = 1
EXIT_INVARIANT = 2

_HELP = {
    "build-cv": "build target and source context vectors",
    "train-embeddings": "train skip-gram vectors on the target corpus",
    "build-domains": "build per-word domain distributions",
    "gen-candidates": "generate and POS-prune candidate links",
    "featurize": "compute the seven features for every candidate",
    "build-trainset": "assemble the labeled training set",
    "train": "fit the naive Bayes link classifier",
    "crossval": "stratified cross-validation report",
    "rank-features": "information-gain ranking and incremental feature table",
    "induce": "classify candidates and write the induced wordnet",
    "evaluate": "score the induced wordnet on the judged test links",
    "stats": "size and coverage statistics of the induced wordnet",
}


def _config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-c", "--config", help="flat key = value config file")
    group = parser.add_argument_group("config overrides (flags win over the config file)")
    for f in fields(PipelineConfig):
        group.add_argument("--" + f.name.replace("_", "-"), dest="cfg_" + f.name,
                           metavar=f.name.upper())


def _world_flags(parser: argparse.ArgumentParser) -> None:
    for f in fields(WorldSpec):
        kind = type(f.default)
        parser.add_argument("--" + f.name.replace("_", "-"), type=kind, default=f.default,
                            help=f"(default {f.default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wnlink",
        description="Induce a wordnet by classifying dictionary-derived word-synset links.",
    )
    parser.add_argument("--version", action="version",
                        version=f"wnlink {__version__} (file formats v{FORMAT_VERSION})")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    for name, help_text in _HELP.items():
        _config_flags(sub.add_parser(name, help=help_text, description=help_text))
    p = sub.add_parser("pipeline", help="run every stage in order",
                       description="Run every stage in order, stopping at the first failure.")
    _config_flags(p)

    p = sub.add_parser("synth", help="generate a synthetic world and its config",
                       description="Write a synthetic world, its ground truth and a "
                                   "pipeline.ini that drives the full pipeline over it.")
    p.add_argument("out_dir")
    _world_flags(p)
    return parser


def _load_config(args) -> PipelineConfig:
    overrides = {k[4:]: v for k, v in vars(args).items() if k.startswith("cfg_") and v is not None}
    if args.config:
        return PipelineConfig.from_file(args.config, overrides)
    return PipelineConfig.from_mapping(overrides)


def _synth(args) -> None:
    spec = WorldSpec(**{f.name: getattr(args, f.name) for f in fields(WorldSpec)})
    out = Path(args.out_dir)
    world = generate_world(spec, out)
    cfg = PipelineConfig(
        wordnet=FILES["wordnet"], dictionary=FILES["dictionary"],
        target_corpus=FILES["target_corpus"], source_corpus=FILES["source_corpus"],
        seed_links=FILES["seed_links"], test_links=FILES["test_links"],
        core_synsets=FILES["core_synsets"], workdir="work",
    )
    (out / "pipeline.ini").write_text(cfg.to_ini(), encoding="utf-8")
    counts = world.manifest["counts"]
    print(f"wrote world to {out}: {counts['candidate_links']} candidate links "
          f"({counts['correct_links']} correct); config {out / 'pipeline.ini'}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "synth":
            _synth(args)
            return 0
        cfg = _load_config(args)
        if args.command == "pipeline":
            run_pipeline(cfg)
        else:
            STAGES[args.command](cfg)
    except (InvariantError, AssertionError) as exc:
        print(f"wnlink: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (FormatError, FileNotFoundError, ValueError, KeyError, OSError) as exc:
        print(f"wnlink: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
