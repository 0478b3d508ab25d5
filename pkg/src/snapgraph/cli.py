"""Batch driver for the pipeline: ingest, tree building, projection, export.

Subcommands: ``ingest`` (parse + validate + normalize), ``tree`` (threshold
schedule -> snapshot tree), ``project`` (2D embedding), ``export`` (full
pipeline: tree + projection + matrix + summary), ``serve`` (HTTP service).
Exit codes: 0 ok, 1 runtime error, 2 config error; failures emit one JSON
object on stderr.  Identical inputs and config produce byte-identical
artifacts.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean
from typing import Sequence

from .engine import GenerationSession
from .errors import ConfigError, SnapgraphError
from .ingest import DatasetConfig, LinkInducerConfig
from .model import ChangeThresholds
from .projection import ProjectionConfig, project
from .serialize import (
    SCHEMA_VERSION,
    frame_to_dict,
    projection_to_dict,
    tree_to_dict,
    universe_to_dict,
)
from .store import build_dataset, dataset_digest, matrix_aggregate


@dataclass
class RunConfig:
    """Everything one pipeline run needs; flags and config file fill it."""

    tracking: Path
    out_dir: Path
    links: Path | None = None
    events: Path | None = None
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    schedule: list[ChangeThresholds] = field(default_factory=list)
    projection: ProjectionConfig = field(default_factory=ProjectionConfig)
    name: str = "dataset"


def _load_schedule(raw) -> list[ChangeThresholds]:
    if isinstance(raw, str):
        text = raw.strip()
        if not text.startswith("["):
            text = Path(text).read_text(encoding="utf-8")
        raw = json.loads(text)
    if not isinstance(raw, list):
        raise ConfigError("schedule must be a JSON array of threshold objects")
    if not raw:
        raise ConfigError("schedule must contain at least one layer")
    try:
        return [ChangeThresholds.from_dict(item) for item in raw]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad threshold entry: {exc}") from None


def _build_run_config(args: argparse.Namespace, need_schedule: bool) -> RunConfig:
    file_cfg: dict = {}
    if args.config:
        try:
            file_cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None

    def pick(key: str, flag_value):
        # config file overrides flags
        return file_cfg[key] if key in file_cfg else flag_value

    tracking = pick("tracking", args.tracking)
    if not tracking:
        raise ConfigError("an input tracking file is required")
    tracking = Path(tracking)
    if not tracking.exists():
        raise ConfigError(f"tracking file {tracking} does not exist")

    links = pick("links", args.links)
    events = pick("events", args.events)
    for label, path in (("links", links), ("events", events)):
        if path and not Path(path).exists():
            raise ConfigError(f"{label} file {path} does not exist")

    dataset_cfg = DatasetConfig(
        court_width=args.court_width,
        court_height=args.court_height,
        bounds_tolerance=args.bounds_tolerance,
        inducer=LinkInducerConfig(
            mode=args.link_mode,
            proximity_radius=args.link_radius,
            cross_team_only=args.cross_team_only,
        ),
    )
    if "dataset" in file_cfg:
        dataset_cfg = DatasetConfig.from_dict(file_cfg["dataset"])

    schedule: list[ChangeThresholds] = []
    raw_schedule = pick("schedule", args.schedule)
    if raw_schedule:
        schedule = _load_schedule(raw_schedule)
    elif need_schedule:
        raise ConfigError("a non-empty threshold schedule is required")

    proj_kwargs = {
        "perplexity": args.perplexity,
        "iterations": args.iters,
        "learning_rate": args.learning_rate,
        "seed": args.seed,
    }
    proj_kwargs.update(file_cfg.get("projection", {}))
    try:
        projection_cfg = ProjectionConfig(**proj_kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad projection config: {exc}") from None

    out_dir = Path(pick("out_dir", args.out_dir))
    return RunConfig(
        tracking=tracking,
        out_dir=out_dir,
        links=Path(links) if links else None,
        events=Path(events) if events else None,
        dataset=dataset_cfg,
        schedule=schedule,
        projection=projection_cfg,
        name=pick("name", args.name),
    )


def _load_dataset(cfg: RunConfig):
    tracking_text = cfg.tracking.read_text(encoding="utf-8")
    links_text = cfg.links.read_text(encoding="utf-8") if cfg.links else None
    events_text = cfg.events.read_text(encoding="utf-8") if cfg.events else None
    dataset_id = dataset_digest(tracking_text, links_text, events_text, cfg.dataset)
    return build_dataset(
        dataset_id, cfg.name, tracking_text, links_text, events_text, cfg.dataset
    )


def _write_artifact(out_dir: Path, name: str, payload) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return path


def _build_tree(dataset, schedule: Sequence[ChangeThresholds]) -> GenerationSession:
    session = GenerationSession(dataset.universe, dataset.frames)
    for thresholds in schedule:
        session.generate(thresholds)
    return session


def _summary(session: GenerationSession) -> dict:
    tree = session.tree
    frame_count = tree.frame_count
    layers = []
    for index, layer in enumerate(tree.layers):
        layers.append(
            {
                "index": index,
                "size": len(layer),
                "compression_ratio": frame_count / len(layer),
                "mean_graph_stability": fmean(
                    snap.indicators.graph_stability for snap in layer
                ),
            }
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "frame_count": frame_count,
        "layers": layers,
        "tree_digest": tree.digest(),
    }


def _print_summary(summary: dict) -> None:
    print(f"{'layer':>5} {'size':>7} {'compression':>12} {'mean stability':>15}")
    for row in summary["layers"]:
        print(
            f"{row['index']:>5} {row['size']:>7} "
            f"{row['compression_ratio']:>12.2f} {row['mean_graph_stability']:>15.6f}"
        )


def run_pipeline(cfg: RunConfig) -> dict:
    """Run ingest -> tree -> projection -> aggregates, writing all artifacts."""
    dataset = _load_dataset(cfg)
    session = _build_tree(dataset, cfg.schedule)
    summary = _summary(session)
    _write_artifact(
        cfg.out_dir,
        "tree.json",
        tree_to_dict(session.tree, history=session.history_dicts()),
    )
    points = project(
        dataset.vectors,
        cfg.projection,
        ids=[str(i) for i in range(len(dataset.frames))],
    )
    _write_artifact(
        cfg.out_dir, "projection.json", projection_to_dict(points, cfg.projection)
    )
    _write_artifact(
        cfg.out_dir,
        "matrix.json",
        {
            "schema_version": SCHEMA_VERSION,
            **matrix_aggregate(dataset, 0, len(dataset.frames) - 1),
        },
    )
    _write_artifact(cfg.out_dir, "summary.json", summary)
    return summary


def _cmd_ingest(args) -> int:
    cfg = _build_run_config(args, need_schedule=False)
    dataset = _load_dataset(cfg)
    _write_artifact(
        cfg.out_dir,
        "frames.json",
        {
            "schema_version": SCHEMA_VERSION,
            "descriptor": dataset.descriptor(),
            "universe": universe_to_dict(dataset.universe),
            "frames": [frame_to_dict(frame) for frame in dataset.frames],
        },
    )
    print(
        f"ingested {len(dataset.frames)} frames, "
        f"{len(dataset.universe)} nodes, {len(dataset.events)} events"
    )
    return 0


def _cmd_tree(args) -> int:
    cfg = _build_run_config(args, need_schedule=True)
    dataset = _load_dataset(cfg)
    session = _build_tree(dataset, cfg.schedule)
    _write_artifact(
        cfg.out_dir,
        "tree.json",
        tree_to_dict(session.tree, history=session.history_dicts()),
    )
    _print_summary(_summary(session))
    return 0


def _cmd_project(args) -> int:
    cfg = _build_run_config(args, need_schedule=False)
    dataset = _load_dataset(cfg)
    points = project(
        dataset.vectors,
        cfg.projection,
        ids=[str(i) for i in range(len(dataset.frames))],
    )
    path = _write_artifact(
        cfg.out_dir, "projection.json", projection_to_dict(points, cfg.projection)
    )
    print(f"projected {len(points)} frames -> {path}")
    return 0


def _cmd_export(args) -> int:
    cfg = _build_run_config(args, need_schedule=True)
    summary = run_pipeline(cfg)
    _print_summary(summary)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(args.data_dir), host=args.host, port=args.port)
    return 0


def _add_io_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tracking", help="tracking CSV path")
    parser.add_argument("--links", help="provided-links CSV path")
    parser.add_argument("--events", help="play-by-play CSV path")
    parser.add_argument("--config", help="JSON config file (overrides flags)")
    parser.add_argument("--out-dir", default="out", help="artifact directory")
    parser.add_argument("--name", default="dataset")
    parser.add_argument("--court-width", type=float, default=94.0)
    parser.add_argument("--court-height", type=float, default=50.0)
    parser.add_argument("--bounds-tolerance", type=float, default=5.0)
    parser.add_argument(
        "--link-mode", choices=["provided", "proximity"], default="proximity"
    )
    parser.add_argument("--link-radius", type=float, default=10.0)
    parser.add_argument("--cross-team-only", action="store_true")
    parser.add_argument(
        "--schedule",
        help="JSON array of thresholds, inline or a file path",
    )
    parser.add_argument("--perplexity", type=float, default=30.0)
    parser.add_argument("--iters", type=int, default=500)
    parser.add_argument("--learning-rate", type=float, default=200.0)
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snapgraph",
        description="dynamic-graph snapshot pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, handler, blurb in (
        ("ingest", _cmd_ingest, "parse and normalize the input files"),
        ("tree", _cmd_tree, "build a snapshot tree from a threshold schedule"),
        ("project", _cmd_project, "embed frames in 2D for the overview scatter"),
        ("export", _cmd_export, "full pipeline: tree, projection, matrix, summary"),
    ):
        p = sub.add_parser(name, help=blurb)
        _add_io_flags(p)
        p.set_defaults(handler=handler)
    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--data-dir", default="snapgraph-data")
    serve.set_defaults(handler=_cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        json.dump({"error": "ConfigError", "detail": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except SnapgraphError as exc:
        json.dump({"error": type(exc).__name__, "detail": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
