"""Command-line entry point.

Subcommands: one per pipeline stage, `run` for the whole pipeline, `serve`
for the read-only API, and `fixture` for the bundled synthetic-corpus
generator. Exit codes: 0 ok, 2 configuration error, 3 data error,
4 missing-dependency error.
"""

import argparse
import sys

from tweetscope import pipeline
from tweetscope.errors import ConfigError, DataError, DependencyError, EngineError


def _add_config_args(parser):
    parser.add_argument("--config", required=True, help="pipeline config JSON")
    parser.add_argument("--out", help="override the config's output directory")
    parser.add_argument("--seed", type=int, help="override the clustering seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tweetscope", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full pipeline (or a stage subset)")
    _add_config_args(run)
    run.add_argument(
        "--stages",
        help=f"comma-separated subset of: {','.join(pipeline.STAGES)}",
    )

    for stage in pipeline.STAGES:
        stage_parser = sub.add_parser(stage, help=f"run only the {stage} stage")
        _add_config_args(stage_parser)

    serve_p = sub.add_parser("serve", help="serve the read-only API over a finished run")
    serve_p.add_argument("--config", help="pipeline config JSON (artifact dir from out_dir)")
    serve_p.add_argument("--out", help="artifact directory (overrides config)")
    serve_p.add_argument("--bind", default="127.0.0.1:8000", help="host:port to bind")
    serve_p.add_argument("--ui", help="optional static dashboard directory to mount at /")

    fixture_p = sub.add_parser("fixture", help="generate the synthetic test corpus")
    fixture_p.add_argument("--out", required=True, help="fixture output directory")
    fixture_p.add_argument("--seed", type=int, default=20221109)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fixture":
            from tweetscope.fixtures import make_fixture

            truth = make_fixture(args.out, seed=args.seed)
            print(f"fixture written to {args.out}: {truth['counts']['raw']} records")
            return 0

        if args.command == "serve":
            if not args.out and not args.config:
                raise ConfigError("serve needs --out or --config")
            artifact_dir = args.out
            if artifact_dir is None:
                config = pipeline.load_config(args.config)
                artifact_dir = config.out_dir
            from tweetscope.server import serve

            serve(artifact_dir, bind=args.bind, ui_dir=args.ui)
            return 0

        config = pipeline.load_config(args.config, out_dir=args.out, seed=args.seed)
        if args.command == "run":
            stages = args.stages.split(",") if args.stages else None
        else:
            stages = [args.command]
        manifest = pipeline.run_pipeline(config, stages=stages)
        for stage in manifest["stages"]:
            info = manifest["stages"][stage]
            print(f"{stage}: {len(info['artifacts'])} artifacts ({info['duration_s']:.2f}s)")
        if "counts" in manifest:
            print(f"counts: {manifest['counts']}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DependencyError as exc:
        print(f"dependency error: {exc}", file=sys.stderr)
        return 4
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
