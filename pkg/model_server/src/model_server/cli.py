"""Command line entry point: serve one saved classifier over HTTP."""

import argparse
import sys

import uvicorn

from model_server.app import create_app
from model_server.models import ModelLoadError, load_served_model


def build_parser():
    parser = argparse.ArgumentParser(
        prog="model-server",
        description="Serve a saved bag-of-words classifier over HTTP.",
    )
    parser.add_argument("--model", required=True, help="path to a saved model JSON file")
    parser.add_argument("--port", type=int, default=8100, help="port to listen on")
    parser.add_argument(
        "--max-batch",
        type=int,
        default=32,
        help="largest accepted batch; bigger requests get a 413",
    )
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.max_batch < 1:
        print("error: --max-batch must be at least 1", file=sys.stderr)
        return 1
    try:
        model = load_served_model(args.model, max_batch=args.max_batch)
    except ModelLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    app = create_app(model)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
