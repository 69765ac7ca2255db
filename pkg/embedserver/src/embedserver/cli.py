"""Command-line entry point: pick a model, serve it over HTTP."""

from __future__ import annotations

import argparse
import sys

from .app import DEFAULT_BATCH_SIZE, serve
from .types import POOLING_MODES, BackendLoadError, ModelSpec

DEFAULT_PORT = 8230


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embedserver",
        description="Serve L2-normalized code embeddings over HTTP (POST /embed, GET /health).",
    )
    parser.add_argument(
        "--model",
        required=True,
        help="'tiny-random[:tag]' for the seeded built-in encoder, or 'transformers:<checkpoint dir>'",
    )
    parser.add_argument("--dims", type=int, required=True, help="embedding dimensionality")
    parser.add_argument("--pooling", choices=POOLING_MODES, default="mean")
    parser.add_argument("--port", type=int, default=DEFAULT_PORT)
    parser.add_argument("--batch", type=int, default=DEFAULT_BATCH_SIZE, help="max texts per model call")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.batch < 1:
        print(f"error: --batch must be >= 1, got {args.batch}", file=sys.stderr)
        return 2
    if not 0 < args.port < 65536:
        print(f"error: --port must be in 1..65535, got {args.port}", file=sys.stderr)
        return 2
    try:
        spec = ModelSpec(model_name=args.model, dims=args.dims, pooling=args.pooling)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        serve(spec, port=args.port, batch_size=args.batch)
    except BackendLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
