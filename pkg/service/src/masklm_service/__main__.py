"""Entry point: ``python -m masklm_service`` or the installed script."""

from __future__ import annotations

import argparse

import uvicorn

from .app import create_app
from .config import ServiceConfig


def main() -> None:
    env = ServiceConfig.from_env()
    parser = argparse.ArgumentParser(description="Serve a masked LM over the fill-mask protocol")
    parser.add_argument("--model", default=env.model, help="model name or checkpoint directory")
    parser.add_argument("--device", default=env.device)
    parser.add_argument("--max-top-n", type=int, default=env.max_top_n)
    parser.add_argument("--port", type=int, default=env.port)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args()

    config = ServiceConfig(
        model=args.model, device=args.device, max_top_n=args.max_top_n, port=args.port
    )
    uvicorn.run(create_app(config), host=args.host, port=config.port, log_level="warning")


if __name__ == "__main__":
    main()
