#!/usr/bin/env python3
"""Run the full experiment battery on the toy fixtures: build the library
and the index, evaluate the gold questions (with bootstrap error bars), and
produce the three parameter-sweep tables (document count with corrections,
confidence threshold, context strategy).

Outputs land in fixtures/toy/build/out/. Rerunning reproduces byte-identical
files.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from entityqa.cli import main  # noqa: E402

CONFIG = ROOT / "fixtures" / "toy" / "config.yaml"


def run(args: list[str]) -> None:
    print(f"\n$ entityqa {' '.join(args)}")
    code = main(args)
    if code != 0:
        sys.exit(code)


if __name__ == "__main__":
    run(["build-library", "--config", str(CONFIG)])
    run(["build-index", "--config", str(CONFIG)])
    run(["eval", "--config", str(CONFIG), "--bootstrap"])
    for sweep in ("documents", "confidence", "context"):
        run(["sweep", "--config", str(CONFIG), sweep])
    print("\nall outputs in fixtures/toy/build/out/")
