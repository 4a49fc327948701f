#!/usr/bin/env python3
"""Render the demo file with the demo profile and facts, to the terminal.

Shows the whole engine at once: an alias, method-name expansion, parameter
hints, abbreviation with the shortened marker, modifier/annotation glyphs,
naming findings, history/risk facts and the change-status circle.
"""
import sys
from pathlib import Path

from impid.cli import main

ROOT = Path(__file__).resolve().parent.parent
DEMO = ROOT / "demo"

if __name__ == "__main__":
    fmt = sys.argv[1] if len(sys.argv) > 1 else "ansi"
    sys.exit(main([
        "render", str(DEMO / "Translator.java"),
        "--profile", str(DEMO / "team.impid.json"),
        "--facts", str(DEMO / "history.facts.ndjson"),
        "--now", "2024-03-10T00:00:00Z",
        "--format", fmt,
    ]))
