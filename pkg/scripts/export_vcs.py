#!/usr/bin/env python3
"""Produce a .vcs.txt export for the engine from a real git repository.

The engine itself never talks to git; this helper runs outside it and writes
the line format the facts reader consumes:

    op(A|M|R) iso-timestamp author glyph-codepoints(comma-joined) identity [previous-name]

Attribution is file-granular: every method declared in a .java file is
attributed to the file's most recent commit (op M, or A when the file was
added in that commit). That is a deliberate approximation for demo purposes;
teams with finer-grained tooling can write the same format themselves.

Usage: export_vcs.py REPO_DIR > repo.vcs.txt
"""
import subprocess
import sys
from pathlib import Path

from impid.javaparse import extract_occurrences
from impid.model import SymbolKind

# avatar pool; a stable pick per author keeps the mapping consistent
AVATARS = ["U+1F467,U+1F3FE", "U+1F920", "U+1F9D1", "U+1F468,U+200D,U+1F4BB",
           "U+1F469,U+200D,U+1F52C"]


def git(repo: Path, *args: str) -> str:
    result = subprocess.run(["git", "-C", str(repo), *args],
                            capture_output=True, text=True, check=True)
    return result.stdout


def main() -> int:
    if len(sys.argv) != 2:
        print(__doc__, file=sys.stderr)
        return 2
    repo = Path(sys.argv[1])
    for path in sorted(repo.rglob("*.java")):
        rel = path.relative_to(repo)
        log = git(repo, "log", "--follow", "--format=%aI\x1f%an\x1f%H", "--", str(rel))
        lines = [l for l in log.splitlines() if l.strip()]
        if not lines:
            continue
        newest = lines[0].split("\x1f")
        op = "A" if len(lines) == 1 else "M"
        iso, author = newest[0], newest[1].replace(" ", "_")
        avatar = AVATARS[hash(author) % len(AVATARS)]
        try:
            table, _ = extract_occurrences(path.read_text(encoding="utf-8"))
        except Exception as exc:  # noqa: BLE001 - helper skips unparsable files
            print(f"# skipped {rel}: {exc}", file=sys.stderr)
            continue
        for decl in table.declarations:
            if decl.occurrence.kind is SymbolKind.METHOD and "<" not in decl.occurrence.name:
                print(f"{op} {iso} {author} {avatar} {decl.identity}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
