"""Command-line entry points: render, alias set/rm/list, scan, serve.

Exit codes: 0 success, 2 usage or input errors, 3 alias conflict.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
import tempfile
from dataclasses import replace as dc_replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from impid.facts import RecencyConfig
from impid.javaparse.parser import SymbolTable, extract_occurrences
from impid.javaparse.tokens import JavaParseError
from impid.model import FactRecord, ModelError, parse_identity, parse_timestamp
from impid.pipeline import apply_view_overrides, build_plan, load_facts_text, render_output
from impid.profiles import (
    AliasConflictError,
    Profile,
    ProfileError,
    find_alias_conflicts,
    load_profile,
    remove_alias,
    save_profile,
)

_IDENTIFIER_RE = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$]*$")

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_CONFLICT = 3


def _fail(message: str) -> int:
    print(f"impid: {message}", file=sys.stderr)
    return EXIT_ERROR


def read_profile(path: Optional[str], create: bool = False) -> Profile:
    if path is None:
        return Profile()
    p = Path(path)
    if not p.exists():
        if create:
            return Profile()
        raise FileNotFoundError(f"profile not found: {path}")
    return load_profile(p.read_text(encoding="utf-8"))


def write_profile_atomic(profile: Profile, path: str) -> None:
    """Write the canonical profile text via temp file + rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=".impid-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(save_profile(profile))
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_java_files(root: str) -> list[tuple[str, SymbolTable]]:
    """Parse every .java file under root (tolerant); unreadable or unparsable
    entries are skipped with a warning."""
    tables: list[tuple[str, SymbolTable]] = []
    for path in sorted(Path(root).rglob("*.java")):
        try:
            table, _ = extract_occurrences(path.read_text(encoding="utf-8"))
            tables.append((str(path), table))
        except (OSError, UnicodeDecodeError, JavaParseError) as exc:
            print(f"impid: warning: skipping {path}: {exc}", file=sys.stderr)
    return tables


def set_alias_across(profile: Profile, identity: str, display: str,
                     tables: Sequence[SymbolTable]) -> Profile:
    """set_alias validated against every parsed unit (and the key-derived
    check when no units are available)."""
    if not _IDENTIFIER_RE.match(display):
        raise ProfileError(f"display name {display!r} is not a valid identifier")
    parse_identity(identity)
    candidate = dict(profile.aliases)
    candidate[identity] = display
    conflicts = []
    if tables:
        seen = set()
        for table in tables:
            for c in find_alias_conflicts(candidate, identity, display, table):
                key = (c.conflicting_identity, c.requested)
                if key not in seen:
                    seen.add(key)
                    conflicts.append(c)
    else:
        conflicts = find_alias_conflicts(candidate, identity, display, None)
    if conflicts:
        raise AliasConflictError(conflicts)
    return dc_replace(profile, aliases=candidate)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _parse_now(value: Optional[str]) -> datetime:
    if value is None:
        return datetime.now(timezone.utc)
    return parse_timestamp(value)


def _parse_category_flags(values: list[str]) -> dict[str, bool]:
    overrides: dict[str, bool] = {}
    for v in values:
        if "=" not in v:
            raise ValueError(f"bad --category {v!r}, expected NAME=on|off")
        name, state = v.split("=", 1)
        if state not in ("on", "off"):
            raise ValueError(f"bad --category state {state!r}, expected on|off")
        overrides[name] = state == "on"
    return overrides


def cmd_render(args: argparse.Namespace) -> int:
    path = Path(args.file)
    if not path.is_file():
        return _fail(f"file not found: {args.file}")
    try:
        source = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        return _fail(f"cannot read {args.file}: {exc}")
    try:
        profile = read_profile(args.profile)
        overrides = _parse_category_flags(args.category or [])
        now = _parse_now(args.now)
        facts: list[FactRecord] = []
        if args.facts:
            facts_path = Path(args.facts)
            if not facts_path.is_file():
                return _fail(f"facts file not found: {args.facts}")
            facts, diagnostics = load_facts_text(
                facts_path.read_text(encoding="utf-8"), str(facts_path), now)
            for d in diagnostics:
                print(f"impid: facts: {d}", file=sys.stderr)
        profile = apply_view_overrides(profile, args.slider, overrides)
        plan = build_plan(source, args.file, profile, facts,
                          RecencyConfig(reference_time=now))
        sys.stdout.write(render_output(source, plan, args.format))
        return EXIT_OK
    except (ProfileError, ModelError, JavaParseError, ValueError, OSError) as exc:
        return _fail(str(exc))


def cmd_alias(args: argparse.Namespace) -> int:
    try:
        profile = read_profile(args.profile, create=getattr(args, "create", False))
    except (FileNotFoundError, ProfileError) as exc:
        return _fail(str(exc))
    if args.alias_cmd == "list":
        for identity in sorted(profile.aliases):
            print(f"{identity}\t{profile.aliases[identity]}")
        return EXIT_OK
    if args.alias_cmd == "rm":
        updated = remove_alias(profile, args.identity)
        write_profile_atomic(updated, args.profile)
        return EXIT_OK
    # set
    tables = [t for _, t in parse_java_files(args.root)] if args.root else []
    try:
        updated = set_alias_across(profile, args.identity, args.display, tables)
    except AliasConflictError as exc:
        print(f"impid: alias conflict: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except (ProfileError, ModelError) as exc:
        return _fail(str(exc))
    write_profile_atomic(updated, args.profile)
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        return _fail(f"not a directory: {args.directory}")
    identities: set[str] = set()
    for _, table in parse_java_files(str(root)):
        for decl in table.declarations:
            if _IDENTIFIER_RE.match(decl.occurrence.name):
                identities.add(decl.identity)
    for identity in sorted(identities):
        print(identity)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from impid.service import ServiceState, create_app

    root = Path(args.root)
    if not root.is_dir():
        return _fail(f"not a directory: {args.root}")
    try:
        state = ServiceState.bootstrap(
            root=root, profile_path=args.profile, facts_path=args.facts,
            reference_time=_parse_now(args.now))
    except (ProfileError, ModelError, OSError) as exc:
        return _fail(str(exc))
    app = create_app(state)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impid",
        description="Render context-dependent display forms of source-code "
                    "identifiers without modifying the source.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="render one file with decorations")
    p_render.add_argument("file")
    p_render.add_argument("--format", choices=("ansi", "html", "json"), default="ansi")
    p_render.add_argument("--profile")
    p_render.add_argument("--facts")
    p_render.add_argument("--slider", type=int)
    p_render.add_argument("--category", action="append", metavar="NAME=on|off")
    p_render.add_argument("--now", metavar="ISO", help="reference time for recency")
    p_render.set_defaults(func=cmd_render)

    p_alias = sub.add_parser("alias", help="manage personal aliases in a profile")
    alias_sub = p_alias.add_subparsers(dest="alias_cmd", required=True)
    p_set = alias_sub.add_parser("set")
    p_set.add_argument("identity")
    p_set.add_argument("display")
    p_set.add_argument("--profile", required=True)
    p_set.add_argument("--create", action="store_true",
                       help="create the profile file if missing")
    p_set.add_argument("--root", help="directory of sources to validate against")
    p_set.set_defaults(func=cmd_alias)
    p_rm = alias_sub.add_parser("rm")
    p_rm.add_argument("identity")
    p_rm.add_argument("--profile", required=True)
    p_rm.set_defaults(func=cmd_alias)
    p_list = alias_sub.add_parser("list")
    p_list.add_argument("--profile", required=True)
    p_list.set_defaults(func=cmd_alias)

    p_scan = sub.add_parser("scan", help="list declaration identities under a directory")
    p_scan.add_argument("directory")
    p_scan.set_defaults(func=cmd_scan)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--root", required=True)
    p_serve.add_argument("--port", type=int, default=8787)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--profile")
    p_serve.add_argument("--facts")
    p_serve.add_argument("--now", metavar="ISO")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
