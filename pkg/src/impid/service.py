"""HTTP service exposing the engine to the viewer and editor integrations.

Renders go through the same pipeline as the CLI, so for equal inputs the
response body is byte-identical to `impid render`. Profile mutations are
serialized behind a single lock; parsed units are cached by source hash.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from fastapi import Body, FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from impid.facts import RecencyConfig
from impid.javaparse.parser import SymbolTable, extract_occurrences
from impid.javaparse.tokens import JavaParseError
from impid.model import FactRecord, ModelError, Occurrence
from impid.pipeline import apply_view_overrides, load_facts_text, render_output
from impid.profiles import (
    AliasConflictError,
    CategorySetting,
    Profile,
    ProfileError,
    load_profile,
    remove_alias,
    save_profile,
)
from impid.render import compose, emit_stream
import impid.pipeline as pipeline


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail

    def response(self) -> JSONResponse:
        return JSONResponse(
            status_code=self.status,
            content={"error": self.code.replace("-", " "), "code": self.code,
                     "detail": self.detail})


@dataclass
class ServiceState:
    root: Path
    profile: Profile
    profile_path: Optional[Path] = None
    facts: list[FactRecord] = field(default_factory=list)
    reference_time: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    lock: threading.Lock = field(default_factory=threading.Lock)
    # parsed-unit cache: relative path -> (source hash, table, occurrences)
    cache: dict[str, tuple[str, SymbolTable, list[Occurrence]]] = field(default_factory=dict)

    @staticmethod
    def bootstrap(root: Path, profile_path: Optional[str], facts_path: Optional[str],
                  reference_time: datetime) -> "ServiceState":
        profile = Profile()
        ppath: Optional[Path] = None
        if profile_path:
            ppath = Path(profile_path)
            if ppath.exists():
                profile = load_profile(ppath.read_text(encoding="utf-8"))
        facts: list[FactRecord] = []
        if facts_path:
            fpath = Path(facts_path)
            facts, _ = load_facts_text(fpath.read_text(encoding="utf-8"),
                                       str(fpath), reference_time)
        return ServiceState(root=root.resolve(), profile=profile, profile_path=ppath,
                            facts=facts, reference_time=reference_time)

    def resolve_path(self, rel: str) -> Path:
        candidate = (self.root / rel).resolve()
        if not str(candidate).startswith(str(self.root)):
            raise ApiError(400, "bad-path", f"path escapes the project root: {rel}")
        if not candidate.is_file():
            raise ApiError(404, "file-not-found", f"no such file: {rel}")
        return candidate

    def parsed_unit(self, rel: str, source: str
                    ) -> tuple[SymbolTable, list[Occurrence]]:
        from impid.render import source_hash as hash_of

        digest = hash_of(source)
        cached = self.cache.get(rel)
        if cached is not None and cached[0] == digest:
            return cached[1], cached[2]
        table, occurrences = extract_occurrences(source)
        self.cache[rel] = (digest, table, occurrences)
        return table, occurrences

    def persist_profile(self) -> None:
        if self.profile_path is None:
            return
        from impid.cli import write_profile_atomic

        write_profile_atomic(self.profile, str(self.profile_path))


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="impid", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return exc.response()

    @app.get("/api/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/api/files")
    def files() -> list[str]:
        return sorted(str(p.relative_to(state.root))
                      for p in state.root.rglob("*.java") if p.is_file())

    @app.get("/api/render")
    def render(path: str = Query(...),
               format: str = Query("json"),
               slider: Optional[int] = Query(None),
               category: list[str] = Query(default=[])) -> Response:
        if format not in ("json", "ansi", "html", "source"):
            raise ApiError(400, "bad-format", f"unknown format: {format}")
        file_path = state.resolve_path(path)
        source = file_path.read_text(encoding="utf-8")
        if format == "source":
            return Response(content=source, media_type="text/plain; charset=utf-8")
        overrides: dict[str, bool] = {}
        for item in category:
            if "=" not in item:
                raise ApiError(400, "bad-category", f"expected NAME=on|off: {item}")
            name, _, value = item.partition("=")
            if value not in ("on", "off"):
                raise ApiError(400, "bad-category", f"expected NAME=on|off: {item}")
            overrides[name] = value == "on"
        with state.lock:
            profile = apply_view_overrides(state.profile, slider, overrides)
            facts = list(state.facts)
        try:
            table, occurrences = state.parsed_unit(path, source)
            plan = _plan_for(state, table, occurrences, source, path, profile, facts)
            body = render_output(source, plan, format)
        except JavaParseError as exc:
            raise ApiError(422, "parse-error", str(exc)) from None
        media = {"json": "application/json", "ansi": "text/plain; charset=utf-8",
                 "html": "text/html; charset=utf-8"}[format]
        return Response(content=body, media_type=media)

    @app.get("/api/identities")
    def identities(path: str = Query(...)) -> dict[str, Any]:
        file_path = state.resolve_path(path)
        source = file_path.read_text(encoding="utf-8")
        try:
            _table, occurrences = state.parsed_unit(path, source)
        except JavaParseError as exc:
            raise ApiError(422, "parse-error", str(exc)) from None
        return {
            "path": path,
            "identities": [occ.to_dict() for occ in occurrences],
        }

    @app.post("/api/alias")
    def alias_set(payload: dict[str, Any] = Body(...)) -> dict[str, str]:
        identity = payload.get("identity")
        display = payload.get("display")
        if not isinstance(identity, str) or not isinstance(display, str):
            raise ApiError(400, "bad-request", "body must carry identity and display strings")
        from impid.cli import parse_java_files, set_alias_across

        with state.lock:
            tables = [t for _, t in parse_java_files(str(state.root))]
            try:
                state.profile = set_alias_across(state.profile, identity, display, tables)
            except AliasConflictError as exc:
                raise ApiError(409, "alias-conflict", str(exc)) from None
            except (ProfileError, ModelError) as exc:
                raise ApiError(400, "bad-alias", str(exc)) from None
            state.persist_profile()
        return {"status": "ok", "identity": identity, "display": display}

    @app.delete("/api/alias/{identity:path}")
    def alias_remove(identity: str) -> dict[str, str]:
        with state.lock:
            state.profile = remove_alias(state.profile, identity)
            state.persist_profile()
        return {"status": "ok", "identity": identity}

    @app.get("/api/profile")
    def profile_get() -> Response:
        with state.lock:
            text = save_profile(state.profile)
        return Response(content=text, media_type="application/json")

    @app.put("/api/profile")
    async def profile_put(request: Request) -> dict[str, str]:
        body = (await request.body()).decode("utf-8")
        try:
            profile = load_profile(body)
        except ProfileError as exc:
            raise ApiError(400, "bad-profile", str(exc)) from None
        with state.lock:
            state.profile = profile
            state.persist_profile()
        return {"status": "ok", "name": profile.name}

    @app.patch("/api/categories/{cid}")
    def category_patch(cid: str, payload: dict[str, Any] = Body(...)) -> dict[str, Any]:
        with state.lock:
            current = state.profile.category(cid)
            try:
                setting = CategorySetting(
                    enabled=bool(payload.get("enabled", current.enabled)),
                    priority=int(payload.get("priority", current.priority)))
            except (ProfileError, ValueError, TypeError) as exc:
                raise ApiError(400, "bad-category", str(exc)) from None
            categories = dict(state.profile.categories)
            categories[cid] = setting
            from dataclasses import replace

            state.profile = replace(state.profile, categories=categories)
            state.persist_profile()
        return {"status": "ok", "category": cid, "enabled": setting.enabled,
                "priority": setting.priority}

    return app


def _plan_for(state: ServiceState, table: SymbolTable, occurrences: list[Occurrence],
              source: str, path: str, profile: Profile, facts: list[FactRecord]):
    """Same decoration pipeline as impid.pipeline.build_plan, reusing the
    cached parse."""
    recency = RecencyConfig(reference_time=state.reference_time)
    return pipeline.build_plan_from_parsed(table, occurrences, source, path,
                                           profile, facts, recency)


__all__ = ["ApiError", "ServiceState", "create_app"]
