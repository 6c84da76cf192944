"""JSON-over-HTTP API for the what-if workbench UI.

All analysis numbers come from the same code paths as the CLI, so a
structured report fetched over HTTP is byte-identical to ``cdsm report``
on the same inputs. What-if evaluation never mutates a stored workspace;
committing an edited workspace requires an explicit PUT, which re-validates
and persists it (per-workspace writes are serialized, last writer wins).
Intended for localhost use by a single analyst team; no authentication.
"""

from __future__ import annotations

import threading
from collections import defaultdict
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse

from .analysis import WhatIfEdit, analyze, multi_ttp_scores, what_if
from .beneficial import BenefitWeights
from .catalog import AttackCatalog
from .complexity import DstarMode
from .errors import CdsmError
from .heatmap import auto_grid, heatmap_svg, heatmap_table, normalize_scores, parse_grid
from .jsonio import canonical_json_bytes
from .performance import Metric
from .reports import report_json_bytes, whatif_to_dict
from .workspace import (
    WORKSPACE_FILENAME,
    Workspace,
    load_workspace,
    save_workspace,
    with_overrides,
    workspace_from_json_dict,
    workspace_to_json_dict,
)

API_SCHEMA_VERSION = 1


class SessionState:
    """Workspaces admitted to the service, keyed by workspace name.

    Reads can run concurrently; mutation of the map and per-workspace
    commits take locks. Every stored workspace passed full validation at
    admission (loading and PUT both validate).
    """

    def __init__(self, root: Path):
        self.root = root
        self.workspaces: dict[str, Workspace] = {}
        self.directories: dict[str, Path] = {}
        self._map_lock = threading.RLock()
        self._write_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)

    def load_all(self) -> None:
        candidates = []
        if (self.root / WORKSPACE_FILENAME).exists():
            candidates.append(self.root)
        candidates.extend(
            p for p in sorted(self.root.iterdir()) if (p / WORKSPACE_FILENAME).exists()
        )
        if not candidates:
            raise CdsmError(f"{self.root}: no workspaces found (expected {WORKSPACE_FILENAME})")
        problems = []
        for directory in candidates:
            try:
                workspace = load_workspace(directory)
            except CdsmError as exc:
                problems.append(str(exc))
                continue
            if workspace.name in self.workspaces:
                problems.append(
                    f"{directory}: duplicate workspace name {workspace.name!r} "
                    f"(also in {self.directories[workspace.name]})"
                )
                continue
            self.workspaces[workspace.name] = workspace
            self.directories[workspace.name] = directory
        if problems:
            raise CdsmError("refusing to start:\n" + "\n".join(problems))

    def get(self, name: str) -> Workspace:
        with self._map_lock:
            workspace = self.workspaces.get(name)
        if workspace is None:
            raise HTTPException(status_code=404, detail=f"unknown workspace {name!r}")
        return workspace

    def names(self) -> list[str]:
        with self._map_lock:
            return sorted(self.workspaces)

    def commit(self, name: str, workspace: Workspace) -> None:
        with self._write_locks[name]:
            directory = self.directories.get(name, self.root / name)
            save_workspace(workspace, directory)
            with self._map_lock:
                self.workspaces[name] = workspace
                self.directories[name] = directory


def _parse_overrides(
    mode: str | None, beta: float | None, weights: str | None, metric: str | None
):
    parsed_mode = None
    if mode is not None:
        try:
            parsed_mode = DstarMode(mode)
        except ValueError:
            raise CdsmError(f"unknown mode {mode!r} (expected strict or degree)")
    parsed_metric = None
    if metric is not None:
        try:
            parsed_metric = Metric(metric)
        except ValueError:
            raise CdsmError(f"unknown metric {metric!r}")
    parsed_weights = None
    if weights is not None:
        parts = weights.split(",")
        if len(parts) != 3:
            raise CdsmError("weights must be three comma-separated numbers: w1,w2,w3")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise CdsmError(f"weights must be numeric, got {weights!r}")
        parsed_weights = BenefitWeights(
            diversity=values[0], independence=values[1], coverage=values[2]
        )
    return parsed_mode, beta, parsed_weights, parsed_metric


def create_app(root: str | Path, catalog: AttackCatalog | None = None) -> FastAPI:
    """Build the API app over a directory of workspace directories.

    Raises :class:`CdsmError` (refusing to start) if any workspace in the
    root fails validation.
    """
    state = SessionState(Path(root))
    state.load_all()
    catalog = catalog if catalog is not None else AttackCatalog(entries=())

    app = FastAPI(title="cdsm service", version=str(API_SCHEMA_VERSION))
    app.state.session = state

    @app.exception_handler(CdsmError)
    def _domain_error(_request: Request, exc: CdsmError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={
                "schema_version": API_SCHEMA_VERSION,
                "error": {"code": type(exc).__name__, "message": str(exc)},
            },
        )

    def _canonical(payload: dict) -> Response:
        return Response(content=canonical_json_bytes(payload), media_type="application/json")

    @app.get("/workspaces")
    def list_workspaces():
        return _canonical(
            {
                "schema_version": API_SCHEMA_VERSION,
                "workspaces": [
                    {"name": name, "ttp": state.get(name).ttp} for name in state.names()
                ],
            }
        )

    @app.get("/workspaces/{name}")
    def get_workspace(name: str):
        workspace = state.get(name)
        payload = workspace_to_json_dict(workspace)
        payload["schema_version"] = API_SCHEMA_VERSION
        return _canonical(payload)

    @app.get("/workspaces/{name}/report")
    def get_report(
        name: str,
        mode: str | None = None,
        beta: float | None = None,
        weights: str | None = None,
        metric: str | None = None,
    ):
        workspace = with_overrides(
            state.get(name), *_parse_overrides(mode, beta, weights, metric)
        )
        report = analyze(workspace)
        # exact same bytes as the CLI's structured report
        return Response(content=report_json_bytes(report), media_type="application/json")

    @app.post("/workspaces/{name}/whatif")
    async def post_whatif(name: str, request: Request):
        body = await request.json()
        if not isinstance(body, dict) or not isinstance(body.get("edits"), list):
            raise CdsmError("request body must be an object with an 'edits' list")
        edits = []
        for idx, raw in enumerate(body["edits"]):
            try:
                edits.append(WhatIfEdit.from_dict(raw))
            except ValueError as exc:
                raise CdsmError(f"edit {idx}: {exc}")
        workspace = with_overrides(
            state.get(name),
            *_parse_overrides(
                body.get("mode"), body.get("beta"), body.get("weights"), body.get("metric")
            ),
        )
        result = what_if(workspace, edits)
        return _canonical(whatif_to_dict(result))

    @app.put("/workspaces/{name}")
    async def put_workspace(name: str, request: Request):
        body = await request.json()
        workspace = workspace_from_json_dict(body, source=f"PUT /workspaces/{name}")
        if workspace.name != name:
            raise CdsmError(
                f"payload names workspace {workspace.name!r} but the path says {name!r}"
            )
        state.commit(name, workspace)
        return _canonical(
            {"schema_version": API_SCHEMA_VERSION, "status": "committed", "workspace": name}
        )

    @app.get("/heatmap")
    def get_heatmap(mode: str | None = None):
        parsed_mode, _, _, _ = _parse_overrides(mode, None, None, None)
        workspaces = [state.get(name) for name in state.names()]
        pairs = multi_ttp_scores(workspaces, mode=parsed_mode)
        return _canonical(heatmap_table(normalize_scores(pairs)))

    @app.get("/heatmap.svg")
    def get_heatmap_svg(mode: str | None = None, grid: str | None = None):
        parsed_mode, _, _, _ = _parse_overrides(mode, None, None, None)
        workspaces = [state.get(name) for name in state.names()]
        scores = normalize_scores(multi_ttp_scores(workspaces, mode=parsed_mode))
        rows, cols = parse_grid(grid) if grid else auto_grid(len(scores))
        return Response(content=heatmap_svg(scores, rows, cols), media_type="image/svg+xml")

    @app.get("/attack/{attack_id}")
    def get_attack(attack_id: str):
        entry = catalog.get(attack_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown ATT&CK id {attack_id!r}")
        return _canonical(
            {
                "schema_version": API_SCHEMA_VERSION,
                "id": entry.id,
                "name": entry.name,
                "kind": entry.kind,
            }
        )

    return app
