"""HTTP service exposing the run commands.

Every endpoint accepts the same JSON run-configuration document used by
the CLI, executes it through the runner layer, and returns the emitted
text artifact verbatim in `content` (so a file written from the response
is byte-identical to one written locally) plus a small metadata block.

Error mapping: configuration problems -> 400, domain infeasibility ->
409, internal numeric failures -> 500.  The body carries the exception
class name, the message, and the exit status a CLI run would have used.
"""

from __future__ import annotations

import json
from typing import Any, Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from . import __version__, runner
from .config import RunConfig, parse_config
from .errors import (
    CONFIG_ERRORS,
    DOMAIN_ERRORS,
    NUMERIC_ERRORS,
    exit_status_for,
)


class RunRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: dict[str, Any]
    model: Optional[Literal["full", "reduced", "analytic"]] = None
    workers: int = Field(default=1, ge=1, le=64)


class RunResponse(BaseModel):
    content: str
    metadata: dict[str, Any]


def _load_config(req: RunRequest) -> RunConfig:
    doc = dict(req.config)
    if req.model is not None:
        doc["model"] = req.model
    return parse_config(json.dumps(doc))


def _error_body(exc: Exception) -> dict[str, Any]:
    return {
        "error": type(exc).__name__,
        "message": str(exc),
        "exit_status": exit_status_for(exc),
    }


def create_app() -> FastAPI:
    app = FastAPI(title="nonrecip", version=__version__)

    def execute(req: RunRequest, command: str) -> RunResponse:
        try:
            cfg = _load_config(req)
            if command == "sweep":
                table = runner.run_sweep(cfg, workers=req.workers)
                content = table.to_csv()
                meta = {"rows": len(table.rows), "media_type": "text/csv"}
            elif command == "map":
                content = runner.run_map(cfg, workers=req.workers)
                meta = {
                    "shape": [cfg.map.axis1.n, cfg.map.axis2.n],
                    "media_type": "text/csv",
                }
            elif command == "design":
                content = runner.run_design(cfg)
                meta = {"media_type": "application/json"}
            elif command == "stability":
                content = runner.run_stability(cfg)
                meta = {"media_type": "application/json"}
            else:
                content = runner.run_noise(cfg, workers=req.workers)
                meta = {"rows": cfg.sweep.n, "media_type": "text/csv"}
        except CONFIG_ERRORS as exc:
            raise HTTPException(status_code=400, detail=_error_body(exc))
        except DOMAIN_ERRORS as exc:
            raise HTTPException(status_code=409, detail=_error_body(exc))
        except NUMERIC_ERRORS as exc:
            raise HTTPException(status_code=500, detail=_error_body(exc))
        meta["command"] = command
        return RunResponse(content=content, metadata=meta)

    @app.get("/v1/health")
    def health() -> dict[str, str]:
        return {"status": "ok", "version": __version__}

    @app.post("/v1/sweep")
    def sweep(req: RunRequest) -> RunResponse:
        return execute(req, "sweep")

    @app.post("/v1/map")
    def grid_map(req: RunRequest) -> RunResponse:
        return execute(req, "map")

    @app.post("/v1/design")
    def design(req: RunRequest) -> RunResponse:
        return execute(req, "design")

    @app.post("/v1/stability")
    def stability(req: RunRequest) -> RunResponse:
        return execute(req, "stability")

    @app.post("/v1/noise")
    def noise(req: RunRequest) -> RunResponse:
        return execute(req, "noise")

    return app


app = create_app()
