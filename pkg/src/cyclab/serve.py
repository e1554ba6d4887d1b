"""HTTP face of the service layer.

Stateless by construction: every handler is a pure function of the request
body, so replaying a request must produce byte-identical output. Responses
are rendered through canonical_json to keep that guarantee independent of
dict ordering."""

import logging

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from . import service
from .errors import CyclabError
from .foundation import canonical_json

log = logging.getLogger("cyclab.serve")


def _json(payload, status_code=200):
    return Response(
        content=canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _bad(code, detail):
    return _json({"error": code, "detail": detail}, status_code=400)


class QuiverMutateBody(BaseModel):
    quiver: dict
    vertex: int | str


class SeedInitialBody(BaseModel):
    quiver: dict
    inverted: list[int | str] = Field(default_factory=list)


class SeedMutateBody(BaseModel):
    seed: dict
    vertex: int | str


class SeedExploreBody(BaseModel):
    seed: dict


def create_app():
    app = FastAPI(title="cyclab", docs_url=None, redoc_url=None)
    # the browser explorer is served as static files from a different origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(CyclabError)
    async def _on_cyclab(request: Request, exc: CyclabError):
        log.info("request failed: %s %s", exc.code, exc)
        return _bad(exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def _on_validation(request: Request, exc: RequestValidationError):
        return _bad("validation", str(exc))

    @app.exception_handler(ValueError)
    async def _on_value(request: Request, exc: ValueError):
        return _bad("bad_request", str(exc))

    @app.get("/health")
    async def health():
        return _json({"ok": True})

    @app.get("/quiver/from-word")
    async def quiver_from_word(
        word: str = Query(...),
        graph: str = Query("kronecker"),
        freeze_last: bool = Query(True),
    ):
        return _json(service.quiver_from_word(graph, word, freeze_last))

    @app.post("/quiver/mutate")
    async def quiver_mutate(body: QuiverMutateBody):
        return _json(service.quiver_mutate(body.quiver, body.vertex))

    @app.post("/seed/initial")
    async def seed_initial(body: SeedInitialBody):
        return _json(service.seed_initial(body.quiver, body.inverted))

    @app.post("/seed/mutate")
    async def seed_mutate(body: SeedMutateBody):
        return _json(service.seed_mutate(body.seed, body.vertex))

    @app.post("/seed/explore-step")
    async def seed_explore_step(body: SeedExploreBody):
        return _json(service.seed_explore_step(body.seed))

    @app.get("/loopgroup/seed")
    async def loopgroup_seed(cell: str = Query("w3")):
        return _json(service.loopgroup_seed(cell))

    return app


def serve(port=8642, host="127.0.0.1"):
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")
