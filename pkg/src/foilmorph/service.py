"""Local HTTP API exposing morphing, generation, and similarity lookups.

Every response is a pure function of the request and the artifacts loaded
at startup (catalog + baseline set); there is no mutable server state, so
concurrent requests are safe and identical requests give identical
responses.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .dataset import AirfoilCatalog
from .errors import (
    DegenerateNormalization,
    FoilmorphError,
    InfeasibleShape,
    OutOfRange,
)
from .geometry import detect_self_intersection, similarity, to_coordinates
from .morphing import BaselineSet, blend, repair_self_intersection
from .paramgen import METHODS, knobs_to_dv, make_generator, method_spec


class MorphRequest(BaseModel):
    weights: list[float]


class GenerateRequest(BaseModel):
    method: str
    dv: list[float] | None = None
    knobs: list[float] | None = None


class SimilarityRequest(BaseModel):
    a: str | list[float]
    b: str | list[float]


class _NearestCache:
    """Memoized linear similarity scan over the catalog."""

    def __init__(self, catalog: AirfoilCatalog, max_entries: int = 1024):
        self._catalog = catalog
        self._cache: dict[bytes, tuple[str, float]] = {}
        self._max = max_entries

    def lookup(self, shape: np.ndarray) -> dict:
        key = shape.tobytes()
        hit = self._cache.get(key)
        if hit is None:
            scores = (2.0 / self._catalog.F) * np.abs(
                self._catalog.vectors - shape
            ).sum(axis=1)
            i = int(np.argmin(scores))
            hit = (self._catalog.names[i], float(scores[i]))
            if len(self._cache) >= self._max:
                self._cache.clear()
            self._cache[key] = hit
        return {"name": hit[0], "s_prime": hit[1]}


def create_app(
    catalog: AirfoilCatalog,
    baselines: BaselineSet,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="foilmorph service")
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"https?://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )
    nearest = _NearestCache(catalog)

    def shape_payload(shape: np.ndarray, feasible: bool, repaired: bool) -> dict:
        return {
            "shape": to_coordinates(shape).tolist(),
            "feasible": feasible,
            "repaired": repaired,
            "nearest": nearest.lookup(np.asarray(shape, dtype=np.float64)),
        }

    @app.get("/baselines")
    def get_baselines() -> dict:
        return {
            "names": baselines.names,
            "shapes": [
                to_coordinates(row).tolist() for row in baselines.shapes
            ],
        }

    @app.post("/morph")
    def post_morph(request: MorphRequest) -> dict:
        if len(request.weights) != baselines.n:
            raise HTTPException(
                400, f"expected {baselines.n} weights, got {len(request.weights)}"
            )
        try:
            raw = blend(baselines, np.asarray(request.weights))
        except DegenerateNormalization:
            raise HTTPException(422, "degenerate normalization") from None
        except (ValueError, FoilmorphError) as exc:
            raise HTTPException(400, str(exc)) from None
        repaired_flag = detect_self_intersection(raw)
        try:
            shape = repair_self_intersection(raw)
        except InfeasibleShape as exc:
            raise HTTPException(422, str(exc)) from None
        return shape_payload(shape, feasible=True, repaired=repaired_flag)

    @app.post("/generate")
    def post_generate(request: GenerateRequest) -> dict:
        if request.method not in METHODS:
            raise HTTPException(400, f"unknown method {request.method!r}")
        if (request.dv is None) == (request.knobs is None):
            raise HTTPException(400, "provide exactly one of 'dv' or 'knobs'")
        spec = method_spec(request.method)
        try:
            if request.knobs is not None:
                dv = knobs_to_dv(spec, np.asarray(request.knobs))
            else:
                dv = np.asarray(request.dv, dtype=np.float64)
            generator = make_generator(
                request.method,
                baselines=baselines if request.method == "airdbm" else None,
                F=catalog.F,
            )
            shape = generator(dv)
        except DegenerateNormalization:
            raise HTTPException(422, "degenerate normalization") from None
        except (OutOfRange, ValueError) as exc:
            raise HTTPException(400, str(exc)) from None
        except FoilmorphError as exc:
            raise HTTPException(422, str(exc)) from None
        feasible = not detect_self_intersection(shape)
        return shape_payload(
            shape, feasible=feasible, repaired=request.method == "airdbm"
        )

    def resolve_shape(ref) -> np.ndarray:
        if isinstance(ref, str):
            if ref not in catalog:
                raise HTTPException(404, f"unknown airfoil {ref!r}")
            return catalog.get(ref)
        return np.asarray(ref, dtype=np.float64)

    @app.post("/similarity")
    def post_similarity(request: SimilarityRequest) -> dict:
        try:
            return {
                "s_prime": similarity(
                    resolve_shape(request.a), resolve_shape(request.b)
                )
            }
        except (FoilmorphError, ValueError) as exc:
            raise HTTPException(400, str(exc)) from None

    @app.get("/catalog/{name}")
    def get_catalog_entry(name: str) -> dict:
        if name not in catalog:
            raise HTTPException(404, f"unknown airfoil {name!r}")
        return {"name": name, "shape": to_coordinates(catalog.get(name)).tolist()}

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount(
            "/", StaticFiles(directory=static_dir, html=True), name="static"
        )
    return app


def serve(
    bind: str = "127.0.0.1:8000",
    catalog_path: str = "catalog.npz",
    baselines_path: str = "baselines.json",
    static_dir: str | None = None,
) -> None:
    """Load artifacts and block serving HTTP until signaled."""
    import uvicorn

    catalog = AirfoilCatalog.load(Path(catalog_path))
    baselines = BaselineSet.load(Path(baselines_path))
    app = create_app(catalog, baselines, static_dir=static_dir)
    host, _, port = bind.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
