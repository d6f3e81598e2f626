"""HTTP service exposing the valuation and tropicalization computations.

Every endpoint is a pure computation: POST a request model, get the result
back as JSON.  Sampling endpoints are deterministic given the seed in the
request.  Errors carry a machine-readable kind so thin clients can map them
to exit codes: parse_error, inconclusive_truncation, hypothesis_violation,
invalid_input.

Non-finite numbers are encoded as the strings "inf"/"nan" (matching the
"alpha": "inf" convention of the cone-point schema) so responses stay strict
JSON.
"""

from __future__ import annotations

import math
from typing import List, Literal, Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import hahn, tropicalize, valuation
from .hahn import InconclusiveTruncation, SeriesParseError
from .mat2 import Mat2, ProjPointC
from .quadric import QPoint, fiber_point
from .tropicalize import (
    CloudPoint,
    ComponentInsideQ,
    Falsification,
    LabeledCloud,
    PolyParseError,
)
from .valuation import (
    Base,
    ConePoint,
    HahnMat2,
    Interior,
    Vertex,
    cone_point_from_json,
    cone_point_to_json,
    embed_cone,
    extrapolate_alpha,
    val_numeric,
    val_symbolic,
)

MatrixJson = List[List[float]]  # [[re, im] x 4], row-major
Number = Union[float, str]  # non-finite floats travel as "inf"/"nan"


def _num(x: float) -> Number:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _matrix_json(m: Mat2) -> MatrixJson:
    return [[z.real, z.imag] for z in m.entries()]


class SeriesMatrix(BaseModel):
    """Four series in the grammar of the series parser, row-major."""

    a: str
    b: str
    c: str
    d: str

    def to_hahn(self) -> HahnMat2:
        return HahnMat2.parse(self.a, self.b, self.c, self.d)


class ConePointModel(BaseModel):
    kind: Literal["vertex", "interior", "base"]
    alpha: Number
    matrix: MatrixJson

    @classmethod
    def from_cone_point(cls, p: ConePoint) -> "ConePointModel":
        return cls(**cone_point_to_json(p))

    def to_cone_point(self) -> ConePoint:
        return cone_point_from_json(self.model_dump())


class GridSpec(BaseModel):
    """Inclusive linear grid start..stop with count samples."""

    start: float
    stop: float
    count: int = Field(ge=1)

    def values(self) -> List[float]:
        if self.count == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.count - 1)
        return [self.start + i * step for i in range(self.count)]


class ValRequest(BaseModel):
    matrix: SeriesMatrix
    depth: float = 12.0


class ValResponse(BaseModel):
    cone_point: ConePointModel
    embed: MatrixJson


class LimitRequest(BaseModel):
    matrix: SeriesMatrix
    k_min: int = 2
    k_max: int = 40
    depth: float = 12.0
    target: Optional[ConePointModel] = None


class LimitRow(BaseModel):
    t: Number
    h: float
    dist: Number


class LimitResponse(BaseModel):
    rows: List[LimitRow]
    estimate: MatrixJson
    target_used: ConePointModel
    alpha_extrapolated: Optional[float]


class ExampleRequest(BaseModel):
    name: Literal["line", "quadric"]
    seed: int = 0
    alpha: GridSpec = GridSpec(start=1.25, stop=4.0, count=6)
    theta_count: int = Field(default=8, ge=1)


class FamilyRequest(BaseModel):
    poly: str
    floor_count: int = Field(default=100, ge=1)
    base_count: int = Field(default=40, ge=1)
    alpha: GridSpec = GridSpec(start=0.5, stop=3.0, count=6)
    theta_count: int = Field(default=8, ge=1)
    seed: int = 0


class CloudPointModel(BaseModel):
    kind: Literal["vertex", "interior", "base"]
    alpha: Number
    matrix: MatrixJson
    label: str
    meta: dict
    proj: List[Number]


class CloudResponse(BaseModel):
    command: str
    seed: int
    points: List[CloudPointModel]


class FiberRequest(BaseModel):
    matrix: SeriesMatrix  # constant entries describing a quadric point
    theta: float


class FiberResponse(BaseModel):
    fiber: MatrixJson
    base: MatrixJson
    theta: float


def _error(kind: str, message: str, status: int = 400):
    raise HTTPException(status_code=status, detail={"kind": kind, "message": message})


def _run(fn):
    """Execute a computation, mapping library errors to transportable kinds."""
    try:
        return fn()
    except (SeriesParseError, PolyParseError) as e:
        _error("parse_error", str(e))
    except InconclusiveTruncation as e:
        _error("inconclusive_truncation", str(e))
    except (ComponentInsideQ, Falsification) as e:
        _error("hypothesis_violation", str(e))
    except (ValueError, ZeroDivisionError, ArithmeticError) as e:
        _error("invalid_input", str(e))


def _su2_axis_angle(m: Mat2):
    """Rotation angle in [0, pi] and axis azimuth of a unitary sign class."""
    u = m * math.sqrt(2.0)
    w = (u.a.real + u.d.real) / 2.0
    nz = (u.a.imag - u.d.imag) / 2.0
    nx = (u.b.imag + u.c.imag) / 2.0
    ny = (u.b.real - u.c.real) / 2.0
    angle = 2.0 * math.acos(min(1.0, abs(w)))
    return angle, math.atan2(ny, nx)


def _fiber_angle(p: Interior) -> float:
    """Circle coordinate in [0, pi) of the phase over its quadric point."""
    rep = p.phase.rep.m
    base = p.phase.base().point.m
    z = sum(r * b.conjugate() for r, b in zip(rep.entries(), base.entries()))
    return math.atan2(z.imag, z.real) % math.pi


def _base_coordinate(m: Mat2) -> float:
    """Polar angle of the column-space CP^1 point (plotting aid)."""
    col1, col2 = (m.a, m.c), (m.b, m.d)
    x = col1 if abs(col1[0]) ** 2 + abs(col1[1]) ** 2 >= abs(col2[0]) ** 2 + abs(col2[1]) ** 2 else col2
    return 2.0 * math.atan2(abs(x[1]), abs(x[0]))


def _projection(p: ConePoint) -> List[Number]:
    """Three plotting coordinates: height, circle/rotation angle, base angle."""
    if isinstance(p, Vertex):
        angle, azimuth = _su2_axis_angle(p.u.m)
        return [0.0, angle, azimuth]
    if isinstance(p, Interior):
        return [float(p.alpha), _fiber_angle(p), _base_coordinate(p.phase.rep.m)]
    return ["inf", "nan", _base_coordinate(p.q.point.m)]


def _cloud_response(command: str, seed: int, cloud: LabeledCloud) -> CloudResponse:
    points = []
    for cp in cloud.points:
        base = cone_point_to_json(cp.point)
        points.append(
            CloudPointModel(
                kind=base["kind"],
                alpha=_num(base["alpha"]) if isinstance(base["alpha"], float) else base["alpha"],
                matrix=base["matrix"],
                label=cp.label,
                meta=cp.meta,
                proj=_projection(cp.point),
            )
        )
    return CloudResponse(command=command, seed=seed, points=points)


app = FastAPI(
    title="psl2trop",
    description="Matrix valuations over truncated Hahn series and phase "
    "tropicalization point clouds.",
)


@app.get("/healthz")
def healthz():
    return {"status": "ok"}


@app.post("/val", response_model=ValResponse)
def val(req: ValRequest) -> ValResponse:
    def compute():
        a = req.matrix.to_hahn()
        p = val_symbolic(a, hahn.as_exponent(req.depth))
        return ValResponse(
            cone_point=ConePointModel.from_cone_point(p),
            embed=_matrix_json(embed_cone(p).m),
        )

    return _run(compute)


@app.post("/limit", response_model=LimitResponse)
def limit(req: LimitRequest) -> LimitResponse:
    def compute():
        a = req.matrix.to_hahn()
        if req.target is not None:
            target = req.target.to_cone_point()
        else:
            target = val_symbolic(a, hahn.as_exponent(req.depth))
        schedule = valuation.default_log_schedule(req.k_min, req.k_max)
        result = val_numeric(a, log_schedule=schedule, target=target)
        rows = [
            LimitRow(t=_num(r.t), h=r.h, dist=_num(r.dist)) for r in result.rows
        ]
        return LimitResponse(
            rows=rows,
            estimate=_matrix_json(result.estimate.m),
            target_used=ConePointModel.from_cone_point(target),
            alpha_extrapolated=extrapolate_alpha(result.rows),
        )

    return _run(compute)


@app.post("/example", response_model=CloudResponse)
def example(req: ExampleRequest) -> CloudResponse:
    def compute():
        if req.name == "line":
            cloud = tropicalize.example_line_cloud(req.alpha.values(), req.theta_count)
        else:
            cloud = tropicalize.example_quadric_cloud(
                req.alpha.values(), req.theta_count
            )
        return _cloud_response(f"example:{req.name}", req.seed, cloud)

    return _run(compute)


@app.post("/family", response_model=CloudResponse)
def family(req: FamilyRequest) -> CloudResponse:
    def compute():
        f = tropicalize.parse_poly(req.poly)
        cloud = tropicalize.constant_family_image(
            f,
            req.floor_count,
            req.base_count,
            req.alpha.values(),
            [math.pi * j / req.theta_count for j in range(req.theta_count)],
            seed=req.seed,
        )
        return _cloud_response("family", req.seed, cloud)

    return _run(compute)


@app.post("/fiber", response_model=FiberResponse)
def fiber(req: FiberRequest) -> FiberResponse:
    def compute():
        entries = []
        for text in (req.matrix.a, req.matrix.b, req.matrix.c, req.matrix.d):
            s = hahn.parse_series(text)
            if any(t.exponent != 0 for t in s.terms):
                raise ValueError("fiber input must be a constant matrix")
            entries.append(s.coefficient_at(0))
        q = QPoint(ProjPointC(Mat2(*entries)))
        fp = fiber_point(q, req.theta)
        return FiberResponse(
            fiber=_matrix_json(fp.rep.m),
            base=_matrix_json(q.point.m),
            theta=req.theta,
        )

    return _run(compute)
