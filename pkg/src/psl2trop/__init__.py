"""Phase tropicalization of 2x2 matrix families over truncated Hahn series."""

from .hahn import (
    HahnSeries,
    HahnTerm,
    InconclusiveTruncation,
    SeriesParseError,
    parse_series,
    print_series,
)
from .mat2 import Mat2, ProjPointC, ProjPointR, dist_proj_c, dist_proj_r, polar, svd2
from .hyperbolic import (
    H3Point,
    BoundaryPoint,
    QhatPoint,
    amoeba,
    amoeba_star,
    coamoeba,
    dist_to_O,
    double_amoeba,
)
from .quadric import FiberPoint, QPoint, fiber_membership, fiber_point, section_s, segre, unsegre
from .valuation import (
    Base,
    ConePoint,
    HahnMat2,
    Interior,
    Vertex,
    cone_coords,
    cone_point_from_json,
    cone_point_to_json,
    embed_cone,
    flow_R_h,
    val_numeric,
    val_symbolic,
)
from .tropicalize import (
    ComponentInsideQ,
    Falsification,
    HomogPoly4,
    LabeledCloud,
    constant_family_image,
    example_line,
    example_quadric_classify,
    parse_poly,
    roots_univariate,
    sample_V_cap_Q,
    sample_variety,
    witness_for_cone_point,
)

__version__ = "0.1.0"
