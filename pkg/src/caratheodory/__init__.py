"""Quantitative boundary continuity for conformal maps of Jordan domains."""

from .annuli import (
    PolarSeparationCandidate,
    RegionSample,
    extremal_length,
    is_polar_separation,
    length_area_check,
)
from .bounds import (
    BoundQuery,
    DeltaResult,
    Log2Real,
    SoundnessError,
    delta_of,
    threshold_radius,
    k_of,
    diameter_bound,
)
from .components import (
    ComponentRegion,
    JordanDomain,
    boundary_component,
    circle_cut_components,
    crosscut_sides,
)
from .curves import PolygonalJordanCurve, SubarcPair, split_at, subarc_diameter, trace_map_boundary
from .estimators import ConformalMapTransformer, MLCEstimator
from .geometry import (
    Annulus,
    Circle,
    CurvePoint,
    Location,
    circle_polygon_intersection,
    d_inf,
    point_in_polygon,
    set_diameter,
)
from .harness import VerificationReport, verify_continuity, verify_diameter
from .maps import (
    CATALOG,
    Affine,
    Identity,
    MapSpec,
    Mobius,
    Quad,
    eval_forward,
    eval_inverse,
    map_from_json,
    min_inverse_distance,
)
from .mlc import MLCTable, MLCWitness, check_mlc, estimate_mlc, verify_membership_theorem
from .suite import run_suite

__version__ = "0.1.0"
