"""Maximum convex partial transversals of disjoint vertical segments.

A transversal of a family of vertical segments is a set of points in weakly
convex position together with an injective assignment of points to segments,
each point lying on its assigned segment.  This package computes
maximum-cardinality transversals with exact rational arithmetic, validates the
solvers against a brute-force oracle on small inputs, and compiles Max-2-SAT
instances into 3-oriented segment scenes whose optimum encodes the formula.
"""

from .geom import (
    Turn,
    Point,
    VSegment,
    Line,
    VerticalLine,
    Strip,
    Instance,
    Transversal,
    ValidationIssue,
    InvalidInstanceError,
    VerticalPairError,
    rat,
    orient,
    slope,
    dualize_point,
    dualize_line,
    dualize_segment,
    intersect_line_vsegment,
    is_weakly_convex_ccw,
    validate_instance,
    instance_issues,
)
from .crossings import (
    RadialOrder,
    SlopeTieError,
    radial_order,
    crossing_count_direct,
    crossing_table_dual,
)
from .upper import UpperDpTable, upper_dp, max_upper_transversal, upper_dp_from
from .full import (
    candidate_points,
    quadrilateral_sweep,
    max_quadrilateral,
    compute_B,
    compute_X,
    compute_K,
    close_hull,
    max_convex_transversal,
)
from .oracle import (
    TooLargeError,
    build_candidates,
    oracle_max,
    oracle_max_upper,
)
from .hardness import (
    SatInstance,
    HardnessConstants,
    OrientedSegment,
    GadgetScene,
    constants,
    build_chain,
    build_banana,
    anchor_points,
    build_fly,
    build_instance,
    expected_optimum,
    validate_scene,
    emit_rectangles,
)
from .formats import (
    parse_instance,
    serialize_instance,
    parse_sat,
    serialize_scene,
    parse_scene,
    gen_random,
)
from .svg import render_svg

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
