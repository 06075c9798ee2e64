"""Floating bodies, illumination bodies and polytope approximation of convex bodies in low dimensions."""
__version__ = "0.1.0"

from .approx import (GreedyRun, ball_inscribed_polytope, circumscribed_facets, greedy_inscribed,
                     hausdorff_bound, lemma32_bound)
from .bodycore import (AffineImage, Ball, ConvexBody, Ellipsoid, HPolytope, OracleView, Polytope,
                       VPolytope, box, convex_hull, cross_polytope, cube, hpoly_vertices,
                       random_polytope, regular_polygon, standard_simplex)
from .caps import Cap, cap_contains, cap_offsets, cap_volume, solve_cap_depth
from .errors import GeometryError
from .floating import (FloatingQuery, floating_membership, floating_outer_polytope,
                       lemma27_ball_check, min_cap_through_point)
from .illumination import (illumination_boundary_points, illumination_inner_polytope,
                           illumination_membership, illumination_volume_bounds, overshoot,
                           overshoot_oracle, overshoot_polytope)
from .measure import VolumeEstimate, inertia, mc_volume, section_volume, symmetric_difference, volume
from .position import grunbaum_ratios, isotropic_transform, theta
from .report import Report

__all__ = [name for name in dir() if not name.startswith("_")]
