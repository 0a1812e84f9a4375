"""Schwarzian criteria for the Weierstrass-Enneper lifts of harmonic mappings."""
from .chordarc import (PolygonDomain, chord_arc_constant, directional_constant,
                       internal_distance)
from .criteria import (CriterionReport, NehariFunction, RegionReport, ValidationReport,
                       balloon, c_fn, c_star, check_annulus_region, check_balloon_region,
                       check_disk_region, check_lift_criterion, check_reciprocal_region,
                       effective_t, eta, psi_qc, r0, reciprocal_conditions, rho, t_hat,
                       validate_nehari)
from .errors import *  # noqa: F401,F403
from .expr import Z, eval_jet, evaluate, parse, taylor_expand, to_text
from .grid import GridSpec
from .jets import Jet
from .lift import (SurfaceMesh, build_mesh, export_mesh, lift_point,
                   path_independence_check)
from .quadrature import QuadratureSpec
from .schwarzian import (HarmonicMapping, PointReport, conformal_factor, curvature_term,
                         fd_schwarzian, gauss_curvature, harmonic_schwarzian, jacobian,
                         phi_quantity, pre_schwarzian, schwarzian_analytic,
                         shear_schwarzian)
from .shear import (CollisionCertificate, ShearResult, ShearSpec, chord_arc_shear_bound,
                    converse_construction, directional_shear_bound, shear)

__version__ = "0.1.0"
