"""Exact verification of Galois-point criteria for plane curves over finite fields."""

__version__ = "0.1.0"

from .criterion import (A, CriterionReport, HermitianScenario, PlaneModel, ScenarioError,
                        build_plane_model, check_inner_criterion, check_outer_criterion,
                        fermat_orbit_condition, hermitian_scenario, inner_scenario,
                        model_orbit_condition, power_identity, verify_model_galois,
                        wrong_g_model)
from .curve import (CurveError, LineComponent, NoCurve, PlaneCurve, Underdetermined,
                    enumerate_points, interpolate_curve, make_curve, sample_points)
from .divisor import (Divisor, LinFormProduct, SplittingError, divisor_of_function,
                      line_divisor_split, line_intersection_divisor, orbit_sum, pushforward,
                      splitting_field)
from .field import (CapExceeded, ContextMismatch, FieldElem, FieldError, compositum, embedding,
                    extension, field_for_order, make_field, root_of_unity)
from .galois import (GaloisReport, decomposition_group, fixed_field_generator_check,
                     is_galois_point, scan_galois_points)
from .kernels import backend, set_backend
from .projective import (AutGroup, GroupTooLarge, ProjLine, ProjMatrix, ProjPoint, collinear,
                         group_closure, incident, line_through, meet, orbit,
                         perspectivities_with_center, plane_points, points_on_line)

__all__ = [name for name in dir() if not name.startswith("_")]
