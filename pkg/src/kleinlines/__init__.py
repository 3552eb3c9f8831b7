"""Exact line geometry for distance-energy problems in the plane and on constant-curvature surfaces.

Pairs of points become lines of projective 3-space (points of the Klein
quadric) so that equal pair values correspond to intersecting lines.
"""
from .audit import AuditReport, TaggedLine, audit, detect_exceptional, regulus_spotcheck, tagged_lines
from .clifford import CliffordElement, geometric_product, rotor_action, rotor_line, rotor_line_to_plucker
from .energy import (EnergyReport, PairValueSpec, cross_validate, quadruple_count,
                     quadruple_count_naive, split_cover)
from .errors import KleinError
from .klein import (PlueckerLine, ProjPlane3, ProjPoint3, common_plane, klein_membership, meet_point,
                    plucker_from_points, reciprocal_product, regulus_quadric)
from .pointgen import PointSet, generate
from .reductions import (DirGFamily, FormConfig, case_matrices, line_map, map_constant_curvature,
                         map_pair, preset_config)

__version__ = "0.1.0"
