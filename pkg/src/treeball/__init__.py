"""Automorphisms of finite balls in regular trees and their local machinery."""

__version__ = "0.1.0"

from .balls import (BallAut, BallGroup, ball_compatible, ball_points,
                    ball_size, follow, full_aut, full_aut_order,
                    words_of_length)
from .census import (CensusRow, census_compatible_classes,
                     census_discrete_lifts, degree3_table, format_table)
from .compat import (CompatCocycle, canonical_cocycle, check_compatibility,
                     check_trivial_seams, compat_set, compatibility_core,
                     find_involutive_cocycles, first_compat_failure,
                     joint_compat_set, seam_witness)
from .constructions import (Tower, TowerLevel, WreathLocal, build_centered,
                            build_cocycle_extension, build_diagonal,
                            build_full_lift, build_kernel_extension,
                            build_parity_lift, build_split_lift, build_tower,
                            build_wreath_local, tower_member)
from .documents import (GroupDocument, document_from_group,
                        group_from_document, load_document, parse_document,
                        save_document, serialize_document)
from .errors import CapacityError, DocumentError, HypothesisError
from .permcore import (Perm, PermGroup, classify_action,
                       invariant_subgroups_of_power)
from .universal import (assemble_extension, count_restrictions,
                        edge_inversion, extend_to_ball, is_discrete_universal,
                        iter_extensions, label_respecting_map,
                        local_action_group, pk_local_action, seam_groups)

__all__ = [
    "BallAut",
    "BallGroup",
    "CapacityError",
    "CensusRow",
    "CompatCocycle",
    "DocumentError",
    "GroupDocument",
    "HypothesisError",
    "Perm",
    "PermGroup",
    "Tower",
    "TowerLevel",
    "WreathLocal",
    "__version__",
    "assemble_extension",
    "ball_compatible",
    "ball_points",
    "ball_size",
    "build_centered",
    "build_cocycle_extension",
    "build_diagonal",
    "build_full_lift",
    "build_kernel_extension",
    "build_parity_lift",
    "build_split_lift",
    "build_tower",
    "build_wreath_local",
    "canonical_cocycle",
    "census_compatible_classes",
    "census_discrete_lifts",
    "check_compatibility",
    "check_trivial_seams",
    "classify_action",
    "compat_set",
    "compatibility_core",
    "count_restrictions",
    "degree3_table",
    "document_from_group",
    "edge_inversion",
    "extend_to_ball",
    "find_involutive_cocycles",
    "first_compat_failure",
    "follow",
    "format_table",
    "full_aut",
    "full_aut_order",
    "group_from_document",
    "invariant_subgroups_of_power",
    "is_discrete_universal",
    "iter_extensions",
    "joint_compat_set",
    "label_respecting_map",
    "load_document",
    "local_action_group",
    "parse_document",
    "pk_local_action",
    "save_document",
    "seam_groups",
    "seam_witness",
    "serialize_document",
    "tower_member",
    "words_of_length",
]
