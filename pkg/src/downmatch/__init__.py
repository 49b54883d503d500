"""Disjoint-set matchings of down-sets and exhaustive checks of extremal
bounds for intersecting, union and intersecting-union families."""

from .family import (
    Family,
    WeightFn,
    complement_family,
    covering_number,
    down_closure,
    is_cross_intersecting,
    is_cross_iu,
    is_down_set,
    is_intersecting,
    is_iu,
    is_union,
    is_up_set,
    link_and_deletion,
    max_degree,
    up_closure,
)
from .matching import (
    PairMatching,
    WeightedMatching,
    matched_into,
    orient_quotas,
    self_matching,
    verify_injection,
    verify_pair_matching,
    verify_weighted_matching,
    weighted_disjoint_matching,
)

__version__ = "0.1.0"
