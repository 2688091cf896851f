"""Constructive reductions with solution translators."""

from .base import Namer, ReductionOutput, require
from .betweenness import (
    betweenness_to_pbe3,
    betweenness_to_ptbe3_caterpillar,
    betweenness_to_sunflower_pseudotree,
    betweenness_to_sunflower_tree_biconnected,
    pbe3_leaf_count,
)
from .books import lift_order, project_order, ptbe2_to_sp_biconnected, ptbe_to_pbe, sp_backward_order, sp_forward_order
from .degree3 import degree3_expand
from .steiner import pst_to_utpst, pst_tree_backward, pst_tree_forward, steiner_to_certificate, utpst_to_maxsefe
from .sunflower import SunflowerBook, order_to_sefe_certificate, sunflower_to_ptbe
from .xorsat import assignment_to_certificate, certificate_to_assignment, xorsat_to_maxsefe

__all__ = [
    "Namer",
    "ReductionOutput",
    "SunflowerBook",
    "assignment_to_certificate",
    "betweenness_to_pbe3",
    "betweenness_to_ptbe3_caterpillar",
    "betweenness_to_sunflower_pseudotree",
    "betweenness_to_sunflower_tree_biconnected",
    "certificate_to_assignment",
    "degree3_expand",
    "lift_order",
    "order_to_sefe_certificate",
    "pbe3_leaf_count",
    "project_order",
    "pst_to_utpst",
    "pst_tree_backward",
    "pst_tree_forward",
    "ptbe2_to_sp_biconnected",
    "ptbe_to_pbe",
    "require",
    "sp_backward_order",
    "sp_forward_order",
    "steiner_to_certificate",
    "sunflower_to_ptbe",
    "utpst_to_maxsefe",
    "xorsat_to_maxsefe",
]
