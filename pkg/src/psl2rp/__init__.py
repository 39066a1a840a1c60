"""Replacement property for PSL(2, p): group construction, maximal subgroups,
generating sequences, radical-criterion decision and failure certificates."""

from .fpgroup import PSL2, GroupError, build_group
from .subgroups import Maximals, TypeTag, maximal_subgroups
from .rp import RPReport, check_rp, predict_rp, predict_witness_orders

__version__ = "0.1.0"

__all__ = ["PSL2", "GroupError", "build_group", "Maximals", "TypeTag", "maximal_subgroups",
           "RPReport", "check_rp", "predict_rp", "predict_witness_orders"]
