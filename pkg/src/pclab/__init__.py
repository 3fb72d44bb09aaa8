"""Exact symbolic analysis of left-invariant paracontact metric frames."""

from .catalog import get_entry, instantiate, list_entries, verify_goldens
from .classify import classify
from .curvature import Geometry
from .frame import FrameSpec, ParacontactFrame, SignConvention, infer_phi, load_spec, validate
from .scalar import Polynomial, parse_expr

__version__ = "0.1.0"

__all__ = [
    "FrameSpec", "Geometry", "ParacontactFrame", "Polynomial", "SignConvention", "classify",
    "get_entry", "infer_phi", "instantiate", "list_entries", "load_spec", "parse_expr",
    "validate", "verify_goldens",
]
