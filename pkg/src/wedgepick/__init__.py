"""Dynamic graph toolkit built around the wedge picking evolution model."""

from .graph import DynamicGraph, GraphError, audit_recompute
from .sim import ModelParams, WedgeSimulator, run_trace

__version__ = "0.1.0"

__all__ = ["DynamicGraph", "GraphError", "ModelParams", "WedgeSimulator", "audit_recompute", "run_trace"]
