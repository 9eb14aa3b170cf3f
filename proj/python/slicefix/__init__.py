"""Slice-based printability correction for additive manufacturing."""

from ._slicefix import (
    AnnealConfig,
    AnnealRecord,
    AnnealTrace,
    BinaryRaster,
    MesoSkeletonResult,
    ObjectiveParams,
    Orientation,
    SliceStack,
    StructuringElement,
    TriangleMesh,
    anneal,
    connected_component_count,
    correct_model,
    dilate,
    erode,
    euler_number,
    evaluate_objective,
    extract_surface,
    load_mesh,
    max_element_diameter,
    meso_skeleton,
    open,
    rotate_mesh,
    save_mesh,
    thin_pass,
    voxelize,
)

__all__ = [
    "AnnealConfig",
    "AnnealRecord",
    "AnnealTrace",
    "BinaryRaster",
    "MesoSkeletonResult",
    "ObjectiveParams",
    "Orientation",
    "SliceStack",
    "StructuringElement",
    "TriangleMesh",
    "anneal",
    "connected_component_count",
    "correct_model",
    "dilate",
    "erode",
    "euler_number",
    "evaluate_objective",
    "extract_surface",
    "load_mesh",
    "max_element_diameter",
    "meso_skeleton",
    "open",
    "rotate_mesh",
    "save_mesh",
    "thin_pass",
    "voxelize",
]
