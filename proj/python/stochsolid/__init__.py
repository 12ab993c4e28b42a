"""Volumetric stochastic opaque solids."""

from ._core import (
    AttenuationModel,
    Camera,
    ImplicitField,
    NormalModel,
    RenderSettings,
    SymmetricDistribution,
    check_names,
    light_trace,
    load_scene,
    path_trace,
    projected_area,
    reciprocity_gap,
    render_scene,
    run_verification,
    transmittance,
)

__all__ = [
    "AttenuationModel",
    "Camera",
    "ImplicitField",
    "NormalModel",
    "RenderSettings",
    "SymmetricDistribution",
    "check_names",
    "light_trace",
    "load_scene",
    "path_trace",
    "projected_area",
    "reciprocity_gap",
    "render_scene",
    "run_verification",
    "transmittance",
]
