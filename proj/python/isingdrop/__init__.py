"""Zero-temperature planar Ising droplet dynamics."""

import json

from . import _core
from ._core import (
    anisotropy_a,
    area,
    clipped_shape,
    drift_b,
    drift_speed,
    evolve_flow_disk,
    exclusion_step,
    extinction_time,
    hausdorff_distance,
    heat_dirichlet,
    inscribed_half_width,
    render_square_overlay,
    rost_profile_g,
    square_limit_shape,
    viscosity_solution,
    weak_solution_square,
)


def run_experiment(config):
    """Run an experiment from a config dict; returns the results dict."""
    return json.loads(_core.run_experiment(json.dumps(config)))


__all__ = [
    "anisotropy_a",
    "area",
    "clipped_shape",
    "drift_b",
    "drift_speed",
    "evolve_flow_disk",
    "exclusion_step",
    "extinction_time",
    "hausdorff_distance",
    "heat_dirichlet",
    "inscribed_half_width",
    "render_square_overlay",
    "rost_profile_g",
    "run_experiment",
    "square_limit_shape",
    "viscosity_solution",
    "weak_solution_square",
]
