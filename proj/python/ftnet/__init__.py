"""Weighted Fermat-Torricelli networks: forward, inverse and plasticity solvers."""

import json as _json

from ._core import (
    FtnetError,
    brute_force_min,
    classify,
    cos_alpha_candidates,
    feasible_b4_interval,
    feasible_b5_interval,
    geometric_plasticity_transport,
    hexahedron_plasticity,
    inverse_tetrahedron,
    inverse_triangle,
    measure_angles,
    mixed_inverse_tetrahedron,
    mixed_inverse_tetrahedron_angles,
    mixed_inverse_triangle,
    objective,
    partial_distance_derivatives,
    quadrilateral_plasticity,
    residual_for_unique_inverse_tetra,
    residual_for_unique_inverse_triangle,
    solve,
)
from ._core import run as _run

__all__ = [
    "FtnetError",
    "brute_force_min",
    "classify",
    "cos_alpha_candidates",
    "feasible_b4_interval",
    "feasible_b5_interval",
    "geometric_plasticity_transport",
    "hexahedron_plasticity",
    "inverse_tetrahedron",
    "inverse_triangle",
    "measure_angles",
    "mixed_inverse_tetrahedron",
    "mixed_inverse_tetrahedron_angles",
    "mixed_inverse_triangle",
    "objective",
    "partial_distance_derivatives",
    "quadrilateral_plasticity",
    "residual_for_unique_inverse_tetra",
    "residual_for_unique_inverse_triangle",
    "run",
    "solve",
]


def run(command, document, **flags):
    """Run a CLI command on a document (dict or JSON text).

    Returns (exit_code, result) where result is the parsed result document,
    the CSV text of a sweep, or the parsed error payload.
    """
    text = document if isinstance(document, str) else _json.dumps(document)
    code, out, err = _run(command, text, **flags)
    if code != 0 and not out:
        return code, _json.loads(err)
    if flags.get("sweep"):
        return code, out
    return code, _json.loads(out)
