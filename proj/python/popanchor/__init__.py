"""Spatial anchor-point assignment for synthetic populations.

The heavy lifting lives in the C++ extension module; this package re-exports
its surface: scenario loading, the pipeline runner, and the probability
kernels used by the assignment stages.
"""

from ._core import (
    PipelineError,
    Scenario,
    age_band,
    apportion,
    cell_distance,
    cell_to_district_distance,
    class_probabilities,
    delta_matrix,
    expected_workplaces,
    gravity_probabilities,
    largest_remainder,
    load_od_csv,
    normalized_cell_weights,
    residence_cell_weights,
    run,
    work_cell_probabilities,
)

__all__ = [
    "PipelineError",
    "Scenario",
    "age_band",
    "apportion",
    "cell_distance",
    "cell_to_district_distance",
    "class_probabilities",
    "delta_matrix",
    "expected_workplaces",
    "gravity_probabilities",
    "largest_remainder",
    "load_od_csv",
    "normalized_cell_weights",
    "residence_cell_weights",
    "run",
    "work_cell_probabilities",
]
