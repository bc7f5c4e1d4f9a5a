"""Kinetostatic stiffness analysis of multi-chain parallel manipulators.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface. Units throughout: mm, N, rad, N·mm.
"""

from ._core import (
    BeamSpec,
    ChainCoordinates,
    ChainDescription,
    ChainStiffnessResult,
    CircleSection,
    ComparativeEntry,
    ComparativeRow,
    Manipulator,
    ManipulatorStiffness,
    ModelDocument,
    ModelError,
    NumericalError,
    OrthoglideParams,
    OrthoglideVariant,
    PosturedManipulator,
    RectangleSection,
    StiffnessIndices,
    WorkspaceError,
    beam_compliance,
    build_3prpar,
    build_3puu,
    chain_jacobians,
    chain_link_compliances,
    chain_stiffness_loaded,
    chain_stiffness_unloaded,
    comparative_study,
    finite_difference_jacobians,
    forward_transform,
    inverse_kinematics,
    load_external_compliance,
    load_model,
    manipulator_stiffness,
    matrix_rank,
    parallelogram_compliance,
    reachable,
    reference_study_points,
    stiffness_indices,
)

__all__ = [
    "BeamSpec",
    "ChainCoordinates",
    "ChainDescription",
    "ChainStiffnessResult",
    "CircleSection",
    "ComparativeEntry",
    "ComparativeRow",
    "Manipulator",
    "ManipulatorStiffness",
    "ModelDocument",
    "ModelError",
    "NumericalError",
    "OrthoglideParams",
    "OrthoglideVariant",
    "PosturedManipulator",
    "RectangleSection",
    "StiffnessIndices",
    "WorkspaceError",
    "beam_compliance",
    "build_3prpar",
    "build_3puu",
    "chain_jacobians",
    "chain_link_compliances",
    "chain_stiffness_loaded",
    "chain_stiffness_unloaded",
    "comparative_study",
    "finite_difference_jacobians",
    "forward_transform",
    "inverse_kinematics",
    "load_external_compliance",
    "load_model",
    "manipulator_stiffness",
    "matrix_rank",
    "parallelogram_compliance",
    "reachable",
    "reference_study_points",
    "stiffness_indices",
]

__version__ = "0.1.0"
