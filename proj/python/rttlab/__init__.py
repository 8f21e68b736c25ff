"""Python front end for the rttlab C++ core."""

from ._core import (
    Error,
    GenerationFailure,
    Graph,
    HostMismatch,
    InvalidArgument,
    ParseError,
    Pattern,
    ResourceError,
    alpha_r,
    alpha_star_r,
    build_absorbing_set,
    connectors,
    generate,
    has_factor,
    max_tiling,
    montgomery_template,
    partition,
    quasiperfect_gap,
    read_graph,
    run_experiment,
    second_eigenvalue,
    verify_absorber,
    write_graph,
)

__all__ = [
    "Error",
    "GenerationFailure",
    "Graph",
    "HostMismatch",
    "InvalidArgument",
    "ParseError",
    "Pattern",
    "ResourceError",
    "alpha_r",
    "alpha_star_r",
    "build_absorbing_set",
    "connectors",
    "generate",
    "has_factor",
    "max_tiling",
    "montgomery_template",
    "partition",
    "quasiperfect_gap",
    "read_graph",
    "run_experiment",
    "second_eigenvalue",
    "verify_absorber",
    "write_graph",
]
