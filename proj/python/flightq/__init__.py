"""Collision-free flight-pattern queues for drone swarms.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from flightq._core import (  # noqa: F401
    Pattern,
    Vec3,
    __version__,
    build_pattern,
    circle,
    ellipse,
    generate_workload,
    load_scenario,
    min_slot_clearance,
    nested2d,
    parse_scenario,
    rectangle,
    required_speed,
    rose_desk_scale,
    run_scenario,
    stacked3d,
    validate_scenario,
    zigzag,
)

__all__ = [
    "Pattern",
    "Vec3",
    "build_pattern",
    "circle",
    "ellipse",
    "generate_workload",
    "load_scenario",
    "min_slot_clearance",
    "nested2d",
    "parse_scenario",
    "rectangle",
    "required_speed",
    "rose_desk_scale",
    "run_scenario",
    "stacked3d",
    "validate_scenario",
    "zigzag",
    "__version__",
]
