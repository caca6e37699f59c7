"""Interval spaces, quasi additive interval functions and their integrals."""
from .catalog import (
    DiscreteMeasure,
    ExampleConfig,
    JumpCurve,
    cauchy_function,
    cube_integral,
    example_catalog,
    increment_function,
    jordan_space,
    level_set_members,
    parse_example_uri,
    parse_function,
    penalty_mesh,
    prime_system,
    step_curve,
    unit_speed_integral,
    weierstrass_function,
    weierstrass_integral,
)
from .core import (
    BC_SCHEDULE,
    EMPTY,
    Box,
    Interval,
    IntervalFunction,
    IntervalSpace,
    QaCertification,
    QaReport,
    System,
    bc_integral,
    check_nonoverlap,
    check_space,
    compose_integrand,
    containers,
    length_function,
    qa_certify,
    qa_deficits,
    subset_mask,
    system_sum,
    variation,
    zeta_condition,
)
from .exact import OMEGA, QNum, rational_penalty

__all__ = [name for name in dir() if not name.startswith("_")]
