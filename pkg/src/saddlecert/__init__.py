"""Parametrisations of local stable/unstable manifolds of saddles with a verified radius."""
from .certificate import (
    Certificate,
    MajorantData,
    build_certificate,
    fhat_coeffs,
    fit_geometric_bound,
    joint_majorant,
    quadratic_bound,
    remainder_bound,
    sigma_coeffs,
    verify_radius,
)
from .errors import (
    DegenerateWindow,
    InconclusiveInterval,
    MaxIterationsExceeded,
    NonpositiveOmega,
    OrderingViolation,
    OrderTooSmall,
    ResonanceDetected,
    SaddleCertError,
    SignViolation,
    SystemFileSyntaxError,
    TailDiverges,
    ValidationError,
)
from .scalar import FLOAT, INTERVAL, get_arith
from .series import IndexClass, PolySeries, compose_truncated, eval_enclosure, filter_class, series_multiply
from .solver import ManifoldParam, NormalFormTail, VectorField, invariance_residual, normal_form_tail, solve_stable, solve_unstable
from .spectrum import Spectrum, omega_global, verify_spectrum
from .sysfile import parse_system, serialise_system

__version__ = "0.1.0"
