"""Local densities over Z^d: analytic predictions and exact box estimates."""

from fractions import Fraction
import json

from . import _latglob as _core
from ._latglob import (
    BudgetError,
    DegenerateDenominator,
    DomainError,
    EmptyRestriction,
    IncompleteFactorization,
    IntegrityError,
    make_system,
    nth_prime,
    riemann_zeta,
    sieve_primes,
    system_key_forms,
)

__all__ = [
    "BudgetError",
    "DegenerateDenominator",
    "DomainError",
    "EmptyRestriction",
    "IncompleteFactorization",
    "IntegrityError",
    "empirical_density",
    "empirical_mean",
    "empirical_P_inverse_density",
    "empirical_restricted_mean",
    "euler_product",
    "make_system",
    "measure",
    "nth_prime",
    "predicted_density_T",
    "predicted_restricted_mean",
    "prime_series",
    "product_formula",
    "riemann_zeta",
    "run",
    "sieve_primes",
    "system_key_forms",
]


def _fraction(est):
    return Fraction(int(est.num), int(est.den))


def _system(system):
    return make_system(system) if isinstance(system, str) else system


def measure(system, p):
    num, den = _system(system).measure(p)
    return Fraction(int(num), int(den))


def empirical_mean(system, H, threads=0):
    return _fraction(_core.empirical_mean(_system(system), H, threads))


def empirical_restricted_mean(system, H, threads=0):
    return _fraction(_core.empirical_restricted_mean(_system(system), H, threads))


def empirical_density(system, p, H, threads=0):
    return _fraction(_core.empirical_density(_system(system), p, H, threads))


def empirical_P_inverse_density(system, primes, H, infinity=False, threads=0):
    return _fraction(_core.empirical_P_inverse_density(_system(system), list(primes), H, infinity, threads))


def prime_series(system, eps=1e-9):
    return _core.prime_series(_system(system), eps)


def euler_product(system, eps=1e-9):
    return _core.euler_product(_system(system), eps)


def predicted_density_T(system, eps=1e-9):
    return _core.predicted_density_T(_system(system), eps)


def predicted_restricted_mean(system, eps=1e-9):
    return _core.predicted_restricted_mean(_system(system), eps)


def product_formula(system, primes, infinity=False, eps=1e-9):
    return _core.product_formula(_system(system), list(primes), infinity, eps)


def run(command, system, **kwargs):
    """Run a CLI command in-process. Returns (exit_code, report); the report
    is parsed JSON unless format="csv"."""
    code, text = _core.run(command, system, **kwargs)
    if kwargs.get("format", "json") == "json":
        return code, json.loads(text)
    return code, text
