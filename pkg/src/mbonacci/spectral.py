"""Incidence matrices and the Perron-Frobenius root of the Rauzy substitutions.

The root is the unique zero of ``x^m - x^(m-1) - ... - x - 1`` inside the
bracket ``(2 (1 - 2^-m), 2)``. It is located by bisection on that bracket and
polished with Newton's method. Orders up to 40 run in double precision;
larger orders (where the root crowds 2) or an explicit ``digits`` request
switch to mpmath arithmetic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

import mpmath
import numpy as np

from .errors import DomainError, NumericError
from .substitution import Alphabet

DOUBLE_PRECISION_MAX_ORDER = 40
DEFAULT_TOLERANCE = 1e-15
PRECISION_ENV = "MBONACCI_PRECISION_DIGITS"
_BISECTION_TOL = 1e-6
_MAX_NEWTON = 200
_MAX_BISECTION = 10_000


def incidence_matrix(m: int) -> np.ndarray:
    """``M[i, j] = |sigma_m(i+1)|_(j+1)``: ones in the first column and on the superdiagonal."""
    m = Alphabet(m).m
    M = np.zeros((m, m), dtype=np.int64)
    M[:, 0] = 1
    idx = np.arange(m - 1)
    M[idx, idx + 1] = 1
    return M


def char_poly_eval(m: int, x):
    """Evaluate the monic polynomial ``x^m - x^(m-1) - ... - 1`` by Horner's scheme.

    Works for floats, mpmath numbers, and exact types such as Fraction.
    """
    m = Alphabet(m).m
    acc = x - 1
    for _ in range(m - 1):
        acc = acc * x - 1
    return acc


def char_poly_derivative(m: int, x):
    m = Alphabet(m).m
    # d/dx of x^m - sum_{j<m} x^j via Horner on coefficients m, -(m-1), ..., -1.
    acc = x * 0 + m
    for j in range(m - 1, 0, -1):
        acc = acc * x - j
    return acc


def root_bracket(m: int) -> tuple[float, float]:
    m = Alphabet(m).m
    return 2.0 * (1.0 - 2.0 ** (-m)), 2.0


@dataclass(frozen=True)
class PerronData:
    """Perron root of ``sigma_m`` with its left eigenvector and residuals.

    ``rho`` is a float; ``rho_hp`` keeps the full-precision value (a float or
    an ``mpmath.mpf``). ``error_bound`` bounds ``|rho - rho_true|``.
    """

    m: int
    rho: float
    left_eigenvector: np.ndarray = field(repr=False)
    poly_residual: float
    eig_residual: float
    precision: int
    error_bound: float
    rho_hp: object = field(repr=False, default=None)

    @property
    def gap_lengths(self) -> np.ndarray:
        """``(rho^-1, ..., rho^-m)``; the same vector as the left eigenvector."""
        return self.left_eigenvector

    def rho_string(self, digits: int | None = None) -> str:
        digits = digits or self.precision
        if isinstance(self.rho_hp, mpmath.mpf):
            return mpmath.nstr(self.rho_hp, digits, strip_zeros=False)
        return repr(float(self.rho))


def default_digits() -> int | None:
    """Extended precision requested through the environment, if any."""
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return None
    try:
        digits = int(raw)
    except ValueError:
        raise DomainError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if digits < 15:
        raise DomainError(f"{PRECISION_ENV} must be >= 15, got {digits}")
    return digits


def _solve(m, lo, hi, tolerance):
    P = lambda x: char_poly_eval(m, x)  # noqa: E731
    dP = lambda x: char_poly_derivative(m, x)  # noqa: E731
    if not (P(lo) < 0 < P(hi)):
        raise NumericError(f"root bracket does not change sign for m={m}")

    steps = 0
    while hi - lo > _BISECTION_TOL:
        mid = (lo + hi) / 2
        if P(mid) < 0:
            lo = mid
        else:
            hi = mid
        steps += 1
        if steps > _MAX_BISECTION:
            raise NumericError(f"bisection did not converge for m={m}")

    x = (lo + hi) / 2
    for _ in range(_MAX_NEWTON):
        d = dP(x)
        if d == 0:
            raise NumericError(f"vanishing derivative during Newton step, m={m}, x={x}")
        step = P(x) / d
        x_new = x - step
        if not (lo <= x_new <= hi):
            # Newton left the bracket; fall back to the midpoint.
            x_new = (lo + hi) / 2
        if P(x_new) < 0:
            lo = max(lo, x_new)
        else:
            hi = min(hi, x_new)
        if abs(x_new - x) <= tolerance * abs(x_new) or x_new == x:
            return x_new, lo, hi
        x = x_new
    raise NumericError(
        f"Newton iteration did not reach tolerance {tolerance} for m={m}; "
        f"last iterate {x}, residual {P(x)}"
    )


def perron_root(m: int, tolerance: float = DEFAULT_TOLERANCE, digits: int | None = None) -> PerronData:
    """Compute the Perron-Frobenius root of ``sigma_m``.

    Parameters
    ----------
    m : int
        Order, ``m >= 2``.
    tolerance : float
        Relative step size at which Newton stops.
    digits : int, optional
        Decimal digits for mpmath arithmetic. When omitted, double precision
        is used for ``m <= 40`` and an order-dependent precision above.
    """
    m = Alphabet(m).m
    if not tolerance > 0:
        raise DomainError("tolerance must be positive")
    if digits is None and m > DOUBLE_PRECISION_MAX_ORDER:
        # rho_m sits about 2^-m below 2; keep ~20 digits beyond that gap.
        digits = int(m * 0.302) + 25

    if digits is None:
        lo, hi = root_bracket(m)
        rho_hp, lo, hi = _solve(m, lo, hi, tolerance)
        rho_hp = float(rho_hp)
        precision = 15
        ulp = np.spacing(rho_hp)
        deriv = float(char_poly_derivative(m, rho_hp))
        poly = abs(float(char_poly_eval(m, rho_hp)))
        # Rounding in Horner costs about m*2^m ulps of the polynomial value.
        noise = 2.0 * m * (2.0 ** m) * np.finfo(float).eps
        error_bound = max(2 * ulp, (poly + noise) / abs(deriv))
        d_hp = [rho_hp ** (-j) for j in range(1, m + 1)]
    else:
        if digits < 15:
            raise DomainError("extended precision needs at least 15 digits")
        precision = int(digits)
        with mpmath.workdps(precision + 10):
            lo = 2 * (1 - mpmath.mpf(2) ** (-m))
            hi = mpmath.mpf(2)
            tol = max(mpmath.mpf(tolerance), mpmath.mpf(10) ** (-precision))
            rho_hp, lo, hi = _solve(m, lo, hi, tol)
            deriv = char_poly_derivative(m, rho_hp)
            poly = abs(char_poly_eval(m, rho_hp))
            error_bound = float(max(poly / abs(deriv), mpmath.mpf(10) ** (-precision)))
            d_hp = [rho_hp ** (-j) for j in range(1, m + 1)]
            poly = float(poly)

    d = np.array([float(x) for x in d_hp])
    data = PerronData(
        m=m,
        rho=float(rho_hp),
        left_eigenvector=d,
        poly_residual=float(poly),
        eig_residual=0.0,
        precision=precision,
        error_bound=float(error_bound),
        rho_hp=rho_hp,
    )
    return replace(data, eig_residual=verify_left_eigenvector(data))


def verify_left_eigenvector(p: PerronData) -> float:
    """Max-norm of ``d M - rho d`` evaluated at the working precision of ``p``.

    The first coordinate of ``d M`` is ``sum_j rho^-j``, so the normalisation
    ``sum_j rho^-j = 1`` is part of this residual.
    """
    m = p.m
    M = incidence_matrix(m)
    if isinstance(p.rho_hp, mpmath.mpf):
        with mpmath.workdps(p.precision + 10):
            rho = p.rho_hp
            d = [rho ** (-j) for j in range(1, m + 1)]
            dM = [sum(d[i] * int(M[i, j]) for i in range(m)) for j in range(m)]
            return float(max(abs(dM[j] - rho * d[j]) for j in range(m)))
    rho = float(p.rho_hp if p.rho_hp is not None else p.rho)
    d = np.array([rho ** (-j) for j in range(1, m + 1)])
    return float(np.max(np.abs(d @ M - rho * d)))


def normalization_defect(p: PerronData) -> float:
    """``|sum_j rho^-j - 1|``."""
    if isinstance(p.rho_hp, mpmath.mpf):
        with mpmath.workdps(p.precision + 10):
            return float(abs(mpmath.fsum(p.rho_hp ** (-j) for j in range(1, p.m + 1)) - 1))
    return abs(float(np.sum(p.left_eigenvector)) - 1.0)


_CACHE: dict[tuple[int, int | None], PerronData] = {}


def perron(m: int, digits: int | None = None) -> PerronData:
    """Cached :func:`perron_root` at the default tolerance."""
    key = (int(m), digits)
    if key not in _CACHE:
        _CACHE[key] = perron_root(m, digits=digits)
    return _CACHE[key]
