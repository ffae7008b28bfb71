"""Fibonacci and Tribonacci numeration, subword weights and gap constants.

Index conventions::

    F_0 = 0, F_1 = 1, F_N = F_{N-1} + F_{N-2}
    T_0 = T_1 = 0, T_2 = 1, T_N = T_{N-1} + T_{N-2} + T_{N-3}

A Tribonacci expansion of ``n`` is a bit vector ``x_3 .. x_L`` with
``n = sum x_h T_h``. A block ``sigma_3^(h-3)(1)`` has length ``T_h`` and
contains ``T_{h-j}`` copies of digit ``j``; every weight formula below is
derived from that single rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .spectral import PerronData, perron

_FIB = [0, 1]
_TRIB = [0, 0, 1]


def _check_index(N) -> int:
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or N < 0:
        raise DomainError(f"index must be a non-negative integer, got {N!r}")
    return int(N)


def fib(N: int) -> int:
    N = _check_index(N)
    while len(_FIB) <= N:
        _FIB.append(_FIB[-1] + _FIB[-2])
    return _FIB[N]


def trib(N: int) -> int:
    N = _check_index(N)
    while len(_TRIB) <= N:
        _TRIB.append(_TRIB[-1] + _TRIB[-2] + _TRIB[-3])
    return _TRIB[N]


def fibonacci_index(N: int) -> int | None:
    """Largest ``K`` with ``F_K == N``, or None when ``N`` is not a Fibonacci number."""
    if N < 0:
        return None
    K = 0
    while fib(K) < N:
        K += 1
    if fib(K) != N:
        return None
    while fib(K + 1) == N:
        K += 1
    return K


@dataclass(frozen=True)
class TribExpansion:
    """Greedy expansion ``n = sum_{h=3}^{L} x_h T_h`` with ``x_L = 1``."""

    n: int
    L: int
    bits: tuple[int, ...]  # x_3, x_4, ..., x_L

    def __post_init__(self):
        if len(self.bits) != self.L - 2:
            raise DomainError("bit vector length must be L - 2")
        if self.bits[-1] != 1:
            raise DomainError("leading bit x_L must be 1")
        if trib_eval(self.bits) != self.n:
            raise DomainError("bits do not sum to n")
        if "111" in self.bit_string:
            raise DomainError("greedy expansion cannot contain three consecutive ones")

    @property
    def bit_string(self) -> str:
        """Bits written as ``x_3 x_4 ... x_L``."""
        return "".join(str(b) for b in self.bits)

    def x(self, h: int) -> int:
        return self.bits[h - 3] if 3 <= h <= self.L else 0

    def to_dict(self) -> dict:
        return {"n": self.n, "L": self.L, "bits": self.bit_string}


def trib_eval(bits) -> int:
    """``sum_h x_h T_h`` for bits ``x_3, x_4, ...``."""
    return sum(int(b) * trib(h) for h, b in enumerate(bits, start=3))


def trib_expand(n: int) -> TribExpansion:
    """Greedy Tribonacci expansion of a positive integer.

    >>> trib_expand(10).bit_string
    '1101'
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"expansion needs a positive integer, got {n!r}")
    n = int(n)
    L = 3
    while trib(L + 1) <= n:
        L += 1
    bits = [0] * (L - 2)
    rest = n
    for h in range(L, 2, -1):
        if trib(h) <= rest:
            bits[h - 3] = 1
            rest -= trib(h)
    assert rest == 0
    return TribExpansion(n=n, L=L, bits=tuple(bits))


def fibonacci_subword_weight_bounds(N: int) -> tuple[int, int]:
    """Integer range of ``|w|_2`` over all length-``N`` factors of the Fibonacci word.

    Fibonacci lengths ``N = F_K`` (``K >= 3``) get the sharp range; other
    lengths get the balance range ``|  |w|_2 - N / phi^2 | <= 1``.
    """
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"length must be a positive integer, got {N!r}")
    N = int(N)
    K = fibonacci_index(N)
    if K is not None and K >= 3:
        base = fib(K - 2)
        return (base - 1, base) if K % 2 == 1 else (base, base + 1)
    # N / phi^2 is irrational, so ceil(N/phi^2 - 1) = floor(N/phi^2).
    base = _fib_weight_floor(N)
    return max(0, base), min(N, base + 1)


def _fib_weight_floor(N: int) -> int:
    # floor(N (3 - sqrt 5) / 2) using integer square roots only.
    return (3 * N - math.isqrt(5 * N * N) - 1) // 2


def golden_balance_holds(count, N) -> np.ndarray:
    """Exact test of ``| count / N - phi^-2 | <= 1 / N`` for integer arrays.

    Equivalent to ``count - 1 <= N (3 - sqrt 5) / 2 <= count + 1``, decided by
    squaring, so no floating point is involved.
    """
    count = np.asarray(count, dtype=np.int64)
    N = np.asarray(N, dtype=np.int64)
    five_n2 = 5 * N * N
    a = 3 * N - 2 * (count + 1)  # need a <= N sqrt5
    b = 3 * N - 2 * (count - 1)  # need b >= N sqrt5
    lower_ok = (a <= 0) | (a * a <= five_n2)
    upper_ok = (b >= 0) & (b * b >= five_n2)
    return lower_ok & upper_ok


def tribonacci_prefix_weight(N: int, j: int) -> int:
    """``|v_0 ... v_{N-1}|_j = sum_h x_h T_{h-j}`` (zero for ``N = 0``)."""
    if j not in (1, 2, 3):
        raise DomainError(f"digit must be 1, 2 or 3, got {j!r}")
    if N == 0:
        return 0
    e = trib_expand(N)
    return sum(trib(h - j) for h in range(3, e.L + 1) if e.x(h))


def tribonacci_subword_weights(N: int, j: int) -> tuple[int, int, int]:
    """``(prefix_exact, low, high)`` for ``|w|_j`` over length-``N`` factors of ``v_3``.

    The range widens the prefix count by the 2-balance of the Tribonacci word.
    For ``N = T_L`` the centre is ``T_{L-j}``.
    """
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"length must be a positive integer, got {N!r}")
    exact = tribonacci_prefix_weight(int(N), j)
    return exact, max(0, exact - 2), min(int(N), exact + 2)


def _phi(p: PerronData | None) -> float:
    p = p or perron(2)
    if p.m != 2:
        raise DomainError("Fibonacci constants need the order-2 Perron data")
    return p.rho


def _check_length(N) -> int:
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    return int(N)


def gamma_fibonacci(N: int, p: PerronData | None = None) -> float:
    N = _check_length(N)
    phi = _phi(p)
    return 1 / phi**2 + 1 / phi**4 - 1 / (N * phi**3)


def gamma_fibonacci_sharp(N: int, p: PerronData | None = None) -> float:
    N = _check_length(N)
    phi = _phi(p)
    if N == 1:
        return 1 / (N * phi**2)
    if N == 2:
        return 1 / N
    K = fibonacci_index(N)
    if K is not None and K % 2 == 1 and K >= 3:
        return 1 / phi**2 + fib(K - 1) / (phi**3 * fib(K))
    if K is not None and K % 2 == 0 and K >= 4:
        return 1 / phi**2 + (fib(K - 1) - 1) / (phi**3 * fib(K))
    return gamma_fibonacci(N, p)


def gamma_tribonacci(N: int, p: PerronData | None = None) -> float:
    """Gap constant for the Tribonacci chain; may be non-positive for small ``N``."""
    N = _check_length(N)
    p = p or perron(3)
    if p.m != 3:
        raise DomainError("Tribonacci constants need the order-3 Perron data")
    tau = p.rho
    e = trib_expand(N)
    total = sum(
        trib(h - 1) / tau + trib(h - 2) / tau**2 + trib(h - 3) / tau**3
        for h in range(3, e.L + 1)
        if e.x(h)
    )
    return (total - 2) / N


@dataclass
class GapReport:
    """Outcome of a brute-force check of ``lambda_{k+N} - lambda_k >= N gamma``."""

    m: int
    N: int
    gamma: float
    brute_min: float
    k_range: tuple[int, int]
    tolerance: float
    gamma_sharp: float | None = None
    argmin: int | None = None
    degenerate: bool = field(init=False)
    holds: bool = field(init=False)

    def __post_init__(self):
        self.degenerate = self.gamma <= 0
        bound = self.gamma_bound
        self.holds = bool(self.brute_min >= bound - self.tolerance)

    @property
    def gamma_bound(self) -> float:
        """The strongest bound in the report."""
        if self.gamma_sharp is None:
            return self.gamma
        return max(self.gamma, self.gamma_sharp)


def gap_tolerance(p: PerronData) -> float:
    """Numerical slack for comparing window averages with gap constants.

    Each ``rho^-j`` moves by at most ``j rho^-(j+1) delta`` when the root moves
    by ``delta``; window averages are convex combinations of the ``rho^-j``.
    """
    root_part = p.m * p.error_bound
    rounding = 64 * np.finfo(float).eps
    return float(root_part + rounding)


def verify_gap_condition(m: int, N: int, k_range: int, chain=None) -> GapReport:
    """Brute-force minimum of ``(lambda_{k+N} - lambda_k) / N`` over ``|k| <= k_range``."""
    return gap_table(m, [N], k_range, chain=chain)[0]


def gap_table(m: int, Ns, k_range: int, chain=None) -> list[GapReport]:
    """:func:`verify_gap_condition` for several window sizes over one chain."""
    from .chain import build_chain

    if m not in (2, 3):
        raise DomainError(f"gap conditions exist only for m = 2 or 3, got {m}")
    Ns = [_check_length(N) for N in Ns]
    if k_range < 0:
        raise DomainError("k_range must be non-negative")
    if not Ns:
        return []
    n_max = max(Ns)
    if chain is None:
        chain = build_chain(m, -k_range, k_range + n_max)
    chain.require(-k_range, k_range + n_max)
    p = chain.perron
    tol = gap_tolerance(p)
    reports = []
    for N in Ns:
        diffs = chain.differences(N, -k_range, k_range)
        i = int(np.argmin(diffs))
        brute = float(diffs[i]) / N
        if m == 2:
            reports.append(GapReport(
                m=2, N=N, gamma=gamma_fibonacci(N, p), gamma_sharp=gamma_fibonacci_sharp(N, p),
                brute_min=brute, k_range=(-k_range, k_range), tolerance=tol, argmin=i - k_range,
            ))
        else:
            reports.append(GapReport(
                m=3, N=N, gamma=gamma_tribonacci(N, p), brute_min=brute,
                k_range=(-k_range, k_range), tolerance=tol, argmin=i - k_range,
            ))
    return reports
