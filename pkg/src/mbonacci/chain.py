"""m-bonacci chains and their upper density.

The chain is anchored at ``lambda_0 = 0`` and consecutive points are separated
by ``lambda_{k+1} - lambda_k = rho^-v_k``, so reading the gaps from left to
right reproduces the bi-infinite word ``v_m`` digit for digit. Positions are
stored as integer digit-count vectors and evaluated against
``(rho^-1, ..., rho^-m)`` on demand, which keeps long prefixes free of
summation drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RangeError
from .spectral import PerronData, perron
from .substitution import WordStream, stream_for


class Chain:
    """Window ``k_min <= k <= k_max`` of the chain ``Lambda_m``."""

    def __init__(self, m: int, perron_data: PerronData, k_min: int, k_max: int, gap_digits: np.ndarray):
        if not k_min <= 0 <= k_max:
            raise DomainError(f"chain window must contain 0, got [{k_min}, {k_max}]")
        if gap_digits.size != k_max - k_min:
            raise DomainError("need exactly one gap digit per consecutive pair")
        self.m = m
        self.perron = perron_data
        self.k_min = k_min
        self.k_max = k_max
        self.gap_digits = gap_digits  # v_k for k_min <= k < k_max
        counts = np.zeros((k_max - k_min + 1, m), dtype=np.int64)
        for j in range(1, m + 1):
            np.cumsum(gap_digits == j, out=counts[1:, j - 1])
        counts = counts - counts[-k_min]
        self.counts = counts  # counts[k - k_min] . d == lambda_k
        self.points = counts @ perron_data.left_eigenvector
        self.points.setflags(write=False)

    def __len__(self) -> int:
        return self.k_max - self.k_min + 1

    def __getitem__(self, k: int) -> float:
        if not self.k_min <= k <= self.k_max:
            raise RangeError(f"index {k} outside chain window [{self.k_min}, {self.k_max}]")
        return float(self.points[k - self.k_min])

    def __repr__(self) -> str:
        return f"Chain(m={self.m}, window=[{self.k_min}, {self.k_max}])"

    @property
    def window(self) -> tuple[int, int]:
        return self.k_min, self.k_max

    def require(self, k_min: int, k_max: int) -> None:
        if k_min < self.k_min or k_max > self.k_max:
            raise RangeError(
                f"need indices [{k_min}, {k_max}] but chain covers [{self.k_min}, {self.k_max}]"
            )

    def indices(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def gaps(self) -> np.ndarray:
        """``lambda_{k+1} - lambda_k`` for ``k_min <= k < k_max``, as ``rho^-v_k``."""
        return self.perron.left_eigenvector[self.gap_digits.astype(np.intp) - 1]

    def window_counts(self, N: int, k_lo: int, k_hi: int) -> np.ndarray:
        """Digit counts of ``v_k ... v_{k+N-1}`` for ``k_lo <= k <= k_hi``, shape ``(n, m)``."""
        self.require(k_lo, k_hi + N)
        a = k_lo - self.k_min
        b = k_hi - self.k_min
        return self.counts[a + N : b + N + 1] - self.counts[a : b + 1]

    def differences(self, N: int, k_lo: int | None = None, k_hi: int | None = None) -> np.ndarray:
        """``lambda_{k+N} - lambda_k`` from exact digit counts, for ``k_lo <= k <= k_hi``."""
        if N < 1:
            raise DomainError("N must be >= 1")
        k_lo = self.k_min if k_lo is None else k_lo
        k_hi = self.k_max - N if k_hi is None else k_hi
        return self.window_counts(N, k_lo, k_hi) @ self.perron.left_eigenvector


def build_chain(
    m: int,
    k_min: int,
    k_max: int,
    perron_data: PerronData | None = None,
    stream: WordStream | None = None,
    max_digits: int | None = None,
) -> Chain:
    """Points ``lambda_k`` for ``k_min <= k <= k_max``.

    >>> c = build_chain(2, 0, 3)
    >>> round(c[2], 12)
    1.0
    """
    if not k_min <= 0 <= k_max:
        raise DomainError(f"chain window must contain 0, got [{k_min}, {k_max}]")
    p = perron_data or perron(m)
    if p.m != m:
        raise DomainError("Perron data order does not match chain order")
    if stream is None:
        stream = stream_for(m, k_min, k_max, max_digits=max_digits)
    else:
        stream = stream.extend(-k_min, k_max)
    digits = np.asarray(stream.window(k_min, k_max))
    return Chain(m, p, k_min, k_max, digits)


def upper_density_closed_form(p: PerronData) -> float:
    """``rho^(2m) / (1 + rho^2 + ... + rho^(2(m-1)))``, the reciprocal of the mean gap."""
    rho = p.rho
    num = rho ** (2 * p.m)
    den = sum(rho ** (2 * i) for i in range(p.m))
    return float(num / den)


def mean_gap(p: PerronData) -> float:
    """``sum_j rho^-2j``: average gap, weighting each length by its digit frequency."""
    return float(np.sum(p.left_eigenvector**2))


def density_lower_bound(m: int) -> float:
    """``3 - (8 / 2^m) (1 - 1 / 2^(m+1))``."""
    if m < 2:
        raise DomainError(f"order must be >= 2, got {m}")
    return 3.0 - (8.0 / 2.0**m) * (1.0 - 1.0 / 2.0 ** (m + 1))


def count_max_in_window(c: Chain, r: float) -> int:
    """Largest number of chain points in a closed interval of length ``r``.

    Only intervals lying inside ``[lambda_kmin, lambda_kmax]`` are considered;
    any maximising interval may be slid right until its left end hits a point,
    so left-anchored intervals suffice.
    """
    counts = _anchored_counts(c.points, r)
    return int(counts.max())


def _anchored_counts(points: np.ndarray, r: float) -> np.ndarray:
    if not r > 0:
        raise DomainError("interval length must be positive")
    right_ends = points + r
    usable = right_ends <= points[-1]
    if not usable.any():
        raise RangeError(f"chain window of length {points[-1] - points[0]:.6g} is shorter than r={r}")
    starts = np.flatnonzero(usable)
    ends = np.searchsorted(points, right_ends[starts], side="right")
    return ends - starts


@dataclass
class DensityReport:
    m: int
    closed_form: float
    lower_bound: float
    samples: list[tuple[float, int, float]] = field(default_factory=list)
    r_range: tuple[float, float] = (0.0, 0.0)

    @property
    def ratios(self) -> np.ndarray:
        return np.array([s[2] for s in self.samples])

    def max_relative_deviation(self) -> float:
        if not self.samples:
            return 0.0
        return float(np.max(np.abs(self.ratios - self.closed_form)) / self.closed_form)

    def summary(self) -> dict:
        ratios = self.ratios
        return {
            "m": self.m,
            "closed_form": self.closed_form,
            "lower_bound": self.lower_bound,
            "r_min": self.r_range[0],
            "r_max": self.r_range[1],
            "samples": len(self.samples),
            "ratio_min": float(ratios.min()) if ratios.size else None,
            "ratio_max": float(ratios.max()) if ratios.size else None,
            "max_relative_deviation": self.max_relative_deviation(),
        }


def r_grid(r_min: float, r_max: float, step: float) -> np.ndarray:
    if not 0 < r_min <= r_max:
        raise DomainError(f"need 0 < rmin <= rmax, got [{r_min}, {r_max}]")
    if not step > 0:
        raise DomainError("step must be positive")
    n = int(np.floor((r_max - r_min) / step + 1e-9)) + 1
    return r_min + step * np.arange(n)


def density_scan(c: Chain, r_min: float, r_max: float, step: float) -> DensityReport:
    """Sample ``n(r) / r`` on the grid ``r_min, r_min + step, ... <= r_max``."""
    samples = []
    for r in r_grid(r_min, r_max, step):
        n = count_max_in_window(c, float(r))
        samples.append((float(r), n, n / float(r)))
    return DensityReport(
        m=c.m,
        closed_form=upper_density_closed_form(c.perron),
        lower_bound=density_lower_bound(c.m),
        samples=samples,
        r_range=(float(r_min), float(r_max)),
    )
