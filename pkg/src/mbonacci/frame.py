"""Finite-section probes of exponential frame bounds on chain frequencies.

For frequencies ``lambda_k`` and the interval ``I = [-L/2, L/2]`` the Gram
matrix of ``{exp(i lambda_k t)}`` in ``L^2(I)`` is real symmetric with entries
``2 sin((lambda_j - lambda_k) L / 2) / (lambda_j - lambda_k)`` and ``L`` on the
diagonal. Its extreme eigenvalues are the optimal constants in::

    c1 sum |a_k|^2 <= int_I |sum a_k exp(i lambda_k t)|^2 dt <= c2 sum |a_k|^2

for the truncated system. The relevant threshold is ``2 pi D+``; above it the
lower constant stays bounded away from zero as the system grows, below it
the lower constant collapses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chain import Chain, build_chain, upper_density_closed_form
from .errors import DomainError, NumericError
from .spectral import perron

MAX_SIZE = 4001


def gram_matrix(freqs, L: float) -> np.ndarray:
    freqs = np.asarray(freqs, dtype=float)
    if freqs.ndim != 1:
        raise DomainError("frequencies must be a one-dimensional sequence")
    if not L > 0:
        raise DomainError("interval length must be positive")
    if np.unique(freqs).size != freqs.size:
        raise DomainError("frequencies must be pairwise distinct")
    delta = freqs[:, None] - freqs[None, :]
    # np.sinc(x) = sin(pi x) / (pi x)
    G = L * np.sinc(delta * L / (2 * np.pi))
    np.fill_diagonal(G, L)
    return G


def extreme_eigenvalues(G: np.ndarray) -> tuple[float, float]:
    try:
        w = np.linalg.eigvalsh(G)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"symmetric eigen-solver failed: {exc}") from exc
    return float(w[0]), float(w[-1])


def threshold(m: int) -> float:
    """``2 pi D+(Lambda_m)``."""
    return 2 * np.pi * upper_density_closed_form(perron(m))


@dataclass
class FrameProbe:
    m: int
    K: int
    interval_length: float
    frequencies: np.ndarray = field(repr=False)
    gram: np.ndarray = field(repr=False)
    c1: float
    c2: float
    threshold: float

    @property
    def regime(self) -> str:
        return "above-threshold" if self.interval_length > self.threshold else "below-threshold"


def chain_frequencies(m: int, K: int, chain: Chain | None = None) -> np.ndarray:
    """``lambda_k`` for ``|k| <= K``."""
    if K < 0:
        raise DomainError("K must be non-negative")
    if 2 * K + 1 > MAX_SIZE:
        raise DomainError(f"at most {MAX_SIZE} frequencies are supported, got {2 * K + 1}")
    if chain is None:
        chain = build_chain(m, -K, K)
    chain.require(-K, K)
    return np.array(chain.points[-K - chain.k_min : K - chain.k_min + 1])


def frame_bounds(m: int, K: int, L: float, chain: Chain | None = None) -> FrameProbe:
    """Gram-matrix frame constants for ``{lambda_k : |k| <= K}`` on an interval of length ``L``.

    ``K = 0`` gives the single frequency ``lambda_0 = 0``.
    """
    freqs = chain_frequencies(m, K, chain)
    G = gram_matrix(freqs, L)
    c1, c2 = extreme_eigenvalues(G)
    return FrameProbe(m=m, K=K, interval_length=float(L), frequencies=freqs, gram=G,
                      c1=c1, c2=c2, threshold=threshold(m))


@dataclass
class FrameReport:
    m: int
    K: int
    threshold: float
    probes: list[FrameProbe] = field(default_factory=list)

    def rows(self) -> list[tuple[float, int, float, float, str]]:
        return [(p.interval_length, p.K, p.c1, p.c2, p.regime) for p in self.probes]

    def summary(self) -> dict:
        above = [p.c1 for p in self.probes if p.regime == "above-threshold"]
        below = [p.c1 for p in self.probes if p.regime == "below-threshold"]
        return {
            "m": self.m,
            "K": self.K,
            "threshold": self.threshold,
            "probes": len(self.probes),
            "min_c1_above": min(above) if above else None,
            "max_c1_below": max(below) if below else None,
        }


def threshold_sweep(m: int, K: int, L_grid) -> FrameReport:
    """One probe per interval length, sharing the chain and frequencies."""
    L_grid = [float(L) for L in L_grid]
    report = FrameReport(m=m, K=K, threshold=threshold(m))
    if not L_grid:
        return report
    chain = build_chain(m, -K, K)
    for L in L_grid:
        report.probes.append(frame_bounds(m, K, L, chain))
    return report
