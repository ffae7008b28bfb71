import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from mbonacci.chain import build_chain
from mbonacci.errors import DomainError
from mbonacci.frame import extreme_eigenvalues, frame_bounds, gram_matrix, threshold, threshold_sweep

CHAIN = build_chain(2, -200, 200)


def test_single_frequency():
    assert gram_matrix([3.7], 2.5).tolist() == [[2.5]]
    probe = frame_bounds(2, 0, 4.0)
    assert probe.c1 == probe.c2 == 4.0


def test_full_period_entry_vanishes():
    L = 3.0
    G = gram_matrix([0.0, 2 * np.pi / L], L)
    assert abs(G[0, 1]) < 1e-15


def test_close_frequencies_approach_diagonal():
    L = 5.0
    for delta in (1e-2, 1e-4, 1e-6):
        assert gram_matrix([0.0, delta], L)[0, 1] == pytest.approx(L, rel=delta)


def test_entries_match_quadrature():
    freqs = CHAIN.points[190:197]
    L = 7.3
    G = gram_matrix(freqs, L)
    for j in range(len(freqs)):
        for k in range(len(freqs)):
            re = quad(lambda t: np.cos((freqs[j] - freqs[k]) * t), -L / 2, L / 2)[0]
            im = quad(lambda t: np.sin((freqs[j] - freqs[k]) * t), -L / 2, L / 2)[0]
            assert G[j, k] == pytest.approx(re, abs=1e-10)
            assert abs(im) < 1e-10


def test_duplicate_frequencies_rejected():
    with pytest.raises(DomainError):
        gram_matrix([1.0, 2.0, 1.0], 3.0)
    with pytest.raises(DomainError):
        gram_matrix([1.0], 0.0)


@settings(max_examples=50)
@given(st.integers(1, 60), st.floats(0.5, 30.0))
def test_symmetric_diagonal_psd(K, L):
    G = gram_matrix(CHAIN.points[200 - K : 201 + K], L)
    assert np.array_equal(G, G.T)
    assert np.all(np.diag(G) == L)
    c1, c2 = extreme_eigenvalues(G)
    assert c1 > -1e-10
    assert c1 <= c2 <= G.shape[0] * L


@settings(max_examples=100)
@given(st.data())
def test_interlacing(data):
    size = data.draw(st.integers(2, 40))
    idx = sorted(data.draw(st.sets(st.integers(0, 400), min_size=size, max_size=size)))
    L = data.draw(st.floats(1.0, 25.0))
    extra = data.draw(st.sampled_from(idx))
    freqs = CHAIN.points[idx]
    small = CHAIN.points[[i for i in idx if i != extra]]
    c1_big, c2_big = extreme_eigenvalues(gram_matrix(freqs, L))
    c1_small, c2_small = extreme_eigenvalues(gram_matrix(small, L))
    assert c1_big <= c1_small + 1e-10
    assert c2_big >= c2_small - 1e-10


@pytest.mark.parametrize("s", [0.5, 2.0, 3.7])
def test_scaling(s):
    freqs = CHAIN.points[180:221]
    L = 9.0
    scaled = gram_matrix(freqs * s, L / s)
    assert np.allclose(scaled, gram_matrix(freqs, L) / s, atol=1e-12)


def test_sweep_monotone_in_interval_length():
    T = threshold(2)
    report = threshold_sweep(2, 30, np.linspace(0.4 * T, 1.6 * T, 13))
    c1 = [p.c1 for p in report.probes]
    c2 = [p.c2 for p in report.probes]
    assert all(b >= a - 1e-10 for a, b in zip(c1, c1[1:]))
    assert all(b >= a for a, b in zip(c2, c2[1:]))
    regimes = [p.regime for p in report.probes]
    assert regimes[0] == "below-threshold" and regimes[-1] == "above-threshold"


def test_empty_sweep():
    report = threshold_sweep(2, 10, [])
    assert report.probes == [] and report.rows() == []


def test_tribonacci_threshold():
    from mbonacci.chain import upper_density_closed_form
    from mbonacci.spectral import perron_root

    report = threshold_sweep(3, 10, [5.0])
    assert report.threshold == pytest.approx(2 * np.pi * upper_density_closed_form(perron_root(3)))
    assert report.threshold == pytest.approx(2 * np.pi * 2.446156936667, rel=1e-10)


def test_above_and_below_threshold_behaviour():
    T = threshold(2)
    above = [frame_bounds(2, K, 1.2 * T).c1 for K in (10, 20, 40)]
    below = [frame_bounds(2, K, 0.8 * T).c1 for K in (5, 10, 20)]
    assert min(above) > 0.5 * above[0]
    assert below[-1] < below[0] / 100
