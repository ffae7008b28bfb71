import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from mbonacci.chain import build_chain
from mbonacci.errors import DomainError, RangeError
from mbonacci.numbersys import (
    GapReport,
    TribExpansion,
    fib,
    fibonacci_index,
    fibonacci_subword_weight_bounds,
    gamma_fibonacci,
    gamma_fibonacci_sharp,
    gamma_tribonacci,
    gap_table,
    golden_balance_holds,
    trib,
    trib_eval,
    trib_expand,
    tribonacci_prefix_weight,
    tribonacci_subword_weights,
    verify_gap_condition,
)
from mbonacci.spectral import perron_root
from mbonacci.substitution import sliding_counts

PHI = sympy.GoldenRatio


def recursion(seeds, order, n):
    seq = list(seeds)
    while len(seq) <= n:
        seq.append(sum(seq[-order:]))
    return seq[: n + 1]


def test_sequences_against_direct_recursion():
    assert [fib(n) for n in range(40)] == recursion([0, 1], 2, 39)
    assert [trib(n) for n in range(40)] == recursion([0, 0, 1], 3, 39)
    assert fib(0) == 0 and fib(10) == 55
    assert [trib(n) for n in (3, 4, 5, 6)] == [1, 2, 4, 7]
    assert fib(300) == fib(299) + fib(298)
    with pytest.raises(DomainError):
        trib(-1)


def test_fibonacci_index():
    assert fibonacci_index(1) == 2
    assert fibonacci_index(2) == 3
    assert fibonacci_index(21) == 8
    assert fibonacci_index(4) is None


def test_expand_examples():
    e = trib_expand(10)
    assert (e.L, e.bit_string) == (6, "1101")
    assert e.to_dict() == {"n": 10, "L": 6, "bits": "1101"}
    for L in range(3, 25):
        e = trib_expand(trib(L))
        assert e.L == L and e.bits == (0,) * (L - 3) + (1,)
    with pytest.raises(DomainError):
        trib_expand(0)


def test_expand_100_matches_exhaustive_search():
    # Oracle: every bit vector x_3..x_12 with leading one and no 111 block.
    found = []
    for L in range(3, 13):
        for rest in itertools.product((0, 1), repeat=L - 3):
            bits = rest + (1,)
            if "111" in "".join(map(str, bits)):
                continue
            if sum(b * recursion([0, 0, 1], 3, L)[h] for h, b in enumerate(bits, start=3)) == 100:
                found.append(bits)
    assert found == [trib_expand(100).bits]


def test_expansion_round_trip():
    for n in range(1, 100_001):
        e = trib_expand(n)
        assert trib_eval(e.bits) == n


def test_expansion_invariants_enforced():
    with pytest.raises(DomainError):
        TribExpansion(n=7, L=5, bits=(1, 1, 1))
    with pytest.raises(DomainError):
        TribExpansion(n=2, L=4, bits=(1, 0))


def test_tribonacci_weight_examples():
    assert tribonacci_subword_weights(10, 1) == (6, 4, 8)
    assert tribonacci_subword_weights(10, 2) == (3, 1, 5)
    assert tribonacci_subword_weights(10, 3) == (1, 0, 3)
    for L in range(3, 20):
        for j in (1, 2, 3):
            assert tribonacci_prefix_weight(trib(L), j) == trib(L - j)


def test_prefix_weight_formula_exact(trib_prefix):
    cum = {j: np.concatenate([[0], np.cumsum(trib_prefix == j)]) for j in (1, 2, 3)}
    for N in range(1, 5001):
        for j in (1, 2, 3):
            assert tribonacci_prefix_weight(N, j) == cum[j][N]


def test_balance_envelope(trib_prefix):
    rng = np.random.default_rng(7)
    cum = {j: np.concatenate([[0], np.cumsum(trib_prefix == j)]) for j in (1, 2, 3)}
    for _ in range(3000):
        N = int(rng.integers(1, 5001))
        k = int(rng.integers(0, trib_prefix.size - N))
        for j in (1, 2, 3):
            _, low, high = tribonacci_subword_weights(N, j)
            assert low <= cum[j][k + N] - cum[j][k] <= high


def test_fibonacci_bound_examples():
    assert fibonacci_subword_weight_bounds(13) == (4, 5)
    assert fibonacci_subword_weight_bounds(21) == (8, 9)
    assert fibonacci_subword_weight_bounds(1) == (0, 1)


@pytest.mark.parametrize("N", [4, 6, 7, 9, 10, 100, 1000, 1234])
def test_generic_fibonacci_bounds_match_float(N):
    x = N / float(PHI) ** 2
    lo, hi = fibonacci_subword_weight_bounds(N)
    assert lo == max(0, int(np.ceil(x - 1))) and hi == min(N, int(np.floor(x + 1)))


@pytest.mark.parametrize("K", range(3, 21))
def test_fibonacci_sharpness(fib_prefix, K):
    N = fib(K)
    counts = sliding_counts(fib_prefix, 2, N)
    assert (counts.min(), counts.max()) == fibonacci_subword_weight_bounds(N)


@given(st.integers(1, 3000), st.integers(0, 3000))
def test_golden_balance_exact_matches_sympy(N, count):
    exact = abs(sympy.Rational(count, N) - PHI**-2) <= sympy.Rational(1, N)
    assert bool(golden_balance_holds(count, N)) == bool(exact)


def test_gamma_fibonacci_values():
    phi = float(PHI)
    assert gamma_fibonacci_sharp(1) == pytest.approx(0.381966, abs=1e-6)
    assert gamma_fibonacci_sharp(1) == pytest.approx(phi**-2, abs=1e-15)
    assert gamma_fibonacci_sharp(2) == 0.5
    exact3 = PHI**-2 + PHI**-4 - 1 / (3 * PHI**3)
    assert gamma_fibonacci(3) == pytest.approx(float(exact3.evalf(30)), abs=1e-14)
    assert gamma_fibonacci(3) == pytest.approx(0.449175, abs=1e-6)
    with pytest.raises(DomainError):
        gamma_fibonacci(0)


def test_gamma_sharp_dispatch():
    phi = float(PHI)
    # F_5 = 5, odd index; F_6 = 8, even index.
    assert gamma_fibonacci_sharp(5) == pytest.approx(phi**-2 + 3 / (phi**3 * 5))
    assert gamma_fibonacci_sharp(8) == pytest.approx(phi**-2 + (5 - 1) / (phi**3 * 8))
    assert gamma_fibonacci_sharp(3) == pytest.approx(phi**-2 + (2 - 1) / (phi**3 * 3))
    assert gamma_fibonacci_sharp(4) == gamma_fibonacci(4)


def test_sharp_improves_generic():
    for N in [1, 2] + [fib(K) for K in range(3, 40)]:
        assert gamma_fibonacci_sharp(N) >= gamma_fibonacci(N)


def test_gamma_tribonacci_values():
    tau = perron_root(3).rho
    assert gamma_tribonacci(7) == pytest.approx((4 / tau + 2 / tau**2 + 1 / tau**3 - 2) / 7, abs=1e-15)
    assert gamma_tribonacci(1) == pytest.approx(1 / tau - 2, abs=1e-15)
    # N = 10 = T_6 + T_4 + T_3
    manual = sum(trib(h - 1) / tau + trib(h - 2) / tau**2 + trib(h - 3) / tau**3 for h in (3, 4, 6))
    assert gamma_tribonacci(10) == pytest.approx((manual - 2) / 10, abs=1e-15)


def test_degenerate_report_flag():
    report = verify_gap_condition(3, 1, 100)
    assert report.degenerate and report.holds


def test_small_fibonacci_gaps_are_attained():
    r1, r2 = gap_table(2, [1, 2], 10_000)
    phi = float(PHI)
    assert r1.holds and abs(r1.brute_min - phi**-2) < 1e-12
    assert r2.holds and abs(r2.brute_min - 0.5) < 1e-12


def test_tribonacci_gap_at_T6():
    r = verify_gap_condition(3, 7, 10_000)
    assert r.holds and r.gamma > 0


def test_gap_reports_require_window():
    chain = build_chain(2, -10, 10)
    with pytest.raises(RangeError):
        verify_gap_condition(2, 5, 10, chain=chain)
    with pytest.raises(DomainError):
        verify_gap_condition(4, 5, 10)


def test_report_holds_logic():
    r = GapReport(m=2, N=3, gamma=0.4, gamma_sharp=0.5, brute_min=0.45, k_range=(0, 1), tolerance=1e-12)
    assert not r.holds
    r = GapReport(m=3, N=3, gamma=0.4, brute_min=0.4 - 1e-13, k_range=(0, 1), tolerance=1e-12)
    assert r.holds
