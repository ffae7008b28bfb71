"""One-shot regeneration of every reference number, each tagged pass/fail."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .chain import build_chain, density_lower_bound, density_scan, upper_density_closed_form
from .frame import frame_bounds, threshold, threshold_sweep
from .numbersys import (
    fib,
    fibonacci_subword_weight_bounds,
    gap_table,
    golden_balance_holds,
    trib_expand,
    tribonacci_subword_weights,
)
from .spectral import normalization_defect, perron_root, root_bracket, verify_left_eigenvector
from .substitution import iterate_on_one, prefix, sliding_counts

SCHEMA = 1
REFINED_FIBONACCI_BOUND = Fraction(81, 52)


class _Checks:
    def __init__(self):
        self.items = []

    def add(self, name, passed, value=None, expected=None, tolerance=None):
        self.items.append({
            "name": name,
            "value": value,
            "expected": expected,
            "tolerance": tolerance,
            "pass": bool(passed),
        })
        return bool(passed)


def _perron_section(checks):
    p2, p3 = perron_root(2), perron_root(3)
    golden = (1 + math.sqrt(5)) / 2
    checks.add("rho_2 equals golden ratio", abs(p2.rho - golden) < 1e-10, p2.rho, golden, 1e-10)
    checks.add("rho_3 = 1.83929 to 5 decimals", f"{p3.rho:.5f}" == "1.83929", p3.rho, 1.83929, "5 decimals")
    rhos = [perron_root(m).rho for m in range(2, 31)]
    inside = all(root_bracket(m)[0] < r < 2 for m, r in zip(range(2, 31), rhos))
    checks.add("rho_m inside (2(1-2^-m), 2) for m=2..30", inside)
    checks.add("rho_m increasing for m=2..30", all(a < b for a, b in zip(rhos, rhos[1:])))
    residuals = [verify_left_eigenvector(perron_root(m)) for m in range(2, 13)]
    defects = [normalization_defect(perron_root(m)) for m in range(2, 13)]
    checks.add("left eigenvector residual m=2..12", max(residuals) < 1e-10, max(residuals), 0.0, 1e-10)
    checks.add("sum rho^-j = 1 for m=2..12", max(defects) < 1e-12, max(defects), 0.0, 1e-12)
    return {"rho_2": p2.rho, "rho_3": p3.rho, "rho_3_digits": perron_root(3, digits=30).rho_string(30)}


def _word_section(checks):
    fib_iterates = [str(iterate_on_one(2, n)) for n in range(1, 5)]
    checks.add("sigma_2 iterates", fib_iterates == ["12", "121", "12112", "12112121"], fib_iterates)
    trib4 = str(iterate_on_one(3, 4))
    checks.add("sigma_3^4(1)", trib4 == "1213121121312", trib4, "1213121121312")
    return {"sigma_2": fib_iterates, "sigma_3_4": trib4}


def _frequency_section(checks, fast):
    n_digits, starts, n_max = (10**5, 10**4, 500) if fast else (10**6, 10**5, 2000)
    w = prefix(2, n_digits).digits
    ok = True
    for N in range(1, n_max + 1):
        counts = sliding_counts(w[: starts + N - 1], 2, N)
        ok &= bool(golden_balance_holds(counts, N).all())
    checks.add(f"Fibonacci balance N<={n_max} over {starts} starts", ok)

    rng = np.random.default_rng(0)
    v3 = prefix(3, 10**5).digits
    cs = np.stack([np.concatenate([[0], np.cumsum(v3 == j)]) for j in (1, 2, 3)])
    pairs = 10**3 if fast else 10**4
    N = rng.integers(1, 5000, size=pairs)
    a = rng.integers(0, v3.size - 5000, size=pairs)
    b = rng.integers(0, v3.size - 5000, size=pairs)
    diff = np.abs((cs[:, a + N] - cs[:, a]) - (cs[:, b + N] - cs[:, b]))
    checks.add(f"Tribonacci 2-balance on {pairs} factor pairs", int(diff.max()) <= 2, int(diff.max()), 2)
    return {"fibonacci_prefix_digits": n_digits, "tribonacci_pairs": pairs}


def _density_section(checks, fast):
    p2 = perron_root(2)
    closed = upper_density_closed_form(p2)
    checks.add("D+(Lambda_2) = 1.89443", round(closed, 5) == 1.89443, closed, 1.89443, "5 decimals")
    lb = density_lower_bound(2)
    checks.add("lower bound m=2 is 5/4", lb == 1.25, lb, 1.25, 0)
    refined = float(REFINED_FIBONACCI_BOUND)
    checks.add("81/52 <= D+(Lambda_2)", refined <= closed, refined, closed)
    closed_forms = [upper_density_closed_form(perron_root(m)) for m in range(2, 31)]
    checks.add("D+ increasing in m for m<=30", all(a < b for a, b in zip(closed_forms, closed_forms[1:])))
    checks.add("D+(Lambda_30) > 2.99", closed_forms[-1] > 2.99, closed_forms[-1], 2.99)
    checks.add(
        "lower bound <= D+ < 3 for m<=30",
        all(density_lower_bound(m) <= c < 3 for m, c in zip(range(2, 31), closed_forms)),
    )

    chain = build_chain(2, 0, 20000)
    report = density_scan(chain, 250.0, 500.0, 10.0 if fast else 1.0)
    dev = report.max_relative_deviation()
    checks.add("n(r)/r within 2% of 1.89443 on r in [250, 500]", dev <= 0.02, dev, 0.0, 0.02)
    return {
        "closed_form_m2": closed,
        "lower_bound_m2": lb,
        "refined_bound_m2": {"fraction": "81/52", "value": refined},
        "closed_form_m30": closed_forms[-1],
        "scan": report.summary(),
    }, report


def _tribonacci_section(checks):
    e = trib_expand(10)
    checks.add("expansion of 10", e.bit_string == "1101" and e.L == 6, e.bit_string, "1101")
    weights = [tribonacci_subword_weights(10, j) for j in (1, 2, 3)]
    exact = [w[0] for w in weights]
    checks.add("prefix weights N=10", exact == [6, 3, 1], exact, [6, 3, 1])
    word = str(prefix(3, 10))
    checks.add("prefix of length 10", word == "1213121121", word, "1213121121")
    actual = [int(np.count_nonzero(prefix(3, 10).digits == j)) for j in (1, 2, 3)]
    checks.add("prefix weights agree with direct count", actual == exact, actual, exact)
    bounds = [[w[1], w[2]] for w in weights]
    checks.add("factor weight ranges N=10", bounds == [[4, 8], [1, 5], [0, 3]], bounds, [[4, 8], [1, 5], [0, 3]])
    return {"expansion": e.to_dict(), "weights": exact, "prefix": word, "bounds": bounds}


def _gap_section(checks, fast):
    k_range = 10**3 if fast else 10**4
    tables = {}
    for m in (2, 3):
        rows = gap_table(m, range(1, 51), k_range)
        checks.add(f"gap conditions m={m}, N<=50, |k|<={k_range}", all(r.holds for r in rows))
        tables[m] = rows
    n1, n2 = tables[2][0], tables[2][1]
    phi = perron_root(2).rho
    checks.add("N=1 minimum equals phi^-2", abs(n1.brute_min - phi**-2) < 1e-10, n1.brute_min, phi**-2, 1e-10)
    checks.add("N=2 minimum equals 1/2", abs(n2.brute_min - 0.5) < 1e-10, n2.brute_min, 0.5, 1e-10)
    summary = {
        str(m): [
            {"N": r.N, "gamma": r.gamma, "gamma_sharp": r.gamma_sharp, "brute_min": r.brute_min, "holds": r.holds}
            for r in rows
        ]
        for m, rows in tables.items()
    }
    return {"k_range": k_range, "tables": summary}, tables


def _fibonacci_sharpness(checks, fast):
    K_max = 16 if fast else 20
    w = prefix(2, 2 * 10**5 if fast else 10**6).digits
    ok = True
    for K in range(3, K_max + 1):
        N = fib(K)
        counts = sliding_counts(w, 2, N)
        ok &= (int(counts.min()), int(counts.max())) == fibonacci_subword_weight_bounds(N)
    checks.add(f"sharp Fibonacci weight bounds attained for K<={K_max}", ok)


def _frame_section(checks, fast):
    T = threshold(2)
    Ks = [10, 20, 40] if fast else [10, 20, 40, 80]
    above = [frame_bounds(2, K, 1.2 * T).c1 for K in Ks]
    below = [frame_bounds(2, K, 0.5 * T).c1 for K in Ks]
    checks.add("c1 stable above threshold", above[-1] / above[0] > 0.5, above[-1] / above[0], "> 0.5")
    checks.add("c1 collapses below threshold", below[-1] <= below[0] / 10, [below[0], below[-1]], "10x decay")
    sweep = threshold_sweep(2, 20 if fast else 40, np.linspace(0.5 * T, 1.5 * T, 11))
    c1s = [p.c1 for p in sweep.probes]
    checks.add("c1 non-decreasing in L", all(b >= a - 1e-10 for a, b in zip(c1s, c1s[1:])))
    checks.add("Gram matrices positive semidefinite", min(c1s + below) > -1e-10, min(c1s + below), "> -1e-10")
    return {"threshold": T, "K": Ks, "c1_above": above, "c1_below": below, "sweep": sweep.summary()}, sweep


def run(fast: bool = False) -> tuple[dict, dict]:
    """Return the JSON report and a dict of side tables (name -> rows with header)."""
    checks = _Checks()
    report = {"schema": SCHEMA, "fast": fast}
    report["perron"] = _perron_section(checks)
    report["words"] = _word_section(checks)
    report["frequencies"] = _frequency_section(checks, fast)
    report["density"], density = _density_section(checks, fast)
    report["tribonacci_example"] = _tribonacci_section(checks)
    report["gaps"], gaps = _gap_section(checks, fast)
    _fibonacci_sharpness(checks, fast)
    report["frame"], sweep = _frame_section(checks, fast)
    report["checks"] = checks.items
    report["passed"] = all(c["pass"] for c in checks.items)

    tables = {
        "density.csv": (["r", "n", "ratio"], density.samples),
        "frame.csv": (["L", "K", "c1", "c2", "regime"], sweep.rows()),
    }
    for m, rows in gaps.items():
        tables[f"gaps_m{m}.csv"] = (
            ["N", "gamma", "gamma_sharp", "brute_min", "holds"],
            [(r.N, r.gamma, r.gamma_sharp, r.brute_min, r.holds) for r in rows],
        )
    return report, tables
