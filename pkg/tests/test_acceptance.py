"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (also collected into the
terminal summary) and then asserts the same condition at the stated tolerance.
"""

import csv
import io
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES, brute_force_chsh_max, random_density
from scipy.optimize import bisect

from faraday_bell import bell, cavity, cli, diqkd, feasibility, protocol, qstate
from faraday_bell.protocol import Convention, InteractionParams


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


@contextmanager
def stopwatch():
    box = {}
    start = time.perf_counter()
    yield box
    box["s"] = time.perf_counter() - start


def test_singlet_threshold():
    with stopwatch() as t:
        state = protocol.evolve_and_herald(InteractionParams(math.pi / 2, math.pi / 2)).state
        x = bell.violation_boundary_numeric(state)
    # 0.34657 is ln(sqrt 2) shown to five digits; the tolerance applies to ln(sqrt 2)
    ok = abs(x - math.log(math.sqrt(2))) < 1e-6 and abs(x - 0.34657) < 5e-6 and t["s"] < 1
    assert report("singlet threshold", ok,
                  f"t/tau = {x:.9f} (ln sqrt2 {x - math.log(math.sqrt(2)):+.1e}) in {t['s']:.3f} s")


def _bisected_boundary(mean, delta):
    params = InteractionParams.from_mean_delta(mean, delta)
    state = protocol.evolve_and_herald(params).state

    def excess(x):
        return bell.horodecki_max(protocol.decohere(state, x, 1.0)) - 2

    return bisect(excess, 0.0, 1.0, xtol=1e-13, rtol=1e-15, maxiter=200)


def test_fig2_reproduction(capsys):
    with stopwatch() as t:
        assert cli.main(["fig2"]) == 0
        text = capsys.readouterr().out
        rows = [tuple(map(float, r)) for r in list(csv.reader(io.StringIO(text)))[1:]]
        curves = {}
        for d, m, x in rows:
            curves.setdefault(d, {})[m] = x
        deltas = sorted(curves)
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(50):
            d = float(rng.choice(bell.DEFAULT_DELTA_ALPHAS[1:]))
            m = float(rng.uniform(d + 0.02, math.pi / 2))
            worst = max(worst, abs(bell.violation_boundary(m, d) - _bisected_boundary(m, d)))
    elapsed = t["s"]
    four = len(curves) == 4 and all(len(c) == 200 for c in curves.values())
    grid = sorted(curves[deltas[0]])
    ordering = all(
        curves[lo][m] > curves[hi][m]
        for lo, hi in zip(deltas, deltas[1:]) for m in grid if m > hi)
    # CSV carries 9 significant digits
    flat = len(set(curves[0.0].values())) == 1 and abs(curves[0.0][grid[0]] - math.log(math.sqrt(2))) < 1e-9
    to_zero = all(bell.violation_boundary(d + 1e-9, d) < 1e-12 for d in bell.DEFAULT_DELTA_ALPHAS[1:])
    ok = four and ordering and flat and to_zero and worst < 1e-9 and elapsed < 10
    assert report("fig2 contours", ok,
                  f"curves={len(curves)} ordering={ordering} flat={flat} to_zero={to_zero} "
                  f"closed-vs-bisection={worst:.1e} in {elapsed:.2f} s")


def test_horodecki_oracle_equivalence():
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for i in range(50):
        rho = random_density(rng, rank=1 + i % 4)
        worst = max(worst, abs(bell.horodecki_max(rho) - brute_force_chsh_max(rho, rng)))
    assert report("horodecki oracle", worst < 1e-5, f"max deviation over 50 states = {worst:.1e}")


def test_heralding_budget():
    lowq = feasibility.load_profile("low-q")
    assert lowq.convention is Convention.SINGLE_TRANSITION
    r = feasibility.plan(lowq, lowq.interaction(math.pi / 10), d=300, n_runs=1e5)
    minutes = r.acquisition_time / 60
    ok = (abs(r.eta_t - 0.813) <= 0.005 and 5e-4 <= r.herald_prob <= 9e-4
          and 500 <= r.herald_rate <= 900 and 2 <= minutes <= 4)
    assert report("heralding budget", ok,
                  f"eta_t={r.eta_t:.4f} p={r.herald_prob:.3e} rate={r.herald_rate:.0f}/s "
                  f"1e5 runs={minutes:.2f} min")


@pytest.mark.xfail(strict=True, reason="|r_hot| = 0.721 at the maximum, see decisions ledger")
def test_low_q_rotation_operating_point():
    base = feasibility.load_profile("low-q").cavity
    with stopwatch() as t:
        ratio, omega, sin_max, r_hot, r_cold = cavity.kappa_ratio_sweep(base, [4])[0]
    ok = (abs(sin_max) >= 0.99 and abs(r_hot - 0.65) <= 0.05 and abs(r_cold - 0.65) <= 0.05
          and abs(r_hot - r_cold) <= 0.05 and t["s"] < 5)
    assert report("low-q rotation operating point", ok,
                  f"|sin|={abs(sin_max):.4f} |r_hot|={r_hot:.4f} |r_cold|={r_cold:.4f} "
                  f"in {t['s']:.2f} s")


def test_qber_and_key_rate():
    q = diqkd.qber(0.1 * math.pi, math.pi / 50)
    ideal = diqkd.key_rate(bell.TSIRELSON, 0)
    classical = max(diqkd.key_rate(2, x) for x in np.linspace(1e-6, 0.5, 200))
    inter = diqkd.telecom_dot_interaction()
    decreasing, decade, at_100 = True, [], []
    for eta_c, eta_d in diqkd.FIG3_EFFICIENCIES:
        profile = diqkd.telecom_dot_profile(eta_c, eta_d)
        pts = diqkd.figure3_sweep(profile, inter, [5 * i for i in range(31)])
        rates = [p.absolute_rate for p in pts]
        decreasing &= all(a > b for a, b in zip(rates, rates[1:]))
        d0, d1 = diqkd.figure3_sweep(profile, inter, [0, 100 / 3])
        decade.append(d0.absolute_rate / d1.absolute_rate)
        at_100.append(next(p.absolute_rate for p in pts if p.distance == 100))
    ok = (abs(q - 0.0395) <= 5e-4 and ideal == 1 and classical <= 0 and decreasing
          and all(abs(x - 10) <= 1e-6 for x in decade) and all(r > 0 for r in at_100))
    assert report("qber and key rate", ok,
                  f"qber={q:.5f} R(2sqrt2,0)={ideal} max R(2,q)={classical:.3f} "
                  f"decade={[f'{x:.9f}' for x in decade]} rate@100km={[f'{r:.3g}' for r in at_100]}")


def test_min_separation_table():
    quoted = {"atoms": (150, 5), "nv": (100, 50), "low-q": (300, 50)}
    found = {name: feasibility.min_separation(p.delta_t)
             for name, p in feasibility.bundled_profiles().items()}
    ok = all(abs(found[k] - v) <= tol for k, (v, tol) in quoted.items()) and found["dots"] < 1
    assert report("min separation", ok, ", ".join(f"{k}={v:.2f} m" for k, v in found.items()))


def test_quoted_chsh_comparison():
    rng = np.random.default_rng(3)
    rows = cli.quoted_chsh_comparison()
    worst = 0.0
    for row in rows:
        params = InteractionParams.from_mean_delta(row["mean_alpha"], row["delta_alpha"],
                                                   row["convention"])
        rho = qstate.density_from_pure(protocol.evolve_and_herald(params).state)
        brute = brute_force_chsh_max(rho, rng)
        worst = max(worst, abs(row["chsh_closed_form"] - brute),
                    abs(row["chsh_closed_form"] - row["chsh_computed_pure"]))
    ok = len(rows) == 4 and {r["chsh_quoted"] for r in rows} == {2.32, 2.45} and worst < 1e-5
    detail = "; ".join(f"{r['convention']} {r['chsh_closed_form']:.4f} vs {r['chsh_quoted']}"
                       for r in rows)
    assert report("quoted chsh comparison", ok, f"{detail}; closed-vs-brute={worst:.1e}")
