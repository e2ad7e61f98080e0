"""Acceptance criteria 1-10, one test each, at the stated tolerances.

Each test records a one-line verdict in RESULTS; the conftest prints them in
the terminal summary, and running this file as a script prints them too.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from circfrechet.consistency import simulate
from circfrechet.criterion import alpha_delta, gamma, guarantee_existence, phi_alpha, satisfies_P, CriterionParams
from circfrechet.frechet import derivative_values, functional_values
from circfrechet.geometry import PI, TWO_PI, coord_distance_array
from circfrechet.measures import CircularMeasure
from circfrechet.solver import critical_points, frechet_mean, grid_oracle
from circfrechet.uniqueness import boundary_hemisphere_measure, certify, find_mean_and_certify, outer_branch_minimum

from helpers import criterion_density, random_atomic, random_density, symmetric_atomic

RESULTS: dict = {}


def record(key: str, ok: bool, detail: str) -> None:
    RESULTS[key] = f"criterion {key:>3}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[key]


def _suite_1():
    """The 500 seeded random atomic measures shared by criteria 1 and 5."""
    rng = np.random.default_rng(20240101)
    out = []
    for i in range(500):
        n = int(rng.integers(1, 51))
        out.append(random_atomic(rng, n, equal=(i % 2 == 0)))
    return out


SUITE_1 = _suite_1()


def _match_sets(a, b, tol):
    a, b = np.sort(a), np.sort(b)
    if a.size != b.size:
        return math.inf
    d = coord_distance_array(a[:, None], b[None, :])
    return float(np.max(np.min(d, axis=1)))


def test_criterion_01_oracle_equivalence():
    t0 = time.perf_counter()
    worst_x = worst_f = 0.0
    mismatched = 0
    for mu in SUITE_1:
        r = frechet_mean(mu, 1e-9)
        o = grid_oracle(mu, 2 ** 16, 1e-9)
        dx = _match_sets([c.angle for c in r.argmins], [c.angle for c in o.argmins], 1e-6)
        df = abs(r.min_value - o.min_value)
        if dx > 1e-6 or df > 1e-9:
            mismatched += 1
        worst_x, worst_f = max(worst_x, dx), max(worst_f, df)
    dt = time.perf_counter() - t0
    record("1", mismatched == 0 and dt < 60,
           f"500 measures, {mismatched} mismatches, max argmin diff {worst_x:.2e} rad, "
           f"max F diff {worst_f:.2e}, {dt:.1f}s")


def test_criterion_02a_uniform_value_is_pi_cubed_over_three():
    # the criterion as stated; for a probability measure F is pi^2/6 (see 02b)
    nu = CircularMeasure.uniform().chart(0.0)
    theta = -PI + TWO_PI * np.arange(4096) / 4096
    F = functional_values(nu, theta)
    err = float(np.max(np.abs(F - PI ** 3 / 3)))
    record("2a", err < 1e-8, f"max |F - pi^3/3| = {err:.4f} (F = {F.mean():.10f}, pi^2/6 = {PI ** 2 / 6:.10f})")


def test_criterion_02b_uniform_certificate_margin_zero():
    mu = CircularMeasure.uniform()
    nu = mu.chart(0.0)
    theta = -PI + TWO_PI * np.arange(4096) / 4096
    flat = float(np.ptp(functional_values(nu, theta)))
    cert = certify(mu, 0.0)
    record("2b", cert.margin == 0.0 and not cert.holds and flat < 1e-12,
           f"margin = {cert.margin}, holds = {cert.holds}, F spread over grid {flat:.1e}")


def test_criterion_03_alpha_delta_values():
    t0 = time.perf_counter()
    deltas = (0.1, 0.2, 1 / 3, 0.5)
    want_a = (0.46, 0.54, 0.69, 1.00)
    floors = (0.12, 0.26, 0.47, PI / 4 - 1e-9)
    a = [alpha_delta(d) for d in deltas]
    dphi = [d * phi_alpha(x) for d, x in zip(deltas, a)]
    dt = time.perf_counter() - t0
    ok = all(abs(x - w) <= 0.01 for x, w in zip(a, want_a)) and all(v >= f for v, f in zip(dphi, floors))
    record("3", ok and dt < 1, "alpha = " + ", ".join(f"{x:.4f}" for x in a)
           + "; delta*phi = " + ", ".join(f"{v:.4f}" for v in dphi) + f"; {dt * 1e3:.1f} ms")


def test_criterion_04_derivative():
    rng = np.random.default_rng(44)
    h = 1e-6
    worst = 0.0
    for k in range(50):
        mu = random_density(rng, cells=int(rng.integers(8, 200)), sparse=(k % 3 == 0))
        nu = mu.chart(float(rng.uniform(-PI, PI)))
        theta = rng.uniform(-PI + 1e-3, PI - 1e-3, 20)
        left, _ = derivative_values(nu, theta)
        fd = (functional_values(nu, theta + h) - functional_values(nu, theta - h)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(fd - left))))
    worst_jump = 0.0
    for mu in SUITE_1[:100]:
        nu = mu.chart(0.0)
        cut = np.where(nu.atom_pos < 0, nu.atom_pos + PI, nu.atom_pos - PI)
        left, right = derivative_values(nu, cut)
        worst_jump = max(worst_jump, float(np.max(np.abs((right - left) + TWO_PI * nu.atom_mass))))
    record("4", worst < 1e-5 and worst_jump < 1e-9,
           f"1000 points / 50 densities: max |FD - D| = {worst:.2e}; max cusp gap error {worst_jump:.1e}")


def test_criterion_05_barycenter_identity():
    worst = 0.0
    count = 0
    for mu in SUITE_1:
        for cp in critical_points(mu):
            worst = max(worst, abs(mu.chart(cp.angle).mean()))
            count += 1
    record("5", worst < 1e-9, f"{count} critical points, max |m| = {worst:.2e}")


def test_criterion_06_certificate_matches_multiplicity():
    rng = np.random.default_rng(66)
    agree = total = non_unique = 0
    for i in range(1000):
        if i % 4 == 3:
            mu = symmetric_atomic(rng, int(rng.integers(1, 8)), int(rng.integers(2, 4)))
        else:
            mu = random_atomic(rng, int(rng.integers(1, 41)), equal=(i % 2 == 0))
        r = frechet_mean(mu, 1e-9)
        cert = certify(mu, r.best.angle)
        agree += cert.holds == r.unique
        non_unique += not r.unique
        total += 1
    family_ok = True
    notes = []
    for theta_hat in (0.0, 3 * PI / 10):
        mu = boundary_hemisphere_measure(theta_hat)
        r = frechet_mean(mu, 1e-9)
        cert = certify(mu, 0.0)
        want = [0.0, math.remainder(2 * theta_hat - PI, TWO_PI)]
        dx = _match_sets([c.angle for c in r.argmins], want, 1e-8)
        family_ok &= cert.margin == 0.0 and dx < 1e-8
        notes.append(f"theta_hat={theta_hat:.4f}: margin {cert.margin}, argmin err {dx:.1e}")
    record("6", agree == total and family_ok,
           f"{agree}/{total} verdicts agree ({non_unique} non-unique); " + "; ".join(notes))


def test_criterion_07_outer_branch_floor():
    rng = np.random.default_rng(77)
    worst_slack = math.inf
    held = 0
    for k in range(100):
        alpha = float(rng.uniform(0.05, 1.0))
        phi = float(rng.uniform(0.03, 0.97 * phi_alpha(alpha)))
        shift = int(rng.integers(0, 512))
        mu = criterion_density(rng, alpha, phi, shift=shift)
        p = TWO_PI * shift / 512
        assert satisfies_P(mu, CriterionParams(p, alpha, phi))
        gmin = outer_branch_minimum(mu, p, phi)
        worst_slack = min(worst_slack, gmin - gamma(alpha, phi))
        held += certify(mu, p).holds
    record("7", worst_slack >= -1e-9 and held == 100,
           f"min(outer G - gamma) = {worst_slack:.3e}; certificate holds {held}/100")


def _concentrated(rng):
    delta = float(rng.choice([0.1, 0.2, 1 / 3, 0.45]))
    a_d = alpha_delta(delta)
    width = float(rng.uniform(0.02, 1.2 * delta * phi_alpha(a_d)))
    eta = float(rng.uniform(0.0, 0.6 * (1 - a_d)))
    core = CircularMeasure.box(float(rng.uniform(-PI, PI)), width)
    return CircularMeasure.mixture([(core, 1 - eta), (CircularMeasure.uniform(), eta)]), delta


def test_criterion_08_existence_pipeline():
    rng = np.random.default_rng(88)
    found = localised = held = 0
    for _ in range(50):
        mu, delta = _concentrated(rng)
        params = guarantee_existence(mu, delta)
        if params is None:
            continue
        found += 1
        res, cert = find_mean_and_certify(mu)
        d = float(coord_distance_array(res.best.angle, params.center))
        localised += res.unique and d <= (1 - delta) * phi_alpha(params.alpha)
        held += cert.holds
    uniform = CircularMeasure.uniform()
    none_for_uniform = all(guarantee_existence(uniform, d) is None for d in (0.1, 0.2, 1 / 3, 0.49))
    record("8", found == localised == held == 50 and none_for_uniform,
           f"witness {found}/50, localised {localised}/50, certified {held}/50; "
           f"uniform has no witness: {none_for_uniform}")


def test_criterion_09_concentration():
    t0 = time.perf_counter()
    mu = CircularMeasure.mixture([(CircularMeasure.box(0.7, 0.1), 0.99), (CircularMeasure.uniform(), 0.01)])
    params = guarantee_existence(mu, 1 / 3)
    assert params is not None
    rep = simulate(mu, (50, 200, 800), trials=400, seed=2024, x_values=(1.0, 2.0, 4.0), params=params)
    dt = time.perf_counter() - t0
    rho_fail = sum(s.rho_failures for s in rep.stats)
    env_ok = all(s.violation_rate[x] <= 2 * math.exp(-x) for s in rep.stats for x in (1.0, 2.0, 4.0))
    med = {s.n: s.quantiles[0.5] for s in rep.stats}
    worst_rate = max(s.violation_rate[x] for s in rep.stats for x in (1.0, 2.0, 4.0))
    record("9", rho_fail == 0 and env_ok and med[800] < med[50] and dt < 300,
           f"rho failures {rho_fail}/1200, worst envelope violation rate {worst_rate:.3f}, "
           f"median d: n=50 {med[50]:.4f}, n=800 {med[800]:.4f}; {dt:.1f}s")


def test_criterion_10_chart_invariance():
    rng = np.random.default_rng(1010)
    worst = 0.0
    same_count = True
    for i in range(100):
        if i % 5 == 4:
            mu = symmetric_atomic(rng, int(rng.integers(1, 6)), 2)
        else:
            mu = random_atomic(rng, int(rng.integers(1, 41)), equal=(i % 2 == 0))
        ref = np.array([c.angle for c in frechet_mean(mu).argmins])
        for base in rng.uniform(-PI, PI, 10):
            got = np.array([c.angle for c in frechet_mean(mu, base=base).argmins])
            if got.size != ref.size:
                same_count = False
                continue
            worst = max(worst, _match_sets(ref, got, 1e-9))
    record("10", same_count and worst < 1e-9, f"1000 chart changes, max argmin shift {worst:.2e}")


if __name__ == "__main__":
    import sys

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    for key in sorted(RESULTS, key=lambda k: (int(k.rstrip("ab")), k)):
        print(RESULTS[key])
    sys.exit(0 if all("PASS" in v for v in RESULTS.values()) else 1)
