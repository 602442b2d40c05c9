"""Exit criteria, evaluated at the default discretization (m=256, dx=0.05, dt=1e-4).

Each test records one PASS/FAIL line, printed in the terminal summary.
"""

import dataclasses
import math
import time

import numpy as np
import pytest

from conftest import record
from oracles import analytic_soliton, tmsv_fock_entropy
from soliton_entanglement.classical import SolitonSpec, initial_soliton, mid_intensity, propagate_classical
from soliton_entanglement.entanglement import Partition, Side, entanglement_of, thermal_modes, top_fraction
from soliton_entanglement.experiments import (
    MARKED_DISTANCES,
    ScenarioConfig,
    analyze_snapshot,
    optimal_cut,
    run_sweep,
    simulate,
    two_mode_squeezed,
)
from soliton_entanglement.fluctuations import CorrelationPair, correlations, to_omega_domain
from soliton_entanglement.grid import Domain, make_grid

pytestmark = pytest.mark.slow

DEFAULTS = ScenarioConfig()
MARKED_INDEX = {name: round(t / DEFAULTS.t_max * DEFAULTS.t_samples) for name, t in MARKED_DISTANCES.items()}
COMPRESSION = {1: ["t1", "t2", "t3", "t4"], 2: ["t2"], 3: ["t1", "t3"]}


def report_line(number, title, passed, detail):
    record(f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} | {detail}")


class Run:
    """Everything the criteria need from one default co-propagation."""

    def __init__(self, order):
        cfg = dataclasses.replace(DEFAULTS, order_n=order)
        self.t, self.mid, self.e_x, self.e_x_right, self.e_w, self.e_w_right = ([] for _ in range(6))
        self.purity, self.reports_x, self.pairs_x = [], [], {}
        self.propagation_time = 0.0
        keep = set(MARKED_INDEX.values())
        it = simulate(cfg)
        k = 0
        while True:
            t0 = time.perf_counter()
            try:
                snap = next(it)
            except StopIteration:
                break
            self.propagation_time += time.perf_counter() - t0
            row, rep = analyze_snapshot(snap, cfg)
            cp = correlations(snap.fluctuations)
            w = to_omega_domain(cp)
            sym_x, sym_w = Partition(Domain.X, 0.0, Side.LEFT), Partition(Domain.OMEGA, 0.0, Side.LEFT)
            self.t.append(snap.t)
            self.mid.append(row.mid_intensity)
            self.e_x.append(row.e_total)
            self.reports_x.append(rep)
            self.e_x_right.append(entanglement_of(cp, sym_x.complement()).total)
            self.e_w.append(entanglement_of(w, sym_w).total)
            self.e_w_right.append(entanglement_of(w, sym_w.complement()).total)
            self.purity.append(float(np.sum(thermal_modes(cp).nu_bar)))
            if k in keep:
                self.pairs_x[k] = cp
            self.final = snap.fluctuations
            k += 1
        for name in ("t", "mid", "e_x", "e_x_right", "e_w", "e_w_right", "purity"):
            setattr(self, name, np.array(getattr(self, name)))


@pytest.fixture(scope="session")
def runs():
    return {n: Run(n) for n in (1, 2, 3)}


def _interior_extrema(t, y):
    """Parabola-refined positions of interior local maxima and minima of a sampled curve."""
    d = np.diff(y)
    out = []
    for i in range(1, len(y) - 1):
        if (d[i - 1] > 0 and d[i] < 0) or (d[i - 1] < 0 and d[i] > 0):
            y0, y1, y2 = y[i - 1], y[i], y[i + 1]
            h = t[i + 1] - t[i]
            denom = y0 - 2 * y1 + y2
            shift = 0.5 * (y0 - y2) / denom if denom else 0.0
            out.append((t[i] + shift * h, "max" if d[i - 1] > 0 else "min"))
    return out


def _fine_mid_intensity(order, dt=1e-4):
    f = initial_soliton(SolitonSpec(order, DEFAULTS.nbar), make_grid(DEFAULTS.grid_m, DEFAULTS.dx))
    steps = math.ceil(math.pi / 2 / dt)
    dt = math.pi / 2 / steps
    every = 10
    ts, mids = [0.0], [mid_intensity(f)]
    for _ in range(steps // every):
        f = propagate_classical(f, dt, every)
        ts.append(f.t)
        mids.append(mid_intensity(f))
    return np.array(ts), np.array(mids)


def test_c01_classical_analytic_oracle():
    t0 = time.perf_counter()
    g = make_grid(DEFAULTS.grid_m, DEFAULTS.dx)
    nbar = 7.0
    f = initial_soliton(SolitonSpec(1, nbar), g)
    steps = math.ceil(math.pi / 2 / DEFAULTS.dt)
    f = propagate_classical(f, math.pi / 2 / steps, steps)
    elapsed = time.perf_counter() - t0
    ref = analytic_soliton(g.x, math.pi / 2, nbar)
    err = np.linalg.norm(f.amplitude - ref) / np.linalg.norm(ref)
    ok = err < 1e-6 and elapsed < 5
    report_line(1, "N=1 analytic soliton at t=pi/2", ok, f"rel L2 error {err:.3e} (tol 1e-6), {elapsed:.2f}s (limit 5s)")
    assert elapsed < 5
    assert err < 1e-6


def test_c02_bound_soliton_recurrence():
    t0 = time.perf_counter()
    g = make_grid(DEFAULTS.grid_m, DEFAULTS.dx)
    errs = {}
    for order in (2, 3):
        f0 = initial_soliton(SolitonSpec(order, DEFAULTS.nbar), g)
        steps = math.ceil(math.pi / 2 / DEFAULTS.dt)
        f1 = propagate_classical(f0, math.pi / 2 / steps, steps)
        errs[order] = np.linalg.norm(np.abs(f1.amplitude) - np.abs(f0.amplitude)) / np.linalg.norm(f0.amplitude)
    offsets = {}
    for order, targets in ((2, ["t2"]), (3, ["t1", "t3"])):
        ts, mids = _fine_mid_intensity(order)
        maxima = [tm for tm, kind in _interior_extrema(ts, mids) if kind == "max"]
        for name in targets:
            target = MARKED_DISTANCES[name]
            offsets[(order, name)] = min(abs(tm - target) for tm in maxima) if maxima else math.inf
    elapsed = time.perf_counter() - t0
    rec_ok = all(e < 1e-4 for e in errs.values())
    max_ok = all(o < 0.02 for o in offsets.values())
    ok = rec_ok and max_ok and elapsed < 30
    detail = (f"recurrence N=2 {errs[2]:.3e}, N=3 {errs[3]:.3e} (tol 1e-4); max offsets "
              + ", ".join(f"N={n} {k} {o:.4f}" for (n, k), o in offsets.items()) + f" (tol 0.02); {elapsed:.1f}s")
    report_line(2, "bound-soliton recurrence and compression maxima", ok, detail)
    assert max_ok
    assert elapsed < 30
    assert rec_ok


def test_c03_symplectic_identity(runs):
    resid = {n: r.final.bogoliubov_residual() for n, r in runs.items()}
    total = sum(r.propagation_time for r in runs.values())
    ok = all(x < 1e-8 for x in resid.values()) and total < 600
    report_line(3, "symplectic identity at t=pi/2", ok,
                ", ".join(f"N={n} {x:.2e}" for n, x in resid.items()) + f" (tol 1e-8); propagation {total:.0f}s (limit 600s)")
    assert ok


def test_c04_purity_and_complementarity(runs):
    purity = max(float(r.purity.max()) for r in runs.values())
    comp = 0.0
    for r in runs.values():
        for left, right in ((r.e_x, r.e_x_right), (r.e_w, r.e_w_right)):
            comp = max(comp, float(np.max(np.abs(left - right) / np.maximum(left, 1.0))))
    ok = purity < 1e-6 and comp < 1e-6
    report_line(4, "global purity and complementarity", ok,
                f"max sum nu_bar {purity:.2e} (tol 1e-6); max |E_L-E_R|/max(E,1) {comp:.2e} (tol 1e-6)")
    assert ok


def test_c05_two_mode_squeezed_oracle():
    t0 = time.perf_counter()
    nu_err, s_err = {}, {}
    for r in (0.1, 0.5, 1.0, 2.0):
        pair = two_mode_squeezed(r)
        dec = thermal_modes(CorrelationPair(pair.grid, pair.b[:1, :1], pair.c[:1, :1], np.array([0])))
        nu_err[r] = abs(dec.nu_bar[0] - math.sinh(r) ** 2)
        s_err[r] = abs(dec.per_mode_entropy[0] - tmsv_fock_entropy(r, 200)[0])
    elapsed = time.perf_counter() - t0
    ok = max(nu_err.values()) < 1e-10 and max(s_err.values()) < 1e-6 and elapsed < 10
    pair = two_mode_squeezed(2.0)
    half = CorrelationPair(pair.grid, pair.b[:1, :1], pair.c[:1, :1], np.array([0]))
    converged = abs(thermal_modes(half).per_mode_entropy[0] - tmsv_fock_entropy(2.0, 400)[0])
    report_line(5, "two-mode squeezed oracle", ok,
                "nu_bar err " + ", ".join(f"r={r} {e:.1e}" for r, e in nu_err.items()) + " (tol 1e-10); "
                + "entropy vs Fock(200) " + ", ".join(f"r={r} {e:.1e}" for r, e in s_err.items())
                + f" (tol 1e-6); [info: r=2 vs Fock(400) {converged:.1e}]; {elapsed:.1f}s")
    assert max(nu_err.values()) < 1e-10
    assert elapsed < 10
    assert max(s_err.values()) < 1e-6


def test_c06_monotone_growth_fundamental(runs):
    steps = np.diff(runs[1].e_x)
    ok = len(runs[1].e_x) == 65 and steps.min() >= -1e-9
    report_line(6, "N=1 E(t) non-decreasing", ok, f"{len(steps)} steps, min dE {steps.min():.3e} (tol -1e-9)")
    assert ok


def test_c07_order_scaling(runs):
    ex = [float(runs[n].e_x.max()) for n in (1, 2, 3)]
    ew = [float(runs[n].e_w.max()) for n in (1, 2, 3)]
    ok = ex[2] > ex[1] > ex[0] and ew[2] > ew[1] > ew[0]
    report_line(7, "max_t E increases with N", ok,
                "x: " + " < ".join(f"{e:.4f}" for e in ex) + "; omega: " + " < ".join(f"{e:.4f}" for e in ew))
    assert ok


def test_c08_relevant_mode_count(runs):
    fracs = {}
    for n, names in COMPRESSION.items():
        for name in names:
            fracs[(n, name)] = top_fraction(runs[n].reports_x[MARKED_INDEX[name]], n)
    top1 = top_fraction(runs[1].reports_x[-1], 1)
    ok = all(f >= 0.85 for f in fracs.values()) and top1 >= 0.9
    report_line(8, "top-N modes carry E", ok,
                ", ".join(f"N={n} {k} {f:.3f}" for (n, k), f in fracs.items())
                + f" (tol 0.85); N=1 t=pi/2 top mode {top1:.3f} (tol 0.9)")
    assert ok


def test_c09_compression_correlation(runs):
    r = runs[2]
    e_ext = _interior_extrema(r.t, r.e_x)
    ts, mids = _fine_mid_intensity(2)
    mid_ext = [tm for tm, _ in _interior_extrema(ts, mids)] + [0.0, math.pi / 2]
    dist = [min(abs(te - tm) for tm in mid_ext) for te, _ in e_ext]
    ok = bool(e_ext) and max(dist) <= 0.05
    report_line(9, "N=2 E extrema track mid-intensity extrema", ok,
                "E extrema " + ", ".join(f"{kind}@{te:.4f}" for te, kind in e_ext)
                + "; mid-intensity extrema " + ", ".join(f"{tm:.4f}" for tm in sorted(mid_ext))
                + f"; max distance {max(dist) if dist else float('nan'):.4f} (tol 0.05)")
    assert ok


def test_c10_asymmetric_cut_gain(runs):
    found = {}
    for name in ("t1", "t3"):
        res = optimal_cut(runs[3].pairs_x[MARKED_INDEX[name]], (-0.6, 0.6), 25)
        found[name] = res
    good = [res for res in found.values()
            if abs(res.best_cut) <= 0.5 and 0.01 <= res.gain_vs_symmetric <= 0.15]
    sym = {}
    for name in ("t2", "t4"):
        sym[name] = optimal_cut(runs[1].pairs_x[MARKED_INDEX[name]], (-1.0, 1.0), 41)
    sym_ok = all(abs(res.best_cut) <= DEFAULTS.dx + 1e-12 for res in sym.values())
    info = optimal_cut(runs[3].pairs_x[MARKED_INDEX["t2"]], (-0.6, 0.6), 25)
    ok = bool(good) and sym_ok
    report_line(10, "asymmetric-cut gain (N=3) / symmetric optimum (N=1)", ok,
                "N=3 " + ", ".join(f"{k}: cut {r.best_cut:+.2f} gain {r.gain_vs_symmetric:.2%}" for k, r in found.items())
                + " (need gain in [1%,15%] at |cut|<=0.5); N=1 best cuts "
                + ", ".join(f"{k}: {r.best_cut:+.2f}" for k, r in sym.items())
                + f"; [info: N=3 t2 cut {info.best_cut:+.2f} gain {info.gain_vs_symmetric:.2%}]")
    assert sym_ok
    assert good


def test_c11_nbar_invariance(runs):
    cfg = dataclasses.replace(DEFAULTS, order_n=2, nbar=1e6)
    other = run_sweep(cfg, write=False).column("E_nats")
    ref = runs[2].e_x
    rel = float(np.max(np.abs(other[1:] - ref[1:]) / np.abs(ref[1:])))
    ok = rel < 1e-10 and other[0] == ref[0] == 0.0
    report_line(11, "nbar-invariance of E (1e6 vs 1e9, N=2)", ok, f"max rel diff {rel:.2e} (tol 1e-10)")
    assert ok
