"""Deterministic verification suites with a JSON report."""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .jones import IteratedCableParams, cable_jones, cable_jones_oracle, ds_dh_at_root
from .laurent import NotDivisible, lp_divexact, quantum_int
from .skein import CableParams, cable_from_coefficients, cable_skein

SUITES = ("skein", "integral", "lemmas", "decomposition")
BATTERY = ((2, 13, 2, 3), (2, 11, 2, 3), (3, 31, 2, 5), (1, 1, 2, 3), (2, 3, 3, 2))
SEED = 20240611


def _num(z):
    if z is None:
        return None
    if isinstance(z, str):
        return z
    if isinstance(z, (bool, np.bool_)):
        return bool(z)
    if isinstance(z, (int, np.integer)):
        return int(z)
    z = complex(z)
    return [z.real, z.imag] if z.imag else z.real


@dataclass
class Check:
    name: str
    passed: bool
    value: object = None
    oracle: object = None
    abs_err: float = float("nan")
    rel_err: float = float("nan")
    tol: float = float("nan")
    nodes: object = None
    runtime: float = 0.0
    note: str = ""

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "name": self.name,
            "passed": bool(self.passed),
            "value": _num(self.value),
            "oracle": _num(self.oracle),
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "tol": self.tol,
        }
        # wall-clock time would break byte-identical reports, so it is opt-in
        if timings:
            out["runtime"] = round(self.runtime, 4)
        if self.nodes is not None:
            out["nodes"] = self.nodes
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self, timings: bool = False) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": [c.to_json(timings) for c in self.checks]}


def _compare(name, value, oracle, tol, relative=True, nodes=None, t0=None) -> Check:
    value, oracle = complex(value), complex(oracle)
    ae = abs(value - oracle)
    re = ae / abs(oracle) if oracle != 0 else float("inf") if ae else 0.0
    ok = (re if relative else ae) <= tol
    rt = time.perf_counter() - t0 if t0 is not None else 0.0
    return Check(name, bool(ok), value, oracle, ae, re, tol, nodes, rt)


def _flag(name, ok, t0, note="", value=None) -> Check:
    return Check(name, bool(ok), value=value, runtime=time.perf_counter() - t0, note=note)


def suite_skein(max_N: int = 6) -> Report:
    rep = Report("skein")
    for p, q in ((2, 3), (2, 5), (3, 2), (2, 13), (5, 2), (3, -4)):
        t0 = time.perf_counter()
        ok = all(
            cable_skein(CableParams(p, q, N, s)) == cable_from_coefficients(CableParams(p, q, N, s))
            for N in range(max_N + 1)
            for s in range(4)
        )
        rep.checks.append(_flag(f"cabling_closed_form_vs_delta_form[{p},{q}]", ok, t0))
    for tup in BATTERY:
        params = IteratedCableParams(*tup)
        t0 = time.perf_counter()
        ok = all(cable_jones(params, N) == cable_jones_oracle(params, N) for N in range(max_N + 1))
        rep.checks.append(_flag(f"double_sum_vs_two_step_cabling[{tup}]", ok, t0))
        t0 = time.perf_counter()
        try:
            for N in range(max_N + 1):
                lp_divexact(cable_jones(params, N), quantum_int(N + 1))
            ok = True
        except NotDivisible:
            ok = False
        rep.checks.append(_flag(f"divisible_by_quantum_N_plus_1[{tup}]", ok, t0))
    return rep


def suite_integral() -> Report:
    from .contour.integrals import (
        ds_dh_finite_difference,
        ds_dh_integral,
        gaussian_line_integral,
        s_integral,
        s_sum,
        s_sum_from_polynomial,
    )
    from .contour.quadrature import ContourSpec

    rep = Report("integral")
    cases = (
        (1, 0, 0.0),
        (1j, 1, math.pi / 4),
        (-1j, 2 + 1j, -math.pi / 4),
    )
    for hp, w, phi in cases:
        t0 = time.perf_counter()
        v = gaussian_line_integral(hp, w, ContourSpec(phi))
        rep.checks.append(_compare(f"gaussian_identity[h'={hp},w={w}]", v, cmath.exp(hp * w * w), 1e-10, t0=t0))
    rng = np.random.default_rng(SEED)
    worst = 0.0
    t0 = time.perf_counter()
    for _ in range(25):
        hp = complex(*rng.uniform(-2, 2, 2))
        w = complex(*rng.uniform(-1.5, 1.5, 2))
        arg = cmath.phase(hp)
        phi = (arg + rng.uniform(-0.8, 0.8) * math.pi / 2) / 2
        v = gaussian_line_integral(hp, w, ContourSpec(phi))
        ref = cmath.exp(hp * w * w)
        worst = max(worst, abs(v - ref) / abs(ref))
    rep.checks.append(Check("gaussian_identity_random", worst < 1e-10, worst, 0.0, worst, worst, 1e-10,
                            runtime=time.perf_counter() - t0))

    params = IteratedCableParams(2, 13, 2, 3)
    t0 = time.perf_counter()
    h = 0.01 + 0.1j
    rep.checks.append(_compare("s_sum_vs_polynomial[N=5]", s_sum(h, params, 5), s_sum_from_polynomial(h, params, 5),
                               1e-10, t0=t0))
    for N in (3, 5):
        for h in (math.pi * 1j / (N + 1) * (1 + 0.2j), 0.5j):
            t0 = time.perf_counter()
            r = s_integral(h, params, N, detail=True)
            rep.checks.append(_compare(f"s_integral_vs_s_sum[N={N},h={h:.4f}]", r.value, s_sum(h, params, N), 1e-8,
                                       nodes=list(r.quad.nodes), t0=t0))
    N = 3
    t0 = time.perf_counter()
    r = ds_dh_integral(params, N, detail=True)
    exact = complex(ds_dh_at_root(params, N)[0])
    rep.checks.append(_compare("ds_dh_integral_vs_termwise[N=3]", r.value, exact, 1e-8, nodes=list(r.quad.nodes), t0=t0))
    t0 = time.perf_counter()
    rep.checks.append(_compare("ds_dh_finite_difference_vs_termwise[N=3]", ds_dh_finite_difference(params, N), exact,
                               1e-6, t0=t0))
    return rep


def suite_lemmas() -> Report:
    from .contour import lemmas as L

    rep = Report("lemmas")
    t0 = time.perf_counter()
    rep.checks.append(_compare("half_line_above", L.cauchy_half_line(1.0, 0.1, 10), -math.pi * 1j, 1e-10, False, t0=t0))
    t0 = time.perf_counter()
    rep.checks.append(_compare("half_line_below", L.cauchy_half_line(1.0, 0.1, 10, below=True), math.pi * 1j, 1e-10,
                               False, t0=t0))
    for eps in (0.01, 0.1, 1.0):
        t0 = time.perf_counter()
        rep.checks.append(_compare(f"half_line_eps[{eps}]", L.cauchy_half_line(1 + 0.5j, eps, 3), -math.pi * 1j, 1e-10,
                                   False, t0=t0))

    # planted g = exp(x): closed-form integral sqrt(pi/((N+1) a)) exp(1/(4 (N+1) a))
    Ns = [int(round(math.exp(t))) - 1 for t in np.linspace(2, 6, 9)]
    for a in (1.0, 1 + 0.5j):
        for M in (1, 2, 3):
            t0 = time.perf_counter()
            ex = L.gauss_expand_1d(np.exp, a, M, radius=1.0)
            exact = lambda N, a=a: L.quadrature_1d(np.exp, a, N)
            slope = L.remainder_slope(exact, ex, Ns)
            rep.checks.append(Check(f"expansion_1d_order[alpha={a},M={M}]", abs(slope - (M + 0.5)) <= 0.15, slope,
                                    M + 0.5, abs(slope - M - 0.5), float("nan"), 0.15,
                                    runtime=time.perf_counter() - t0))

    F = np.array([[2.0, 0.7], [0.7, 1.5]])
    J = (0.3, -0.2)
    g = lambda x1, x2: np.exp(J[0] * x1 + J[1] * x2 + 0.1 * x1 * x1 * x2)
    Ns2 = [int(round(math.exp(t))) - 1 for t in np.linspace(2, 5, 7)]
    for a in (1.0, 0.8 + 0.6j):
        for M in (1, 2, 3):
            t0 = time.perf_counter()
            ex = L.gauss_expand_2d(g, F, a, M, radius=(1.0, 1.0))
            exact = lambda N, a=a: L.quadrature_2d(g, F, a, N).value
            slope = L.remainder_slope(exact, ex, Ns2)
            rep.checks.append(Check(f"expansion_2d_order[alpha={a},M={M}]", abs(slope - (M + 1)) <= 0.15, slope, M + 1,
                                    abs(slope - M - 1), float("nan"), 0.15, runtime=time.perf_counter() - t0))
        for k, l in ((0, 0), (1, 1), (2, 0), (3, 1), (2, 2), (4, 2)):
            t0 = time.perf_counter()
            q = L.quadrature_2d(lambda x1, x2, k=k, l=l: x1 ** k * x2 ** l, F, a)
            rep.checks.append(_compare(f"moment[alpha={a},k={k},l={l}]", L.gaussian_moment(F, a, k, l), q.value, 1e-8,
                                       nodes=list(q.nodes), t0=t0))

    params = IteratedCableParams(2, 13, 2, 3)
    t0 = time.perf_counter()
    F2 = leading_form(params)
    phi = math.pi / 4
    v = L.rotated_moment(F2, phi, 1, 1)
    q = L.rotated_moment_quadrature(F2, phi, 1, 1)
    err = abs(v - q.value) + q.error
    rep.checks.append(Check("leading_moment_nonzero[(2,13,2,3)]", abs(v) > 1e-6 and 10 * err < abs(v), v, q.value,
                            abs(v - q.value), abs(v - q.value) / abs(v), 1e-6, list(q.nodes),
                            time.perf_counter() - t0, note=f"err_bound={err:.3e}"))
    return rep


def leading_form(params: IteratedCableParams) -> np.ndarray:
    """Matrix of ``2 (x1-x2)^2/beta + 2 x2^2/(p2^2 gamma)``."""
    b = float(params.beta)
    k = params.p2 * params.q2
    return np.array([[2 / b, -2 / b], [-2 / b, 2 / b + 2 / k]])


def suite_decomposition(Ns=(2, 3, 5)) -> Report:
    from .contour.decomposition import leading_order_parts, residue_decomposition
    from .contour.integrals import ds_dh_prefactor
    from .contour.saddle import SaddleData, theta

    rep = Report("decomposition")
    params = IteratedCableParams(2, 13, 2, 3)
    for N in Ns:
        t0 = time.perf_counter()
        d = residue_decomposition(params, N)
        rep.checks.append(_compare(f"four_parts_vs_direct[N={N}]", d.total, d.direct, 1e-6,
                                   nodes=list(d.details["direct"].quad.nodes), t0=t0))
    for tup, N in (((3, 31, 2, 5), 20), ((5, 36, 2, 3), 7), ((2, 13, 2, 3), 60)):
        p = IteratedCableParams(*tup)
        t0 = time.perf_counter()
        d = residue_decomposition(p, N, direct=False)
        ref = complex(ds_dh_at_root(p, N)[0]) / ds_dh_prefactor(p, N)
        rep.checks.append(_compare(f"four_parts_vs_termwise[{tup},N={N}]", d.total, ref, 1e-6, t0=t0))

    sd = SaddleData(params)
    t0 = time.perf_counter()
    w1, w2 = sd.w
    hstep = 1e-5
    d1 = (theta(w1 + hstep, w2, params) - theta(w1 - hstep, w2, params)) / (2 * hstep)
    d2 = (theta(w1, w2 + hstep, params) - theta(w1, w2 - hstep, params)) / (2 * hstep)
    rep.checks.append(Check("critical_point", max(abs(d1), abs(d2)) < 1e-8, max(abs(d1), abs(d2)), 0.0,
                            max(abs(d1), abs(d2)), float("nan"), 1e-8, runtime=time.perf_counter() - t0))

    t0 = time.perf_counter()
    T = sd.period_candidate()
    ok = True
    for m in sd.xi_indices():
        for n in sd.eta_indices():
            a = theta(sd.xi(m), sd.eta(n), params)
            ok &= abs(cmath.exp(T * a) - 1) < 1e-9
    rep.checks.append(_flag("double_sum_phase_period", ok, t0, note=f"T={T}", value=T))

    t0 = time.perf_counter()
    errs = []
    for N in (20, 80, 320):
        d = residue_decomposition(params, N, direct=False)
        lo = leading_order_parts(params, N)
        errs.append(abs(d.sum_over_n - lo.sum_over_n) / abs(d.sum_over_n)
                    + abs(d.sum_over_m - lo.sum_over_m) / abs(d.sum_over_m))
    ok = errs[0] > errs[1] > errs[2]
    rep.checks.append(_flag("leading_order_single_sums_converge", ok, t0, note=f"errors={errs}"))
    return rep


def run_suite(name: str) -> Report:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return {
        "skein": suite_skein,
        "integral": suite_integral,
        "lemmas": suite_lemmas,
        "decomposition": suite_decomposition,
    }[name]()
