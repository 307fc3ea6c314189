"""Colored Jones polynomials of torus knots and of cables of torus knots, and kappa_N."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import kernels
from .errors import BetaZero, InvalidParams
from .laurent import ZERO, EvalPoint, LaurentPoly, evaluate, lp_divexact, quantum_int
from .numeric import DEFAULT_PREC, ComplexHP, root_sum_converged
from .skein import CableParams, cable_skein, framing_change, normalize_index

# relative agreement demanded between successive precisions on the analytic route
ANALYTIC_REL_TOL = 1e-9


class Framing(enum.Enum):
    BLACKBOARD = "blackboard"
    ZERO = "zero"


class Method(enum.Enum):
    EXACT = "exact"
    ANALYTIC = "analytic"
    # planted values, used only to calibrate the fitting code
    SYNTHETIC = "synthetic"


@dataclass(frozen=True)
class IteratedCableParams:
    """The ``(p1, q1)`` cable of the ``(p2, q2)`` torus knot.

    ``alpha``, ``beta`` and ``gamma`` are the exponent parameters of the
    double-sum formula; ``beta`` and ``gamma`` are exact fractions.
    """

    p1: int
    q1: int
    p2: int
    q2: int

    def __post_init__(self):
        for name in ("p1", "q1", "p2", "q2"):
            if not isinstance(getattr(self, name), (int, np.integer)) or isinstance(getattr(self, name), bool):
                raise InvalidParams(f"{name} must be an integer")
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.p1 < 1:
            raise InvalidParams("p1 must be >= 1")
        if self.p2 < 2:
            raise InvalidParams("p2 must be >= 2")
        if self.q2 == 0:
            raise InvalidParams("q2 must be nonzero")
        if math.gcd(self.p1, self.q1) != 1:
            raise InvalidParams("p1,q1 must be coprime")
        if math.gcd(self.p2, self.q2) != 1:
            raise InvalidParams("p2,q2 must be coprime")

    @property
    def alpha(self) -> int:
        p1, q1, p2, q2 = self.p1, self.q1, self.p2, self.q2
        return q1 - p1 * p2 * q2 + q2 * p1 + p2 * p1

    @property
    def beta_num(self) -> int:
        """``p1 * beta``, the integer ``q1 - p1*p2*q2``."""
        return self.q1 - self.p1 * self.p2 * self.q2

    @property
    def beta(self) -> Fraction:
        return Fraction(self.beta_num, self.p1)

    @property
    def gamma(self) -> Fraction:
        return Fraction(self.q2, self.p2)

    @property
    def sigma(self) -> int:
        return self.p1 * self.q1

    @property
    def vc_applicable(self) -> bool:
        return self.beta * self.gamma > 0

    def as_tuple(self):
        return (self.p1, self.q1, self.p2, self.q2)

    def to_json(self) -> dict:
        return {
            "p1": self.p1,
            "q1": self.q1,
            "p2": self.p2,
            "q2": self.q2,
            "alpha": self.alpha,
            "beta": str(self.beta),
            "gamma": str(self.gamma),
            "sigma": self.sigma,
            "vc_applicable": self.vc_applicable,
        }


def torus_jones(p: int, q: int, N: int, framing: Framing = Framing.BLACKBOARD) -> LaurentPoly:
    """Colored Jones polynomial of the ``(p, q)`` torus knot, color ``N``."""
    CableParams(p, q, N)  # validation only
    sign = -1 if (q * N) % 2 else 1
    total = ZERO
    for k in range(-N, N + 1, 2):
        e = p * q * k * k + 2 * q * k
        qi = quantum_int(p * k + 1)
        term = qi.shift(e)
        total = total + (-term if (p * k) % 2 else term)
    if sign < 0:
        total = -total
    if framing is Framing.ZERO:
        total = total * framing_change(N, -p * q)
    return total


def _inner_sum(p2: int, q2: int, an: int):
    """Exponent and coefficient arrays of ``sum_k' A^(q2 k'(p2k'+2)) [p2k'+1]``."""
    kp = np.arange(1 - an, an, 2, dtype=np.int64)
    m = p2 * kp + 1
    base = q2 * kp * (p2 * kp + 2)
    am = np.abs(m)
    reps = np.repeat(np.arange(len(kp)), am)
    # position of each monomial inside its quantum integer
    starts = np.cumsum(am) - am
    j = np.arange(reps.size, dtype=np.int64) - starts[reps]
    exps = base[reps] + 2 * (am[reps] - 1) - 4 * j
    coeffs = np.sign(m)[reps]
    return exps, coeffs


def _combine(exps, coeffs) -> LaurentPoly:
    if exps.size == 0:
        return ZERO
    order = np.argsort(exps, kind="stable")
    exps, coeffs = exps[order], coeffs[order]
    cut = np.flatnonzero(np.diff(exps)) + 1
    starts = np.concatenate(([0], cut))
    sums = np.add.reduceat(coeffs, starts)
    keep = sums != 0
    return LaurentPoly._from_clean(
        {int(e): int(c) for e, c in zip(exps[starts][keep], sums[keep])}
    )


def cable_jones(params: IteratedCableParams, N: int) -> LaurentPoly:
    """The double-sum closed form for the ``(p1, q1)`` cable, color ``N``, framing ``p1*q1``."""
    if N < 0:
        raise InvalidParams("N must be nonnegative")
    p1, p2, q2 = params.p1, params.p2, params.q2
    B = params.beta_num
    inner_cache = {}
    all_e, all_c = [], []
    for k in range(-N, N + 1, 2):
        n = p1 * k + 1
        if n == 0:
            continue
        an = abs(n)
        if an not in inner_cache:
            inner_cache[an] = _inner_sum(p2, q2, an)
        exps, coeffs = inner_cache[an]
        # beta*p1*k*(p1*k+2) = B*k*(p1*k+2), an integer
        all_e.append(exps + B * k * (p1 * k + 2))
        all_c.append(coeffs if n > 0 else -coeffs)
    poly = _combine(np.concatenate(all_e), np.concatenate(all_c))
    return -poly if (params.alpha * N) % 2 else poly


def cable_jones_oracle(params: IteratedCableParams, N: int) -> LaurentPoly:
    """Same polynomial as :func:`cable_jones`, by two successive skein cablings.

    Negative ``N`` is accepted and resolved through ``e_N = -e_{-N-2}``.
    """
    sign, N = normalize_index(N)
    if sign == 0:
        return ZERO
    outer = cable_skein(CableParams(params.p1, params.q1, N))
    p2q2 = params.p2 * params.q2
    total = ZERO
    for l, g in outer.coeffs.items():
        companion = cable_skein(CableParams(params.p2, params.q2, l)).bracket_unknot()
        total = total + g * framing_change(l, -p2q2) * companion
    return total if sign > 0 else -total


@dataclass(frozen=True)
class KappaSample:
    N: int
    kappa: ComplexHP
    d_factor: ComplexHP
    method: Method
    precision_bits: int

    def csv_row(self) -> list:
        re, im = float(self.kappa.re), float(self.kappa.im)
        # derived from the rounded parts so a reloaded row serializes identically
        mag = math.hypot(re, im)
        log_over_n = math.log(mag) / self.N if self.N > 0 and mag > 0 else float("nan")
        return [
            self.N,
            repr(re),
            repr(im),
            repr(mag),
            repr(log_over_n),
            self.method.value,
            self.precision_bits,
            f"{self.kappa.err_bound:.3e}",
        ]


def d_factor(params: IteratedCableParams, N: int, precision: int = DEFAULT_PREC) -> ComplexHP:
    """``(-1)^(alpha N) exp((beta+gamma) pi i / (2(N+1)))``."""
    with mpmath.workprec(precision):
        s = params.beta + params.gamma
        z = mpmath.expjpi(mpmath.mpf(s.numerator) / (2 * s.denominator * (N + 1)))
        if (params.alpha * N) % 2:
            z = -z
        return ComplexHP.from_mpc(z, mpmath.ldexp(1, -precision + 2))


def kappa_exact(params: IteratedCableParams, N: int, precision: int = DEFAULT_PREC) -> KappaSample:
    """kappa_N from the exact quotient ``J_N / [N+1]`` evaluated at the root of unity."""
    quotient = lp_divexact(cable_jones(params, N), quantum_int(N + 1))
    value = evaluate(quotient, EvalPoint.root_of_unity(N, precision))
    return KappaSample(N, value, d_factor(params, N, precision), Method.EXACT, precision)


def _analytic_parts(params: IteratedCableParams, N: int):
    p1, p2 = params.p1, params.p2
    weights, counts = kernels.kappa_residues(p1, params.q1, p2, params.q2, N)
    return weights, counts, 4 * p1 * p2 * (N + 1)


def s_at_root(params: IteratedCableParams, N: int, precision: int = DEFAULT_PREC) -> ComplexHP:
    """The double sum S_N(h) at ``h = pi i/(N+1)``; vanishes identically."""
    _, counts, M = _analytic_parts(params, N)
    value, prec = root_sum_converged(counts, M, precision, rel_tol=ANALYTIC_REL_TOL)
    with mpmath.workprec(prec):
        z = value.to_mpc() / 2
    return ComplexHP.from_mpc(z, value.err_bound / 2)


def ds_dh_at_root(params: IteratedCableParams, N: int, precision: int = DEFAULT_PREC):
    """Termwise derivative ``dS_N/dh`` at ``h = pi i/(N+1)``; returns ``(ComplexHP, bits used)``."""
    weights, _, M = _analytic_parts(params, N)
    D = params.p1 * params.p2
    value, prec = root_sum_converged(weights, M, precision, rel_tol=ANALYTIC_REL_TOL)
    with mpmath.workprec(prec):
        z = value.to_mpc() / (4 * D)
    return ComplexHP.from_mpc(z, value.err_bound / (4 * D)), prec


def kappa_analytic(params: IteratedCableParams, N: int, precision: int = DEFAULT_PREC) -> KappaSample:
    """kappa_N from the derivative of the double sum at ``h = pi i/(N+1)``.

    Raises :class:`BetaZero` when ``q1 = p1*p2*q2``; the computed sample is
    attached to the exception as ``.sample``.
    """
    if N < 0:
        raise InvalidParams("N must be nonnegative")
    deriv, prec = ds_dh_at_root(params, N, precision)
    d = d_factor(params, N, prec)
    with mpmath.workprec(prec):
        kappa = -deriv.to_mpc() / ((N + 1) * d.to_mpc())
        err = deriv.err_bound / (N + 1) + abs(kappa) * d.err_bound
    sample = KappaSample(N, ComplexHP.from_mpc(kappa, err), d, Method.ANALYTIC, prec)
    if params.beta_num == 0:
        exc = BetaZero("beta = 0 (q1 = p1*p2*q2): analytic route undefined")
        exc.sample = sample
        raise exc
    return sample
