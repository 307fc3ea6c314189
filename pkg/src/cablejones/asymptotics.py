"""Large-N scans of kappa_N, growth-rate checks and residue-class power-law fits."""

from __future__ import annotations

import csv
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InsufficientData, InvalidParams
from .jones import (
    IteratedCableParams,
    KappaSample,
    Method,
    d_factor,
    kappa_analytic,
    kappa_exact,
)
from .numeric import DEFAULT_PREC, ComplexHP

CSV_HEADER = ["N", "re_kappa", "im_kappa", "abs_kappa", "log_abs_over_N", "method", "precision_bits", "err_bound"]
# below this N the exact quotient is cheap; above it the root-of-unity residue sum is used
CROSSOVER_N = 40
PERIOD_CAP = 400
MIN_PER_CLASS = 10


class ApplicabilityWarning(UserWarning):
    pass


def d_n_factor(params: IteratedCableParams, N: int, precision: int = DEFAULT_PREC) -> ComplexHP:
    """``(-1)^(alpha N) exp((beta+gamma) pi i/(2(N+1)))``, the unit relating kappa_N to dS_N/dh."""
    return d_factor(params, N, precision)


def choose_method(params: IteratedCableParams, N: int, policy: str = "auto", crossover: int = CROSSOVER_N) -> Method:
    if policy == "exact":
        return Method.EXACT
    if policy == "analytic":
        return Method.ANALYTIC
    if policy != "auto":
        raise InvalidParams(f"unknown method policy {policy!r}")
    # the analytic route is undefined at beta = 0
    if N < crossover or params.beta_num == 0:
        return Method.EXACT
    return Method.ANALYTIC


def compute_sample(params: IteratedCableParams, N: int, policy: str = "auto", precision: int = DEFAULT_PREC,
                   crossover: int = CROSSOVER_N) -> KappaSample:
    method = choose_method(params, N, policy, crossover)
    if method is Method.EXACT:
        return kappa_exact(params, N, precision)
    return kappa_analytic(params, N, precision)


def _worker(args):
    tup, N, policy, precision, crossover = args
    s = compute_sample(IteratedCableParams(*tup), N, policy, precision, crossover)
    return (N, s.kappa.re, s.kappa.im, s.kappa.err_bound, s.d_factor.re, s.d_factor.im,
            s.d_factor.err_bound, s.method.value, s.precision_bits)


def _rebuild(row) -> KappaSample:
    N, kre, kim, kerr, dre, dim, derr, method, bits = row
    return KappaSample(N, ComplexHP(kre, kim, kerr), ComplexHP(dre, dim, derr), Method(method), bits)


@dataclass
class ScanTable:
    """kappa_N samples for one knot, strictly increasing in N."""

    params: IteratedCableParams | None
    samples: list = field(default_factory=list)
    policy: dict = field(default_factory=dict)

    def __post_init__(self):
        Ns = [s.N for s in self.samples]
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise ValueError("samples must be strictly increasing in N")

    @property
    def n_range(self) -> tuple:
        if not self.samples:
            return ()
        return (self.samples[0].N, self.samples[-1].N)

    def __len__(self):
        return len(self.samples)

    def Ns(self) -> np.ndarray:
        return np.array([s.N for s in self.samples], dtype=np.int64)

    def kappas(self) -> np.ndarray:
        return np.array([complex(s.kappa) for s in self.samples])

    def window(self, lo: int, hi: int) -> "ScanTable":
        return ScanTable(self.params, [s for s in self.samples if lo <= s.N <= hi], dict(self.policy))

    def sidecar(self) -> dict:
        return {
            "params": None if self.params is None else self.params.to_json(),
            "policy": self.policy,
            "n_range": list(self.n_range),
            "columns": CSV_HEADER,
        }

    def write(self, path) -> None:
        path = Path(path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        with open(tmp, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for s in self.samples:
                w.writerow(s.csv_row())
        os.replace(tmp, path)
        write_sidecar(path, self.sidecar())

    @classmethod
    def read(cls, path, params: IteratedCableParams | None = None) -> "ScanTable":
        """Load a table written by :meth:`write` or by an incremental scan.

        Raises ``ValueError`` on a malformed file. The JSON sidecar, when
        present, supplies the knot parameters.
        """
        path = Path(path)
        policy = {}
        side = sidecar_path(path)
        if side.exists():
            meta = json.loads(side.read_text())
            policy = meta.get("policy", {})
            p = meta.get("params")
            if params is None and p is not None:
                params = IteratedCableParams(p["p1"], p["q1"], p["p2"], p["q2"])
        samples = []
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if rows and rows[0][: len(CSV_HEADER)] != CSV_HEADER:
            raise ValueError("unexpected CSV header")
        for i, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            try:
                N = int(row[0])
                kappa = ComplexHP(float(row[1]), float(row[2]), float(row[7]))
                method = Method(row[5])
                bits = int(row[6])
            except (ValueError, IndexError) as exc:
                raise ValueError(f"line {i}: {exc}") from None
            d = d_factor(params, N, bits) if params is not None else ComplexHP(1.0, 0.0, 0.0)
            samples.append(KappaSample(N, kappa, d, method, bits))
        return cls(params, samples, policy)


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_sidecar(path, meta: dict) -> None:
    side = sidecar_path(path)
    tmp = side.with_name(side.name + ".tmp")
    tmp.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    os.replace(tmp, side)


def scan(
    params: IteratedCableParams,
    N_min: int,
    N_max: int,
    stride: int = 1,
    method: str = "auto",
    precision: int = DEFAULT_PREC,
    jobs: int = 1,
    out=None,
    resume: bool = False,
    crossover: int = CROSSOVER_N,
) -> ScanTable:
    """kappa_N for ``N = N_min, N_min + stride, ..., <= N_max``.

    With ``out`` the CSV is appended row by row, so an interrupted scan can be
    continued with ``resume=True``; rows already on disk are not recomputed.
    """
    if N_min < 0 or N_max < N_min or stride < 1:
        raise InvalidParams("need 0 <= N_min <= N_max and stride >= 1")
    choose_method(params, N_min, method, crossover)
    if not params.vc_applicable:
        warnings.warn("hypothesis beta*gamma>0 not satisfied", ApplicabilityWarning, stacklevel=2)
    policy = {"method": method, "precision_bits": precision, "crossover": crossover, "stride": stride}
    Ns = list(range(N_min, N_max + 1, stride))
    done = {}
    writer = None
    if out is not None:
        out = Path(out)
        if resume and out.exists():
            old = ScanTable.read(out)
            if old.params is not None and old.params != params:
                raise InvalidParams("existing scan was made for different parameters")
            done = {s.N: s for s in ScanTable.read(out, params).samples}
        elif out.exists():
            out.unlink()
        write_sidecar(out, ScanTable(params, [], policy).sidecar())
        fresh = not out.exists() or out.stat().st_size == 0
        writer = open(out, "a", newline="")
        if fresh:
            csv.writer(writer, lineterminator="\n").writerow(CSV_HEADER)
            writer.flush()
    todo = [N for N in Ns if N not in done]
    tasks = [(params.as_tuple(), N, method, precision, crossover) for N in todo]
    try:
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = pool.map(_worker, tasks, chunksize=max(1, len(tasks) // (8 * jobs)))
                _collect(results, done, writer)
        else:
            _collect(map(_worker, tasks), done, writer)
    finally:
        if writer is not None:
            writer.close()
    samples = [done[N] for N in Ns]
    table = ScanTable(params, samples, policy)
    if out is not None:
        # rewrite sorted once complete; the incremental file may be out of order after a resume
        table.write(out)
    return table


def _collect(results, done, writer):
    w = csv.writer(writer, lineterminator="\n") if writer is not None else None
    for row in results:
        s = _rebuild(row)
        done[s.N] = s
        if w is not None:
            w.writerow(s.csv_row())
            writer.flush()


def _log_abs(table: ScanTable) -> np.ndarray:
    mags = np.abs(table.kappas())
    if np.any(mags == 0):
        raise InsufficientData("kappa_N vanishes at some N; log|kappa_N| undefined")
    return np.log(mags)


def log_slope(table: ScanTable, lo: int, hi: int) -> float:
    """Least-squares slope of ``log|kappa_N|`` against ``N`` on ``[lo, hi]``."""
    sub = table.window(lo, hi)
    if len(sub) < 3:
        raise InsufficientData(f"fewer than 3 samples in [{lo}, {hi}]")
    return float(np.polyfit(sub.Ns().astype(float), _log_abs(sub), 1)[0])


def envelope_max(table: ScanTable, lo: int, hi: int) -> float:
    """``max |log|kappa_N|| / N`` over ``[lo, hi]`` (``N >= 1``)."""
    sub = table.window(max(lo, 1), hi)
    if len(sub) == 0:
        raise InsufficientData(f"no samples in [{lo}, {hi}]")
    return float(np.max(np.abs(_log_abs(sub)) / sub.Ns()))


def vc_limit_check(table: ScanTable) -> tuple:
    """``(limit_estimate, decreasing_envelope)`` for the growth rate of ``log|kappa_N|``.

    The estimate is the regression slope over the top half of the N range;
    the envelope test compares ``max |log|kappa_N||/N`` over the last and the
    first quarter of the range.
    """
    sub = table.window(10, 10 ** 12)
    if len(sub) < 20:
        raise InsufficientData("need at least 20 samples with N >= 10")
    lo, hi = sub.n_range
    span = hi - lo
    slope = log_slope(sub, lo + span // 2, hi)
    first = envelope_max(sub, lo, lo + span // 4)
    last = envelope_max(sub, hi - span // 4, hi)
    return slope, bool(last < first)


def period_candidates(params: IteratedCableParams | None, cap: int = PERIOD_CAP) -> list:
    """Divisors of ``4 lcm(p1 q1, p1 p2 q2, q1)`` up to ``cap``, plus the exact phase period."""
    if params is None:
        return list(range(1, 13))
    base = 4 * math.lcm(abs(params.p1 * params.q1), abs(params.p1 * params.p2 * params.q2), abs(params.q1))
    out = {d for d in range(1, min(base, cap) + 1) if base % d == 0}
    if params.vc_applicable:
        from .contour.saddle import SaddleData

        out.add(SaddleData(params).period_candidate())
    return sorted(out)


@dataclass
class ClassFit:
    residue: int
    count: int
    alpha_hat: float
    c_hat: complex
    c_hat_raw: complex
    r_squared: float

    def to_json(self) -> dict:
        return {
            "residue": self.residue,
            "count": self.count,
            "alpha_hat": self.alpha_hat,
            "c_hat": [self.c_hat.real, self.c_hat.imag],
            "c_hat_raw": [self.c_hat_raw.real, self.c_hat_raw.imag],
            "r_squared": self.r_squared,
        }


@dataclass
class FitReport:
    period_candidate: int
    per_class: list
    slope_logkappa_over_N: float
    vc_limit_estimate: float
    candidate_scores: dict = field(default_factory=dict)
    n_range: tuple = ()
    robust: bool = False

    @property
    def min_r_squared(self) -> float:
        return min(c.r_squared for c in self.per_class)

    def to_json(self) -> dict:
        return {
            "period_candidate": self.period_candidate,
            "per_class": [c.to_json() for c in self.per_class],
            "min_r_squared": self.min_r_squared,
            "slope_logkappa_over_N": self.slope_logkappa_over_N,
            "vc_limit_estimate": self.vc_limit_estimate,
            "candidate_scores": {str(k): v for k, v in sorted(self.candidate_scores.items())},
            "n_range": list(self.n_range),
            "robust": self.robust,
        }

    def summary(self) -> str:
        alphas = [c.alpha_hat for c in self.per_class]
        return (
            f"T={self.period_candidate} classes={len(self.per_class)} "
            f"min_r2={self.min_r_squared:.6f} alpha_hat in [{min(alphas):.4f}, {max(alphas):.4f}] "
            f"vc_limit_estimate={self.vc_limit_estimate:.3e}"
        )


def _line_fit(x, y, robust):
    if robust:
        # Theil-Sen: median of pairwise slopes
        i, j = np.triu_indices(len(x), 1)
        slope = float(np.median((y[j] - y[i]) / (x[j] - x[i])))
        icpt = float(np.median(y - slope * x))
    else:
        slope, icpt = (float(v) for v in np.polyfit(x, y, 1))
    resid = y - (icpt + slope * x)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    scale = max(1.0, float(np.abs(y).max())) ** 2 * len(y)
    if ss_tot <= 1e-24 * scale:
        r2 = 1.0 if ss_res <= 1e-24 * scale else 0.0
    else:
        r2 = max(0.0, 1.0 - ss_res / ss_tot)
    return slope, icpt, r2


def _fit_classes(Ns, kappas, dks, T, robust):
    x_all = np.log(Ns + 1.0)
    y_all = np.log(np.abs(kappas))
    fits = []
    for r in range(T):
        sel = Ns % T == r
        x, y = x_all[sel], y_all[sel]
        slope, icpt, r2 = _line_fit(x, y, robust)
        alpha = -slope
        scale = (Ns[sel] + 1.0) ** alpha
        c_raw = complex(np.mean(kappas[sel] * scale))
        c_norm = complex(np.mean(dks[sel] * kappas[sel] * scale))
        fits.append(ClassFit(r, int(sel.sum()), alpha, c_norm, c_raw, r2))
    return fits


def residue_class_fit(
    table: ScanTable,
    T_candidates=None,
    robust: bool = False,
    min_per_class: int = MIN_PER_CLASS,
) -> FitReport:
    """Fit ``log|d_N kappa_N| = log|c_r| - alpha_r log(N+1)`` separately on each class ``N = r mod T``.

    Among the candidates with at least ``min_per_class`` samples per class
    the period with the largest minimum ``r^2`` wins; ties go to the smaller
    period. ``c_hat`` is the class mean of ``d_N kappa_N (N+1)^alpha_hat``.
    """
    if len(table) == 0:
        raise InsufficientData("empty table")
    Ns = table.Ns()
    kappas = table.kappas()
    if np.any(kappas == 0):
        raise InsufficientData("kappa_N vanishes at some N")
    dks = np.array([complex(s.d_factor) for s in table.samples])
    cands = list(T_candidates) if T_candidates is not None else period_candidates(table.params)
    scores = {}
    best = None
    for T in cands:
        if T < 1:
            raise ValueError("period candidates must be positive")
        counts = np.bincount(Ns % T, minlength=T)
        if counts.min() < min_per_class:
            continue
        fits = _fit_classes(Ns, kappas, dks, T, robust)
        score = min(f.r_squared for f in fits)
        scores[T] = score
        if best is None or score > best[0] + 1e-12 or (abs(score - best[0]) <= 1e-12 and T < best[1]):
            best = (score, T, fits)
    if best is None:
        raise InsufficientData(f"no period candidate leaves {min_per_class} samples in every class")
    try:
        vc = vc_limit_check(table)[0]
    except InsufficientData:
        vc = float("nan")
    sel = Ns >= 1
    slope_over_n = (
        float(np.polyfit(Ns[sel].astype(float), np.log(np.abs(kappas[sel])) / Ns[sel], 1)[0])
        if sel.sum() >= 3 else float("nan")
    )
    return FitReport(best[1], best[2], slope_over_n, vc, scores, table.n_range, robust)


def synthetic_table(fn, N_min: int, N_max: int, params: IteratedCableParams | None = None) -> ScanTable:
    """Table of planted values ``fn(N)``; ``d_N`` is taken as 1 unless ``params`` is given."""
    samples = []
    for N in range(N_min, N_max + 1):
        v = complex(fn(N))
        d = d_factor(params, N) if params is not None else ComplexHP(1.0, 0.0, 0.0)
        samples.append(KappaSample(N, ComplexHP(v.real, v.imag, 0.0), d, Method.SYNTHETIC, 53))
    return ScanTable(params, samples, {"method": "synthetic"})


@dataclass(frozen=True)
class PlantedSignal:
    """``coeffs[N mod T] * (N+1)^(-alpha)``."""

    alpha: float
    coeffs: tuple

    @property
    def period(self) -> int:
        return len(self.coeffs)

    def __call__(self, N: int) -> complex:
        return self.coeffs[N % self.period] * (N + 1) ** -self.alpha


CALIBRATION_SIGNALS = (
    PlantedSignal(1.5, (8, 2)),
    PlantedSignal(0.0, (1, 2j, -1, -0.5j)),
    PlantedSignal(3.0, (1.0, 2.5, 0.5)),
    PlantedSignal(-2.0, (1 + 1j, 3, 0.25j, 2, 5, -1)),
    PlantedSignal(0.5, tuple(1 + 0.5 * math.sin(2 * math.pi * r / 12) for r in range(12))),
)


def calibration_suite(N_min: int = 100, N_max: int = 800, candidates=range(1, 25)) -> list:
    """Fit each planted signal; report recovered period and exponent spread."""
    out = []
    for sig in CALIBRATION_SIGNALS:
        rep = residue_class_fit(synthetic_table(sig, N_min, N_max), list(candidates))
        alphas = [c.alpha_hat for c in rep.per_class]
        out.append(
            {
                "planted_alpha": sig.alpha,
                "planted_period": sig.period,
                "period": rep.period_candidate,
                "alpha_error": max(abs(a - sig.alpha) for a in alphas),
                "min_r_squared": rep.min_r_squared,
                "ok": rep.period_candidate == sig.period and max(abs(a - sig.alpha) for a in alphas) < 0.02,
            }
        )
    return out
