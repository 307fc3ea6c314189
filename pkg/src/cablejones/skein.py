"""The skein algebra of the solid torus in the basis ``e_n``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import InvalidParams
from .laurent import ONE, ZERO, LaurentPoly, quantum_int


def normalize_index(n: int) -> tuple[int, int]:
    """Rewrite ``e_n`` as ``sign * e_m`` with ``m >= 0``.

    Uses ``e_n = -e_{-n-2}``; ``e_{-1}`` is zero and comes back as ``(0, 0)``.
    """
    if n >= 0:
        return 1, n
    if n == -1:
        return 0, 0
    return -1, -n - 2


class SkeinElement:
    """Finite combination ``sum_n c_n e_n`` with Laurent polynomial coefficients.

    Negative indices are folded into nonnegative ones on construction, so two
    elements are equal exactly when their coefficient maps are.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, LaurentPoly] | None = None):
        acc: dict[int, LaurentPoly] = {}
        for n, c in (coeffs or {}).items():
            _accumulate(acc, n, c)
        self._coeffs = acc

    @classmethod
    def basis(cls, n: int) -> "SkeinElement":
        return cls({n: ONE})

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def coeff(self, n: int) -> LaurentPoly:
        return self._coeffs.get(n, ZERO)

    def indices(self):
        return sorted(self._coeffs)

    def __eq__(self, other):
        if not isinstance(other, SkeinElement):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other):
        acc = dict(self._coeffs)
        for n, c in other._coeffs.items():
            _accumulate(acc, n, c)
        return _from_clean(acc)

    def __neg__(self):
        return _from_clean({n: -c for n, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f: LaurentPoly) -> "SkeinElement":
        acc = {}
        for n, c in self._coeffs.items():
            v = c * f
            if v:
                acc[n] = v
        return _from_clean(acc)

    def __mul__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            return self.scale(other if isinstance(other, LaurentPoly) else LaurentPoly.monomial(0, other))
        acc: dict[int, LaurentPoly] = {}
        for m, a in self._coeffs.items():
            for n, b in other._coeffs.items():
                ab = a * b
                for l in range(abs(m - n), m + n + 1, 2):
                    _accumulate(acc, l, ab)
        return _from_clean(acc)

    __rmul__ = __mul__

    def bracket_unknot(self) -> LaurentPoly:
        """Image under the zero-framed standard embedding into the 3-sphere."""
        total = ZERO
        for n, c in self._coeffs.items():
            total = total + c * unknot_bracket(n)
        return total

    def __repr__(self):
        inner = ", ".join(f"e{n}: {self._coeffs[n]!r}" for n in self.indices())
        return f"SkeinElement({{{inner}}})"

    def to_json(self) -> dict:
        return {"basis": "e", "terms": [[n, self._coeffs[n].to_json()] for n in self.indices()]}

    @classmethod
    def from_json(cls, obj) -> "SkeinElement":
        if obj.get("basis") != "e":
            raise ValueError("unknown basis")
        return cls({int(n): LaurentPoly.from_json(p) for n, p in obj["terms"]})


def _accumulate(acc, n, c):
    sign, m = normalize_index(n)
    if sign == 0 or not c:
        return
    v = acc.get(m, ZERO) + (c if sign > 0 else -c)
    if v:
        acc[m] = v
    else:
        acc.pop(m, None)


def _from_clean(acc):
    obj = SkeinElement.__new__(SkeinElement)
    obj._coeffs = acc
    return obj


def e_product(m: int, n: int) -> SkeinElement:
    """``e_m * e_n`` as the sum of ``e_l`` over admissible triples ``(l, m, n)``."""
    if m < 0 or n < 0:
        raise ValueError("indices must be nonnegative")
    return _from_clean({l: ONE for l in range(abs(m - n), m + n + 1, 2)})


def framing_change(n: int, b: int) -> LaurentPoly:
    """Unit ``(-1)^(b n) A^(b(n^2+2n))`` picked up when the framing of a color-``n`` component moves by ``b``."""
    sign = -1 if (b * n) % 2 else 1
    return LaurentPoly.monomial(b * (n * n + 2 * n), sign)


def unknot_bracket(n: int) -> LaurentPoly:
    """``<e_n>`` of the zero-framed unknot: ``(-1)^n [n+1]``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    q = quantum_int(n + 1)
    return -q if n % 2 else q


@dataclass(frozen=True)
class CableParams:
    """A ``(p, q)`` pattern colored ``N`` around a core colored ``s``."""

    p: int
    q: int
    N: int
    s: int = 0
    sigma: int | None = None

    def __post_init__(self):
        if self.p <= 0:
            raise InvalidParams("p must be positive")
        if math.gcd(self.p, self.q) != 1:
            raise InvalidParams("p,q must be coprime")
        if self.N < 0 or self.s < 0:
            raise InvalidParams("colors must be nonnegative")
        if self.sigma is None:
            object.__setattr__(self, "sigma", self.p * self.q)
        elif self.sigma != self.p * self.q:
            raise InvalidParams("the cabling formulas hold for framing sigma = p*q only")


@dataclass(frozen=True)
class Thm1Params:
    """Division ``q = epsilon*p + beta_res`` with ``0 <= beta_res < p``; ``alpha_prod = p*beta_res``."""

    epsilon: int
    beta_res: int
    alpha_prod: int

    @classmethod
    def from_pq(cls, p: int, q: int) -> "Thm1Params":
        if p <= 0:
            raise InvalidParams("p must be positive")
        eps, beta = divmod(q, p)
        return cls(eps, beta, p * beta)


def cable_skein(params: CableParams) -> SkeinElement:
    """The colored pattern ``<e_N, e_s>`` expanded in the ``e_l`` basis.

    ``(-1)^(qN) sum_{k=-N..N, k+N even} A^(pqk^2 + 2qk(s+1)) e_(pk+s)``.
    """
    p, q, N, s = params.p, params.q, params.N, params.s
    sign = -1 if (q * N) % 2 else 1
    acc: dict[int, LaurentPoly] = {}
    for k in range(-N, N + 1, 2):
        mono = LaurentPoly.monomial(p * q * k * k + 2 * q * k * (s + 1), sign)
        _accumulate(acc, p * k + s, mono)
    return _from_clean(acc)


def cable_coeff(params: CableParams, l: int) -> LaurentPoly:
    """Coefficient of ``e_l`` in :func:`cable_skein`, from the closed form with Kronecker deltas.

    The two delta conditions are solved directly for ``k``.
    """
    if l < 0:
        raise ValueError("l must be nonnegative")
    p, q, N, s = params.p, params.q, params.N, params.s
    t = Thm1Params.from_pq(p, q)
    sign = -1 if (q * N) % 2 else 1
    base = t.epsilon * (-s * s - 2 * s + l * l + 2 * l)
    total = ZERO
    for numer, delta_sign in ((l - s, 1), (-(l + s + 2), -1)):
        if numer % p:
            continue
        k = numer // p
        if abs(k) > N or (k + N) % 2:
            continue
        e = base + t.alpha_prod * k * k + 2 * t.beta_res * k * (s + 1)
        total = total + LaurentPoly.monomial(e, sign * delta_sign)
    return total


def cable_support(params: CableParams) -> list[int]:
    """Basis indices that can carry a nonzero :func:`cable_coeff`."""
    out = set()
    for k in range(-params.N, params.N + 1, 2):
        sign, m = normalize_index(params.p * k + params.s)
        if sign:
            out.add(m)
    return sorted(out)


def cable_from_coefficients(params: CableParams) -> SkeinElement:
    return SkeinElement({l: cable_coeff(params, l) for l in cable_support(params)})
