"""Exact Laurent polynomials in A with integer coefficients."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

import mpmath
import numpy as np

from . import kernels
from .errors import DivisionByZeroPoly, NotDivisible
from .numeric import DEFAULT_PREC, ComplexHP, root_of_unity_sum

# dense kernels are used when both operands fit comfortably in int64
_DENSE_LIMIT = 2 ** 40
_DENSE_MAX_SPAN = 50_000_000


class LaurentPoly:
    """Immutable sparse element of Z[A, 1/A], stored as ``{exponent: coefficient}``.

    Zero coefficients are never stored, so equality is dictionary equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            e, c = int(e), int(c)
            if c:
                v = acc.get(e, 0) + c
                if v:
                    acc[e] = v
                else:
                    del acc[e]
        self._terms = acc
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls._from_clean({int(exponent): int(coeff)} if coeff else {})

    @classmethod
    def from_dense(cls, offset: int, coeffs) -> "LaurentPoly":
        """Build from a dense coefficient array whose entry ``i`` is the coefficient of ``A**(offset+i)``."""
        coeffs = np.asarray(coeffs)
        nz = np.nonzero(coeffs)[0]
        return cls._from_clean({int(offset + i): int(coeffs[i]) for i in nz})

    def to_dense(self, dtype=np.int64):
        """Return ``(offset, array)``; the zero polynomial gives ``(0, empty)``."""
        if not self._terms:
            return 0, np.zeros(0, dtype=dtype)
        lo, hi = self.valuation(), self.degree()
        out = np.zeros(hi - lo + 1, dtype=dtype)
        for e, c in self._terms.items():
            out[e - lo] = c
        return lo, out

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no valuation")
        return min(self._terms)

    def coeff(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def max_abs_coeff(self) -> int:
        return max((abs(c) for c in self._terms.values()), default=0)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return LaurentPoly._from_clean({e: -c for e, c in self._terms.items()})

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        big, small = (self, other) if len(self) >= len(other) else (other, self)
        acc = dict(big._terms)
        for e, c in small._terms.items():
            v = acc.get(e, 0) + c
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return LaurentPoly._from_clean(acc)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return LaurentPoly()
        if len(other) == 1:
            (e2, c2), = other._terms.items()
            return LaurentPoly._from_clean({e + e2: c * c2 for e, c in self._terms.items()})
        if len(self) == 1:
            return other * self
        acc: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPoly._from_clean({e: c for e, c in acc.items() if c})

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by the monomial ``A**k``."""
        return LaurentPoly._from_clean({e + k: c for e, c in self._terms.items()})

    def substitute_power(self, k: int) -> "LaurentPoly":
        """Return ``f(A**k)``."""
        if k == 0:
            return LaurentPoly.monomial(0, sum(self._terms.values()))
        return LaurentPoly._from_clean({e * k: c for e, c in self._terms.items()})

    def __repr__(self):
        if not self._terms:
            return "LaurentPoly(0)"
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            parts.append(f"{c:+d}*A^{e}")
        return "LaurentPoly(" + " ".join(parts) + ")"

    def to_json(self) -> dict:
        return {"terms": [[e, str(self._terms[e])] for e in sorted(self._terms)]}

    @classmethod
    def from_json(cls, obj) -> "LaurentPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls((int(e), int(c)) for e, c in obj["terms"])


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, np.integer)):
        return LaurentPoly.monomial(0, int(x))
    return NotImplemented


ONE = LaurentPoly.monomial(0, 1)
ZERO = LaurentPoly()


def quantum_int(m: int) -> LaurentPoly:
    """The quantum integer ``[m] = (A^(2m) - A^(-2m)) / (A^2 - A^(-2))``."""
    if m == 0:
        return ZERO
    sign = 1 if m > 0 else -1
    m = abs(m)
    return LaurentPoly._from_clean({2 * (m - 1) - 4 * j: sign for j in range(m)})


def lp_divexact(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Exact quotient ``f / g`` in Z[A, 1/A].

    Long division from the top exponent. Raises :class:`NotDivisible` on the
    first step whose leading coefficient does not divide, or when a remainder
    survives.
    """
    if g.is_zero():
        raise DivisionByZeroPoly("division by the zero polynomial")
    if f.is_zero():
        return ZERO
    flo, glo = f.valuation(), g.valuation()
    span_f = f.degree() - flo
    span_g = g.degree() - glo
    if span_f < span_g:
        raise NotDivisible("divisor has larger span than dividend")
    if (
        f.max_abs_coeff() < _DENSE_LIMIT
        and g.max_abs_coeff() < _DENSE_LIMIT
        and span_f < _DENSE_MAX_SPAN
    ):
        _, fd = f.to_dense()
        _, gd = g.to_dense()
        try:
            q = kernels.divexact_dense(fd, gd)
        except ArithmeticError as exc:
            if isinstance(exc, OverflowError):
                return _divexact_sparse(f, g)
            raise NotDivisible(str(exc)) from None
        return LaurentPoly.from_dense(flo - glo, q)
    return _divexact_sparse(f, g)


def _divexact_sparse(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    rem = dict(f._terms)
    gt = g.degree()
    glead = g.coeff(gt)
    gspan = gt - g.valuation()
    gitems = list(g.items())
    floor = f.valuation() + gspan
    quotient = {}
    while rem:
        top = max(rem)
        if top < floor:
            raise NotDivisible("nonzero remainder")
        c = rem[top]
        if c % glead:
            raise NotDivisible(f"leading coefficient {c} not divisible by {glead}")
        qc = c // glead
        shift = top - gt
        quotient[shift] = qc
        for e, gc in gitems:
            k = e + shift
            v = rem.get(k, 0) - qc * gc
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return LaurentPoly._from_clean(quotient)


@dataclass(frozen=True)
class EvalPoint:
    """Where to evaluate: ``A = exp(pi*i/(2(N+1)))`` or ``A = exp(h/2)``.

    Build with :meth:`root_of_unity` or :meth:`general`.
    """

    N: int | None = None
    h: complex | None = None
    precision: int = DEFAULT_PREC

    @classmethod
    def root_of_unity(cls, N: int, precision: int = DEFAULT_PREC):
        if N < 0:
            raise ValueError("N must be nonnegative")
        return cls(N=int(N), precision=precision)

    @classmethod
    def general(cls, h, precision: int = DEFAULT_PREC):
        return cls(h=h, precision=precision)

    @property
    def is_root_of_unity(self):
        return self.N is not None


def residue_map(f: LaurentPoly, N: int) -> dict:
    """Coefficients of ``f`` combined by exponent modulo ``4(N+1)``, zeros dropped."""
    M = 4 * (N + 1)
    acc: dict[int, int] = {}
    for e, c in f.items():
        r = e % M
        acc[r] = acc.get(r, 0) + c
    return {r: c for r, c in acc.items() if c}


def evaluate(f: LaurentPoly, at: EvalPoint, rel_tol: float = 1e-12) -> ComplexHP:
    """Evaluate ``f`` at a root of unity (exactly reduced) or at ``A = exp(h/2)``."""
    if at.is_root_of_unity:
        M = 4 * (at.N + 1)
        coeffs = np.zeros(M, dtype=object)
        for r, c in residue_map(f, at.N).items():
            coeffs[r] = c
        prec = at.precision
        value = root_of_unity_sum(coeffs, M, prec)
        while True:
            finer = root_of_unity_sum(coeffs, M, 2 * prec)
            diff = abs(finer.to_mpc() - value.to_mpc())
            if diff <= rel_tol * abs(finer.to_mpc()) + value.err_bound + finer.err_bound or prec >= 4096:
                return value
            prec *= 2
            value = finer
    return _evaluate_general(f, at.h, at.precision)


def _evaluate_general(f: LaurentPoly, h, prec: int) -> ComplexHP:
    with mpmath.workprec(prec):
        half_h = mpmath.mpc(h) / 2
        total = mpmath.mpc(0)
        mag = mpmath.mpf(0)
        for e, c in f.items():
            term = c * mpmath.exp(e * half_h)
            total += term
            mag += abs(term)
        err = float(mag * (len(f) + 4) * mpmath.ldexp(1, -prec + 1))
        return ComplexHP(total.real, total.imag, err)
