"""Exact arithmetic in Z[ζ_N], additive characters and character sums.

Additive characters of finite fields of characteristic p take values in
Z[ζ_p]; the Heisenberg representations in characteristic 2 also need ζ_4, so
the ring is parameterised by N.
"""

from __future__ import annotations

import cmath
import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gf_core import GF, FieldElem, FieldError, get_field, relative_trace_vec


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(N: int) -> tuple[int, ...]:
    """Coefficients (low -> high) of the N-th cyclotomic polynomial."""
    num = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            num = _exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        for j, bc in enumerate(b):
            a[i + j] -= c * bc
    if any(a):  # pragma: no cover
        raise ArithmeticError("inexact division")
    return out


def _reduce(coeffs: Sequence[int], N: int) -> tuple[int, ...]:
    phi = cyclotomic_poly(N)
    d = len(phi) - 1
    a = [0] * N
    for i, c in enumerate(coeffs):
        a[i % N] += c
    for i in range(N - 1, d - 1, -1):
        c = a[i]
        if c:
            for j, pc in enumerate(phi):
                a[i - d + j] -= c * pc
    return tuple(a[:d])


@dataclass(frozen=True)
class CycInt:
    """Element of Z[ζ_N] on the power basis 1, ζ, …, ζ^{φ(N)-1}."""

    N: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_powers(cls, N: int, powers: Sequence[int]) -> "CycInt":
        """Σ powers[i] ζ^i for a length-N (or shorter) integer vector."""
        return cls(N, _reduce(powers, N))

    @classmethod
    def integer(cls, N: int, n: int) -> "CycInt":
        return cls.from_powers(N, [n])

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CycInt":
        v = [0] * N
        v[k % N] = 1
        return cls.from_powers(N, v)

    def _coerce(self, other) -> "CycInt":
        if isinstance(other, CycInt):
            if other.N == self.N:
                return other
            return other.promote(self.N) if self.N % other.N == 0 else NotImplemented
        if isinstance(other, int):
            return CycInt.integer(self.N, other)
        return NotImplemented

    def promote(self, M: int) -> "CycInt":
        """View in Z[ζ_M] for N | M."""
        if M % self.N:
            raise ValueError("cannot promote")
        s = M // self.N
        v = [0] * M
        for i, c in enumerate(self.coeffs):
            v[i * s] += c
        return CycInt.from_powers(M, v)

    def __add__(self, other):
        if isinstance(other, CycInt) and other.N != self.N and other.N % self.N == 0:
            return self.promote(other.N) + other
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.N, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.N, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CycInt) and other.N != self.N and other.N % self.N == 0:
            return self.promote(other.N) * other
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prod = [0] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return CycInt.from_powers(self.N, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        result, base = CycInt.integer(self.N, 1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> "CycInt":
        v = [0] * self.N
        for i, c in enumerate(self.coeffs):
            v[(-i) % self.N] += c
        return CycInt.from_powers(self.N, v)

    def galois(self, a: int) -> "CycInt":
        """The automorphism ζ -> ζ^a (gcd(a, N) = 1)."""
        v = [0] * self.N
        for i, c in enumerate(self.coeffs):
            v[(i * a) % self.N] += c
        return CycInt.from_powers(self.N, v)

    def is_integer(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0] if self.coeffs else 0

    def __complex__(self) -> complex:
        w = cmath.exp(2j * cmath.pi / self.N)
        return sum(c * w**i for i, c in enumerate(self.coeffs))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CycInt.integer(self.N, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        if other.N != self.N:
            M = self.N * other.N
            return self.promote(M).coeffs == other.promote(M).coeffs
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.N, self.coeffs))

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}{mono}"
            parts.append(("-" if c < 0 else "+") + s)
        if not parts:
            return "0"
        out = "".join(parts)
        return out[1:] if out[0] == "+" else out


def cyc_sum(values, N: int) -> CycInt:
    acc = CycInt.integer(N, 0)
    for v in values:
        acc = acc + v
    return acc


# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def absolute_trace_table(p: int, k: int) -> np.ndarray:
    """Tr_{F_{p^k}/F_p} for every element, as integers in 0..p-1."""
    return relative_trace_vec(p, 1, k, np.arange(p**k, dtype=np.int64))


@dataclass(frozen=True)
class AdditiveChar:
    """ψ_a(x) = ζ_p^{Tr(a x)} on the field F."""

    field: GF
    a: int = 1

    @property
    def p(self) -> int:
        return self.field.p

    def is_trivial(self) -> bool:
        return self.a == 0

    def exponent(self, x: int) -> int:
        return int(absolute_trace_table(self.p, self.field.k)[self.field.mul(self.a, x)])

    def vexponent(self, x) -> np.ndarray:
        return absolute_trace_table(self.p, self.field.k)[self.field.vmul(self.a, x)]

    def __call__(self, x: int) -> CycInt:
        return CycInt.zeta(self.p, self.exponent(x))

    def from_histogram(self, hist: np.ndarray) -> CycInt:
        """Σ_t hist[t] ψ(t) for a histogram indexed by field elements."""
        powers = [0] * self.p
        exps = self.vexponent(np.arange(self.field.order))
        for t, c in enumerate(hist):
            if c:
                powers[int(exps[t])] += int(c)
        return CycInt.from_powers(self.p, powers)


def characters(F: GF) -> list[AdditiveChar]:
    return [AdditiveChar(F, a) for a in range(F.order)]


def psi_eval(chi: AdditiveChar, x: FieldElem) -> CycInt:
    if x.field is not chi.field:
        raise FieldError("character and element live at different levels")
    return chi(x.value)


def gauss_sum(chi: AdditiveChar) -> CycInt:
    F = chi.field
    xs = F.elements()
    hist = np.bincount(F.vmul(xs, xs), minlength=F.order)
    return chi.from_histogram(hist)


class BudgetExceeded(RuntimeError):
    pass


def trace_histogram(P, e: int, budget: float = 1e7, chunk: int = 1 << 20) -> np.ndarray:
    """Histogram over F_q of Tr_{F_{q^e}/F_q} P(x), x ∈ F_{q^e}^m.

    ``P`` is a ``Poly`` over F_q in m variables.
    """
    base = P.field
    p, f = base.p, base.k
    big = get_field(p, f * e)
    m = P.nvars
    total = big.order**m
    if total > budget:
        raise BudgetExceeded(f"{total} points exceed budget {budget:g}")
    Pe = P.change_field(big)
    hist = np.zeros(base.order, dtype=np.int64)
    for xs in iter_points(big.order, m, chunk):
        vals = Pe.evaluate(xs)
        tr = relative_trace_vec(p, f, f * e, vals)
        hist += np.bincount(tr, minlength=base.order)
    return hist


def iter_points(Q: int, m: int, chunk: int = 1 << 20):
    """Yield coordinate arrays covering F^m (elements 0..Q-1) in chunks."""
    total = Q**m
    if m == 0:
        yield []
        return
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        coords = []
        for _ in range(m):
            idx, r = np.divmod(idx, Q)
            coords.append(r)
        yield coords


def exp_sum(P, chi: AdditiveChar, e: int = 1, budget: float = 1e7) -> CycInt:
    """Σ_{x ∈ F_{q^e}^m} ψ(Tr_{F_{q^e}/F_q} P(x)) with ψ a character of F_q."""
    if chi.field is not P.field:
        raise FieldError("character must be defined on the coefficient field")
    return chi.from_histogram(trace_histogram(P, e, budget))
