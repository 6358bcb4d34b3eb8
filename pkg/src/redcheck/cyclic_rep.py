"""The group algebra k[Z/n], its isotypic submodules and forms on it.

Coordinates: a vector y = (y_1, …, y_n) stands for Σ_j y_j γ^j, so array index
j-1 carries the coefficient of γ^j.  Every submodule below is shift-stable, so
this labelling does not affect which subspaces arise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import linalg
from .gf_core import GF, embedding, get_field, jacobi_symbol, restriction
from .qform import FormInvariants, QuadForm, invariants


def _check(n: int, F: GF) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n % F.p == 0:
        raise ValueError(f"p = {F.p} divides n = {n}")


def splitting_degree(n: int, q: int) -> int:
    """Smallest s with n | q^s - 1."""
    s, t = 1, q % n
    while (t - 1) % n:
        t = t * q % n
        s += 1
    return s


def char_orbits(n: int, F: GF) -> list[tuple[int, ...]]:
    """Orbits of the exponents c ∈ Z/n (χ_c(γ) = ω^c) under c -> q c."""
    _check(n, F)
    seen, out = set(), []
    for c in range(n):
        if c in seen:
            continue
        orb, x = [], c
        while x not in orb:
            orb.append(x)
            x = x * F.order % n
        seen.update(orb)
        out.append(tuple(orb))
    return out


@dataclass(frozen=True)
class SubmoduleBasis:
    n: int
    field: GF
    label: str
    characters: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> linalg.Matrix:
        """n x dim matrix whose columns are the basis vectors."""
        return linalg.from_columns([list(b) for b in self.basis]) if self.basis else []

    def contains(self, v) -> bool:
        F = self.field
        return linalg.rank(F, [list(b) for b in self.basis] + [list(v)]) == self.dim


def shift(v, k: int = 1) -> list[int]:
    """Multiplication by γ^k: coefficient of γ^j moves to γ^{j+k}."""
    n = len(v)
    return [v[(i - k) % n] for i in range(n)]


def idempotent(n: int, F: GF, chars) -> list[int]:
    """Σ_{c ∈ chars} e_{χ_c} as a vector over F (chars must be Frobenius stable)."""
    _check(n, F)
    s = splitting_degree(n, F.order)
    big = get_field(F.p, F.k * s)
    omega = big.pow(big.generator, (big.order - 1) // n)
    ninv = big.inv(n % F.p)
    out = []
    for j in range(1, n + 1):
        acc = 0
        for c in chars:
            acc = big.add(acc, big.pow(omega, -c * j))
        out.append(big.mul(ninv, acc))
    res = restriction(F.p, F.k, F.k * s)
    vals = [int(res[x]) for x in out]
    if min(vals, default=0) < 0:
        raise ArithmeticError("idempotent did not descend to the base field")
    return vals


def span_of_shifts(n: int, F: GF, v: list[int]) -> list[list[int]]:
    R, piv = linalg.row_reduce(F, [shift(v, k) for k in range(n)])
    return [row for row in R[: len(piv)]]


def submodule(n: int, F: GF, a: int, b: int | None = None) -> SubmoduleBasis:
    """I(a, b) = ⊕ V_χ over χ^b = 1, χ^a ≠ 1 (b defaults to n)."""
    b = n if b is None else b
    if n % b or b % a:
        raise ValueError("need a | b | n")
    chars = tuple(c for c in range(n) if (b * c) % n == 0 and (a * c) % n)
    return _from_chars(n, F, f"I({a},{b})", chars)


def invariants_module(n: int, F: GF, a: int) -> SubmoduleBasis:
    """k[Γ/Γ^a] = ⊕_{χ^a = 1} V_χ."""
    if n % a:
        raise ValueError("need a | n")
    chars = tuple(c for c in range(n) if (a * c) % n == 0)
    return _from_chars(n, F, f"k[G/G^{a}]", chars)


def isotypic(n: int, F: GF, orbit) -> SubmoduleBasis:
    return _from_chars(n, F, f"V{tuple(orbit)}", tuple(orbit))


def _from_chars(n: int, F: GF, label: str, chars) -> SubmoduleBasis:
    _check(n, F)
    if not chars:
        return SubmoduleBasis(n, F, label, (), ())
    e = idempotent(n, F, chars)
    basis = span_of_shifts(n, F, e)
    if len(basis) != len(chars):  # pragma: no cover
        raise ArithmeticError("submodule dimension differs from character count")
    return SubmoduleBasis(n, F, label, tuple(chars), tuple(tuple(v) for v in basis))


# ---------------------------------------------------------------------------
# forms


def q_gamma(n: int, F: GF) -> QuadForm:
    """Q_Γ(x) = ε(x x̄) = Σ x_i²."""
    _check(n, F)
    if F.p == 2:
        raise ValueError("Q_Γ is used in odd characteristic")
    return QuadForm.from_dict(F, n, {(i, i): 1 for i in range(n)})


def q_nu_form(n: int, nu: int, F: GF) -> QuadForm:
    """The form Q_ν on k^n for 1 <= ν < 2n."""
    if not 1 <= nu < 2 * n:
        raise ValueError("ν must satisfy 1 <= ν < 2n")
    minus = F.negate(1)
    coeffs: dict[tuple[int, int], int] = {}
    if nu % 2:
        mu = (nu - 1) // 2
        if nu < n:
            coeffs = {(i, j): minus for i in range(n) for j in range(i + 1, n) if mu < j - i < n - mu}
        else:
            coeffs = {(i, j): 1 for i in range(n) for j in range(i + 1, n) if n - mu <= j - i <= mu}
    else:
        mu = nu // 2
        if nu < n:
            coeffs = {(i, j): minus for i in range(n) for j in range(i + 1, n) if mu < j - i < n - mu}
        else:
            coeffs = {(i, j): minus for i in range(n) for j in range(i + 1, n) if n - mu < j - i < mu}
    return QuadForm.from_dict(F, n, coeffs)


def augmentation_kernel_matrix(n: int, F: GF) -> linalg.Matrix:
    """Columns e_j - e_1 (j = 2..n): the substitution y_1 = -(y_2 + … + y_n)."""
    cols = []
    minus = F.negate(1)
    for j in range(1, n):
        v = [0] * n
        v[0] = minus
        v[j] = 1
        cols.append(v)
    return linalg.from_columns(cols) if cols else []


def restrict_to_sum_zero(Q: QuadForm) -> QuadForm:
    return Q.compose(augmentation_kernel_matrix(Q.dim, Q.field))


def restrict(Q: QuadForm, sub: SubmoduleBasis) -> QuadForm:
    if sub.dim == 0:
        return QuadForm.zero(Q.field, 0)
    return Q.compose(sub.matrix())


@dataclass(frozen=True)
class RestrictedCheck:
    n: int
    nu: int
    q: int
    d: int
    computed: FormInvariants
    predicted_det_square: bool | None
    predicted_arf_sign: int | None
    vanishes_on_small: bool
    orthogonal: bool

    @property
    def ok(self) -> bool:
        c = self.computed
        if c.rank != self.n - self.d or c.zero_lines:
            return False
        if c.p == 2:
            match = c.arf_sign == self.predicted_arf_sign
        else:
            match = c.det_square == self.predicted_det_square
        return match and self.vanishes_on_small and self.orthogonal


def predicted_restricted_det(n: int, nu: int, F: GF) -> int:
    """det of Q_ν on I(d, n) as an element of F (odd ν, odd p)."""
    d = math.gcd(n, nu)
    mu = (nu - 1) // 2
    val = n // d if n % 2 else (-1) ** mu * 2 * n // d
    return val % F.p


def restricted_invariants(n: int, nu: int, F: GF) -> RestrictedCheck:
    if nu % 2 == 0:
        raise ValueError("restricted invariants are stated for odd ν")
    _check(n, F)
    d = math.gcd(n, nu)
    Q = q_nu_form(n, nu, F)
    big = submodule(n, F, d, n)
    small = submodule(n, F, 1, d)
    inv = invariants(restrict(Q, big))
    det_sq = arf_sign = None
    if F.p == 2:
        arf_sign = jacobi_symbol(F.order, n // d)
    else:
        det_sq = F.is_square(predicted_restricted_det(n, nu, F))
    vanish = all(Q(list(v)) == 0 for v in small.basis) and all(
        Q.polar(list(u), list(v)) == 0 for u in small.basis for v in small.basis
    )
    orth = all(Q.polar(list(u), list(v)) == 0 for u in big.basis for v in small.basis)
    return RestrictedCheck(n, nu, F.order, d, inv, det_sq, arf_sign, vanish, orth)
