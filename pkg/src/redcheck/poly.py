"""Sparse multivariate polynomials over a finite field ``GF``."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .gf_core import GF, embedding


class Poly:
    """Polynomial with terms ``{exponent tuple: coefficient}`` over ``field``."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: GF, nvars: int, terms: dict | None = None):
        self.field = field
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, field: GF, nvars: int, c: int) -> "Poly":
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, field: GF, nvars: int, i: int, power: int = 1) -> "Poly":
        e = [0] * nvars
        e[i] = power
        return cls(field, nvars, {tuple(e): 1})

    @classmethod
    def gens(cls, field: GF, nvars: int) -> list["Poly"]:
        return [cls.var(field, nvars, i) for i in range(nvars)]

    def zero(self) -> "Poly":
        return Poly(self.field, self.nvars)

    # -- arithmetic -----------------------------------------------------------
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field is not self.field or other.nvars != self.nvars:
                raise ValueError("incompatible polynomials")
            return other
        if isinstance(other, int):
            return Poly.const(self.field, self.nvars, other % self.field.p)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, 0), c)
        return Poly(F, self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, self.nvars, {e: F.negate(c) for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._lift(other)
        F = self.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return Poly(F, self.nvars, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        F = self.field
        return Poly(F, self.nvars, {e: F.mul(c, v) for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        result = Poly.const(self.field, self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius(self, j: int = 1) -> "Poly":
        """Raise to the p^j-th power (coefficients and exponents)."""
        F = self.field
        s = F.p**j
        return Poly(F, self.nvars, {tuple(a * s for a in e): F.frob(c, j) for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field is other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.field.order, self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.field, self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    # -- substitution and change of field -----------------------------------
    def compose(self, subs: Sequence["Poly"]) -> "Poly":
        """Substitute ``subs[i]`` for variable i."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitute per variable")
        target = subs[0] if subs else None
        F = self.field
        out = Poly(target.field, target.nvars) if target is not None else Poly(F, 0)
        cache: dict = {}

        def power(i: int, a: int) -> Poly:
            key = (i, a)
            if key not in cache:
                cache[key] = subs[i] ** a
            return cache[key]

        for e, c in self.terms.items():
            term = Poly.const(out.field, out.nvars, c)
            for i, a in enumerate(e):
                if a:
                    term = term * power(i, a)
            out = out + term
        return out

    def change_field(self, big: GF) -> "Poly":
        """Embed coefficients into a larger field of the same characteristic."""
        if big is self.field:
            return self
        emb = embedding(self.field.p, self.field.k, big.k)
        return Poly(big, self.nvars, {e: int(emb[c]) for e, c in self.terms.items()})

    def extend_vars(self, nvars: int, positions: Sequence[int]) -> "Poly":
        """Reindex into a ring with ``nvars`` variables; variable i -> positions[i]."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, a in enumerate(e):
                ne[positions[i]] += a
            out[tuple(ne)] = c
        return Poly(self.field, nvars, out)

    # -- evaluation ---------------------------------------------------------
    def __call__(self, point: Sequence[int]) -> int:
        F = self.field
        acc = 0
        for e, c in self.terms.items():
            t = c
            for x, a in zip(point, e):
                if a:
                    t = F.mul(t, F.pow(x, a))
            acc = F.add(acc, t)
        return acc

    def evaluate(self, arrays: Sequence[np.ndarray]) -> np.ndarray:
        """Vectorised evaluation on arrays of field elements (one per variable)."""
        F = self.field
        shape = np.broadcast(*arrays).shape if arrays else ()
        acc = np.zeros(shape, dtype=np.int64)
        powers: dict = {}
        for e, c in sorted(self.terms.items()):
            t = np.full(shape, c, dtype=np.int64)
            for i, a in enumerate(e):
                if a:
                    if (i, a) not in powers:
                        powers[(i, a)] = F.vpow(arrays[i], a)
                    t = F.vmul(t, powers[(i, a)])
            acc = F.vadd(acc, t)
        return acc

    # -- text -----------------------------------------------------------------
    def to_text(self, names: Iterable[str] | None = None) -> str:
        names = list(names) if names is not None else [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self.to_text()} over {self.field})"
