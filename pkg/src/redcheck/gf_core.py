"""Finite fields F_{p^k} and towers F_p ⊂ F_q ⊂ F_{q^e}.

Elements are encoded as integers ``sum(c_i * p**i)`` where ``c_i`` are the
coefficients of the residue class modulo the defining polynomial.  The prime
field therefore sits inside every level as the integers ``0..p-1``.

Arithmetic is table driven (log/antilog) so that every operation has a scalar
form on Python ints and a vectorised form on numpy arrays.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

ENUM_LIMIT = 1 << 31
TABLE_LIMIT = 1 << 23


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    return all(n % d for d in range(3, r + 1, 2))


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# dense polynomials over F_p, coefficient lists low -> high


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_mod(out, m, p)


def poly_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result, base = [1], poly_mod(list(a), m, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, m, p)
        base = poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def is_irreducible(m: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial ``m`` over F_p."""
    k = len(m) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    x = [0, 1]

    def x_pow_p_pow(j: int) -> list[int]:
        r = x
        for _ in range(j):
            r = poly_powmod(r, p, m, p)
        return r

    xk = x_pow_p_pow(k)
    if poly_mod([a - b for a, b in _pad(xk, x)], m, p):
        return False
    for r in prime_factors(k):
        h = x_pow_p_pow(k // r)
        g = poly_gcd([a - b for a, b in _pad(h, x)], m, p)
        if len(g) > 1:
            return False
    return True


def _pad(a: list[int], b: list[int]):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


def int_to_digits(x: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        x, r = divmod(x, p)
        out.append(r)
    return out


@functools.lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Monic irreducible of degree k whose low coefficients, read as a base-p
    integer, are smallest."""
    for code in range(p**k):
        m = int_to_digits(code, p, k) + [1]
        if m[0] == 0 and k > 1:
            continue
        if is_irreducible(m, p):
            return tuple(m)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


# ---------------------------------------------------------------------------


class GF:
    """The field F_{p^k} built on ``smallest_irreducible(p, k)``."""

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("degree must be positive")
        if p**k > ENUM_LIMIT:
            raise FieldError(f"F_{p}^{k} exceeds the enumeration bound")
        self.p = p
        self.k = k
        self.order = p**k
        self.modulus = smallest_irreducible(p, k)
        self._pows = np.array([p**i for i in range(k)], dtype=np.int64)
        self.has_tables = self.order <= TABLE_LIMIT
        self.generator = self._find_generator()
        if self.has_tables:
            self._build_tables()

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"

    def __reduce__(self):
        return (get_field, (self.p, self.k))

    # -- construction ---------------------------------------------------
    def _poly(self, x: int) -> list[int]:
        return _trim(int_to_digits(x, self.p, self.k))

    def _encode(self, coeffs: list[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def _find_generator(self) -> int:
        if self.order == 2:
            return 1
        n = self.order - 1
        facs = prime_factors(n)
        m = list(self.modulus)
        for g in range(2, self.order):
            gp = self._poly(g)
            if all(poly_powmod(gp, n // r, m, self.p) != [1] for r in facs):
                return g
        raise FieldError("no generator found")  # pragma: no cover

    def _build_tables(self) -> None:
        p, k, n = self.p, self.k, self.order - 1
        m = list(self.modulus)
        gp = self._poly(self.generator)
        # matrix of multiplication by g on digit row vectors
        mat = np.zeros((k, k), dtype=np.int64)
        for j in range(k):
            col = poly_mulmod(gp, [0] * j + [1], m, p)
            mat[j, : len(col)] = col
        exp = np.zeros(n, dtype=np.int64)
        exp[0] = 1
        filled, step = 1, mat.copy()
        while filled < n:
            take = min(filled, n - filled)
            d = self.digits(exp[:take])
            exp[filled : filled + take] = ((d @ step) % p) @ self._pows
            step = (step @ step) % p
            filled += take
        self.exp = np.concatenate([exp, exp])
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        if (log[1:] < 0).any():
            raise FieldError("generator does not generate")  # pragma: no cover
        self.log = log
        self.neg = self.digits_to_int((-self.digits(np.arange(self.order))) % p)
        if p > 2:
            h = max(1, int(math.log(1 << 16, p) // 2))
            h = min(h, k)
            self._chunk = p**h
            self._nchunks = -(-k // h)
            cd = np.arange(self._chunk)
            cdig = np.stack([(cd // p**i) % p for i in range(h)], axis=1)
            s = (cdig[:, None, :] + cdig[None, :, :]) % p
            self._chunk_add = (s @ np.array([p**i for i in range(h)])).reshape(-1)

    # -- digit helpers ---------------------------------------------------
    def digits(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self._pows) % self.p

    def digits_to_int(self, d) -> np.ndarray:
        return np.asarray(d, dtype=np.int64) @ self._pows

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    # -- scalar arithmetic ---------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p, out, s = self.p, 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * s
            a //= p
            b //= p
            s *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.negate(b))

    def negate(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.has_tables:
            return int(self.neg[a])
        return self._encode([(-c) % self.p for c in self._poly(a)])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            return int(self.exp[self.log[a] + self.log[b]])
        return self._encode(poly_mulmod(self._poly(a), self._poly(b), list(self.modulus), self.p))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        n = self.order - 1
        if self.has_tables:
            return int(self.exp[(int(self.log[a]) * e) % n])
        return self._encode(poly_powmod(self._poly(a), e % n, list(self.modulus), self.p))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, -1)

    def frob(self, a: int, j: int = 1) -> int:
        """a^(p^j); j may be negative."""
        return self.pow(a, pow(self.p, j % self.k, self.order - 1) if self.order > 2 else 1)

    def log_of(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("log of 0")
        return int(self.log[a])

    # -- vectorised arithmetic ------------------------------------------
    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self._nchunks == 1:
            return self._chunk_add[a * self._chunk + b]
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        s = 1
        for _ in range(self._nchunks):
            out += self._chunk_add[(a // s % self._chunk) * self._chunk + b // s % self._chunk] * s
            s *= self._chunk
        return out

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return a if self.p == 2 else self.neg[a]

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        n = self.order - 1
        r = self.exp[(self.log[a] * (e % n)) % n] if n else a
        if e < 0 and (a == 0).any():
            raise ZeroDivisionError("0 has no inverse")
        return np.where(a == 0, 0, r)

    def vfrob(self, a, j: int = 1) -> np.ndarray:
        if self.order == 2:
            return np.asarray(a, dtype=np.int64)
        return self.vpow(a, pow(self.p, j % self.k, self.order - 1))

    def vsum(self, arrays) -> np.ndarray:
        acc = None
        for a in arrays:
            acc = np.asarray(a, dtype=np.int64) if acc is None else self.vadd(acc, a)
        return acc

    def is_square(self, a: int) -> bool:
        if self.p == 2 or a == 0:
            return True
        return self.log_of(a) % 2 == 0


@functools.lru_cache(maxsize=None)
def get_field(p: int, k: int) -> GF:
    return GF(p, k)


@functools.lru_cache(maxsize=None)
def embedding(p: int, a: int, b: int) -> np.ndarray:
    """Array sending elements of F_{p^a} to F_{p^b} (a | b).

    The image of the root of the small modulus is the smallest root in the big
    field, so the map is deterministic.
    """
    if b % a:
        raise FieldError(f"F_{p}^{a} is not a subfield of F_{p}^{b}")
    small, big = get_field(p, a), get_field(p, b)
    if a == b:
        return small.elements()
    step = (big.order - 1) // (small.order - 1)
    cands = sorted([0] + [int(big.exp[i * step]) for i in range(small.order - 1)])
    root = None
    for c in cands:
        acc = 0
        for coeff in reversed(small.modulus):
            acc = big.add(big.mul(acc, c), coeff)
        if acc == 0:
            root = c
            break
    if root is None:  # pragma: no cover
        raise FieldError("no root of the subfield modulus found")
    d = small.digits(small.elements())
    out = np.zeros(small.order, dtype=np.int64)
    power = 1
    for i in range(a):
        out = big.vadd(out, big.vmul(d[:, i], power))
        power = big.mul(power, root)
    return out


@functools.lru_cache(maxsize=None)
def restriction(p: int, a: int, b: int) -> np.ndarray:
    """Inverse of ``embedding``: big element -> small element, or -1."""
    emb = embedding(p, a, b)
    out = np.full(p**b, -1, dtype=np.int64)
    out[emb] = np.arange(p**a, dtype=np.int64)
    return out


def relative_trace_vec(p: int, a: int, b: int, x) -> np.ndarray:
    """Tr_{F_{p^b}/F_{p^a}} on an array of F_{p^b} elements, returned in F_{p^a}."""
    big = get_field(p, b)
    x = np.asarray(x, dtype=np.int64)
    acc, t = x, x
    for _ in range(b // a - 1):
        t = big.vfrob(t, a)
        acc = big.vadd(acc, t)
    out = restriction(p, a, b)[acc]
    if (out < 0).any():  # pragma: no cover
        raise FieldError("trace left the subfield")
    return out


def partial_trace_vec(F: GF, x, steps: int, qk: int) -> np.ndarray:
    """sum_{i<steps} x^(p^(qk*i)) inside F (no subfield restriction)."""
    x = np.asarray(x, dtype=np.int64)
    acc, t = np.zeros_like(x), x
    for _ in range(steps):
        acc = F.vadd(acc, t)
        t = F.vfrob(t, qk)
    return acc


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldElem:
    field: GF = field(repr=False)
    value: int

    def _wrap(self, v: int) -> "FieldElem":
        return FieldElem(self.field, v)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise FieldError("level mismatch")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        return self._wrap(self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return self._wrap(self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return self._wrap(self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.field.negate(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.value, e))

    def __truediv__(self, other):
        return self * self._wrap(self.field.inv(self._coerce(other)))

    def __bool__(self) -> bool:
        return self.value != 0

    def coefficients(self) -> list[int]:
        return int_to_digits(self.value, self.field.p, self.field.k)


@dataclass(frozen=True)
class FieldTower:
    """F_p ⊂ F_q ⊂ F_{q^e} with q = p^f."""

    p: int
    f: int
    e: int

    @property
    def q(self) -> int:
        return self.p**self.f

    def level(self, d: int) -> GF:
        """The field F_{q^d}; d must divide e."""
        if self.e % d:
            raise FieldError(f"level {d} does not divide {self.e}")
        return get_field(self.p, self.f * d)

    @property
    def base(self) -> GF:
        return self.level(1)

    @property
    def top(self) -> GF:
        return self.level(self.e)

    @property
    def prime(self) -> GF:
        return get_field(self.p, 1)

    def embed(self, x, d_from: int, d_to: int):
        emb = embedding(self.p, self.f * d_from, self.f * d_to)
        if isinstance(x, FieldElem):
            return FieldElem(self.level(d_to), int(emb[x.value]))
        return emb[x]

    def elem(self, value: int, d: int | None = None) -> FieldElem:
        return FieldElem(self.level(self.e if d is None else d), value)


def make_tower(p: int, f: int, e: int = 1) -> FieldTower:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if f < 1 or e < 1:
        raise FieldError("degrees must be positive")
    if p ** (f * e) > ENUM_LIMIT:
        raise FieldError("tower exceeds the enumeration bound")
    tower = FieldTower(p, f, e)
    tower.base, tower.top  # build and validate both ends eagerly
    return tower


def trace_to(x: FieldElem, target: GF) -> FieldElem:
    """Tr from the field of x down to the subfield ``target``."""
    src = x.field
    if src.p != target.p or src.k % target.k:
        raise FieldError(f"{target} is not a subfield of {src}")
    acc, t = 0, x.value
    for _ in range(src.k // target.k):
        acc = src.add(acc, t)
        t = src.frob(t, target.k)
    val = int(restriction(src.p, target.k, src.k)[acc])
    return FieldElem(target, val)


def quad_res_symbol(x: FieldElem) -> int:
    F = x.field
    if F.p == 2:
        raise FieldError("quadratic residue symbol needs odd characteristic")
    if x.value == 0:
        raise FieldError("symbol of zero")
    return 1 if F.is_square(x.value) else -1


def legendre(a: int, F: GF) -> int:
    """Quadratic residue symbol of the integer a read in F (odd characteristic)."""
    return quad_res_symbol(FieldElem(F, a % F.p))


def jacobi_symbol(a: int, m: int) -> int:
    if m <= 0 or m % 2 == 0:
        raise FieldError("Jacobi symbol needs a positive odd modulus")
    if math.gcd(a, m) != 1:
        raise FieldError("Jacobi symbol needs gcd(a, m) = 1")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result
