"""The finite groups S_1, S_2, their Heisenberg structure and representations.

Elements are pairs (v, w) with v in k = F_q.  For S_1 the second entry is a
tuple (w_i) indexed by Z/n with Σ w_i = 0; for S_2 it is an element of
F_{q^n} with trace 0 to k.  For odd ν both groups are the additive group of k
and w is the empty tuple.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Hashable, Iterable

import numpy as np

from . import linalg
from .cyclotomic import AdditiveChar, CycInt
from .gf_core import GF, embedding, get_field, relative_trace_vec

Elem = tuple[int, Hashable]


class _VecOps:
    """Array versions of the field operations used by the cocycle formulas."""

    def __init__(self, F: GF):
        self.add, self.mul, self.frob = F.vadd, F.vmul, F.vfrob


class _Group:
    """Shared machinery; subclasses define the w-space and the cocycle."""

    field: GF
    n: int
    nu: int

    @property
    def even(self) -> bool:
        return self.nu % 2 == 0

    @property
    def mu(self) -> int:
        return self.nu // 2

    def identity(self) -> Elem:
        return 0, self.w_zero()

    def mul(self, g: Elem, h: Elem) -> Elem:
        F = self.field
        v = F.add(F.add(g[0], h[0]), self.cocycle(g[1], h[1]))
        return v, self.w_add(g[1], h[1])

    def inv(self, g: Elem) -> Elem:
        F = self.field
        wneg = self.w_neg(g[1])
        return F.negate(F.add(g[0], self.cocycle(g[1], wneg))), wneg

    def central(self, v: int) -> Elem:
        return v, self.w_zero()

    @property
    def order(self) -> int:
        return self.field.order * len(self.w_elements())

    def elements(self) -> list[Elem]:
        return [(v, w) for w in self.w_elements() for v in range(self.field.order)]

    def commutator(self, g: Elem, h: Elem) -> Elem:
        return self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))

    def random_element(self, rng: random.Random) -> Elem:
        ws = self.w_elements()
        return rng.randrange(self.field.order), ws[rng.randrange(len(ws))]

    # -- F_p structure of the w-space ------------------------------------
    @functools.cached_property
    def w_basis(self) -> list[Hashable]:
        """An F_p-basis of the w-space (greedy over w_elements, fixed order)."""
        p = self.field.p
        basis, vecs = [], []
        for w in self.w_elements():
            vec = self.w_digits(w)
            if linalg.rank(get_field(p, 1), vecs + [vec]) > len(vecs):
                basis.append(w)
                vecs.append(vec)
        return basis

    @functools.cached_property
    def _coord_table(self) -> dict:
        p = self.field.p
        table = {}
        for coeffs in itertools.product(range(p), repeat=len(self.w_basis)):
            table[self.w_combo(coeffs)] = coeffs
        return table

    def w_coords(self, w) -> tuple[int, ...]:
        return self._coord_table[w]

    def w_combo(self, coeffs, basis=None) -> Hashable:
        basis = self.w_basis if basis is None else basis
        acc = self.w_zero()
        for c, b in zip(coeffs, basis):
            for _ in range(c):
                acc = self.w_add(acc, b)
        return acc


@dataclass(frozen=True, eq=False)
class S1Group(_Group):
    n: int
    nu: int
    field: GF

    def __post_init__(self):
        if self.n % self.field.p == 0:
            raise ValueError("p divides n")

    def w_zero(self):
        return (0,) * self.n if self.even else ()

    def w_add(self, a, b):
        F = self.field
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def w_neg(self, a):
        return tuple(self.field.negate(x) for x in a)

    def _cocycle(self, ops, a, b):
        n, mu = self.n, self.mu
        acc = 0
        for i in range(n):
            acc = ops.add(acc, ops.mul(a[i], b[(i + mu) % n]))
        return acc

    def cocycle(self, a, b) -> int:
        return self._cocycle(self.field, a, b) if self.even else 0

    def vcocycle(self, A, B) -> np.ndarray:
        """The cocycle on stacked rows of w-vectors (shape (..., n))."""
        cols = lambda X: [X[..., i] for i in range(self.n)]  # noqa: E731
        return self._cocycle(_VecOps(self.field), cols(A), cols(B))

    def w_array(self) -> np.ndarray:
        return np.array(self.w_elements(), dtype=np.int64).reshape(len(self.w_elements()), -1)

    @functools.lru_cache(maxsize=None)
    def w_elements(self) -> list:
        if not self.even:
            return [()]
        F = self.field
        out = []
        for rest in itertools.product(range(F.order), repeat=self.n - 1):
            first = 0
            for x in rest:
                first = F.sub(first, x)
            out.append((first,) + rest)
        return out

    def w_digits(self, w) -> list[int]:
        F = self.field
        return [int(d) for x in w for d in F.digits(x)]


@dataclass(frozen=True, eq=False)
class S2Group(_Group):
    n: int
    nu: int
    field: GF

    def __post_init__(self):
        if self.n % self.field.p == 0:
            raise ValueError("p divides n")

    @property
    def big(self) -> GF:
        return get_field(self.field.p, self.field.k * self.n)

    def w_zero(self):
        return 0 if self.even else ()

    def w_add(self, a, b):
        return self.big.add(a, b) if self.even else ()

    def w_neg(self, a):
        return self.big.negate(a) if self.even else ()

    @functools.cached_property
    def _trace_table(self):
        F = self.field
        return relative_trace_vec(F.p, F.k, F.k * self.n, self.big.elements())

    def trace(self, x: int) -> int:
        return int(self._trace_table[x])

    def _cocycle(self, ops, a, b):
        return self._trace_table[ops.mul(ops.frob(a, self.field.k * self.mu), b)]

    def cocycle(self, a, b) -> int:
        return int(self._cocycle(self.big, a, b)) if self.even else 0

    def vcocycle(self, A, B) -> np.ndarray:
        return self._cocycle(_VecOps(self.big), A, B)

    def w_array(self) -> np.ndarray:
        return np.array(self.w_elements(), dtype=np.int64)

    @functools.lru_cache(maxsize=None)
    def w_elements(self) -> list:
        if not self.even:
            return [()]
        return [int(x) for x in self.big.elements()[self._trace_table == 0]]

    def w_digits(self, w) -> list[int]:
        return [int(d) for d in self.big.digits(w)]


def s1_group(n: int, nu: int, F: GF) -> S1Group:
    return S1Group(n, nu, F)


def s2_group(n: int, nu: int, F: GF) -> S2Group:
    return S2Group(n, nu, F)


# ---------------------------------------------------------------------------
# structure checks


@dataclass(frozen=True)
class AxiomReport:
    order: int
    associative: bool
    identity: bool
    inverses: bool
    abelian: bool
    exponent: int
    exhaustive: bool
    method: str = "triples"

    @property
    def ok(self) -> bool:
        return self.associative and self.identity and self.inverses


def cocycle_is_bilinear(G: _Group, chunk: int = 1 << 21) -> bool:
    """c(a, b) = Σ a_k b_l c(e_k, e_l) over F_p for every pair (a, b) of w-values.

    With (v, a)(v', b) = (v + v' + c(a, b), a + b) this is a proof of
    associativity, so it covers all triples at the cost of all pairs.  The
    array evaluation runs the same formula as ``mul``.
    """
    if not G.even:
        return True
    F = G.field
    W = G.w_array()
    X = np.array([G.w_coords(w) for w in G.w_elements()], dtype=np.int64)
    Bas = G.w_array()[[G.w_elements().index(b) for b in G.w_basis]]
    C = G.vcocycle(Bas[:, None], Bas[None, :])
    # R[a, l] = c(a, e_l), first from the bilinear expansion, then directly
    R = F.vsum(F.vmul(X[:, k, None], C[k][None, :]) for k in range(len(G.w_basis)))
    if not np.array_equal(R, G.vcocycle(W[:, None], Bas[None, :])):
        return False
    rows = max(1, chunk // len(W))
    for s in range(0, len(W), rows):
        A = W[s : s + rows]
        pred = F.vsum(F.vmul(R[s : s + rows, l, None], X[None, :, l]) for l in range(len(G.w_basis)))
        if not np.array_equal(pred, G.vcocycle(A[:, None], W[None, :])):
            return False
    return True


def check_axioms(
    G: _Group, limit: int = 1 << 16, triple_limit: int = 1 << 18, samples: int = 20000, seed: int = 0
) -> AxiomReport:
    """Group axioms, exhaustively when |G| <= limit.

    Identity and inverses run over all elements.  Associativity runs over all
    triples when |G|^3 <= triple_limit; otherwise, up to ``limit``, through the
    bilinearity of the cocycle over all pairs, backed by sampled triples.
    """
    els = G.elements()
    e = G.identity()
    ident = all(G.mul(e, g) == g and G.mul(g, e) == g for g in els)
    invs = all(G.mul(g, G.inv(g)) == e and G.mul(G.inv(g), g) == e for g in els)
    if len(els) ** 3 <= triple_limit:
        method, exhaustive = "triples", True
        triples: Iterable = itertools.product(els, repeat=3)
        assoc = True
    else:
        exhaustive = len(els) <= limit
        method = "bilinear-cocycle" if exhaustive else "sampled"
        assoc = cocycle_is_bilinear(G) if exhaustive else True
        rng = random.Random(seed)
        triples = ((rng.choice(els), rng.choice(els), rng.choice(els)) for _ in range(samples))
    assoc = assoc and all(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)) for a, b, c in triples)
    gens = [G.central(1)] + [(0, b) for b in G.w_basis]
    abelian = all(G.mul(a, b) == G.mul(b, a) for a in gens for b in gens)
    return AxiomReport(len(els), assoc, ident, invs, abelian, exponent(G), exhaustive, method)


def element_order(G: _Group, g: Elem) -> int:
    e, x, k = G.identity(), g, 1
    while x != e:
        x = G.mul(x, g)
        k += 1
    return k


def exponent(G: _Group) -> int:
    return functools.reduce(math.lcm, (element_order(G, g) for g in G.elements()), 1)


def center(G: _Group) -> list[Elem]:
    els = G.elements()
    gens = [G.central(1)] + [(0, b) for b in G.w_basis]
    return [g for g in els if all(G.mul(g, h) == G.mul(h, g) for h in gens)]


@dataclass(frozen=True)
class PairingReport:
    center_is_v_axis: bool
    matrix: tuple[tuple[int, ...], ...]
    rank: int
    dim: int

    @property
    def nondegenerate(self) -> bool:
        return self.rank == self.dim


def pairing_matrix(G: _Group, psi: AdditiveChar, basis=None) -> list[list[int]]:
    """Exponents of ψ([s(a), s(b)]) on an F_p-basis of the w-space."""
    basis = G.w_basis if basis is None else basis
    out = []
    for a in basis:
        row = []
        for b in basis:
            c = G.commutator((0, a), (0, b))
            row.append(psi.exponent(c[0]))
        out.append(row)
    return out


def center_and_pairing(G: _Group, psi: AdditiveChar) -> PairingReport:
    Z = center(G)
    axis = sorted(Z) == sorted(G.central(v) for v in range(G.field.order))
    M = pairing_matrix(G, psi)
    Fp = get_field(G.field.p, 1)
    r = linalg.rank(Fp, M) if M else 0
    return PairingReport(axis, tuple(map(tuple, M)), r, len(G.w_basis))


def symplectic_basis_fp(M: list[list[int]], p: int) -> tuple[list[list[int]], list[list[int]]]:
    """Vectors e_i, f_i with <e_i, f_j> = δ_ij, <e_i, e_j> = <f_i, f_j> = 0.

    ``M`` is a nondegenerate alternating Gram matrix over F_p.
    """
    Fp = get_field(p, 1)
    dim = len(M)

    def form(u, v):
        acc = 0
        for i in range(dim):
            for j in range(dim):
                acc = Fp.add(acc, Fp.mul(u[i], Fp.mul(M[i][j], v[j])))
        return acc

    pool = [[int(i == j) for j in range(dim)] for i in range(dim)]
    es, fs = [], []
    while pool:
        e = pool.pop(0)
        k = next((i for i, u in enumerate(pool) if form(e, u)), None)
        if k is None:
            raise ArithmeticError("pairing is degenerate")
        f = pool.pop(k)
        c = Fp.inv(form(e, f))
        f = [Fp.mul(c, x) for x in f]
        new = []
        for u in pool:
            a, b = form(u, f), form(u, e)
            # u - <u,f> e + <u,e> f is orthogonal to both e and f
            u = [Fp.add(Fp.sub(x, Fp.mul(a, y)), Fp.mul(b, z)) for x, y, z in zip(u, e, f)]
            new.append(u)
        pool = new
        es.append(e)
        fs.append(f)
    return es, fs


# ---------------------------------------------------------------------------
# the Heisenberg representation


def value_ring(p: int) -> int:
    """Cyclotomic level carrying all character values of the extension."""
    return 4 if p == 2 else p


@dataclass(frozen=True)
class MonomialMatrix:
    """Column b has a single nonzero entry ``vals[b]`` in row ``rows[b]``."""

    rows: tuple[int, ...]
    vals: tuple[CycInt, ...]

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        rows = tuple(self.rows[r] for r in other.rows)
        vals = tuple(self.vals[r] * v for r, v in zip(other.rows, other.vals))
        return MonomialMatrix(rows, vals)

    def trace(self, N: int) -> CycInt:
        acc = CycInt.integer(N, 0)
        for b, (r, v) in enumerate(zip(self.rows, self.vals)):
            if r == b:
                acc = acc + v
        return acc

    def dense(self, N: int) -> list[list[CycInt]]:
        D = len(self.rows)
        out = [[CycInt.integer(N, 0)] * D for _ in range(D)]
        for b, (r, v) in enumerate(zip(self.rows, self.vals)):
            out[r][b] = v
        return out


@dataclass
class HeisenbergRep:
    group: _Group
    psi: AdditiveChar
    lagrangian: list
    complement: list
    dim: int
    N: int
    _lam: dict = field(default_factory=dict, repr=False)

    def _chi(self, h: Elem) -> CycInt:
        """The extension of ψ to the preimage of the Lagrangian."""
        return self.psi(h[0]).promote(self.N) * self._lam[h[1]]

    @functools.cached_property
    def reps(self) -> list:
        G = self.group
        return [G.w_combo(c, self.complement) for c in itertools.product(range(G.field.p), repeat=len(self.complement))]

    @functools.cached_property
    def _comp_index(self) -> dict:
        """w -> index in ``reps`` of its complement part."""
        G = self.group
        span = [G.w_combo(c, self.lagrangian) for c in itertools.product(range(G.field.p), repeat=len(self.lagrangian))]
        return {G.w_add(a, b): i for a in span for i, b in enumerate(self.reps)}

    def matrix(self, g: Elem) -> MonomialMatrix:
        G = self.group
        reps, comp = self.reps, self._comp_index
        rows, vals = [], []
        for b in reps:
            x = G.mul(g, (0, b))
            i = comp[x[1]]
            h = G.mul(G.inv((0, reps[i])), x)
            rows.append(i)
            vals.append(self._chi(h))
        return MonomialMatrix(tuple(rows), tuple(vals))

    def character(self, g: Elem) -> CycInt:
        # column b is fixed only if the complement part of w + b is b, i.e. w lies in the Lagrangian span
        if self._comp_index[g[1]] != 0:
            return CycInt.integer(self.N, 0)
        return self.matrix(g).trace(self.N)


def irrep(G: _Group, psi: AdditiveChar, use_second: bool = False) -> HeisenbergRep:
    """Induce an extension of ψ from the preimage of a Lagrangian subspace.

    ``use_second`` swaps the roles of the two halves of the symplectic basis,
    giving a second, independent construction.
    """
    if psi.is_trivial():
        raise ValueError("ψ must be nontrivial")
    p = G.field.p
    M = pairing_matrix(G, psi)
    es, fs = symplectic_basis_fp(M, p)
    if use_second:
        es, fs = fs, es
    lag = [G.w_combo(e) for e in es]
    comp = [G.w_combo(f) for f in fs]
    N = value_ring(p)
    rep = HeisenbergRep(G, psi, lag, comp, p ** len(comp), N)
    rep._lam = _extension(G, psi, lag, N)
    return rep


def _extension(G: _Group, psi: AdditiveChar, lag: list, N: int) -> dict:
    """λ on span(lag) with λ(a + a') = λ(a) λ(a') ψ(-β(a, a')), β the section cocycle.

    For odd p this is λ(a) = ψ(-β(a, a)/2).  For p = 2 the values on the basis
    are square roots of ψ(β(e, e)) = ±1, hence the need for ζ_4.
    """
    p = G.field.p
    F = G.field

    def beta(a, b):
        return G.mul((0, a), (0, b))[0]

    if p != 2:
        half = F.inv(2 % p)
        out = {}
        for c in itertools.product(range(p), repeat=len(lag)):
            a = G.w_combo(c, lag)
            out[a] = psi(F.negate(F.mul(half, beta(a, a)))).promote(N)
        return out

    lam = {G.w_zero(): CycInt.integer(N, 1)}
    frontier = [G.w_zero()]
    for e in lag:
        if p == 2:
            sq = psi(beta(e, e))  # λ(e)^2 must equal ψ(β(e, e))
            le = CycInt.integer(N, 1) if sq == 1 else CycInt.zeta(N, 1)
        else:
            le = CycInt.integer(N, 1)
        new = []
        for a in frontier:
            cur, val = a, lam[a]
            for _ in range(p - 1):
                val = val * le * psi(F.negate(beta(cur, e))).promote(N)
                cur = G.w_add(cur, e)
                lam[cur] = val
                new.append(cur)
        frontier = frontier + new
    return lam


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class RepReport:
    dim: int
    expected_dim: int
    homomorphism: bool
    central_character: bool
    vanishes_off_center: bool
    norm_ok: bool
    exhaustive: bool

    @property
    def ok(self) -> bool:
        return (
            self.dim == self.expected_dim
            and self.homomorphism
            and self.central_character
            and self.vanishes_off_center
            and self.norm_ok
        )


def verify_rep(rep: HeisenbergRep, pair_limit: int = 1 << 14, samples: int = 3000, seed: int = 0) -> RepReport:
    G, N = rep.group, rep.N
    els = G.elements()
    mats: dict = {}

    def mat(g):
        if g not in mats:
            mats[g] = rep.matrix(g)
        return mats[g]

    exhaustive = len(els) ** 2 <= pair_limit
    if exhaustive:
        pairs: Iterable = itertools.product(els, repeat=2)
    else:
        rng = random.Random(seed)
        pairs = ((rng.choice(els), rng.choice(els)) for _ in range(samples))
    hom = all(mat(g) @ mat(h) == mat(G.mul(g, h)) for g, h in pairs)
    D = rep.dim
    central = True
    for v in range(G.field.order):
        m = mat(G.central(v))
        s = rep.psi(v).promote(N)
        central &= m.rows == tuple(range(D)) and all(x == s for x in m.vals)
    chars = {g: rep.character(g) for g in els}
    off = all(chars[g] == 0 for g in els if g[1] != G.w_zero())
    norm = CycInt.integer(N, 0)
    for g in els:
        if chars[g] != 0:
            norm = norm + chars[g] * chars[G.inv(g)]
    expected = math.isqrt(len(G.w_elements()))
    return RepReport(D, expected, hom, central, off, norm == len(els), exhaustive)


def characters_agree(r1: HeisenbergRep, r2: HeisenbergRep) -> bool:
    return all(r1.character(g) == r2.character(g) for g in r1.group.elements())
