"""Congruence subgroups of SL2(O) and their Frattini quotients.

A matrix is a 4-tuple (a, b, c, d) of LocalRing elements for (a b; c d).
Every supported subgroup has an Iwahori factorization

    g = u_-(c) diag(t, t^-1) u_+(b),   v(c) >= cl, v(t - 1) >= tl, v(b) >= bl

so it is described by the three levels (cl, bl, tl).  Frattini quotients
are F_p-vector spaces; a FrattiniQuotient turns group elements into
coordinate vectors (int64 arrays of F_p codes) with respect to a named
basis of representatives.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import (
    BackendUnsupported,
    EnumerationTooLarge,
    LevelError,
    MembershipError,
    NotASubgroupPair,
    NotNormalizing,
    StabilityFailure,
)
from .finring import CharCase, FieldParams, LocalRing, field, local_ring
from .linalg import solve_left
from .weyl import Elementary

MAX_GROUP_SIZE = 10**7
MAX_RING_SIZE = 4096

Matrix = tuple


# ---------------------------------------------------------------- subgroups


@dataclass(frozen=True)
class SubgroupSpec:
    """I_plus(i), I_minus(i) or K(j); I = I_plus(0)."""

    kind: str
    i: int

    def __post_init__(self):
        if self.kind not in ("I+", "I-", "K"):
            raise ValueError(f"unknown subgroup kind {self.kind!r}")
        if self.i < (1 if self.kind == "K" else 0):
            raise ValueError(f"invalid parameter {self.i} for {self.kind}")

    @classmethod
    def I(cls) -> "SubgroupSpec":
        return cls("I+", 0)

    @classmethod
    def I_plus(cls, i: int) -> "SubgroupSpec":
        return cls("I+", i)

    @classmethod
    def I_minus(cls, i: int) -> "SubgroupSpec":
        return cls("I-", i)

    @classmethod
    def K(cls, j: int) -> "SubgroupSpec":
        return cls("K", j)

    @property
    def levels(self) -> tuple[int, int, int]:
        """(cl, bl, tl): minimal valuations of g21, g12 and g11 - 1."""
        if self.kind == "I+":
            return (self.i + 1, 0, 1)
        if self.kind == "I-":
            return (1, self.i, 1)
        return (self.i, self.i, self.i)

    @property
    def t_depth(self) -> int:
        """The torus part of the abelianization lives in (1+M)/(1+M^t_depth)."""
        return self.i + 1 if self.kind != "K" else 2 * self.i

    @property
    def label(self) -> str:
        if self.kind == "I+" and self.i == 0:
            return "I"
        if self.kind == "K":
            return f"K_{self.i}"
        return f"I{self.kind[1]}_{self.i}"

    def __repr__(self) -> str:
        return self.label

    def contains(self, R: LocalRing, g: Matrix) -> bool:
        a, b, c, d = g
        cl, bl, tl = self.levels
        one = R.one
        return (
            R.valuation(R.sub(a, one)) >= min(tl, R.L)
            and R.valuation(R.sub(d, one)) >= min(tl, R.L)
            and R.valuation(c) >= min(cl, R.L)
            and R.valuation(b) >= min(bl, R.L)
        )

    def is_subgroup_of(self, other: "SubgroupSpec") -> bool:
        return all(x >= y for x, y in zip(self.levels, other.levels))


# ---------------------------------------------------------------- matrices


def identity(R: LocalRing) -> Matrix:
    return (R.one, R.zero, R.zero, R.one)


def mat_mul(R: LocalRing, A: Matrix, B: Matrix) -> Matrix:
    a, b, c, d = A
    e, f, g, h = B
    m, s = R.mul, R.add
    return (s(m(a, e), m(b, g)), s(m(a, f), m(b, h)), s(m(c, e), m(d, g)), s(m(c, f), m(d, h)))


def mat_inv(R: LocalRing, A: Matrix) -> Matrix:
    """Inverse of a determinant-one matrix."""
    a, b, c, d = A
    return (d, R.neg(b), R.neg(c), a)


def mat_prod(R: LocalRing, *mats: Matrix) -> Matrix:
    out = identity(R)
    for M in mats:
        out = mat_mul(R, out, M)
    return out


def mat_pow(R: LocalRing, A: Matrix, e: int) -> Matrix:
    if e < 0:
        A, e = mat_inv(R, A), -e
    out, base = identity(R), A
    while e:
        if e & 1:
            out = mat_mul(R, out, base)
        base = mat_mul(R, base, base)
        e >>= 1
    return out


def conjugate(R: LocalRing, u: Matrix, g: Matrix) -> Matrix:
    """u g u^-1."""
    return mat_prod(R, u, g, mat_inv(R, u))


def commutator(R: LocalRing, g: Matrix, h: Matrix) -> Matrix:
    return mat_prod(R, g, h, mat_inv(R, g), mat_inv(R, h))


def reduce_matrix(R: LocalRing, g: Matrix, target: LocalRing) -> Matrix:
    return tuple(R.reduce(x, target) for x in g)


def u_plus(R: LocalRing, x) -> Matrix:
    return (R.one, x, R.zero, R.one)


def u_minus(R: LocalRing, x) -> Matrix:
    return (R.one, R.zero, x, R.one)


def diag(R: LocalRing, t) -> Matrix:
    return (t, R.zero, R.zero, R.inv(t))


def from_elementary(R: LocalRing, u: Elementary) -> Matrix:
    z, n, sign = u.x
    x = R.monomial(z, n, sign) if n < R.L else R.zero
    return u_plus(R, x) if u.kind == "+" else u_minus(R, x)


def n_conjugate(R: LocalRing, g: Matrix) -> Matrix:
    """N g N^-1 for N = (0 1; pi 0); the result is known modulo M^(L-1)."""
    a, b, c, d = g
    R1 = R.at_level(R.L - 1)
    red = lambda x: R.reduce(x, R1)
    return (red(d), red(R.div_pi(c, 1)), red(R.times_pi(b)), red(a))


def iwahori_factor(R: LocalRing, g: Matrix, spec: SubgroupSpec | None = None):
    """(c, t, b) with g = u_-(c) diag(t, t^-1) u_+(b)."""
    a, b, c, _ = g
    if not R.is_unit(a) or (spec is not None and not spec.contains(R, g)):
        raise MembershipError(f"matrix is not in {spec.label if spec else 'the big cell'}")
    ai = R.inv(a)
    return R.mul(c, ai), a, R.mul(b, ai)


def iwahori_assemble(R: LocalRing, c, t, b) -> Matrix:
    tb = R.mul(t, b)
    return (t, tb, R.mul(c, t), R.add(R.mul(R.mul(c, t), b), R.inv(t)))


# ---------------------------------------------------------------- generators

# A named generator is a tuple:
#   ("-", z, l)  u_-([z] pi^l)      ("+", z, l)  u_+([z] pi^l)
#   ("t", z, l)  diag(1 + [z] pi^l)  ("-1",)     -Id


def realize(R: LocalRing, gen: tuple) -> Matrix:
    kind = gen[0]
    if kind == "-1":
        m = R.neg(R.one)
        return (m, R.zero, R.zero, m)
    _, z, lev = gen
    x = R.monomial(z, lev) if lev < R.L else R.zero
    if kind == "+":
        return u_plus(R, x)
    if kind == "-":
        return u_minus(R, x)
    return diag(R, R.add(R.one, x))


def gen_label(gen: tuple) -> str:
    if gen[0] == "-1":
        return "-Id"
    kind, z, lev = gen
    if kind == "t":
        return f"d(1+pi^{lev}[{z}])"
    return f"u{kind}(pi^{lev}[{z}])"


def _basis_codes(p: int, f: int) -> list[int]:
    return [p**r for r in range(f)]


def _base_levels(p: int, char_case: CharCase, depth: int) -> list[int]:
    """Levels j < depth carrying a torus generator not killed by p-th powers."""
    if char_case is CharCase.ZERO:
        return [1] if depth > 1 else []
    return [j for j in range(1, depth) if j % p]


def named_candidates(p: int, f: int, char_case: CharCase, spec: SubgroupSpec) -> list[tuple]:
    """The preferred Frattini basis: c-digits, torus generators, b-digits."""
    cl, bl, tl = spec.levels
    E = _basis_codes(p, f)
    out = [("-", e, cl) for e in E]
    if p == 2 and char_case is CharCase.ZERO and spec.kind != "K":
        out.append(("-1",))
    if spec.kind == "K":
        out += [("t", e, tl) for e in E]
    else:
        out += [("t", e, j) for j in _base_levels(p, char_case, spec.t_depth) for e in E]
    out += [("+", e, bl) for e in E]
    return out


def all_generators(p: int, f: int, spec: SubgroupSpec, L: int) -> list[tuple]:
    """Elements generating the image of the subgroup in SL2(O/M^L)."""
    cl, bl, tl = spec.levels
    E = _basis_codes(p, f)
    out = [("-", e, j) for j in range(cl, L) for e in E]
    out += [("t", e, j) for j in range(tl, L) for e in E]
    out += [("+", e, j) for j in range(bl, L) for e in E]
    return out


def default_level(p: int, char_case: CharCase, spec: SubgroupSpec) -> int:
    """Smallest ambient level at which K_L lies in the Frattini subgroup (p odd)."""
    cl, bl, _ = spec.levels
    L = max(cl + 1, bl + 1, spec.t_depth, 2)
    return L + 1 if p == 2 else L


# ---------------------------------------------------------------- quotients


class FrattiniQuotient:
    """Delta / Phi(Delta) with a basis of named representatives."""

    backend = "abstract"

    def __init__(self, params: FieldParams, spec: SubgroupSpec, L: int, basis: list[tuple]):
        self.params = params
        self.p, self.f, self.char_case = params.p, params.f, params.char_case
        self.spec = spec
        self.L = L
        self.basis = list(basis)
        self.labels = [gen_label(g) for g in self.basis]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"FrattiniQuotient({self.spec.label}, {self.params.label()}, dim={self.dim}, {self.backend})"

    def ring(self, L: int | None = None) -> LocalRing:
        return local_ring(self.p, self.f, self.char_case, self.L if L is None else L)

    def reps(self, R: LocalRing) -> list[Matrix]:
        return [realize(R, g) for g in self.basis]

    def coords(self, R: LocalRing, g: Matrix) -> np.ndarray:
        if R.L < self.L:
            raise LevelError(f"need ambient level >= {self.L}, got {R.L}")
        if not self.spec.contains(R, g):
            raise MembershipError(f"matrix is not in {self.spec.label}")
        return self._coords(R, g)

    def _coords(self, R: LocalRing, g: Matrix) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError


class CoordinateFrattini(FrattiniQuotient):
    """Frattini quotient read off from Iwahori coordinates (p odd).

    The c- and b-parts are single Teichmuller digits; the torus part is
    (1+M)/(1+M^depth) modulo p-th powers, computed by peeling digits off
    against the generators 1 + [e_r] pi^j, p not dividing j.
    """

    backend = "coordinate"

    def __init__(self, params: FieldParams, spec: SubgroupSpec, L: int | None = None):
        if params.p == 2:
            raise BackendUnsupported("the coordinate backend needs p odd")
        if spec.kind == "K" and spec.i > 1:
            raise BackendUnsupported("the coordinate backend handles K_1 only")
        if L is None:
            L = default_level(params.p, params.char_case, spec)
        super().__init__(params, spec, L, named_candidates(params.p, params.f, params.char_case, spec))
        self._tlevels = _base_levels(self.p, self.char_case, spec.t_depth)

    def _coords(self, R: LocalRing, g: Matrix) -> np.ndarray:
        c, t, b = iwahori_factor(R, g)
        cl, bl, _ = self.spec.levels
        Fq = R.Fq
        parts = [Fq.fp_vector(R.digit(c, cl))]
        parts.append(self._torus_coords(R, t))
        parts.append(Fq.fp_vector(R.digit(b, bl)))
        return np.concatenate(parts).astype(np.int64)

    def _torus_coords(self, R: LocalRing, t) -> np.ndarray:
        p, f, Fq = self.p, self.f, R.Fq
        depth = self.spec.t_depth
        if not self._tlevels:
            return np.zeros(0, dtype=np.int64)
        if self.char_case is CharCase.ZERO:
            return Fq.fp_vector(R.digit(R.sub(t, R.one), 1))
        E = _basis_codes(p, f)
        found: dict[int, np.ndarray] = {}
        cur = t
        for lev in range(1, depth):
            x = R.digit(R.sub(cur, R.one), lev)
            s, j0 = 0, lev
            while j0 % p == 0:
                j0 //= p
                s += 1
            a = Fq.fp_vector(Fq.frobenius(x, (-s) % f)) if x else np.zeros(f, dtype=np.int64)
            if s == 0:
                found[lev] = a
            for r, ar in enumerate(a):
                if ar:
                    g = R.add(R.one, R.monomial(E[r], j0))
                    cur = R.mul(cur, R.pow(g, -int(ar) * p**s))
        return np.concatenate([found[j] for j in self._tlevels]).astype(np.int64)


class _RingTables:
    """Addition and multiplication tables of O/M^L on integer codes."""

    def __init__(self, R: LocalRing):
        if R.size > MAX_RING_SIZE:
            raise EnumerationTooLarge(f"ring of size {R.size} is too large to tabulate")
        self.R = R
        S = self.S = R.size
        elems = [R.decode(x) for x in range(S)]
        C = np.array(elems, dtype=np.int64)
        if R.char_case is CharCase.ZERO:
            m = R.modulus
            weights = m ** np.arange(R.f, dtype=np.int64)
            red = np.array([R._red[e] for e in range(R.f, 2 * R.f - 1)], dtype=np.int64).reshape(-1, R.f)
        else:
            Fq = R.Fq
            weights = R.q ** np.arange(R.L, dtype=np.int64)
        self.add = np.zeros((S, S), dtype=np.int64)
        self.mul = np.zeros((S, S), dtype=np.int64)
        for x in range(S):
            A = C[x][None, :]
            if R.char_case is CharCase.ZERO:
                self.add[x] = ((A + C) % m) @ weights
                prod = np.zeros((S, 2 * R.f - 1), dtype=np.int64)
                for i in range(R.f):
                    prod[:, i : i + R.f] += A[0, i] * C
                prod %= m
                out = prod[:, : R.f]
                for e in range(R.f, 2 * R.f - 1):
                    out = out + prod[:, e : e + 1] * red[e - R.f][None, :]
                self.mul[x] = (out % m) @ weights
            else:
                self.add[x] = Fq.aadd(np.broadcast_to(A, C.shape), C) @ weights
                out = np.zeros_like(C)
                for i in range(R.L):
                    if C[x, i]:
                        prod = Fq.amul(np.int64(C[x, i]), C[:, : R.L - i])
                        out[:, i:] = Fq.aadd(out[:, i:], prod)
                self.mul[x] = out @ weights
        self.one = R.encode(R.one)
        self.zero = R.encode(R.zero)
        self.neg = np.array([R.encode(R.neg(e)) for e in elems], dtype=np.int64)
        self.val = np.array([R.valuation(e) for e in elems], dtype=np.int64)
        inv = np.full(S, -1, dtype=np.int64)
        units = np.flatnonzero(self.val == 0)
        inv[units] = np.argmax(self.mul[units] == self.one, axis=1)
        self.inv = inv


class _GroupArrays:
    """Vectorized arithmetic on arrays of matrices stored as (N, 4) ring codes."""

    def __init__(self, T: _RingTables):
        self.T = T
        S = T.S
        self.weights = np.array([S**3, S**2, S, 1], dtype=np.int64)

    def mul(self, X, Y):
        A, M = self.T.add, self.T.mul
        return np.stack(
            [
                A[M[X[:, 0], Y[:, 0]], M[X[:, 1], Y[:, 2]]],
                A[M[X[:, 0], Y[:, 1]], M[X[:, 1], Y[:, 3]]],
                A[M[X[:, 2], Y[:, 0]], M[X[:, 3], Y[:, 2]]],
                A[M[X[:, 2], Y[:, 1]], M[X[:, 3], Y[:, 3]]],
            ],
            axis=1,
        )

    def inv(self, X):
        n = self.T.neg
        return np.stack([X[:, 3], n[X[:, 1]], n[X[:, 2]], X[:, 0]], axis=1)

    def keys(self, X):
        return X @ self.weights

    def power(self, X, e: int):
        out = np.tile(self.identity(), (X.shape[0], 1))
        for _ in range(e):
            out = self.mul(out, X)
        return out

    def identity(self):
        T = self.T
        return np.array([[T.one, T.zero, T.zero, T.one]], dtype=np.int64)


def _member(sorted_keys: np.ndarray, keys: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(sorted_keys, keys)
    idx = np.minimum(idx, len(sorted_keys) - 1)
    return sorted_keys[idx] == keys


class BruteFrattini(FrattiniQuotient):
    """Frattini quotient by enumerating the image of the group in SL2(O/M^L)."""

    backend = "brute"

    def __init__(self, params: FieldParams, spec: SubgroupSpec, L: int | None = None):
        p, f, cc = params.p, params.f, params.char_case
        if L is None:
            L = default_level(p, cc, spec)
        R = local_ring(p, f, cc, L)
        cl, bl, tl = spec.levels
        q = R.q
        size = q ** max(L - cl, 0) * q ** max(L - tl, 0) * q ** max(L - bl, 0)
        if size > MAX_GROUP_SIZE:
            raise EnumerationTooLarge(f"{spec.label} at level {L} has {size} elements")
        self.group_order = size
        T = self._tables = _RingTables(R)
        G = self._G = _GroupArrays(T)
        self._ring = R

        def to_codes(gens):
            return np.array([[R.encode(x) for x in realize(R, g)] for g in gens], dtype=np.int64)

        named = named_candidates(p, f, cc, spec)
        gens = all_generators(p, f, spec, L)
        cand = named + [g for g in gens if g not in named]
        gen_arr = to_codes(gens)

        # Phi = normal closure of p-th powers and commutators of generators
        seeds = [G.power(gen_arr, p)]
        for i in range(len(gens)):
            a = gen_arr[i : i + 1].repeat(len(gens), axis=0)
            seeds.append(G.mul(G.mul(a, gen_arr), G.mul(G.inv(a), G.inv(gen_arr))))
        seeds = np.unique(np.concatenate(seeds), axis=0)
        phi_elems, phi_keys = self._normal_closure(seeds, gen_arr)
        self.phi_order = len(phi_keys)

        # greedy basis from the candidates, building the coset table as we go
        elems, coords = phi_elems, np.zeros((len(phi_keys), 0), dtype=np.int64)
        keys_sorted = phi_keys
        basis = []
        cand_arr = to_codes(cand)
        for g, row in zip(cand, cand_arr):
            if len(keys_sorted) == size:
                break
            if _member(keys_sorted, G.keys(row[None, :]))[0]:
                continue
            basis.append(g)
            parts_e, parts_c = [elems], [np.hstack([coords, np.zeros((len(elems), 1), dtype=np.int64)])]
            cur = elems
            for j in range(1, p):
                cur = G.mul(cur, np.broadcast_to(row, cur.shape))
                parts_e.append(cur)
                parts_c.append(np.hstack([coords, np.full((len(cur), 1), j, dtype=np.int64)]))
            elems = np.concatenate(parts_e)
            coords = np.concatenate(parts_c)
            keys = G.keys(elems)
            order = np.argsort(keys)
            elems, coords, keys_sorted = elems[order], coords[order], keys[order]
        if len(keys_sorted) != size or len(np.unique(keys_sorted)) != size:
            raise StabilityFailure(f"coset table for {spec.label} is inconsistent")
        self._keys, self._coords_table = keys_sorted, coords
        super().__init__(params, spec, L, basis)

    def _generate(self, gens: np.ndarray):
        G = self._G
        elems = G.identity()
        keys = G.keys(elems)
        frontier = elems
        while len(frontier):
            n, m = len(frontier), len(gens)
            prods = G.mul(np.repeat(frontier, m, axis=0), np.tile(gens, (n, 1)))
            pk, idx = np.unique(G.keys(prods), return_index=True)
            new = ~_member(keys, pk)
            frontier = prods[idx[new]]
            elems = np.concatenate([elems, frontier])
            keys = np.concatenate([keys, pk[new]])
            order = np.argsort(keys)
            elems, keys = elems[order], keys[order]
        return elems, keys

    def _normal_closure(self, seeds: np.ndarray, conj: np.ndarray):
        G = self._G
        gens = seeds
        while True:
            elems, keys = self._generate(gens)
            extra = []
            for g in conj:
                ga = np.broadcast_to(g, gens.shape)
                c = G.mul(G.mul(ga, gens), G.inv(ga))
                bad = ~_member(keys, G.keys(c))
                if bad.any():
                    extra.append(c[bad])
            if not extra:
                return elems, keys
            gens = np.unique(np.concatenate([gens] + extra), axis=0)

    def _coords(self, R: LocalRing, g: Matrix) -> np.ndarray:
        R0 = self._ring
        code = np.array([[R0.encode(R.reduce(x, R0)) for x in g]], dtype=np.int64)
        key = self._G.keys(code)
        idx = int(np.searchsorted(self._keys, key[0]))
        if idx >= len(self._keys) or self._keys[idx] != key[0]:
            raise MembershipError(f"matrix is not in {self.spec.label}")
        return self._coords_table[idx].copy()


BACKENDS = {"coordinate": CoordinateFrattini, "brute": BruteFrattini}


def _build(params: FieldParams, spec: SubgroupSpec, backend: str, L: int | None) -> FrattiniQuotient:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    return BACKENDS[backend](params, spec, L)


def _key(params: FieldParams) -> FieldParams:
    return FieldParams(params.p, params.f, params.char_case)


@functools.lru_cache(maxsize=None)
def _cached(params: FieldParams, spec: SubgroupSpec, backend: str, L: int | None, check: bool) -> FrattiniQuotient:
    Q = _build(params, spec, backend, L)
    if check:
        check_stability(Q)
    return Q


def frattini_quotient(
    params: FieldParams,
    spec: SubgroupSpec,
    backend: str = "coordinate",
    L: int | None = None,
    check: bool = True,
) -> FrattiniQuotient:
    """The Frattini quotient of ``spec``; by default verified one level up."""
    return _cached(_key(params), spec, backend, L, check)


def check_stability(Q: FrattiniQuotient) -> None:
    """Rebuild one level up and compare dimensions and coordinate maps."""
    Q1 = _build(Q.params, Q.spec, Q.backend, Q.L + 1)
    if Q1.dim != Q.dim:
        raise StabilityFailure(f"{Q.spec.label}: dim {Q.dim} at level {Q.L} but {Q1.dim} at {Q.L + 1}")
    R1 = Q1.ring()
    for g in all_generators(Q.p, Q.f, Q.spec, Q1.L) + Q.basis:
        x = realize(R1, g)
        if not np.array_equal(Q.coords(R1, x), _rebase(Q, Q1, R1, x)):
            raise StabilityFailure(f"{Q.spec.label}: coordinate maps at levels {Q.L}, {Q1.L} disagree")


def _rebase(Q: FrattiniQuotient, Q1: FrattiniQuotient, R1: LocalRing, x: Matrix) -> np.ndarray:
    """Coordinates of x in the basis of Q, computed through Q1."""
    B = np.array([Q1.coords(R1, r) for r in Q.reps(R1)], dtype=np.int64).reshape(Q.dim, Q1.dim)
    X = solve_left(field(Q.p), B, Q1.coords(R1, x)[None, :])
    if X is None:
        raise StabilityFailure(f"{Q.spec.label}: basis does not survive at level {Q1.L}")
    return X[0]


# ---------------------------------------------------------------- maps


def ambient_ring(*Qs: FrattiniQuotient, extra: int = 0) -> LocalRing:
    Q = Qs[0]
    return local_ring(Q.p, Q.f, Q.char_case, max(x.L for x in Qs) + extra)


def inclusion_matrix(sub: FrattiniQuotient, sup: FrattiniQuotient) -> np.ndarray:
    """Matrix B with x_sup = x_sub B for the map induced by inclusion."""
    if not sub.spec.is_subgroup_of(sup.spec):
        raise NotASubgroupPair(f"{sub.spec.label} is not contained in {sup.spec.label}")
    R = ambient_ring(sub, sup)
    rows = [sup.coords(R, r) for r in sub.reps(R)]
    return np.array(rows, dtype=np.int64).reshape(sub.dim, sup.dim)


def coset_representatives(R: LocalRing, sup: SubgroupSpec, sub: SubgroupSpec) -> list[Matrix]:
    """Representatives gamma of the right cosets sub * gamma in sup (index q or 1)."""
    if not sub.is_subgroup_of(sup):
        raise NotASubgroupPair(f"{sub.label} is not contained in {sup.label}")
    gap = [x - y for x, y in zip(sub.levels, sup.levels)]
    if gap == [0, 0, 0]:
        return [identity(R)]
    digits = [R.teichmuller(z) for z in R.Fq.elements()]
    if gap == [1, 0, 0]:
        return [u_minus(R, R.times_pi(x, sup.levels[0])) for x in digits]
    if gap == [0, 1, 0]:
        return [u_plus(R, R.times_pi(x, sup.levels[1])) for x in digits]
    raise NotASubgroupPair(f"{sub.label} does not have index q in {sup.label}")


def transfer_element(sup: FrattiniQuotient, sub: FrattiniQuotient, R: LocalRing, g: Matrix) -> np.ndarray:
    """Coordinates in sub of tr(g) = prod_i gamma_i g gamma_j(i)^-1."""
    if not sup.spec.contains(R, g):
        raise MembershipError(f"matrix is not in {sup.spec.label}")
    gammas = coset_representatives(R, sup.spec, sub.spec)
    inv = [mat_inv(R, y) for y in gammas]
    total = np.zeros(sub.dim, dtype=np.int64)
    for y in gammas:
        yg = mat_mul(R, y, g)
        for yi in inv:
            h = mat_mul(R, yg, yi)
            if sub.spec.contains(R, h):
                total = (total + sub.coords(R, h)) % sub.p
                break
        else:  # pragma: no cover - the representatives cover every coset
            raise NotASubgroupPair("coset representatives are incomplete")
    return total


def transfer_matrix(sup: FrattiniQuotient, sub: FrattiniQuotient) -> np.ndarray:
    """Matrix A with tr(x) = x A from sup_Phi to sub_Phi."""
    R = ambient_ring(sup, sub)
    rows = [transfer_element(sup, sub, R, r) for r in sup.reps(R)]
    return np.array(rows, dtype=np.int64).reshape(sup.dim, sub.dim)


def conjugation_matrix(Q: FrattiniQuotient, u: Matrix | Elementary, R: LocalRing | None = None) -> np.ndarray:
    """Matrix C of x -> u x u^-1 on Q (u must normalize the group)."""
    if R is None:
        R = ambient_ring(Q)
    if isinstance(u, Elementary):
        u = from_elementary(R, u)
    for g in all_generators(Q.p, Q.f, Q.spec, R.L) + Q.basis:
        if not Q.spec.contains(R, conjugate(R, u, realize(R, g))):
            raise NotNormalizing(f"matrix does not normalize {Q.spec.label}")
    rows = [Q.coords(R, conjugate(R, u, r)) for r in Q.reps(R)]
    return np.array(rows, dtype=np.int64).reshape(Q.dim, Q.dim)


def n_conjugation_matrix(src: FrattiniQuotient, dst: FrattiniQuotient) -> np.ndarray:
    """Matrix of x -> N x N^-1 from src_Phi to dst_Phi."""
    R = ambient_ring(src, dst, extra=1)
    R1 = R.at_level(R.L - 1)
    rows = []
    for r in src.reps(R):
        h = n_conjugate(R, r)
        if not dst.spec.contains(R1, h):
            raise NotNormalizing(f"N does not conjugate {src.spec.label} into {dst.spec.label}")
        rows.append(dst.coords(R1, h))
    return np.array(rows, dtype=np.int64).reshape(src.dim, dst.dim)


def h1_map(kind: str, source: FrattiniQuotient, target: FrattiniQuotient, u=None) -> np.ndarray:
    """Matrix (row-vector convention) of a map H^1(source, k) -> H^1(target, k).

    Classes are functionals on Frattini quotients, stored as row vectors a
    with alpha(x) = x . a.  The maps are the transposes of the group-side
    matrices: res for target inside source, cores for source inside target,
    conj for u^* alpha = alpha(u . u^-1) with source = target.
    """
    if kind == "res":
        return inclusion_matrix(target, source).T.copy()
    if kind == "cores":
        return transfer_matrix(target, source).T.copy()
    if kind == "conj":
        if source.spec != target.spec:
            raise NotASubgroupPair("conjugation acts on a single group")
        return conjugation_matrix(source, u).T.copy()
    raise ValueError(f"unknown map kind {kind!r}")
