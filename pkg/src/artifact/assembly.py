"""Truncations of H^1(I, X^{K_m}) as pieces H^j(J_w, k) with the Hecke operators.

Pieces are indexed by w in W~ with grade l(w) + sigma(w) <= n_max.  Each
piece carries the cohomology of its Shapiro group J_w, presented through a
Frattini quotient.  Operators are assembled blockwise over F_p as matrices
acting on row vectors; a row for a piece of top grade is left at zero since
the image would leave the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import CheckFailure, DomainError, LevelError
from .finring import FieldParams, field
from .hecke import Character, HeckeAlgebra, HeckeElt
from .hmodule import FinModule, classify, decompose_Hx0, dual_iota_twist
from .progroup import FrattiniQuotient, SubgroupSpec, frattini_quotient, h1_map
from .weyl import Elementary, WeylElt


@dataclass(frozen=True)
class Piece:
    w: WeylElt
    grade: int
    length: int
    sigma: int
    spec: SubgroupSpec
    offset: int
    dim: int

    @property
    def slice(self) -> slice:
        return slice(self.offset, self.offset + self.dim)


def shapiro_group(length: int, sigma: int, m: int) -> SubgroupSpec:
    if sigma == 1:
        return SubgroupSpec.I_plus(min(length, m - 1))
    return SubgroupSpec.I_minus(min(length, m))


# How tau_omega moves pieces: "inverse" gives (x tau_omega)_w = x_{w omega},
# "forward" gives (x tau_omega)_{w omega} = x_w.  The two differ by the
# automorphism tau_omega -> tau_omega^-1 of H, which swaps lambda and lambda^-1.
OMEGA_CONVENTIONS = ("inverse", "forward")


def default_backend(params: FieldParams) -> str:
    return "brute" if params.p == 2 else "coordinate"


class Truncation:
    """The graded space C_{n_max} with tau_s0, tau_s1 and tau_omega matrices over F_p."""

    def __init__(
        self,
        params: FieldParams,
        m: int,
        n_max: int | None = None,
        degree: int = 1,
        backend: str | None = None,
        omega_convention: str = "inverse",
    ):
        n_max = m if n_max is None else n_max
        if m < 1:
            raise LevelError("m must be at least 1")
        if n_max < m:
            raise LevelError("n_max must be at least m")
        if degree not in (0, 1):
            raise DomainError("only degrees 0 and 1 are supported")
        if omega_convention not in OMEGA_CONVENTIONS:
            raise DomainError(f"unknown omega convention {omega_convention!r}")
        self.omega_convention = omega_convention
        self.params, self.m, self.n_max, self.degree = params, m, n_max, degree
        self.backend = backend or default_backend(params)
        self.p = params.p
        self.H = HeckeAlgebra(params.p, params.f, params.kdeg)
        self.W = self.H.W
        self.Fp = field(params.p, 1)
        self._quotients: dict[SubgroupSpec, FrattiniQuotient] = {}
        self._maps: dict[tuple, np.ndarray] = {}

        self.pieces: list[Piece] = []
        off = 0
        for n in range(1, n_max + 1):
            for w in self.W.pieces(n):
                ell, sig = self.W.length_sigma(w)
                spec = shapiro_group(ell, sig, m)
                d = self._space_dim(spec)
                self.pieces.append(Piece(w, n, ell, sig, spec, off, d))
                off += d
        self.dim = off
        self.index = {P.w: P for P in self.pieces}
        self.T = (self._build_s(0), self._build_s(1))
        self._omega: dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"Truncation({self.params.label()}, m={self.m}, n_max={self.n_max}, j={self.degree})"

    # per-piece cohomology
    def quotient(self, spec: SubgroupSpec) -> FrattiniQuotient:
        if spec not in self._quotients:
            self._quotients[spec] = frattini_quotient(self.params, spec, backend=self.backend)
        return self._quotients[spec]

    def _space_dim(self, spec: SubgroupSpec) -> int:
        return 1 if self.degree == 0 else self.quotient(spec).dim

    def piece_map(self, kind: str, src: SubgroupSpec, dst: SubgroupSpec, u: Elementary | None = None) -> np.ndarray:
        key = (kind, src, dst, u)
        if key not in self._maps:
            if self.degree == 0:
                # H^0 = k: res and conj are the identity, cores is the index
                zero = kind == "cores" and src != dst
                M = np.array([[0 if zero else 1]], dtype=np.int64)
            else:
                M = h1_map(kind, self.quotient(src), self.quotient(dst), u)
            self._maps[key] = M
        return self._maps[key]

    # operators
    def _target(self, w: WeylElt) -> Piece:
        P = self.index.get(w)
        if P is None:
            raise LevelError(f"{w} lies outside the truncation")
        return P

    def _build_s(self, i: int) -> np.ndarray:
        W, Fp = self.W, self.Fp
        s = W.s[i]
        T = la.zeros(self.dim, self.dim)
        for P in self.pieces:
            if P.grade == self.n_max:
                continue
            ws = W.mul(P.w, s)
            Q = self._target(ws)
            if Q.length == P.length + 1:
                T[P.slice, Q.slice] = self.piece_map("res", P.spec, Q.spec)
                continue
            if P.grade <= self.m:
                T[P.slice, Q.slice] = self.piece_map("cores", P.spec, Q.spec)
            for z in W.F.units():
                R = self._target(W.mul(P.w, W.omega(z)))
                if P.grade <= self.m:
                    M = self.piece_map("conj", P.spec, P.spec, W.u_ws(P.w, i, z))
                else:
                    M = la.identity(P.dim)
                T[P.slice, R.slice] = Fp.aadd(T[P.slice, R.slice], M)
        return T

    def omega_matrix(self, z: int) -> np.ndarray:
        if z not in self._omega:
            M = la.zeros(self.dim, self.dim)
            om = self.W.omega(z if self.omega_convention == "forward" else self.W.F.inv(z))
            for P in self.pieces:
                M[P.slice, self._target(self.W.mul(P.w, om)).slice] = la.identity(P.dim)
            self._omega[z] = M
        return self._omega[z]

    @property
    def Tg(self) -> np.ndarray:
        return self.omega_matrix(self.W.F.gen)

    def omega_algebra_matrix(self, h: HeckeElt) -> np.ndarray:
        """Matrix of an element of k[Omega] with coefficients in F_p."""
        k, Fp = self.H.k, self.Fp
        out = la.zeros(self.dim, self.dim)
        for w, c in h.terms.items():
            if w.anti or w.n:
                raise DomainError("element is not supported on Omega")
            if c >= self.p:
                raise DomainError("coefficient does not lie in F_p")
            out = Fp.aadd(out, Fp.amul(np.int64(c), self.omega_matrix(w.z)))
        return out

    # grading
    def grade_mask(self, lo: int, hi: int) -> np.ndarray:
        mask = np.zeros(self.dim, dtype=bool)
        for P in self.pieces:
            if lo <= P.grade <= hi:
                mask[P.slice] = True
        return mask

    def grade_basis(self, lo: int, hi: int) -> np.ndarray:
        idx = np.flatnonzero(self.grade_mask(lo, hi))
        B = la.zeros(len(idx), self.dim)
        B[np.arange(len(idx)), idx] = 1
        return B

    def components(self, x: np.ndarray) -> dict[WeylElt, np.ndarray]:
        return {P.w: x[P.slice] for P in self.pieces if np.any(x[P.slice])}

    def apply(self, x: np.ndarray, w: WeylElt) -> np.ndarray:
        """Rows of x times tau_w, refusing to step outside the domain."""
        letters, om = self.W.reduced_word(w)
        top = self.grade_mask(self.n_max, self.n_max)
        x = la.as_matrix(x)
        for i in letters:
            if np.any(x[:, top]):
                raise LevelError(f"tau_{w} leaves the truncation")
            x = self.Fp.matmul(x, self.T[i])
        return self.Fp.matmul(x, self.omega_matrix(om.z))

    def relation_defects(self) -> list[str]:
        """Quadratic and Omega relations on C_{n_max - 2}, where both sides are defined."""
        Fp = self.Fp
        out = []
        X = self.grade_basis(1, self.n_max - 2)
        E = self.omega_algebra_matrix(self.H.e1())
        g = self.W.F.gen
        for i in (0, 1):
            T = self.T[i]
            if X.shape[0]:
                lhs = Fp.matmul(Fp.matmul(X, T), T)
                rhs = Fp.aneg(Fp.matmul(Fp.matmul(X, E), T))
                if not np.array_equal(lhs, rhs):
                    out.append(f"quadratic relation for tau_s{i}")
            X1 = self.grade_basis(1, self.n_max - 1)
            lhs = Fp.matmul(Fp.matmul(X1, T), self.omega_matrix(g))
            rhs = Fp.matmul(Fp.matmul(X1, self.omega_matrix(self.W.F.inv(g))), T)
            if not np.array_equal(lhs, rhs):
                out.append(f"tau_s{i} tau_omega = tau_omega^-1 tau_s{i}")
        return out

    def submodule(self, V: np.ndarray) -> FinModule:
        """The H-module on an invariant subspace of C_{n_max - 1}."""
        Fp = self.Fp
        if V.shape[0] == 0:
            z = la.zeros(0, 0)
            return FinModule(self.H, "right", z, z, z)
        mats = [la.restrict(Fp, V, M) for M in (self.T[0], self.T[1], self.Tg)]
        return FinModule(self.H, "right", *mats)


def build_truncation(
    params: FieldParams,
    m: int,
    n_max: int | None = None,
    degree: int = 1,
    backend: str | None = None,
    omega_convention: str = "inverse",
) -> Truncation:
    return Truncation(params, m, n_max, degree, backend, omega_convention)


# the largest finite submodule


@dataclass
class FiniteSubmodule:
    truncation: Truncation
    basis: np.ndarray
    module: FinModule

    @property
    def dim(self) -> int:
        return self.module.dim


def stable_subspace(Fp, V: np.ndarray, ops: list[np.ndarray]) -> np.ndarray:
    """Largest subspace of rowspace(V) mapped into itself by every op."""
    V = la.row_basis(Fp, V)
    n = V.shape[1]
    while V.shape[0]:
        ann = la.nullspace(Fp, V, ncols=n).T
        if ann.shape[1] == 0:
            return V
        cond = np.hstack([Fp.matmul(Fp.matmul(V, A), ann) for A in ops])
        Y = la.left_nullspace(Fp, cond)
        if Y.shape[0] == V.shape[0]:
            return V
        V = la.row_basis(Fp, Fp.matmul(Y, V), n) if Y.shape[0] else la.zeros(0, n)
    return V


def largest_finite_submodule(T: Truncation) -> FiniteSubmodule:
    """M^1: the largest H-stable subspace of C_{m-1}."""
    V = stable_subspace(T.Fp, T.grade_basis(1, T.m - 1), [T.T[0], T.T[1]])
    return FiniteSubmodule(T, V, T.submodule(V))


def finite_submodule(
    params: FieldParams, m: int, backend: str | None = None, omega_convention: str = "inverse"
) -> FiniteSubmodule:
    return largest_finite_submodule(build_truncation(params, m, backend=backend, omega_convention=omega_convention))


def socle_table(M: FinModule) -> dict[Character, int]:
    return {chi: (M.eigenspace(chi).shape[0] if M.dim else 0) for chi in M.H.characters()}


def z_m(M: FinModule) -> FinModule:
    return dual_iota_twist(M)


def annihilation_checks(M: FinModule, m: int) -> list[tuple[str, bool]]:
    """tau_{v(m)} and zeta^(m-1) kill M, and the dual module is supersingular."""
    if m < 2:
        raise LevelError("the checks need m >= 2")
    H = M.H
    if M.dim == 0:
        return [("tau_v(m) annihilates", True), ("zeta^(m-1) annihilates", True), ("Z_m supersingular", True)]
    out = [
        ("tau_v(m) annihilates", not np.any(M.matrix(H.tau(H.W.v_m(m))))),
        ("zeta^(m-1) annihilates", not np.any(M.matrix(H.zeta_power(m - 1)))),
        ("Z_m supersingular", classify(z_m(M)).is_zeta_torsion),
    ]
    failed = [name for name, ok in out if not ok]
    if failed:
        raise CheckFailure(", ".join(failed))
    return out


def natural_map(src: FiniteSubmodule, dst: Truncation) -> np.ndarray:
    """Coordinates of the basis of src inside dst, piece by piece."""
    T = src.truncation
    out = la.zeros(src.basis.shape[0], dst.dim)
    for P in T.pieces:
        if not np.any(src.basis[:, P.slice]):
            continue
        Q = dst.index.get(P.w)
        if Q is None or Q.spec != P.spec:
            raise CheckFailure(f"piece {P.w} has no counterpart")
        out[:, Q.slice] = src.basis[:, P.slice]
    return out


# H^1(I, X_{x0})


@dataclass
class Hx0Report:
    module: FinModule
    multiset: dict[str, int]
    triv_dim: int
    sign_dim: int


def h1_xx0_module(params: FieldParams, backend: str | None = None) -> FinModule:
    """D_1 with tau_s0 and Omega, as a right H_x0-module."""
    T = build_truncation(params, 1, 2, backend=backend)
    idx = np.flatnonzero(T.grade_mask(1, 1))
    T0 = T.T[0]
    outside = np.ones(T.dim, dtype=bool)
    outside[idx] = False
    if np.any(T0[np.ix_(idx, np.flatnonzero(outside))]):
        raise CheckFailure("tau_s0 does not preserve D_1")
    sub = lambda M: M[np.ix_(idx, idx)].copy()
    return FinModule(T.H, "right", sub(T0), None, sub(T.Tg), "H_x0")


def h1_xx0_decompose(params: FieldParams, backend: str | None = None) -> Hx0Report:
    M = h1_xx0_module(params, backend)
    H, k = M.H, M.k
    ms = decompose_Hx0(M)
    E = M.row_action(M.matrix(H.e1()))
    V1 = la.row_basis(k, E, M.dim)
    T0 = M.row_action(M.T0)
    triv = la.intersect(k, V1, la.left_nullspace(k, T0)).shape[0]
    sign = la.intersect(k, V1, la.left_nullspace(k, k.aadd(T0, la.identity(M.dim)))).shape[0]
    return Hx0Report(M, ms, triv, sign)


# filtration


def filtration_check(
    params: FieldParams, m: int, i: int, degree: int = 1, n_max: int | None = None, backend: str | None = None
) -> list[tuple[str, bool]]:
    """Graded structure of Fil^i = sum of grades > i, and the induced map from D_{i+1}."""
    if i < m:
        raise LevelError("the filtration statements need i >= m")
    n_max = i + 2 if n_max is None else n_max
    if n_max < i + 2:
        raise LevelError("n_max must be at least i + 2")
    T = build_truncation(params, m, n_max, degree, backend)
    Fp, W = T.Fp, T.W
    eps = W.epsilon(i)
    X = T.grade_basis(i + 1, i + 1)
    low = T.grade_mask(1, i)
    graded = T.grade_mask(1, i + 1)
    E = T.omega_algebra_matrix(T.H.e1())
    out = []

    Y = T.grade_basis(i + 1, n_max - 1)
    stable = all(not np.any(Fp.matmul(Y, T.T[s])[:, low]) for s in (0, 1))
    out.append(("Fil^i is stable", stable))
    other = Fp.matmul(X, T.T[1 - eps])
    out.append((f"tau_s{1 - eps} is zero on gr", not np.any(other[:, graded])))
    plus = Fp.aadd(Fp.matmul(X, T.T[eps]), Fp.matmul(X, E))
    out.append((f"tau_s{eps} = -e1 on gr", not np.any(plus[:, graded])))

    wn = W.w_n(i + 1)
    gens = [T.index[wn], T.index[W.mul(W.s0, wn)]]
    X0 = np.vstack([la.identity(T.dim)[P.slice] for P in gens])
    out.append((f"tau_s{eps} + e1 kills the generating pieces", not np.any(
        Fp.aadd(Fp.matmul(X0, T.T[eps]), Fp.matmul(X0, E)))))
    words = [
        w for w in W.elements(n_max - i - 1) if W.length(W.mul(W.s[eps], w)) == W.length(w) + 1
    ]
    images = np.vstack([T.apply(X0, w) for w in words])
    out.append(("induced map is injective", la.rank(Fp, images) == images.shape[0]))
    failed = [name for name, ok in out if not ok]
    if failed:
        raise CheckFailure(", ".join(failed))
    return out
