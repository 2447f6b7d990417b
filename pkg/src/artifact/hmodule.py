"""Finite-dimensional modules over H and H_x0 given by generator matrices.

A module stores matrices for tau_s0, tau_s1 (absent for H_x0-modules) and
tau_omega_g, g the fixed generator of F_q^x.  For either side the matrix of
a product ab is M(a) M(b): right modules act on row vectors (x -> x M),
left modules on column vectors (x -> M x).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg as la
from .errors import CheckFailure, InconsistentMultiplicities
from .hecke import Character, HeckeAlgebra, HeckeElt


@dataclass
class FinModule:
    H: HeckeAlgebra
    side: str
    T0: np.ndarray
    T1: np.ndarray | None
    Tg: np.ndarray
    tag: str = "H"
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        if self.tag == "H_x0":
            self.T1 = None
        self.check_relations()

    @property
    def dim(self) -> int:
        return self.T0.shape[0]

    @property
    def k(self):
        return self.H.k

    def check_relations(self) -> None:
        k, n = self.k, self.dim
        if n == 0:
            return
        I = la.identity(n)
        q1 = self.H.q - 1
        if not np.array_equal(la.power(k, self.Tg, q1), I):
            raise CheckFailure("tau_omega_g does not have order dividing q - 1")
        m_e1 = self.matrix(self.H.e1())
        for i, T in ((0, self.T0), (1, self.T1)):
            if T is None:
                continue
            if not np.array_equal(k.matmul(T, T), k.aneg(k.matmul(m_e1, T))):
                raise CheckFailure(f"quadratic relation fails for tau_s{i}")
            lhs = k.matmul(T, self.Tg)
            rhs = k.matmul(la.power(k, self.Tg, q1 - 1), T)
            if not np.array_equal(lhs, rhs):
                raise CheckFailure(f"tau_s{i} tau_omega = tau_omega^-1 tau_s{i} fails")

    def omega_matrix(self, z: int) -> np.ndarray:
        e = int(self.H.Fq.log[z])
        key = ("omega", e)
        if key not in self._cache:
            self._cache[key] = la.power(self.k, self.Tg, e)
        return self._cache[key]

    def basis_matrix(self, w) -> np.ndarray:
        key = ("tau", w)
        if key not in self._cache:
            letters, om = self.H.W.reduced_word(w)
            M = la.identity(self.dim)
            for i in letters:
                T = self.T0 if i == 0 else self.T1
                if T is None:
                    raise ValueError("tau_s1 does not act on an H_x0-module")
                M = self.k.matmul(M, T)
            self._cache[key] = self.k.matmul(M, self.omega_matrix(om.z))
        return self._cache[key]

    def matrix(self, h: HeckeElt) -> np.ndarray:
        k = self.k
        out = la.zeros(self.dim, self.dim)
        for w, c in h.terms.items():
            out = k.aadd(out, k.amul(np.int64(c), self.basis_matrix(w)))
        return out

    def row_action(self, M: np.ndarray) -> np.ndarray:
        """The matrix acting on row vectors from the right."""
        return M if self.side == "right" else M.T

    def generator_matrices(self) -> list[np.ndarray]:
        return [T for T in (self.T0, self.T1, self.Tg) if T is not None]

    def submodule(self, V: np.ndarray) -> "FinModule":
        """Restriction to the invariant subspace spanned by the rows of V (row convention)."""
        k = self.k
        V = la.row_basis(k, V, self.dim)

        def res(T):
            if T is None:
                return None
            X = la.restrict(k, V, self.row_action(T))
            return X if self.side == "right" else X.T

        if V.shape[0] == 0:
            z = la.zeros(0, 0)
            return FinModule(self.H, self.side, z, None if self.T1 is None else z, z, self.tag)
        return FinModule(self.H, self.side, res(self.T0), res(self.T1), res(self.Tg), self.tag)

    def eigenspace(self, chi: Character) -> np.ndarray:
        """Row basis (row convention) of the chi-eigenspace."""
        k, n = self.k, self.dim
        blocks = []
        I = la.identity(n)
        for T, c in ((self.T0, k.from_int(chi.c0)), (self.T1, k.from_int(chi.c1)), (self.Tg, self.H.lam(chi.j, self.H.Fq.gen))):
            if T is None:
                continue
            blocks.append(self.row_action(k.asub(T, k.amul(np.int64(c), I))))
        if n == 0:
            return la.zeros(0, 0)
        return la.left_nullspace(k, np.hstack(blocks))


def direct_sum(mods: list[FinModule]) -> FinModule:
    H = mods[0].H

    def block(mats):
        n = sum(m.shape[0] for m in mats)
        out = la.zeros(n, n)
        i = 0
        for m in mats:
            d = m.shape[0]
            out[i : i + d, i : i + d] = m
            i += d
        return out

    T1 = None if mods[0].T1 is None else block([m.T1 for m in mods])
    return FinModule(H, mods[0].side, block([m.T0 for m in mods]), T1, block([m.Tg for m in mods]), mods[0].tag)


def character_module(H: HeckeAlgebra, chi: Character, side: str = "right", tag: str = "H") -> FinModule:
    H.character(chi.j, chi.c0, chi.c1)
    k = H.k
    T0 = np.array([[k.from_int(chi.c0)]], dtype=np.int64)
    T1 = np.array([[k.from_int(chi.c1)]], dtype=np.int64)
    Tg = np.array([[H.lam(chi.j, H.Fq.gen)]], dtype=np.int64)
    return FinModule(H, side, T0, T1, Tg, tag)


@dataclass
class Classification:
    supersingular_part: FinModule
    nonsupersingular_part: FinModule
    is_zeta_torsion: bool
    is_zeta_torsionfree: bool


def classify(M: FinModule) -> Classification:
    """Split M into the part killed by a power of zeta and the part where zeta is invertible."""
    k, n = M.k, M.dim
    Z = M.row_action(M.matrix(M.H.zeta))
    Zn = la.power(k, Z, max(n, 1))
    ker = la.left_nullspace(k, Zn) if n else la.zeros(0, 0)
    im = la.row_basis(k, Zn, n)
    ss = M.submodule(ker)
    nss = M.submodule(im)
    if ss.dim + nss.dim != n:
        raise CheckFailure("zeta-splitting dimensions do not add up")
    if ss.dim and np.any(la.power(k, ss.row_action(ss.matrix(M.H.zeta)), ss.dim)):
        raise CheckFailure("zeta is not nilpotent on the supersingular part")
    if nss.dim and la.rank(k, nss.matrix(M.H.zeta)) != nss.dim:
        raise CheckFailure("zeta is not invertible on the nonsupersingular part")
    return Classification(ss, nss, nss.dim == 0, ss.dim == 0)


def _kron(k, A, B):
    m, n = A.shape
    r, s = B.shape
    return k.amul(A[:, None, :, None], B[None, :, None, :]).reshape(m * r, n * s)


def hom_space(M: FinModule, N: FinModule) -> list[np.ndarray]:
    """Basis of module maps M -> N, each as the matrix acting in the module's convention.

    Right modules: x -> x P with P of shape (dim M, dim N).
    Left modules: x -> Q x with Q of shape (dim N, dim M).
    """
    if M.side != N.side:
        raise ValueError("modules must have the same side")
    k = M.k
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    eqs = []
    pairs = [(M.T0, N.T0), (M.T1, N.T1), (M.Tg, N.Tg)]
    for A, B in pairs:
        if A is None or B is None:
            continue
        # right: A P - P B = 0 ; row-major vec(A P B') = (A kron B'^T) vec(P)
        A2, B2 = (A, B) if M.side == "right" else (A.T, B.T)
        eqs.append(k.asub(_kron(k, A2, la.identity(n)), _kron(k, la.identity(m), B2.T)))
    K = la.nullspace(k, np.vstack(eqs), ncols=m * n)
    out = []
    for row in K:
        P = row.reshape(m, n)
        out.append(P if M.side == "right" else P.T)
    return out


def dual_iota_twist(M: FinModule) -> FinModule:
    """The k-dual with h acting through iota; swaps left and right."""
    H, k = M.H, M.k
    e1m = M.matrix(H.e1())

    def tw(T):
        return None if T is None else k.asub(k.aneg(e1m), T)

    side = "left" if M.side == "right" else "right"
    return FinModule(H, side, tw(M.T0), tw(M.T1), M.Tg.copy(), M.tag)


def regular_right_ideal(H: HeckeAlgebra, x: HeckeElt) -> FinModule:
    """The right ideal x H_x0 as a right H_x0-module."""
    k = H.k
    basis = H.basis_Hx0()
    idx = {w: i for i, w in enumerate(basis)}

    def vec(h: HeckeElt) -> np.ndarray:
        v = np.zeros(len(basis), dtype=np.int64)
        for w, c in h.terms.items():
            v[idx[w]] = c
        return v

    span = la.row_basis(k, np.array([vec(x * H.tau(b)) for b in basis]), len(basis))
    d = span.shape[0]

    def act(g: HeckeElt) -> np.ndarray:
        if d == 0:
            return la.zeros(0, 0)
        rows = []
        for r in span:
            h = HeckeElt(H, {basis[i]: int(c) for i, c in enumerate(r) if c})
            rows.append(vec(h * g))
        return la.coordinates(k, span, np.array(rows))

    return FinModule(H, "right", act(H.tau_s(0)), None, act(H.tau_omega(H.Fq.gen)), "H_x0")


def decompose_Hx0(M: FinModule) -> dict[str, int]:
    """Multiplicities of the indecomposable H_x0-modules occurring in a right H_x0-module.

    Labels: 'chi0_triv', 'chi0_sign', 'chi0_lambda^j' and 'e_lambda^j H_x0'.
    """
    H, k = M.H, M.k
    n = M.dim
    out: dict[str, int] = {}
    if n == 0:
        return out
    T0 = M.row_action(M.T0)
    I = la.identity(n)
    spaces = {}
    for j in H.lambda_indices():
        P = M.row_action(M.matrix(H.e_lambda(j)))
        spaces[j] = la.row_basis(k, P, n)
    total = 0
    V1 = spaces[0]
    triv_dim = la.intersect(k, V1, la.left_nullspace(k, T0)).shape[0] if V1.shape[0] else 0
    sign_dim = la.intersect(k, V1, la.left_nullspace(k, k.aadd(T0, I))).shape[0] if V1.shape[0] else 0
    if triv_dim + sign_dim != V1.shape[0]:
        raise InconsistentMultiplicities("tau_s0 is not semisimple on the trivial Omega-block")
    if triv_dim:
        out["chi0_triv"] = triv_dim
    if sign_dim:
        out["chi0_sign"] = sign_dim
    total += triv_dim + sign_dim
    s = {}
    dker = {}
    for j in H.lambda_indices():
        if j == 0:
            continue
        V = spaces[j]
        dim_j = V.shape[0]
        d = dim_j - la.rank(k, k.matmul(V, T0)) if dim_j else 0
        dker[j] = d
        s[j] = dim_j - d
    for j in H.lambda_indices():
        if j == 0:
            continue
        r = dker[j] - s[H.inverse_index(j)]
        if r < 0 or s[j] < 0:
            raise InconsistentMultiplicities(f"negative multiplicity for lambda^{j}")
        if r:
            out[f"chi0_lambda^{j}"] = r
        if s[j]:
            out[f"e_lambda^{j} H_x0"] = s[j]
        total += r + 2 * s[j]
    if total != n:
        raise InconsistentMultiplicities(f"decomposition accounts for {total} of {n} dimensions")
    return out


def multiset_dimension(ms: dict[str, int]) -> int:
    return sum(v * (2 if label.startswith("e_") else 1) for label, v in ms.items())


def add_multisets(*mss: dict[str, int], times: list[int] | None = None) -> dict[str, int]:
    out: dict[str, int] = {}
    times = times or [1] * len(mss)
    for ms, t in zip(mss, times):
        for label, v in ms.items():
            out[label] = out.get(label, 0) + t * v
    return {k: v for k, v in sorted(out.items()) if v}
