"""The pro-p Iwahori-Hecke algebra of SL2 with coefficients in k.

Basis elements tau_w are indexed by canonical ``WeylElt``s.  Products of
basis elements are computed by right multiplication with the letters of a
reduced word of the second factor:

    tau_w tau_s = tau_ws                         if l(ws) = l(w) + 1
    tau_w tau_s = sum_omega tau_(v omega s)      otherwise, v = w s^-1

and tau_w tau_omega = tau_(w omega).  The second rule is the quadratic
relation tau_s^2 = -e_1 tau_s with -e_1 = sum_omega tau_omega.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import EnumerationTooLarge, IdentityFailure, InvalidCharacter
from .finring import FiniteField, embedding, field
from .weyl import AffineWeyl, WeylElt, affine_weyl
from . import linalg as la


class HeckeElt:
    """A finite k-linear combination of basis elements tau_w."""

    __slots__ = ("H", "terms")

    def __init__(self, H: "HeckeAlgebra", terms: dict[WeylElt, int] | None = None):
        self.H = H
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        k = self.H.k
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = k.add(out.get(w, 0), c)
        return HeckeElt(self.H, out)

    def __neg__(self) -> "HeckeElt":
        k = self.H.k
        return HeckeElt(self.H, {w: k.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self + (-other)

    def __mul__(self, other) -> "HeckeElt":
        if isinstance(other, HeckeElt):
            return self.H.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c: int) -> "HeckeElt":
        return self.scale(c)

    def scale(self, c: int) -> "HeckeElt":
        k = self.H.k
        return HeckeElt(self.H, {w: k.mul(c, x) for w, x in self.terms.items()})

    def __pow__(self, e: int) -> "HeckeElt":
        out = self.H.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElt) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*tau[{w}]" for w, c in sorted(self.terms.items()))

    def support(self) -> list[WeylElt]:
        return sorted(self.terms)

    @property
    def tag(self) -> str:
        """Smallest of H_x0, H_x1, H containing the support."""
        W = self.H.W
        if all(w.n == 0 for w in self.terms):
            return "H_x0"
        if all(W.length(w) <= 1 and (not w.anti or w.n == 1) for w in self.terms):
            return "H_x1"
        return "H"


@dataclass(frozen=True)
class Character:
    """A character of H: tau_omega_z -> psi(z)^j, tau_s0 -> c0, tau_s1 -> c1.

    c0, c1 are 0 or -1 (stored as integers), j is taken modulo q - 1.
    """

    j: int
    c0: int = 0
    c1: int = 0

    @property
    def is_supersingular(self) -> bool:
        return not (self.j == 0 and self.c0 == self.c1)

    def name(self, q: int) -> str:
        if self.j == 0:
            return {(0, 0): "chi_triv", (-1, -1): "chi_sign", (-1, 0): "chi_0", (0, -1): "chi_1"}[
                (self.c0, self.c1)
            ]
        return f"chi_lambda^{self.j}"


class HeckeAlgebra:
    def __init__(self, p: int, f: int = 1, kdeg: int | None = None):
        self.p, self.f = p, f
        self.q = p**f
        self.kdeg = f if kdeg is None else kdeg
        self.W: AffineWeyl = affine_weyl(p, f)
        self.k: FiniteField = field(p, self.kdeg)
        self.emb = embedding(p, f, self.kdeg)
        self.Fq = self.W.F
        self._omegas = self.W.omegas()

    def __repr__(self) -> str:
        return f"HeckeAlgebra(q={self.q}, k=F_{self.k.order})"

    # constructors
    def zero(self) -> HeckeElt:
        return HeckeElt(self, {})

    def one(self) -> HeckeElt:
        return HeckeElt(self, {self.W.one: 1})

    def tau(self, w: WeylElt, c: int = 1) -> HeckeElt:
        return HeckeElt(self, {w: c})

    def tau_s(self, i: int) -> HeckeElt:
        return self.tau(self.W.s[i])

    def tau_omega(self, z: int) -> HeckeElt:
        return self.tau(self.W.omega(z))

    def scalar(self, c: int) -> HeckeElt:
        return self.one().scale(c)

    def sum(self, elts) -> HeckeElt:
        out = self.zero()
        for e in elts:
            out = out + e
        return out

    # multiplication
    def _right_mul_s(self, w: WeylElt, i: int) -> list[WeylElt]:
        W = self.W
        s = W.s[i]
        ws = W.mul(w, s)
        if W.length(ws) == W.length(w) + 1:
            return [ws]
        v = W.mul(w, W.inv(s))
        return [W.mul(W.mul(v, o), s) for o in self._omegas]

    @functools.lru_cache(maxsize=None)
    def basis_product(self, x: WeylElt, y: WeylElt) -> tuple[tuple[WeylElt, int], ...]:
        letters, om = self.W.reduced_word(y)
        cur: dict[WeylElt, int] = {x: 1}
        k = self.k
        for i in letters:
            nxt: dict[WeylElt, int] = {}
            for w, c in cur.items():
                for u in self._right_mul_s(w, i):
                    nxt[u] = k.add(nxt.get(u, 0), c)
            cur = {w: c for w, c in nxt.items() if c}
        return tuple(sorted((self.W.mul(w, om), c) for w, c in cur.items()))

    def multiply(self, a: HeckeElt, b: HeckeElt) -> HeckeElt:
        k = self.k
        out: dict[WeylElt, int] = {}
        for x, cx in a.terms.items():
            for y, cy in b.terms.items():
                c = k.mul(cx, cy)
                for w, d in self.basis_product(x, y):
                    out[w] = k.add(out.get(w, 0), k.mul(c, d))
        return HeckeElt(self, out)

    # characters of Omega
    def psi(self, z: int) -> int:
        """The fixed embedding F_q^x -> k^x."""
        return int(self.emb[z])

    def lam(self, j: int, z: int) -> int:
        return self.k.pow(self.psi(z), j)

    def lambda_indices(self) -> list[int]:
        return list(range(self.q - 1))

    def inverse_index(self, j: int) -> int:
        return (-j) % (self.q - 1) if self.q > 2 else 0

    # distinguished elements
    def e1(self) -> HeckeElt:
        return self.e_lambda(0)

    def e_lambda(self, j: int) -> HeckeElt:
        k = self.k
        return HeckeElt(
            self, {self.W.omega(z): k.neg(self.lam(j, self.Fq.inv(z))) for z in self.Fq.units()}
        )

    def e_gamma(self, j: int) -> HeckeElt:
        ji = self.inverse_index(j)
        return self.e_lambda(j) if ji == j % max(self.q - 1, 1) else self.e_lambda(j) + self.e_lambda(ji)

    def omega_sum(self) -> HeckeElt:
        return self.sum(self.tau(o) for o in self._omegas)

    @functools.cached_property
    def zeta(self) -> HeckeElt:
        e1 = self.e1()
        t0, t1 = self.tau_s(0), self.tau_s(1)
        return (t0 + e1) * (t1 + e1) + t1 * t0

    def zeta_power(self, i: int) -> HeckeElt:
        return self._zeta_powers(i)

    @functools.lru_cache(maxsize=None)
    def _zeta_powers(self, i: int) -> HeckeElt:
        if i == 0:
            return self.one()
        return self._zeta_powers(i - 1) * self.zeta

    @functools.lru_cache(maxsize=None)
    def _iota_basis(self, w: WeylElt) -> HeckeElt:
        letters, om = self.W.reduced_word(w)
        out = self.one()
        e1 = self.e1()
        for i in letters:
            out = out * (-e1 - self.tau_s(i))
        return out * self.tau(om)

    def iota(self, h: HeckeElt) -> HeckeElt:
        out = self.zero()
        for w, c in h.terms.items():
            out = out + self._iota_basis(w).scale(c)
        return out

    def E(self, i: int, z: int = 1) -> HeckeElt:
        """tau_omega (tau_s0 tau_s1)^i for i >= 0, tau_omega ((tau_s1+e1)(tau_s0+e1))^-i else."""
        e1 = self.e1()
        if i >= 0:
            base = self.tau_s(0) * self.tau_s(1)
        else:
            base = (self.tau_s(1) + e1) * (self.tau_s(0) + e1)
        return self.tau_omega(z) * (base ** abs(i))

    def X(self, j: int) -> HeckeElt:
        return self.e_lambda(j) * self.E(1) + self.e_lambda(self.inverse_index(j)) * self.E(-1)

    def center_generators(self, imax: int) -> list[HeckeElt]:
        out = []
        for i in range(imax + 1):
            for z in self.Fq.units():
                out.append(self.E(i, z) + self.E(-i, self.Fq.inv(z)))
        if self.p == 2:
            out.append(self.one())
        return out

    def generators(self) -> list[HeckeElt]:
        return [self.tau_s(0), self.tau_s(1)] + [self.tau(o) for o in self._omegas]

    # characters of H
    def characters(self) -> list[Character]:
        """All characters, with lambda = 1 ones first, in a fixed order."""
        out = [Character(0, 0, 0), Character(0, -1, -1), Character(0, -1, 0), Character(0, 0, -1)]
        out += [Character(j) for j in range(1, self.q - 1)]
        return out

    def character(self, j: int, c0: int = 0, c1: int = 0) -> Character:
        j = j % (self.q - 1) if self.q > 2 else 0
        if c0 not in (0, -1) or c1 not in (0, -1):
            raise InvalidCharacter("tau_s must act by 0 or -1")
        if (c0 or c1) and j != 0:
            raise InvalidCharacter("a character with chi(tau_s) = -1 must have trivial lambda")
        return Character(j, c0, c1)

    def character_value(self, chi: Character, h: HeckeElt) -> int:
        k = self.k
        out = 0
        for w, c in h.terms.items():
            letters, om = self.W.reduced_word(w)
            v = self.lam(chi.j, om.z)
            for i in letters:
                v = k.mul(v, k.from_int(chi.c0 if i == 0 else chi.c1))
            out = k.add(out, k.mul(c, v))
        return out

    # quotient by the ideal generated by tau_s1
    def mod_s1(self, h: HeckeElt) -> HeckeElt:
        keep = {}
        for w, c in h.terms.items():
            letters, _ = self.W.reduced_word(w)
            if 1 not in letters:
                keep[w] = c
        return HeckeElt(self, keep)

    # zeta-basis decomposition
    def zeta_decompose(self, h: HeckeElt, eps: int = 0, max_steps: int = 10000):
        """Coefficients a_i, b_i in H_x_eps with h = sum a_i zeta^i + b_i zeta^i tau_s(1-eps).

        Returns two dicts i -> HeckeElt.
        """
        W = self.W
        other = 1 - eps
        a: dict[int, HeckeElt] = {}
        b: dict[int, HeckeElt] = {}
        rem = h
        for _ in range(max_steps):
            if not rem:
                return a, b
            best = None
            for w, c in rem.terms.items():
                letters, _ = W.reduced_word(w)
                d_letters = letters[1:] if letters and letters[0] == eps else letters
                key = (len(d_letters), len(letters), w)
                if best is None or key > best[0]:
                    best = (key, w, c, d_letters)
            _, w, c, d_letters = best
            d = W.from_word(d_letters)
            hpart = W.mul(w, W.inv(d))
            i, odd = divmod(len(d_letters), 2)
            if d_letters and d_letters[0] != other:
                raise IdentityFailure(f"unexpected reduced word for {w}")
            basis = self.zeta_power(i) * (self.tau_s(other) if odd else self.one())
            coeff = self.tau(hpart, c)
            target = b if odd else a
            target[i] = target.get(i, self.zero()) + coeff
            rem = rem - coeff * basis
        raise IdentityFailure("zeta-basis decomposition did not terminate")

    def zeta_reassemble(self, a, b, eps: int = 0) -> HeckeElt:
        other = 1 - eps
        out = self.zero()
        for i, c in a.items():
            out = out + c * self.zeta_power(i)
        for i, c in b.items():
            out = out + c * self.zeta_power(i) * self.tau_s(other)
        return out

    def basis_Hx0(self) -> list[WeylElt]:
        return [o for o in self._omegas] + [self.W.mul(self.W.s0, o) for o in self._omegas]

    def basis_Hx1(self) -> list[WeylElt]:
        return [o for o in self._omegas] + [self.W.mul(self.W.s1, o) for o in self._omegas]

    # identity suite
    def identity_suite(self, imax: int = 4, rng_seed: int = 0) -> list[tuple[str, bool]]:
        """Exact checks of the structural identities; raises IdentityFailure on the first failure."""
        W, k = self.W, self.k
        report: list[tuple[str, bool]] = []

        def check(name: str, ok: bool):
            report.append((name, ok))
            if not ok:
                raise IdentityFailure(name)

        t0, t1 = self.tau_s(0), self.tau_s(1)
        e1 = self.e1()
        one = self.one()
        check("quadratic s0", t0 * t0 == -e1 * t0)
        check("quadratic s1", t1 * t1 == -e1 * t1)
        check("s0 s1 = theta", W.mul(W.s0, W.s1) == W.theta)
        zeta = self.zeta
        check("zeta alternative form", zeta == (t1 + e1) * (t0 + e1) + t0 * t1)
        check("zeta minus tau_s1 tau_s0", zeta - t1 * t0 == (t0 + e1) * (t1 + e1))
        for w in W.elements(2 * imax):
            tw = self.tau(w)
            if zeta * tw != tw * zeta:
                check(f"zeta central against tau[{w}]", False)
        check(f"zeta central up to length {2 * imax}", True)
        A = (t0 + e1) * (t1 + e1)
        B = (t1 + e1) * (t0 + e1)
        for i in range(0, imax + 1):
            zi = self.zeta_power(i)
            if i >= 1:
                check(f"explicit i, i={i}", zi == A**i + (t1 * t0) ** i and zi == B**i + (t0 * t1) ** i)
            check(f"explicit ii, i={i}", zi * t0 == t0 * (t1 * t0) ** i and zi * t1 == t1 * (t0 * t1) ** i)
            lhs = self.zeta_power(i + 1)
            r1 = zi * (t0 + one) * e1 + (zi * t1) * (t0 + e1) + t0 * (zi * t1)
            r2 = zi * (t1 + one) * e1 + (zi * t0) * (t1 + e1) + t1 * (zi * t0)
            check(f"explicit iii, i={i}", lhs == r1 and lhs == r2)
        a, b = self.zeta_decompose(zeta, 0)
        check(
            "zeta in tau_s1s0 + H_x0 + H_x0 tau_s1",
            set(a) <= {0, 1} and set(b) <= {0} and a.get(1) == one and all(x.tag == "H_x0" for x in a.values())
            and all(x.tag == "H_x0" for x in b.values()),
        )
        for eps in (0, 1):
            for w in W.elements(2 * imax):
                h = self.tau(w)
                a, b = self.zeta_decompose(h, eps)
                tag = "H_x0" if eps == 0 else "H_x1"
                ok = self.zeta_reassemble(a, b, eps) == h and all(
                    self._in_Hx(x, eps) for x in list(a.values()) + list(b.values())
                )
                if not ok:
                    check(f"zeta basis round trip eps={eps} w={w}", False)
            check(f"zeta basis round trip eps={eps}", True)
        for i in range(-3, 4):
            for j in range(-3, 4):
                for z in self.Fq.units():
                    for z2 in (1, self.Fq.gen):
                        lhs = self.E(i, z) * self.E(j, z2)
                        rhs = self.zero() if i * j < 0 else self.E(i + j, self.Fq.mul(z, z2))
                        if lhs != rhs:
                            check(f"Bernstein rule i={i} j={j}", False)
        check("Bernstein rule |i|,|j| <= 3", True)
        gens = self.generators()
        for c in self.center_generators(3):
            if any(c * g != g * c for g in gens):
                check("center generators commute", False)
        check("center generators commute", True)
        for j in self.lambda_indices():
            if self.X(j) * self.X(self.inverse_index(j)) != self.zero() and self.inverse_index(j) != j:
                check(f"X_lambda X_lambda^-1 = 0 (j={j})", False)
        check("X_lambda X_lambda^-1 = 0", True)
        fam = [self.e_lambda(j) * self.E(i) for j in self.lambda_indices() for i in range(-3, 4)]
        check("e_lambda E(i,1) independent", self.rank_of(fam) == len(fam))
        ssum = self.zero()
        for j in self.lambda_indices():
            ej = self.e_lambda(j)
            if ej * ej != ej:
                check(f"e_lambda idempotent j={j}", False)
            for j2 in self.lambda_indices():
                if j2 != j and ej * self.e_lambda(j2):
                    check("e_lambda orthogonal", False)
            ssum = ssum + ej
        check("e_lambda orthogonal idempotents summing to 1", ssum == one)
        check("iota(zeta) = zeta", self.iota(zeta) == zeta)
        for o in self._omegas:
            to = self.tau(o)
            oinv = self.tau(W.inv(o))
            if self.mod_s1(t0 * to) != self.mod_s1(oinv * t0):
                check("H/s1: tau_s0 tau_omega = tau_omega^-1 tau_s0", False)
        check("H/s1: tau_s0 tau_omega = tau_omega^-1 tau_s0", True)
        check("H/s1: tau_s0^2 = (sum tau_omega) tau_s0", self.mod_s1(t0 * t0) == self.mod_s1(self.omega_sum() * t0))
        return report

    def _in_Hx(self, h: HeckeElt, eps: int) -> bool:
        allowed = set(self.basis_Hx0() if eps == 0 else self.basis_Hx1())
        return all(w in allowed for w in h.terms)

    def rank_of(self, elts: list[HeckeElt]) -> int:
        support = sorted({w for e in elts for w in e.terms})
        idx = {w: i for i, w in enumerate(support)}
        M = np.zeros((len(elts), len(support)), dtype=np.int64)
        for r, e in enumerate(elts):
            for w, c in e.terms.items():
                M[r, idx[w]] = c
        return la.rank(self.k, M)


@functools.lru_cache(maxsize=None)
def hecke_algebra(p: int, f: int = 1, kdeg: int | None = None) -> HeckeAlgebra:
    return HeckeAlgebra(p, f, f if kdeg is None else kdeg)


class ConvolutionOracle:
    """H_x0 realized as bi-U-invariant functions on SL2(F_q), U upper unipotent.

    (phi * psi)(h) = sum over x in G/U of phi(x) psi(x^-1 h); tau_w is the
    characteristic function of U w U.
    """

    MAX_Q = 7

    def __init__(self, H: HeckeAlgebra):
        if H.q > self.MAX_Q:
            raise EnumerationTooLarge(f"q = {H.q} > {self.MAX_Q}")
        self.H = H
        F = H.Fq
        self.F = F
        q = H.q
        G = []
        for a, b, c, d in itertools.product(range(q), repeat=4):
            if F.sub(F.mul(a, d), F.mul(b, c)) == 1:
                G.append((a, b, c, d))
        self.G = G
        self.U = [(1, b, 0, 1) for b in range(q)]
        # double coset label of every element
        reps = {}
        for w in H.basis_Hx0():
            reps[w] = self._rep(w)
        self.reps = reps
        label = {}
        for w, r in reps.items():
            for u1 in self.U:
                for u2 in self.U:
                    label[self.mul(self.mul(u1, r), u2)] = w
        if len(label) != len(G):
            raise AssertionError("double cosets do not cover SL2(F_q)")
        self.label = label
        seen, cosets = set(), []
        for x in G:
            if x in seen:
                continue
            cosets.append(x)
            for u in self.U:
                seen.add(self.mul(x, u))
        self.left_cosets = cosets

    def _rep(self, w: WeylElt) -> tuple[int, int, int, int]:
        F = self.F
        zi = F.inv(w.z)
        if w.anti:
            return (0, w.z, F.neg(zi), 0)
        return (zi, 0, 0, w.z)

    def mul(self, A, B):
        F = self.F
        a, b, c, d = A
        e, f, g, h = B
        return (
            F.add(F.mul(a, e), F.mul(b, g)),
            F.add(F.mul(a, f), F.mul(b, h)),
            F.add(F.mul(c, e), F.mul(d, g)),
            F.add(F.mul(c, f), F.mul(d, h)),
        )

    def inv(self, A):
        F = self.F
        a, b, c, d = A
        return (d, F.neg(b), F.neg(c), a)

    def convolve(self, a: HeckeElt, b: HeckeElt) -> HeckeElt:
        H, k = self.H, self.H.k
        for e in (a, b):
            if any(w not in self.reps for w in e.terms):
                raise ValueError("oracle accepts H_x0 elements only")
        out = {}
        for w, r in self.reps.items():
            val = 0
            for x in self.left_cosets:
                fa = a.terms.get(self.label[x], 0)
                if not fa:
                    continue
                fb = b.terms.get(self.label[self.mul(self.inv(x), r)], 0)
                if fb:
                    val = k.add(val, k.mul(fa, fb))
            if val:
                out[w] = val
        return HeckeElt(H, out)

    def value(self, a: HeckeElt, b: HeckeElt, w: WeylElt) -> int:
        return self.convolve(a, b).terms.get(w, 0)
