"""The extended affine Weyl group of SL2 as monomial-matrix classes.

An element is stored by its canonical form ``WeylElt(anti, n, z)``:

* ``anti = False``:  diag([z]^-1 pi^n, [z] pi^-n)  =  theta^n omega_z
* ``anti = True``:   [[0, [z] pi^-n], [-[z]^-1 pi^n, 0]]  =  s0 theta^n omega_z

with z a unit of F_q (a field code).  Monomial matrices carry entries
``(z, n, sign)`` meaning sign * [z] * pi^n; the sign is folded into z when
p is odd and kept separately when p = 2 (where -1 is not a Teichmuller
representative in characteristic zero).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import DomainError, NonIntegralResult
from .finring import FiniteField, field

Entry = tuple[int, int, int]


@dataclass(frozen=True, order=True)
class WeylElt:
    anti: bool
    n: int
    z: int

    def __repr__(self) -> str:
        base = "s0*theta" if self.anti else "theta"
        return f"{base}^{self.n}*w[{self.z}]"


@dataclass(frozen=True)
class MonomialMatrix:
    """A 2x2 matrix with one nonzero entry per row and column.

    For a diagonal matrix ``e`` holds (a11, a22); for an antidiagonal one
    it holds (a12, a21).
    """

    anti: bool
    e: tuple[Entry, Entry]


@dataclass(frozen=True)
class Elementary:
    """u_+(x) = (1 x; 0 1) if kind is '+', u_-(x) = (1 0; x 1) if kind is '-'."""

    kind: str
    x: Entry


class AffineWeyl:
    """Group law, lengths and distinguished words of W~ for residue field F_q."""

    def __init__(self, p: int, f: int = 1):
        self.p, self.f = p, f
        self.q = p**f
        self.F: FiniteField = field(p, f)
        self.minus_one = self.F.neg(1)
        self.one = WeylElt(False, 0, 1)
        self.s0 = WeylElt(True, 0, 1)
        self.s1 = self.from_matrix(MonomialMatrix(True, ((self.minus_one, -1, 1), (1, 1, 1))))
        self.theta = WeylElt(False, 1, 1)
        self.s = (self.s0, self.s1)

    def __repr__(self) -> str:
        return f"AffineWeyl(q={self.q})"

    # entries
    def _emul(self, a: Entry, b: Entry) -> Entry:
        return self._norm((self.F.mul(a[0], b[0]), a[1] + b[1], a[2] * b[2]))

    def _einv(self, a: Entry) -> Entry:
        return (self.F.inv(a[0]), -a[1], a[2])

    def _eneg(self, a: Entry) -> Entry:
        return self._norm((a[0], a[1], -a[2]))

    def _norm(self, a: Entry) -> Entry:
        if self.p != 2 and a[2] < 0:
            return (self.F.neg(a[0]), a[1], 1)
        return a

    # matrices
    def omega(self, z: int) -> WeylElt:
        if z == 0:
            raise DomainError("omega_z needs a unit z")
        return WeylElt(False, 0, z)

    def omegas(self) -> list[WeylElt]:
        return [self.omega(z) for z in self.F.units()]

    def matrix(self, w: WeylElt) -> MonomialMatrix:
        zi = self.F.inv(w.z)
        if w.anti:
            return MonomialMatrix(True, ((w.z, -w.n, 1), self._norm((zi, w.n, -1))))
        return MonomialMatrix(False, ((zi, w.n, 1), (w.z, -w.n, 1)))

    def from_matrix(self, M: MonomialMatrix) -> WeylElt:
        a, b = M.e
        if a[1] + b[1] != 0:
            raise DomainError("monomial matrix does not have unit determinant")
        if M.anti:
            return WeylElt(True, -a[1], a[0])
        return WeylElt(False, a[1], self.F.inv(a[0]))

    def mat_mul(self, A: MonomialMatrix, B: MonomialMatrix) -> MonomialMatrix:
        (a1, a2), (b1, b2) = A.e, B.e
        m = self._emul
        if not A.anti and not B.anti:
            return MonomialMatrix(False, (m(a1, b1), m(a2, b2)))
        if not A.anti and B.anti:
            return MonomialMatrix(True, (m(a1, b1), m(a2, b2)))
        if A.anti and not B.anti:
            return MonomialMatrix(True, (m(a1, b2), m(a2, b1)))
        return MonomialMatrix(False, (m(a1, b2), m(a2, b1)))

    def mat_inv(self, A: MonomialMatrix) -> MonomialMatrix:
        a, b = A.e
        if A.anti:
            return MonomialMatrix(True, (self._einv(b), self._einv(a)))
        return MonomialMatrix(False, (self._einv(a), self._einv(b)))

    # group law
    def mul(self, a: WeylElt, b: WeylElt) -> WeylElt:
        return self.from_matrix(self.mat_mul(self.matrix(a), self.matrix(b)))

    def prod(self, *ws: WeylElt) -> WeylElt:
        out = self.one
        for w in ws:
            out = self.mul(out, w)
        return out

    def inv(self, a: WeylElt) -> WeylElt:
        return self.from_matrix(self.mat_inv(self.matrix(a)))

    def power(self, a: WeylElt, e: int) -> WeylElt:
        if e < 0:
            a, e = self.inv(a), -e
        out = self.one
        for _ in range(e):
            out = self.mul(out, a)
        return out

    # lengths
    def length(self, w: WeylElt) -> int:
        return abs(1 - 2 * w.n) if w.anti else abs(2 * w.n)

    def sigma(self, w: WeylElt) -> int:
        return 1 if self.length(self.mul(self.s0, w)) == self.length(w) + 1 else 0

    def length_sigma(self, w: WeylElt) -> tuple[int, int]:
        return self.length(w), self.sigma(w)

    def grade(self, w: WeylElt) -> int:
        """l(w) + sigma(w)."""
        return self.length(w) + self.sigma(w)

    def omega_part_free(self, w: WeylElt) -> WeylElt:
        return WeylElt(w.anti, w.n, 1)

    # words
    def reduced_word(self, w: WeylElt) -> tuple[tuple[int, ...], WeylElt]:
        """Letters i (meaning s_i) and omega with w = s_i1 ... s_il * omega."""
        letters = []
        cur = w
        while self.length(cur) > 0:
            for i in (0, 1):
                nxt = self.mul(self.inv(self.s[i]), cur)
                if self.length(nxt) == self.length(cur) - 1:
                    letters.append(i)
                    cur = nxt
                    break
            else:  # pragma: no cover - lengths always drop in a dihedral group
                raise AssertionError(f"no descent for {w}")
        return tuple(letters), cur

    def from_word(self, letters, omega: WeylElt | None = None) -> WeylElt:
        out = self.one
        for i in letters:
            out = self.mul(out, self.s[i])
        return self.mul(out, omega) if omega is not None else out

    @staticmethod
    def epsilon(n: int) -> int:
        return n % 2

    def w_n(self, n: int) -> WeylElt:
        """(s1 s0)^((n-1)/2) for odd n, s1 (s0 s1)^((n-2)/2) for even n."""
        if n < 1:
            raise DomainError("w_n needs n >= 1")
        if n % 2:
            return self.power(self.mul(self.s1, self.s0), (n - 1) // 2)
        return self.mul(self.s1, self.power(self.mul(self.s0, self.s1), (n - 2) // 2))

    def v_m(self, m: int) -> WeylElt:
        """s1 (s0 s1)^(m-2) for even m, s0 (s1 s0)^(m-2) for odd m."""
        if m < 2:
            raise DomainError("v(m) needs m >= 2")
        if m % 2 == 0:
            return self.mul(self.s1, self.power(self.mul(self.s0, self.s1), m - 2))
        return self.mul(self.s0, self.power(self.mul(self.s1, self.s0), m - 2))

    def v_m_palindrome(self, m: int) -> tuple[int, ...]:
        """Letters of s_e(m-1) ... s_e(2) s_e(1) s_e(2) ... s_e(m-1)."""
        down = [self.epsilon(j) for j in range(m - 1, 0, -1)]
        return tuple(down + down[-2::-1])

    def elements(self, max_length: int) -> list[WeylElt]:
        """All w with l(w) <= max_length, in a fixed order."""
        out = []
        units = self.F.units()
        for n in range(-(max_length // 2), max_length // 2 + 1):
            out.extend(WeylElt(False, n, z) for z in units)
        for n in range(-((max_length - 1) // 2), (max_length + 1) // 2 + 1):
            if abs(1 - 2 * n) <= max_length:
                out.extend(WeylElt(True, n, z) for z in units)
        return sorted(out, key=lambda w: (self.length(w), w))

    def pieces(self, grade: int) -> list[WeylElt]:
        """All w with l(w) + sigma(w) = grade: w_n omega and s0 w_n omega."""
        wn = self.w_n(grade)
        sw = self.mul(self.s0, wn)
        return [self.mul(wn, o) for o in self.omegas()] + [self.mul(sw, o) for o in self.omegas()]

    # conjugation of elementary matrices
    def conjugate_elementary(self, v: WeylElt, u: Elementary) -> Elementary:
        """v u v^-1 for the canonical matrix of v."""
        return self.conjugate_elementary_by(self.matrix(v), u)

    def conjugate_elementary_by(self, V: MonomialMatrix, u: Elementary) -> Elementary:
        m = self._emul
        a, b = V.e
        if not V.anti:
            # diag(a, d): u+(x) -> u+(a x d^-1), u-(y) -> u-(d y a^-1)
            if u.kind == "+":
                out = Elementary("+", m(m(a, u.x), self._einv(b)))
            else:
                out = Elementary("-", m(m(b, u.x), self._einv(a)))
        else:
            # [[0, b], [c, 0]]: u+(x) -> u-(c x b^-1), u-(y) -> u+(b y c^-1)
            if u.kind == "+":
                out = Elementary("-", m(m(b, u.x), self._einv(a)))
            else:
                out = Elementary("+", m(m(a, u.x), self._einv(b)))
        if out.x[1] < 0:
            raise NonIntegralResult(f"conjugate {out} is not integral")
        return out

    def u_plus(self, z: int) -> Elementary:
        return Elementary("+", (z, 0, 1))

    def u_minus(self, z: int) -> Elementary:
        return Elementary("-", (self.F.inv(z), 1, 1))

    def u_ws(self, w: WeylElt, s_index: int, z: int) -> Elementary:
        """u_{w,s}(omega_z) = v u^(+/-)_omega v^-1 with v = w s^-1."""
        s = self.s[s_index]
        v = self.mul(w, self.inv(s))
        u = self.u_plus(z) if s_index == 0 else self.u_minus(z)
        return self.conjugate_elementary(v, u)

    def N_matrix(self) -> MonomialMatrix:
        """N = (0 1; pi 0)."""
        return MonomialMatrix(True, ((1, 0, 1), (1, 1, 1)))


@functools.lru_cache(maxsize=None)
def affine_weyl(p: int, f: int = 1) -> AffineWeyl:
    return AffineWeyl(p, f)
