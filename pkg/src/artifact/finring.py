"""Exact arithmetic in finite fields and in truncated local rings.

Two families of rings model O/M^L:

* ``CharCase.ZERO``: the Galois ring GR(p^L, f), i.e. (Z/p^L)[x]/(F) with
  F the lifted primitive polynomial of F_q.  f = 1 gives Z/p^L.
* ``CharCase.EQUAL``: F_q[t]/(t^L).

Field elements (of F_q and of the coefficient field k) are plain ints
("codes"): the polynomial sum a_0 + a_1 x + ... is stored as
a_0 + a_1 p + a_2 p^2 + ...  For a prime field the code is the residue.
Ring elements are tuples of ints.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LevelError, NonConvergence, NonUnitInverse, ValuationError

MAX_TABLE_ORDER = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _poly_is_primitive(p: int, d: int, low: list[int]) -> bool:
    """Is x of multiplicative order p^d - 1 modulo x^d + sum(low[i] x^i)?"""
    if d == 1:
        g = (-low[0]) % p
        if g == 0:
            return False
        order = p - 1
        x, k = g, 1
        while x != 1:
            x = x * g % p
            k += 1
        return k == order
    if low[0] == 0:
        return False
    order = p**d - 1
    cur = [0] * d
    cur[0] = 1
    for k in range(1, order + 1):
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(d):
                cur[i] = (cur[i] - top * low[i]) % p
        if cur[0] == 1 and not any(cur[1:]):
            return k == order
    return False


@functools.lru_cache(maxsize=None)
def primitive_polynomial(p: int, d: int) -> tuple[int, ...]:
    """Smallest monic primitive polynomial of degree d over F_p.

    Candidates are ordered by the integer sum(a_i p^i) of their non-leading
    coefficients.  Returns coefficients from x^0 up to the leading 1.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if d < 1:
        raise DomainError("degree must be positive")
    for code in range(p**d):
        low = [(code // p**i) % p for i in range(d)]
        if _poly_is_primitive(p, d, low):
            return tuple(low) + (1,)
    raise DomainError(f"no primitive polynomial of degree {d} over F_{p}")


class FiniteField:
    """F_{p^d} with elements encoded as ints in range(p**d)."""

    def __init__(self, p: int, d: int = 1):
        self.p = p
        self.d = d
        self.order = p**d
        if self.order > MAX_TABLE_ORDER:
            raise DomainError(f"field of order {self.order} exceeds table limit {MAX_TABLE_ORDER}")
        self.poly = primitive_polynomial(p, d)
        self.is_prime = d == 1
        low = self.poly[:-1]
        n = self.order
        powers = p ** np.arange(d, dtype=np.int64)
        # exp table: x^e as coefficient vectors, then codes
        exp = np.zeros(n - 1, dtype=np.int64)
        cur = [1] + [0] * (d - 1)
        if d == 1:
            g = (-low[0]) % p
            v = 1
            for e in range(n - 1):
                exp[e] = v
                v = v * g % p
        else:
            for e in range(n - 1):
                exp[e] = sum(c * p**i for i, c in enumerate(cur))
                top = cur[-1]
                cur = [0] + cur[:-1]
                if top:
                    cur = [(cur[i] - top * low[i]) % p for i in range(d)]
        log = np.full(n, -1, dtype=np.int64)
        log[exp] = np.arange(n - 1)
        self.exp = exp
        self.log = log
        self.gen = int(exp[1]) if n > 2 else 1
        codes = np.arange(n, dtype=np.int64)
        self.coeffs = (codes[:, None] // powers[None, :]) % p
        self._powers = powers
        if d == 1:
            self.add_table = (codes[:, None] + codes[None, :]) % p
            self.mul_table = (codes[:, None] * codes[None, :]) % p
        else:
            s = (self.coeffs[:, None, :] + self.coeffs[None, :, :]) % p
            self.add_table = s @ powers
            la, lb = log[:, None], log[None, :]
            mt = exp[(la + lb) % (n - 1)]
            mt[(la < 0) | (lb < 0)] = 0
            self.mul_table = mt
        self.neg_table = ((-self.coeffs) % p) @ powers
        self.sub_table = self.add_table[:, self.neg_table]
        inv = np.zeros(n, dtype=np.int64)
        nz = codes[1:]
        inv[nz] = exp[(-log[nz]) % (n - 1)]
        self.inv_table = inv
        self._add = self.add_table.tolist()
        self._mul = self.mul_table.tolist()
        self._neg = self.neg_table.tolist()
        self._inv = inv.tolist()
        # x^e reduced, for products of coefficient vectors of degree < 2d - 1
        red = np.zeros((max(2 * d - 1, 1), d), dtype=np.int64)
        for e in range(2 * d - 1):
            red[e] = self.coeffs[int(exp[e % (n - 1)])] if e >= d else np.eye(d, dtype=np.int64)[e]
        self._red = red

    def __repr__(self) -> str:
        return f"FiniteField({self.p}, {self.d})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.d) == (other.p, other.d)

    def __hash__(self) -> int:
        return hash((self.p, self.d))

    # scalar operations
    def add(self, a: int, b: int) -> int:
        if self.is_prime:
            return (a + b) % self.p
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        if self.is_prime:
            return (a - b) % self.p
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        if self.is_prime:
            return -a % self.p
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        if self.is_prime:
            return a * b % self.p
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise NonUnitInverse("inverse of zero in a field")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise NonUnitInverse("negative power of zero")
            return 1 if e == 0 else 0
        n = self.order - 1
        return int(self.exp[(int(self.log[a]) * e) % n])

    def from_int(self, n: int) -> int:
        return n % self.p

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> list[int]:
        return [int(x) for x in self.exp]

    def fp_vector(self, a: int) -> np.ndarray:
        """Coordinates of a over F_p in the basis 1, x, ..., x^(d-1)."""
        return self.coeffs[a].copy()

    def from_fp_vector(self, v) -> int:
        return int(np.asarray(v, dtype=np.int64) % self.p @ self._powers)

    def frobenius(self, a: int, r: int = 1) -> int:
        return self.pow(a, self.p**r)

    def eval_fp_poly(self, coeffs, a: int) -> int:
        """Evaluate a polynomial with F_p coefficients (low to high) at a."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, a), self.from_int(c))
        return acc

    # array operations
    def aadd(self, A, B):
        if self.is_prime:
            return (A + B) % self.p
        return self.add_table[A, B]

    def asub(self, A, B):
        if self.is_prime:
            return (A - B) % self.p
        return self.sub_table[A, B]

    def amul(self, A, B):
        if self.is_prime:
            return (A * B) % self.p
        return self.mul_table[A, B]

    def aneg(self, A):
        if self.is_prime:
            return (-A) % self.p
        return self.neg_table[A]

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        p = self.p
        if self.is_prime:
            return (A @ B) % p
        d = self.d
        Ac = self.coeffs[A]
        Bc = self.coeffs[B]
        out = np.zeros((A.shape[0], B.shape[1], d), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                prod = (Ac[:, :, i] @ Bc[:, :, j]) % p
                out = (out + prod[:, :, None] * self._red[i + j][None, None, :]) % p
        return out @ self._powers


@functools.lru_cache(maxsize=None)
def field(p: int, d: int = 1) -> FiniteField:
    return FiniteField(p, d)


@functools.lru_cache(maxsize=None)
def embedding(p: int, f: int, d: int) -> np.ndarray:
    """Codes in F_{p^d} of the images of F_{p^f} under a fixed embedding.

    The generator of F_{p^f} is sent to the smallest-code root of its minimal
    polynomial inside F_{p^d}.
    """
    if d % f:
        raise DomainError(f"F_{p}^{f} does not embed in F_{p}^{d}")
    Fq, K = field(p, f), field(p, d)
    poly = Fq.poly
    root = next(a for a in range(K.order) if K.eval_fp_poly(poly, a) == 0)
    emb = np.zeros(Fq.order, dtype=np.int64)
    for e in range(Fq.order - 1):
        emb[int(Fq.exp[e])] = K.pow(root, e)
    return emb


class CharCase(enum.Enum):
    ZERO = "0"
    EQUAL = "p"


@dataclass(frozen=True)
class FieldParams:
    """Local field data: residue field F_q, q = p^f, coefficient field F_{p^kdeg}."""

    p: int
    f: int = 1
    char_case: CharCase = CharCase.EQUAL
    kdeg: int | None = None
    L: int = 4

    def __post_init__(self):
        if isinstance(self.char_case, str):
            object.__setattr__(self, "char_case", CharCase(self.char_case))
        if self.kdeg is None:
            object.__setattr__(self, "kdeg", self.f)
        if not is_prime(self.p):
            raise DomainError(f"p = {self.p} is not prime")
        if self.f < 1:
            raise DomainError("f must be positive")
        if self.kdeg % self.f:
            raise DomainError("f must divide kdeg")
        if self.L < 1:
            raise LevelError("L must be positive")

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def is_Qp(self) -> bool:
        return self.char_case is CharCase.ZERO and self.f == 1

    def with_level(self, L: int) -> "FieldParams":
        return FieldParams(self.p, self.f, self.char_case, self.kdeg, L)

    def label(self) -> str:
        if self.char_case is CharCase.EQUAL:
            return f"F_{self.q}((t))"
        if self.f == 1:
            return f"Q_{self.p}"
        return f"Q_{self.p}^ur({self.f})"


class LocalRing:
    """O/M^L for an unramified or equal-characteristic local field.

    Elements are tuples: f integers mod p^L (coefficients of x^i) in
    characteristic zero, L codes of F_q (coefficients of t^j) otherwise.
    """

    def __init__(self, p: int, f: int, char_case: CharCase, L: int):
        if L < 1:
            raise LevelError("ring level must be positive")
        self.p, self.f, self.L = p, f, L
        self.char_case = CharCase(char_case)
        self.q = p**f
        self.Fq = field(p, f)
        self.size = self.q**L
        if self.char_case is CharCase.ZERO:
            self.modulus = p**L
            lift = self.Fq.poly
            # x^e mod F over Z/p^L for f <= e <= 2f - 2
            self._red = {}
            cur = [0] * f
            cur[f - 1] = 1
            for e in range(f, 2 * f - 1):
                top = cur[-1]
                cur = [0] + cur[:-1]
                cur = [(cur[i] - top * lift[i]) % self.modulus for i in range(f)]
                self._red[e] = tuple(cur)
            self.zero = (0,) * f
            self.one = (1,) + (0,) * (f - 1)
            self.pi = (p % self.modulus,) + (0,) * (f - 1)
        else:
            self.zero = (0,) * L
            self.one = (1,) + (0,) * (L - 1)
            self.pi = ((0, 1) + (0,) * (L - 2)) if L >= 2 else (0,)
        self._teich = None

    def __repr__(self) -> str:
        return f"LocalRing(p={self.p}, f={self.f}, {self.char_case.name}, L={self.L})"

    @classmethod
    def from_params(cls, params: FieldParams, L: int | None = None) -> "LocalRing":
        return local_ring(params.p, params.f, params.char_case, params.L if L is None else L)

    def at_level(self, L: int) -> "LocalRing":
        return local_ring(self.p, self.f, self.char_case, L)

    # basic arithmetic
    def add(self, a, b):
        if self.char_case is CharCase.ZERO:
            m = self.modulus
            return tuple((x + y) % m for x, y in zip(a, b))
        F = self.Fq
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        if self.char_case is CharCase.ZERO:
            m = self.modulus
            return tuple((x - y) % m for x, y in zip(a, b))
        F = self.Fq
        return tuple(F.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        if self.char_case is CharCase.ZERO:
            m = self.modulus
            return tuple(-x % m for x in a)
        F = self.Fq
        return tuple(F.neg(x) for x in a)

    def mul(self, a, b):
        if self.char_case is CharCase.ZERO:
            f, m = self.f, self.modulus
            if f == 1:
                return ((a[0] * b[0]) % m,)
            prod = [0] * (2 * f - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        prod[i + j] += x * y
            out = prod[:f]
            for e in range(f, 2 * f - 1):
                c = prod[e]
                if c:
                    r = self._red[e]
                    for i in range(f):
                        out[i] += c * r[i]
            return tuple(x % m for x in out)
        F, L = self.Fq, self.L
        out = [0] * L
        for i, x in enumerate(a):
            if x:
                for j in range(L - i):
                    y = b[j]
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return tuple(out)

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def from_int(self, n: int):
        if self.char_case is CharCase.ZERO:
            return (n % self.modulus,) + (0,) * (self.f - 1)
        return (n % self.p,) + (0,) * (self.L - 1)

    def valuation(self, a) -> int:
        if self.char_case is CharCase.ZERO:
            v = self.L
            for c in a:
                if c:
                    k = 0
                    while c % self.p == 0:
                        c //= self.p
                        k += 1
                    v = min(v, k)
            return v
        for j, c in enumerate(a):
            if c:
                return j
        return self.L

    def is_unit(self, a) -> bool:
        return self.valuation(a) == 0

    def residue(self, a) -> int:
        """Image of a in F_q, as a field code."""
        if self.char_case is CharCase.ZERO:
            return self.Fq.from_fp_vector([c % self.p for c in a])
        return a[0]

    def lift(self, z: int):
        """Naive lift of a residue code (not multiplicative)."""
        if self.char_case is CharCase.ZERO:
            return tuple(int(c) for c in self.Fq.coeffs[z])
        return (z,) + (0,) * (self.L - 1)

    def inv(self, a):
        if not self.is_unit(a):
            raise NonUnitInverse(f"{a} is not a unit in {self}")
        z = self.Fq.inv(self.residue(a))
        x = self.lift(z)
        two = self.from_int(2)
        prec = 1
        while prec < self.L:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            prec *= 2
        assert self.mul(a, x) == self.one
        return x

    def times_pi(self, a, n: int = 1):
        """a * pi^n for n >= 0."""
        if n <= 0:
            return a
        if self.char_case is CharCase.ZERO:
            m = self.modulus
            k = self.p**n
            return tuple((c * k) % m for c in a)
        return (0,) * min(n, self.L) + a[: max(self.L - n, 0)]

    def div_pi(self, a, n: int):
        """a / pi^n, defined modulo M^(L-n); requires v(a) >= n."""
        if n <= 0:
            return a
        if self.valuation(a) < n:
            raise ValuationError(f"valuation of {a} is below {n}")
        if self.char_case is CharCase.ZERO:
            k = self.p**n
            return tuple(c // k for c in a)
        return a[n:] + (0,) * n

    def pi_power(self, n: int):
        return self.times_pi(self.one, n)

    # Teichmuller lifts and digits
    def _build_teich(self):
        table = {0: self.zero}
        for z in self.Fq.units():
            table[z] = self._teich_iter(z)
        self._teich = table

    def _teich_iter(self, z: int):
        if self.char_case is CharCase.EQUAL:
            return (z,) + (0,) * (self.L - 1)
        x = self.lift(z)
        for _ in range(self.L + 1):
            y = self.pow(x, self.q)
            if y == x:
                return x
            x = y
        raise NonConvergence(f"q-power iteration did not stabilize for z = {z}")

    def teichmuller(self, z: int):
        if self._teich is None:
            self._build_teich()
        return self._teich[z]

    def monomial(self, z: int, n: int, sign: int = 1):
        """sign * [z] * pi^n for n >= 0."""
        r = self.times_pi(self.teichmuller(z), n)
        return self.neg(r) if sign < 0 else r

    def digit(self, a, j: int) -> int:
        """Leading residue of a / pi^j (requires v(a) >= j)."""
        return self.residue(self.div_pi(a, j)) if j < self.L else 0

    def digit_decompose(self, u, a: int, b: int) -> list[int]:
        """Teichmuller digits z_a..z_{b-1} with u = sum [z_j] pi^j mod M^b."""
        if not 0 <= a < b <= self.L:
            raise LevelError(f"invalid digit range [{a}, {b}) at level {self.L}")
        if self.valuation(u) < a:
            raise ValuationError(f"v(u) = {self.valuation(u)} < {a}")
        digits = []
        r = u
        for j in range(a, b):
            z = self.digit(r, j)
            digits.append(z)
            if z:
                r = self.sub(r, self.monomial(z, j))
        return digits

    def reassemble(self, digits, a: int):
        acc = self.zero
        for j, z in enumerate(digits, start=a):
            if z:
                acc = self.add(acc, self.monomial(z, j))
        return acc

    def reduce(self, a, target: "LocalRing"):
        """Canonical surjection O/M^L -> O/M^L' for L' <= L."""
        if target.L > self.L or target.char_case is not self.char_case or target.q != self.q:
            raise LevelError(f"cannot reduce from level {self.L} to {target.L}")
        if self.char_case is CharCase.ZERO:
            m = target.modulus
            return tuple(c % m for c in a)
        return a[: target.L]

    def reduce_level(self, a, L: int):
        if not 1 <= L <= self.L:
            raise LevelError(f"target level {L} not in [1, {self.L}]")
        return self.reduce(a, self.at_level(L))

    # integer encodings used by enumeration
    def encode(self, a) -> int:
        if self.char_case is CharCase.ZERO:
            m = self.modulus
            code = 0
            for c in reversed(a):
                code = code * m + c
            return code
        code = 0
        for c in reversed(a):
            code = code * self.q + c
        return code

    def decode(self, code: int):
        if self.char_case is CharCase.ZERO:
            m = self.modulus
            return tuple((code // m**i) % m for i in range(self.f))
        return tuple((code // self.q**i) % self.q for i in range(self.L))

    def elements_of_ideal(self, n: int):
        """All elements of M^n, as tuples."""
        out = [self.zero]
        for j in range(n, self.L):
            out = [self.add(x, self.monomial(z, j)) for x in out for z in self.Fq.elements()]
        return out

    def random(self, rng, min_val: int = 0):
        digits = [int(rng.integers(self.q)) for _ in range(min_val, self.L)]
        return self.reassemble(digits, min_val) if min_val < self.L else self.zero


@functools.lru_cache(maxsize=None)
def local_ring(p: int, f: int, char_case: CharCase, L: int) -> LocalRing:
    return LocalRing(p, f, CharCase(char_case), L)
