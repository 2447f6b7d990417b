"""Acceptance checks with their pinned expected values.

Every check compares an observed value with an expected one by exact
equality.  Results are grouped by criterion number; the CLI's selftest and
the test suite both consume them.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .assembly import (
    annihilation_checks,
    filtration_check,
    finite_submodule,
    h1_xx0_decompose,
    socle_table,
    z_m,
)
from .errors import ArtifactError, IdentityFailure
from .finring import CharCase, FieldParams, field
from .hecke import Character, ConvolutionOracle, HeckeAlgebra, HeckeElt
from .hmodule import add_multisets, character_module, decompose_Hx0, hom_space, regular_right_ideal
from .progroup import (
    SubgroupSpec,
    ambient_ring,
    diag,
    frattini_quotient,
    h1_map,
    inclusion_matrix,
    realize,
    transfer_element,
    transfer_matrix,
    u_minus,
    u_plus,
)

EQ, ZERO = CharCase.EQUAL, CharCase.ZERO
S = SubgroupSpec


@dataclass(frozen=True)
class Check:
    criterion: int
    label: str
    expected: object
    observed: object
    ref: str = ""

    @property
    def ok(self) -> bool:
        return self.expected == self.observed


def jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    return x


def backend_for(p: int) -> str:
    return "brute" if p == 2 else "coordinate"


def quotient(params: FieldParams, spec: SubgroupSpec):
    return frattini_quotient(params, spec, backend=backend_for(params.p))


@functools.lru_cache(maxsize=None)
def cached_submodule(p: int, f: int, cc: CharCase, m: int):
    return finite_submodule(FieldParams(p, f, cc), m)


def chi_name(H: HeckeAlgebra, chi: Character) -> str:
    return chi.name(H.q)


# ------------------------------------------------------------ criterion 1


def random_element(H: HeckeAlgebra, rng: np.random.Generator, max_length: int = 3, terms: int = 4) -> HeckeElt:
    ws = H.W.elements(max_length)
    out = {}
    for i in rng.choice(len(ws), size=terms, replace=False):
        out[ws[int(i)]] = int(rng.integers(1, H.k.order))
    return HeckeElt(H, out)


def criterion_1(seed: int = 0) -> list[Check]:
    out = []
    rng = np.random.default_rng(seed)
    for p in (2, 3, 5):
        H = HeckeAlgebra(p)
        bad = 0
        for _ in range(20):
            a, b, c = (random_element(H, rng) for _ in range(3))
            bad += (a * b) * c != a * (b * c)
        out.append(Check(1, f"q={p}: associativity failures on 20 random triples", 0, bad))
        oracle = ConvolutionOracle(H)
        basis = H.basis_Hx0()
        bad = sum(
            H.tau(x) * H.tau(y) != oracle.convolve(H.tau(x), H.tau(y)) for x in basis for y in basis
        )
        out.append(Check(1, f"q={p}: H_x0 basis pairs where product differs from convolution", 0, bad))
    return out


# ------------------------------------------------------------ criterion 2


def criterion_2(imax: int = 4) -> list[Check]:
    out = []
    for p, f in ((2, 1), (3, 1), (5, 1), (3, 2)):
        try:
            n = len(HeckeAlgebra(p, f).identity_suite(imax))
            failed = None
        except IdentityFailure as exc:
            n, failed = 0, str(exc)
        out.append(Check(2, f"q={p ** f}: first failing identity (imax={imax}, {n} checks)", None, failed))
    return out


# ------------------------------------------------------------ criterion 3


def criterion_3() -> list[Check]:
    out = []
    for p, f in ((3, 1), (3, 2), (5, 1)):
        for cc in (EQ, ZERO):
            P = FieldParams(p, f, cc)
            out.append(Check(3, f"{P.label()}: dim K_1 Frattini quotient", 3 * f, quotient(P, S.K(1)).dim))
            out.append(Check(3, f"{P.label()}: dim I Frattini quotient", 2 * f, quotient(P, S.I()).dim))
    for p in (2, 3, 5):
        P = FieldParams(p, 1, ZERO)
        out.append(Check(3, f"{P.label()}: dim I", 2, quotient(P, S.I()).dim))
        for i in (1, 2, 3):
            want = 4 if p == 2 and i >= 2 else 3
            for spec in (S.I_plus(i), S.I_minus(i)):
                out.append(Check(3, f"{P.label()}: dim {spec.label}", want, quotient(P, spec).dim))
    for cc in (EQ, ZERO):
        P = FieldParams(3, 1, cc)
        rng = np.random.default_rng(1)
        for spec in (S.I(), S.K(1), S.I_plus(1), S.I_minus(1), S.I_plus(2), S.I_minus(2)):
            A = frattini_quotient(P, spec, backend="coordinate")
            B = frattini_quotient(P, spec, backend="brute")
            R = ambient_ring(A, B)
            same = A.dim == B.dim and A.basis == B.basis
            if same:
                for _ in range(20):
                    g = random_member(R, spec, rng)
                    if not np.array_equal(A.coords(R, g), B.coords(R, g)):
                        same = False
                        break
            out.append(Check(3, f"{P.label()}: {spec.label} coordinate and brute backends agree", True, same))
    return out


def random_member(R, spec: SubgroupSpec, rng):
    from .progroup import iwahori_assemble

    cl, bl, tl = spec.levels
    c = R.random(rng, cl)
    b = R.random(rng, bl)
    t = R.add(R.from_int(1), R.random(rng, max(tl, 1)))
    return iwahori_assemble(R, c, t, b)


# ------------------------------------------------------------ criterion 4


def _named(R, p: int, name: tuple):
    kind = name[0]
    if kind == "u-":
        return u_minus(R, R.from_int(p ** name[1]))
    if kind == "u+":
        return u_plus(R, R.from_int(p ** name[1]))
    if kind == "d":
        return diag(R, R.from_int(1 + p))
    if kind == "d5":
        return diag(R, R.from_int(5))
    if kind == "-1":
        return realize(R, ("-1",))
    raise ValueError(name)


def transfer_table(p: int) -> list[tuple[str, SubgroupSpec, SubgroupSpec, tuple, list[tuple]]]:
    """(label, source, target, element, expected image as a sum of named elements)."""
    extra = {2: [("u-", 2), ("d",)], 3: [("u-", 2)]}.get(p, [])
    extra_ii = {2: [("u+", 1), ("d",)], 3: [("u+", 1)]}.get(p, [])
    rows = [
        ("I -> I+_1", S.I(), S.I_plus(1), ("u-", 1), [("u-", 2)]),
        ("I -> I+_1", S.I(), S.I_plus(1), ("u+", 0), extra),
        ("I -> K_1", S.I(), S.I_minus(1), ("u-", 1), extra_ii),
        ("I -> K_1", S.I(), S.I_minus(1), ("u+", 0), [("u+", 1)]),
    ]
    for i in (1, 2, 3):
        diags = [("-1",), ("d5",)] if p == 2 and i >= 2 else [("d",)]
        src, dst = S.I_plus(i), S.I_plus(i + 1)
        lab = f"{src.label} -> {dst.label}"
        rows.append((lab, src, dst, ("u-", i + 1), [("u-", i + 2)]))
        rows.append((lab, src, dst, ("u+", 0), []))
        rows += [(lab, src, dst, d, []) for d in diags]
        src, dst = S.I_minus(i), S.I_minus(i + 1)
        lab = f"{src.label} -> {dst.label}"
        rows.append((lab, src, dst, ("u-", 1), []))
        rows.append((lab, src, dst, ("u+", i), [("u+", i + 1)]))
        rows += [(lab, src, dst, d, []) for d in diags]
    return rows


def _name_str(name: tuple) -> str:
    return {"u-": "u_-(p^{})", "u+": "u_+(p^{})", "d": "d_p", "d5": "diag(5,1/5)", "-1": "-Id"}[name[0]].format(
        *name[1:]
    )


def transfer_entries(p: int) -> list[Check]:
    P = FieldParams(p, 1, ZERO)
    Fp = field(p)
    out = []
    for lab, src, dst, g, image in transfer_table(p):
        A, B = quotient(P, src), quotient(P, dst)
        R = ambient_ring(A, B, extra=1)
        got = transfer_element(A, B, R, _named(R, p, g))
        want = np.zeros(B.dim, dtype=np.int64)
        for h in image:
            want = Fp.aadd(want, B.coords(R, _named(R, p, h)))
        rhs = " + ".join(_name_str(h) for h in image) or "0"
        out.append(Check(4, f"Q_{p}: tr {lab}: {_name_str(g)} -> {rhs}", want.tolist(), got.tolist()))
    return out


def transfer_zero_maps() -> list[Check]:
    out = []
    for p, f, cc in ((3, 1, EQ), (5, 1, EQ), (3, 2, EQ), (3, 2, ZERO)):
        P = FieldParams(p, f, cc)
        for i in range(4):
            if i == 0 and P.q == 3:
                continue
            for mk in (S.I_plus, S.I_minus):
                A = transfer_matrix(quotient(P, mk(i)), quotient(P, mk(i + 1)))
                out.append(Check(4, f"{P.label()}: tr {mk(i).label} -> {mk(i + 1).label} is zero", 0, int(np.count_nonzero(A))))
    return out


def _inflated(Fp, A1, A2):
    """Classes on A1 trivial on the image of A2."""
    return la.nullspace(Fp, inclusion_matrix(A2, A1))


def transfer_small_q() -> list[Check]:
    out = []
    for p in (2, 3):
        P = FieldParams(p, 1, EQ)
        Fp = field(p)
        I = quotient(P, S.I())
        for sgn, mk, other in (("+", S.I_plus, S.I_minus), ("-", S.I_minus, S.I_plus)):
            A1, A2, B1 = quotient(P, mk(1)), quotient(P, mk(2)), quotient(P, other(1))
            cores = h1_map("cores", A1, I)
            res = h1_map("res", I, B1)
            if p == 3:
                comp = Fp.matmul(cores, res)
                out.append(Check(4, f"q=3: cores then res from I{sgn}_1 through I is zero", 0, int(np.count_nonzero(comp))))
            V = _inflated(Fp, A1, A2)
            img = Fp.matmul(V, cores)
            out.append(Check(4, f"q={p}: inflation then cores from I{sgn}_1/I{sgn}_2 is injective", V.shape[0], la.rank(Fp, img)))
            if p == 2:
                out.append(Check(4, f"q=2: inf, cores, res from I{sgn}_1/I{sgn}_2 is zero", 0, int(np.count_nonzero(Fp.matmul(img, res)))))
                for i in (1, 2):
                    Ai, Ai1, Ai2 = quotient(P, mk(i)), quotient(P, mk(i + 1)), quotient(P, mk(i + 2))
                    V = _inflated(Fp, Ai1, Ai2)
                    comp = Fp.matmul(V, h1_map("cores", Ai1, Ai))
                    out.append(Check(4, f"q=2: inf then cores from {mk(i + 1).label}/{mk(i + 2).label} is zero", 0, int(np.count_nonzero(comp))))
    return out


def transfer_intersections() -> list[Check]:
    out = []
    for p in (2, 3, 5):
        P = FieldParams(p, 1, ZERO)
        Fp = field(p)
        for sgn, mk, other in (("+", S.I_plus, S.I_minus), ("-", S.I_minus, S.I_plus)):
            for i in (1, 2, 3):
                A, lo, hi = quotient(P, mk(i)), quotient(P, mk(i - 1)), quotient(P, mk(i + 1))
                im = la.intersect(Fp, h1_map("res", lo, A), h1_map("cores", hi, A)).shape[0]
                out.append(Check(4, f"Q_{p}: images of res and cores meet in {mk(i).label}", 0, im))
                k1 = la.kernel_of_map(Fp, h1_map("cores", A, lo))
                k2 = la.kernel_of_map(Fp, h1_map("res", A, hi))
                out.append(Check(4, f"Q_{p}: kernels of cores and res meet in {mk(i).label}", 0, la.intersect(Fp, k1, k2).shape[0]))
            A1, I, B1, A2 = quotient(P, mk(1)), quotient(P, S.I()), quotient(P, other(1)), quotient(P, mk(2))
            k1 = la.kernel_of_map(Fp, Fp.matmul(h1_map("cores", A1, I), h1_map("res", I, B1)))
            k2 = la.kernel_of_map(Fp, h1_map("res", A1, A2))
            out.append(Check(4, f"Q_{p}: kernels of cores-res and res meet in I{sgn}_1", 0, la.intersect(Fp, k1, k2).shape[0]))
    return out


def criterion_4() -> list[Check]:
    out = []
    for p in (2, 3, 5):
        out += transfer_entries(p)
    return out + transfer_zero_maps() + transfer_small_q() + transfer_intersections()


# ------------------------------------------------------------ criteria 5 and 6


def chi_eps(m: int) -> Character:
    return Character(0, -1, 0) if m % 2 == 0 else Character(0, 0, -1)


def inverse_is_automorphism(H: HeckeAlgebra, j: int) -> bool:
    """Is z -> lambda^j(z)^-1 a field automorphism of F_q (read through the embedding)?"""
    return any((-j - H.p**r) % (H.q - 1) == 0 for r in range(H.f))


def socle_law_cases() -> list[tuple[int, int, CharCase, int]]:
    cases = [(p, 1, ZERO, m) for p in (3, 5) for m in (1, 2, 3)]
    cases += [(p, f, EQ, m) for p, f in ((3, 1), (5, 1), (3, 2)) for m in (1, 2, 3, 4)]
    cases += [(3, 2, ZERO, 2), (2, 1, EQ, 2)]
    return cases


def criterion_5() -> list[Check]:
    out = []
    for p in (3, 5):
        for m in (1, 2, 3):
            M = cached_submodule(p, 1, ZERO, m).module
            out.append(Check(5, f"Q_{p}, m={m}: dim M^1", 0, M.dim))
            out.append(Check(5, f"Q_{p}, m={m}: dim Z_m", 0, z_m(M).dim))
    for p, f in ((3, 1), (5, 1), (3, 2)):
        q = p**f
        for m in (1, 2, 3, 4):
            M = cached_submodule(p, f, EQ, m).module
            tab = socle_table(M)
            chi = chi_eps(m)
            out.append(Check(5, f"F_{q}((t)), m={m}: dim M^1({chi.name(q)})", (m - 1) * f, tab[chi]))
            out.append(Check(5, f"F_{q}((t)), m={m}: dim M^1(chi_triv)", 0, tab[Character(0, 0, 0)]))
            out.append(Check(5, f"F_{q}((t)), m={m}: dim M^1(chi_sign)", 0, tab[Character(0, -1, -1)]))
        M2 = cached_submodule(p, f, EQ, 2).module
        out.append(Check(5, f"F_{q}((t)), m=2: dim M^1(chi_1)", 0, socle_table(M2)[Character(0, 0, -1)]))
    for p, f, cc in ((5, 1, EQ), (3, 2, EQ), (3, 2, ZERO)):
        P = FieldParams(p, f, cc)
        tab = socle_table(cached_submodule(p, f, cc, 2).module)
        H = HeckeAlgebra(p, f)
        for j in range(1, P.q - 1):
            want = f - 1 if inverse_is_automorphism(H, j) else f
            out.append(Check(5, f"{P.label()}, m=2: dim M^1(chi_lambda^{j})", want, tab[Character(j)]))
    tab = socle_table(cached_submodule(5, 1, EQ, 3).module)
    out.append(Check(5, "F_5((t)), m=3: dim M^1(chi_lambda^3), lambda^-1 = id", 2, tab[Character(3)]))
    for m, want in ((2, 0), (3, 1)):
        tab = socle_table(cached_submodule(3, 1, EQ, m).module)
        out.append(Check(5, f"F_3((t)), m={m}: dim M^1(chi_lambda^1)", want, tab[Character(1)]))
    M = cached_submodule(2, 1, EQ, 2).module
    tab = socle_table(M)
    out.append(Check(5, "F_2((t)), m=2: dim M^1", 1, M.dim))
    out.append(Check(5, "F_2((t)), m=2: dim M^1(chi_0)", 1, tab[Character(0, -1, 0)]))
    Z = z_m(M)
    out.append(Check(5, "F_2((t)), m=2: dim Z_2", 1, Z.dim))
    out.append(Check(5, "F_2((t)), m=2: dim Z_2(chi_1)", 1, socle_table(Z)[Character(0, 0, -1)]))
    Z = z_m(cached_submodule(3, 1, EQ, 2).module)
    out.append(Check(5, "F_3((t)), m=2: dim Z_2", 1, Z.dim))
    out.append(Check(5, "F_3((t)), m=2: dim Z_2(chi_1)", 1, socle_table(Z)[Character(0, 0, -1)]))
    return out


def criterion_6() -> list[Check]:
    out = []
    for p, f, cc, m in socle_law_cases():
        M = cached_submodule(p, f, cc, m).module
        if M.dim == 0 or m < 2:
            continue
        label = FieldParams(p, f, cc).label()
        try:
            failed = [name for name, ok in annihilation_checks(M, m) if not ok]
        except ArtifactError as exc:
            failed = [str(exc)]
        out.append(Check(6, f"{label}, m={m}: tau_v(m), zeta^(m-1) annihilate and Z_m supersingular", [], failed))
    return out


# ------------------------------------------------------------ criterion 7


def criterion_7() -> list[Check]:
    out = []
    for p in (3, 5):
        H = HeckeAlgebra(p)
        Zs = [z_m(cached_submodule(p, 1, EQ, m).module) for m in (2, 3)]
        for chi in H.characters():
            if not chi.is_supersingular:
                continue
            C = character_module(H, chi, side="left")
            n = sum(len(hom_space(Z, C)) for Z in Zs)
            out.append(Check(7, f"F_{p}((t)): {chi.name(p)} is a quotient of Z_2 or Z_3", True, n > 0))
    return out


# ------------------------------------------------------------ criterion 8


def expected_hx0(H: HeckeAlgebra, small: bool) -> dict[str, int]:
    """Multiset of H_x0^a + (tau_s0 H_x0)^b + ((tau_s0 + e_1) H_x0)^c."""
    f = H.f
    a, b, c = (2, 1, 0) if small else (f, 2 * f, f)
    parts = [decompose_Hx0(regular_right_ideal(H, x)) for x in (H.one(), H.tau_s(0), H.tau_s(0) + H.e1())]
    return add_multisets(*parts, times=[a, b, c])


def criterion_8() -> list[Check]:
    out = []
    for p, f, cc in ((5, 1, EQ), (3, 2, EQ), (3, 1, ZERO), (3, 1, EQ)):
        P = FieldParams(p, f, cc)
        r = h1_xx0_decompose(P)
        small = P.is_Qp or P.q == 3
        want = expected_hx0(r.module.H, small)
        out.append(Check(8, f"{P.label()}: H^1(I, X_x0) decomposition", want, dict(sorted(r.multiset.items()))))
        out.append(Check(8, f"{P.label()}: trivial part of e_1-block = dim H^1(I)", quotient(P, S.I()).dim, r.triv_dim))
        out.append(Check(8, f"{P.label()}: sign part of e_1-block = dim H^1(K_1)", quotient(P, S.K(1)).dim, r.sign_dim))
    return out


# ------------------------------------------------------------ criterion 9


def criterion_9() -> list[Check]:
    out = []
    P = FieldParams(3, 1, EQ)
    for m, i, j in ((2, 2, 0), (2, 2, 1), (2, 3, 1), (3, 3, 1)):
        try:
            failed = [name for name, ok in filtration_check(P, m, i, j, n_max=i + 3) if not ok]
        except ArtifactError as exc:
            failed = [str(exc)]
        out.append(Check(9, f"q=3, m={m}, i={i}, j={j}: filtration checks", [], failed))
    return out


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_all(only: list[int] | None = None) -> list[Check]:
    out = []
    for n, fn in CRITERIA.items():
        if only is None or n in only:
            out += fn()
    return out
