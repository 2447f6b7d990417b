"""Command-line front end: verification reports and dimension tables."""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

from . import acceptance as acc
from .assembly import filtration_check, finite_submodule, h1_xx0_decompose, socle_table, z_m
from .errors import ArtifactError
from .finring import FieldParams
from .hecke import ConvolutionOracle, HeckeAlgebra
from .progroup import SubgroupSpec, frattini_quotient, transfer_matrix


class Report:
    def __init__(self, command: str, params: dict):
        self.command = command
        self.params = params
        self.rows: list[dict] = []
        self.ok = True

    def add(self, label: str, value, ref: str = "", ok: bool = True) -> None:
        self.rows.append({"label": label, "value": acc.jsonable(value), "paper_ref": ref})
        self.ok &= bool(ok)

    def add_check(self, c: acc.Check) -> None:
        self.add(c.label, c.observed, f"expected {json.dumps(acc.jsonable(c.expected), sort_keys=True)}", c.ok)

    def sorted_rows(self) -> list[dict]:
        return sorted(self.rows, key=lambda r: natural_key(r["label"]))

    def as_dict(self) -> dict:
        return {
            "params": self.params,
            "command": self.command,
            "rows": self.sorted_rows(),
            "status": "pass" if self.ok else "fail",
        }


def natural_key(s: str):
    return [(0, int(t), "") if t.isdigit() else (1, 0, t) for t in re.split(r"(\d+)", s)]


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.as_dict(), indent=2, ensure_ascii=False) + "\n"
    rows = report.sorted_rows()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "value", "paper_ref"])
        for r in rows:
            w.writerow([r["label"], json.dumps(r["value"], sort_keys=True), r["paper_ref"]])
        return buf.getvalue()
    cells = [(r["label"], json.dumps(r["value"], sort_keys=True), r["paper_ref"]) for r in rows]
    width = max([len(c[0]) for c in cells] + [5])
    vwidth = min(max([len(c[1]) for c in cells] + [5]), 24)
    lines = [f"{report.command}  {json.dumps(report.params)}"]
    lines += [f"{a:<{width}}  {b:<{vwidth}}  {c}".rstrip() for a, b, c in cells]
    lines.append(f"status: {'pass' if report.ok else 'fail'}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ commands


def field_params(a) -> FieldParams:
    return FieldParams(a.p, a.f, a.char, a.kdeg)


def cmd_identities(a, rep: Report) -> None:
    H = HeckeAlgebra(a.p, a.f, a.kdeg)
    try:
        for name, ok in H.identity_suite(a.imax, rng_seed=a.seed):
            rep.add(name, ok, "holds exactly", ok)
    except ArtifactError as exc:
        rep.add(str(exc), False, "holds exactly", False)
    if H.q <= ConvolutionOracle.MAX_Q:
        oracle = ConvolutionOracle(H)
        basis = H.basis_Hx0()
        bad = sum(H.tau(x) * H.tau(y) != oracle.convolve(H.tau(x), H.tau(y)) for x in basis for y in basis)
        rep.add("H_x0 basis pairs where product differs from convolution", bad, "expected 0", bad == 0)


def cmd_frattini(a, rep: Report) -> None:
    P = field_params(a)
    specs = [SubgroupSpec.I(), SubgroupSpec.K(1)]
    for i in range(1, a.imax + 1):
        specs += [SubgroupSpec.I_plus(i), SubgroupSpec.I_minus(i)]
    for spec in specs:
        Q = frattini_quotient(P, spec, backend=backend(a, P))
        rep.add(f"dim {spec.label}", Q.dim)


def cmd_transfer(a, rep: Report) -> None:
    P = field_params(a)
    if P.is_Qp:
        for c in acc.transfer_entries(P.p):
            rep.add_check(c)
    for i in range(a.imax + 1):
        for mk in (SubgroupSpec.I_plus, SubgroupSpec.I_minus):
            src, dst = mk(i), mk(i + 1)
            A = transfer_matrix(
                frattini_quotient(P, src, backend=backend(a, P)), frattini_quotient(P, dst, backend=backend(a, P))
            )
            rep.add(f"tr {src.label} -> {dst.label}", A)


def cmd_h1table(a, rep: Report) -> None:
    P = field_params(a)
    H = HeckeAlgebra(P.p, P.f, P.kdeg)
    for m in range(1, a.m + 1):
        M = finite_submodule(P, m, backend=a.backend).module
        rep.add(f"m={m}: dim M^1", M.dim)
        for chi, d in socle_table(M).items():
            rep.add(f"m={m}: {chi.name(H.q)}", d)


def cmd_zm(a, rep: Report) -> None:
    P = field_params(a)
    Z = z_m(finite_submodule(P, a.m, backend=a.backend).module)
    rep.add(f"m={a.m}: dim Z_m", Z.dim)
    for chi, d in socle_table(Z).items():
        rep.add(f"m={a.m}: Z_m({chi.name(P.q)})", d)


def cmd_decompose(a, rep: Report) -> None:
    P = field_params(a)
    r = h1_xx0_decompose(P, backend=a.backend)
    for label, v in r.multiset.items():
        rep.add(label, v)
    rep.add("e_1-block trivial part", r.triv_dim)
    rep.add("e_1-block sign part", r.sign_dim)


def cmd_filtration(a, rep: Report) -> None:
    P = field_params(a)
    i = a.m if a.i is None else a.i
    for name, ok in filtration_check(P, a.m, i, a.degree, n_max=a.nmax, backend=a.backend):
        rep.add(name, ok, "holds exactly", ok)


def cmd_selftest(a, rep: Report) -> None:
    for n, fn in acc.CRITERIA.items():
        checks = fn(seed=a.seed) if n == 1 else fn()
        for c in checks:
            rep.add(f"{c.criterion}: {c.label}", c.observed, f"expected {json.dumps(acc.jsonable(c.expected), sort_keys=True)}", c.ok)


COMMANDS = {
    "identities": cmd_identities,
    "frattini": cmd_frattini,
    "transfer": cmd_transfer,
    "h1table": cmd_h1table,
    "zm": cmd_zm,
    "decompose-xx0": cmd_decompose,
    "filtration": cmd_filtration,
    "selftest": cmd_selftest,
}


def backend(a, P: FieldParams) -> str:
    return a.backend or acc.backend_for(P.p)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artifact", description=__doc__)
    ap.add_argument("command", choices=list(COMMANDS))
    ap.add_argument("--char", choices=["0", "p"], default="p")
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--f", type=int, default=1)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--i", type=int, default=None, help="filtration index (default: m)")
    ap.add_argument("--degree", type=int, choices=[0, 1], default=1, help="cohomological degree for filtration")
    ap.add_argument("--nmax", type=int, default=None)
    ap.add_argument("--kdeg", type=int, default=None)
    ap.add_argument("--backend", choices=["coordinate", "brute"], default=None)
    ap.add_argument("--format", choices=["text", "json", "csv"], default="text")
    ap.add_argument("--imax", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    if a.p < 2 or a.f < 1 or a.m < 1 or a.imax < 0:
        ap.error("--p must be >= 2, --f and --m positive, --imax non-negative")
    try:
        field_params(a)
    except ArtifactError as exc:
        ap.error(str(exc))
    params = {
        "char": a.char,
        "p": a.p,
        "f": a.f,
        "kdeg": a.kdeg,
        "m": a.m,
        "i": a.i,
        "degree": a.degree,
        "nmax": a.nmax,
        "backend": a.backend,
        "imax": a.imax,
        "seed": a.seed,
    }
    rep = Report(a.command, params)
    try:
        COMMANDS[a.command](a, rep)
    except ArtifactError as exc:
        rep.add(f"error: {type(exc).__name__}", str(exc), "", False)
    sys.stdout.write(render(rep, a.format))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
