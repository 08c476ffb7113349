"""Command line frontend.

Commands: ``weyl`` (coset counts), ``cohomology`` (Betti numbers and ring
constants), ``spectral`` (page dimensions, differential ranks, degeneration
page), ``bk-verify`` (the full structural verification of one instance).

Instances come from a preset root-system label plus Levi and support index
sets, or from a structure-constant algebra file with subalgebra and ideal
selectors.  A config file (INI, section ``[instance]``) may hold the same
keys; command line flags override file values.  Exit codes: 0 all verdicts
pass, 1 verification failure or computation error, 2 input error.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
import time

from .linalg import Q, ONE, LinAlgError, SubspaceHandle
from .lie import LieAlgebra, LieModule, build_triple
from .cochains import CohomologyRing, RelativeComplex
from .spectral import SpectralSequence
from .rootdata import RootSystemError, build_root_datum, weyl_counts
from .bk import (
    BKInstance,
    ParabolicDatum,
    bk_cohomology,
    kostant_table,
    verify_structure,
)
from .report import Report, emit


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# algebra files: `dim n`, optional `labels ...`, lines `i j -> k:c, k':c'`


def parse_algebra_file(text: str) -> LieAlgebra:
    dim = None
    labels = None
    table: dict = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("dim"):
            try:
                dim = int(line.split()[1])
            except (IndexError, ValueError):
                raise InputError(f"algebra file line {ln}: bad dim line")
            continue
        if line.startswith("labels"):
            labels = line.split()[1:]
            continue
        if "->" not in line:
            raise InputError(f"algebra file line {ln}: expected 'i j -> k:c, ...'")
        if dim is None:
            raise InputError(f"algebra file line {ln}: dim must come first")
        left, right = line.split("->", 1)
        try:
            i, j = (int(tok) for tok in left.split())
        except ValueError:
            raise InputError(f"algebra file line {ln}: bad indices")
        vec = {}
        for term in right.split(","):
            term = term.strip()
            if not term:
                continue
            if ":" not in term:
                raise InputError(f"algebra file line {ln}: bad term {term!r}")
            k, c = term.split(":", 1)
            try:
                vec[int(k) - 1] = Q(c.strip())
            except (ValueError, ZeroDivisionError):
                raise InputError(f"algebra file line {ln}: bad rational {c!r}")
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise InputError(f"algebra file line {ln}: index out of range")
        table[(i - 1, j - 1)] = vec
    if dim is None:
        raise InputError("algebra file: missing dim line")
    return LieAlgebra(dim, table, labels)


def write_algebra_file(g: LieAlgebra) -> str:
    lines = [f"dim {g.dim}"]
    if g.labels:
        lines.append("labels " + " ".join(g.labels))
    for (i, j), vec in sorted(g.table.items()):
        terms = ", ".join(f"{k + 1}:{v}" for k, v in sorted(vec.items()))
        lines.append(f"{i + 1} {j + 1} -> {terms}")
    return "\n".join(lines) + "\n"


def parse_span(g: LieAlgebra, text: str) -> list:
    """Subspace selector: ';'-separated elements, each a basis label, a
    1-based basis index, or a comma-separated coordinate vector."""
    cols = []
    text = text.strip()
    if not text:
        return cols
    for tok in text.split(";"):
        tok = tok.strip()
        if not tok:
            continue
        if "," in tok:
            entries = [e.strip() for e in tok.split(",")]
            if len(entries) != g.dim:
                raise InputError(
                    f"vector {tok!r} has {len(entries)} entries, need {g.dim}"
                )
            try:
                col = {i: Q(e) for i, e in enumerate(entries) if Q(e)}
            except (ValueError, ZeroDivisionError):
                raise InputError(f"bad rational in vector {tok!r}")
            cols.append(col)
        elif g.labels and tok in g.labels:
            cols.append({g.labels.index(tok): ONE})
        else:
            try:
                idx = int(tok)
            except ValueError:
                raise InputError(f"unknown basis label {tok!r}")
            if not 1 <= idx <= g.dim:
                raise InputError(f"basis index {idx} out of range")
            cols.append({idx - 1: ONE})
    return cols


def parse_module(g: LieAlgebra, text: str) -> LieModule:
    text = (text or "trivial").strip().lower()
    if text == "trivial":
        return LieModule.trivial(g.dim, 1)
    if text.startswith("trivial:"):
        try:
            return LieModule.trivial(g.dim, int(text.split(":", 1)[1]))
        except ValueError:
            raise InputError(f"bad module spec {text!r}")
    if text == "adjoint":
        return LieModule.adjoint(g)
    raise InputError(f"unknown module spec {text!r} (trivial, trivial:N, adjoint)")


def parse_index_set(text: str, upper: int, what: str) -> list:
    text = (text or "").strip()
    if not text:
        return []
    out = []
    for tok in text.replace(";", ",").split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            i = int(tok)
        except ValueError:
            raise InputError(f"bad {what} index {tok!r}")
        if not 1 <= i <= upper:
            raise InputError(f"{what} index {i} out of range 1..{upper}")
        out.append(i)
    return sorted(set(out))


def parse_cartan(text: str) -> list:
    rows = []
    for rtok in text.split(";"):
        rtok = rtok.strip()
        if not rtok:
            continue
        try:
            rows.append([int(e) for e in rtok.split(",")])
        except ValueError:
            raise InputError(f"bad cartan row {rtok!r}")
    if not rows:
        raise InputError("empty cartan matrix")
    return rows


# ---------------------------------------------------------------------------


class InstanceConfig:
    """Merged file + flag configuration; exactly one of preset/custom."""

    KEYS = ("preset", "cartan", "levi", "t_support", "custom", "k", "ideal", "module")

    def __init__(self, values: dict):
        self.values = {k: values.get(k) for k in self.KEYS}
        if bool(self.values["preset"] or self.values["cartan"]) == bool(
            self.values["custom"]
        ):
            raise InputError("exactly one of --preset/--cartan or --custom is required")

    @classmethod
    def from_args(cls, args) -> "InstanceConfig":
        values: dict = {}
        if getattr(args, "config", None):
            cp = configparser.ConfigParser()
            try:
                with open(args.config) as fh:
                    cp.read_file(fh)
            except OSError as exc:
                raise InputError(f"cannot read config: {exc}")
            except configparser.Error as exc:
                raise InputError(f"config parse error: {exc}")
            if cp.has_section("instance"):
                for k in cls.KEYS:
                    if cp.has_option("instance", k):
                        values[k] = cp.get("instance", k)
        for k in cls.KEYS:
            flag = getattr(args, k, None)
            if flag is not None:
                values[k] = flag
        return cls(values)

    def echo_into(self, rep: Report) -> None:
        for k in self.KEYS:
            v = self.values.get(k)
            rep.add("instance", k, "" if v is None else v)

    def build_bk(self) -> BKInstance:
        datum = self._datum()
        levi = parse_index_set(self.values.get("levi"), datum.rank, "levi")
        par = ParabolicDatum(datum, levi)
        support = parse_index_set(self.values.get("t_support"), par.m, "support")
        return BKInstance(par, support)

    def _datum(self):
        if self.values.get("cartan"):
            return build_root_datum("custom", parse_cartan(self.values["cartan"]))
        return build_root_datum(self.values["preset"])

    def build_custom(self):
        """(algebra, module, k columns, ideal columns or None)."""
        path = self.values["custom"]
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read algebra file: {exc}")
        g = parse_algebra_file(text)
        bad = g.validate()
        if bad:
            raise InputError("algebra file invalid: " + "; ".join(bad[:3]))
        module = parse_module(g, self.values.get("module"))
        viol = module.validate(g)
        if viol:
            raise InputError("module invalid: " + "; ".join(viol[:3]))
        k_cols = parse_span(g, self.values.get("k") or "")
        ideal = self.values.get("ideal")
        ideal_cols = parse_span(g, ideal) if ideal is not None else None
        return g, module, k_cols, ideal_cols


# ---------------------------------------------------------------------------
# command implementations (each returns (Report, verdict))


def _run_weyl(cfg: InstanceConfig) -> tuple:
    datum = cfg._datum()
    levi = parse_index_set(cfg.values.get("levi"), datum.rank, "levi")
    par = ParabolicDatum(datum, levi)
    support = parse_index_set(cfg.values.get("t_support"), par.m, "support")
    k_simple = sorted(set(par.levi0) | set(par.support_to_simple(support)))
    wc = weyl_counts(datum, par.levi0, k_simple)
    rep = Report("weyl")
    cfg.echo_into(rep)
    rep.add("weyl", "order", wc.order)
    rep.add("weyl", "order_levi", wc.order_levi)
    rep.add("weyl", "order_extended", wc.order_extended)
    rep.add("weyl", "flag_count", wc.flag_count)
    rep.add("weyl", "flag_by_length", wc.flag_by_length)
    rep.add("weyl", "inner_count", wc.inner_count)
    rep.add("weyl", "inner_by_length", wc.inner_by_length)
    rep.add("weyl", "outer_count", wc.outer_count)
    rep.add("weyl", "outer_by_length", wc.outer_by_length)
    rep.add("verdict", "pass", True)
    return rep, True


def _betti_section(rep: Report, ring: CohomologyRing) -> None:
    for n, b in enumerate(ring.betti):
        if b:
            rep.add("betti", str(n), b)
    rep.add("betti", "total", ring.total_dim())


def _ring_section(rep: Report, ring: CohomologyRing) -> None:
    if not ring.is_ring:
        return
    consts = ring.cup_constants()
    for (p, i, q, j), vec in sorted(consts.items()):
        if p == 0 or q == 0:
            continue  # unit products carry no information
        rep.add("ring", f"{p}.{i} * {q}.{j}", {f"{p+q}.{t}": c for t, c in vec.items()})


def _run_cohomology(cfg: InstanceConfig) -> tuple:
    rep = Report("cohomology")
    cfg.echo_into(rep)
    if cfg.values.get("custom"):
        g, module, k_cols, ideal_cols = cfg.build_custom()
        if ideal_cols is not None:
            triple = build_triple(g, k_cols, ideal_cols)
            ring = CohomologyRing(RelativeComplex(g, None, module, triple=triple))
        else:
            k = SubspaceHandle.span(g.dim, k_cols)
            ring = CohomologyRing(RelativeComplex(g, k, module))
    else:
        inst = cfg.build_bk()
        ring = bk_cohomology(inst)
        rep.add("assumptions", "field", "exact rationals stand in for complex numbers")
    _betti_section(rep, ring)
    _ring_section(rep, ring)
    rep.add("verdict", "pass", True)
    return rep, True


def _spectral_sections(rep: Report, seq: SpectralSequence) -> bool:
    deg = seq.degeneration_page()
    rmax = max(deg, 2)
    for r in range(rmax + 1):
        cells = seq.page(r)
        for (p, q) in sorted(cells):
            cell = cells[(p, q)]
            if cell.dim:
                rep.add("pages", f"dim r={r} p={p} q={q}", cell.dim)
        for (p, q) in sorted(cells):
            cell = cells[(p, q)]
            if cell.d_rank:
                rep.add("pages", f"rank d{r} p={p} q={q}", cell.d_rank)
    inf = seq.infinity_cells()
    for (p, q) in sorted(inf):
        if inf[(p, q)].sub.dim:
            rep.add("pages", f"dim r=inf p={p} q={q}", inf[(p, q)].sub.dim)
    rep.add("pages", "degeneration_page", deg)
    converged = all(
        sum(inf[(p, q)].sub.dim for (p, q) in inf if p + q == n) == seq.ring.dim(n)
        for n in range(seq.max_degree + 1)
    )
    rep.add("pages", "abutment_matches_cohomology", converged)
    return converged


def _run_spectral(cfg: InstanceConfig) -> tuple:
    rep = Report("spectral")
    cfg.echo_into(rep)
    if cfg.values.get("custom"):
        g, module, k_cols, ideal_cols = cfg.build_custom()
        if ideal_cols is None:
            raise InputError("spectral needs --ideal for custom algebras")
        triple = build_triple(g, k_cols, ideal_cols)
        seq = SpectralSequence(triple, module)
    else:
        inst = cfg.build_bk()
        seq = inst.spectral
        rep.add("assumptions", "field", "exact rationals stand in for complex numbers")
    _betti_section(rep, seq.ring)
    ok = _spectral_sections(rep, seq)
    rep.add("verdict", "pass", ok)
    return rep, ok


def _run_bk_verify(cfg: InstanceConfig) -> tuple:
    if cfg.values.get("custom"):
        raise InputError("bk-verify needs a preset or cartan root datum")
    inst = cfg.build_bk()
    sr = verify_structure(inst)
    kt = kostant_table(inst.parabolic, inst.k_simple)
    rep = Report("bk-verify")
    cfg.echo_into(rep)
    for i, a in enumerate(sr.assumptions):
        rep.add("assumptions", f"a{i + 1}", a)
    ring = bk_cohomology(inst)
    _betti_section(rep, ring)
    seq = inst.spectral
    _spectral_sections(rep, seq)
    v = rep.section("verify")
    v.append(("flag_count", str(sr.flag_count)))
    v.append(("total_dim", str(sr.total_dim)))
    v.append(("dims_match_flag_count", _b(sr.dims_match_flag_count)))
    v.append(("even_degrees_only", _b(sr.even_degrees_only)))
    v.append(("degenerates_at_2", _b(sr.degenerates_at_2)))
    v.append(("e2_total", str(sr.e2_total)))
    v.append(("e2_matches_flag_count", _b(sr.e2_matches_flag_count)))
    v.append(("subalgebra_dims", _dims(sr.subalgebra_dims)))
    v.append(("subalgebra_expected", str(sr.subalgebra_expected)))
    v.append(("subalgebra_ring_iso", _b(sr.subalgebra_ring_iso)))
    v.append(("pullback_injective", _b(sr.pullback_injective)))
    v.append(("pullback_ring_map", _b(sr.pullback_ring_map)))
    v.append(("quotient_dims", _dims(sr.quotient_dims)))
    v.append(("kostant_dims", _dims(sr.kostant_dims)))
    v.append(("quotient_matches_kostant", _b(sr.quotient_matches_kostant)))
    v.append(("restriction_surjective", _b(sr.restriction_surjective)))
    v.append(("kernel_ideal_match", _b(sr.kernel_ideal_match)))
    v.append(("free_module_ok", _b(sr.free_module_ok)))
    v.append(("hypothesis_ok", _b(sr.hypothesis_ok)))
    v.append(("poincare_full", ",".join(map(str, sr.poincare_full))))
    v.append(("poincare_sub", ",".join(map(str, sr.poincare_sub))))
    v.append(("poincare_quotient", ",".join(map(str, sr.poincare_quotient))))
    v.append(("poincare_factorization", _b(sr.poincare_factorization)))
    rep.add("kostant", "invariant_dims", _dims(kt.invariant_dims))
    rep.add("kostant", "total", kt.total)
    rep.add("kostant", "coset_count", kt.coset_count)
    rep.add("kostant", "matches_total", kt.matches_total)
    for n, got, want, same in kt.per_degree_advisory:
        rep.add("kostant_advisory", f"degree {n}", f"{got} vs cosets {want}: {str(same).lower()}")
    rep.add("verdict", "pass", sr.ok)
    return rep, sr.ok


def _b(x) -> str:
    return "true" if x else "false"


def _dims(d: dict) -> str:
    return " ".join(f"{k}:{v}" for k, v in sorted(d.items())) or "-"


COMMANDS = {
    "weyl": _run_weyl,
    "cohomology": _run_cohomology,
    "spectral": _run_spectral,
    "bk-verify": _run_bk_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hsc",
        description="Exact relative Lie algebra cohomology and spectral sequences.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="INI config file with an [instance] section")
        p.add_argument("--preset", help="root system label: A1..A4, B2, G2")
        p.add_argument("--cartan", help="custom cartan matrix, rows ';'-separated")
        p.add_argument("--levi", help="comma list of Levi simple-root indices (1-based)")
        p.add_argument("--t-support", dest="t_support",
                       help="comma list of support indices in 1..m")
        p.add_argument("--custom", help="structure-constant algebra file")
        p.add_argument("--k", help="subalgebra span: labels/indices/vectors, ';'-separated")
        p.add_argument("--ideal", help="ideal span, same syntax as --k")
        p.add_argument("--module", help="trivial | trivial:N | adjoint")
        p.add_argument("--out", help="write the machine report to this path")
        p.add_argument("--jobs", type=int, default=None,
                       help="worker budget (computations are exact and run serially)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed echoed into the report for reproducibility")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    jobs = args.jobs
    if jobs is None:
        env = os.environ.get("HSC_JOBS")
        jobs = int(env) if env else 1
    if jobs < 1:
        print("error (cli): --jobs must be >= 1", file=sys.stderr)
        return 2
    t0 = time.monotonic()
    try:
        cfg = InstanceConfig.from_args(args)
        rep, ok = COMMANDS[args.command](cfg)
    except (InputError, RootSystemError) as exc:
        print(f"error (input): {exc}", file=sys.stderr)
        return 2
    except LinAlgError as exc:
        print(f"error (computation): {exc}", file=sys.stderr)
        return 1
    text = emit(rep)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    elapsed = time.monotonic() - t0
    print(f"# wall-time: {elapsed:.2f}s (not part of the machine report)",
          file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
