"""Command-line front end: `wittlab <verb> ...`.

Verbs: witt, forms, kmilnor, bloch, oracle, cartier, selftest.  Output is
text or JSON (schema 1); identical configuration and inputs produce
byte-identical output.  Exit codes: 0 success, 1 domain error, 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

from .errors import WittlabError
from .fields import QQ, Ring
from .forms import DifferentialForm, RelativeFormClass, d as form_d, \
    drw_decompose, is_relative, reduce_mod_exact
from .milnor import (
    SymbolSum,
    dlog_k,
    expand_multilinear,
    improved_to_sum,
    ks_improved,
    rewrite_basic,
)
from .parser import (
    parse_element,
    parse_form,
    parse_ring,
    parse_symbol,
    parse_witt,
    print_symbol,
)
from .truncated import TruncatedPolyRing
from .witt import (
    formal_exp,
    formal_log,
    frobenius,
    from_series,
    ghost,
    restriction,
    series,
    teichmuller,
    to_series,
    verschiebung,
    witt_mul,
)

SCHEMA = 1


@dataclass
class RunConfig:
    seed: int = 20240
    generator_cap: int = 20000
    degree_bound: int = 8
    padding_budget: int = 10000
    fmt: str = "text"

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        seed = args.seed
        env_seed = os.environ.get("WITTLAB_SEED")
        if env_seed is not None:
            seed = int(env_seed)
        return cls(seed=seed, generator_cap=args.generator_cap,
                   degree_bound=args.degree_bound,
                   padding_budget=args.padding_budget, fmt=args.format)


def _emit(cfg: RunConfig, payload: dict, text_lines: List[str]) -> str:
    if cfg.fmt == "json":
        payload = {"schema": SCHEMA, **payload}
        return json.dumps(payload, sort_keys=True)
    return "\n".join(text_lines)


def _ring_from_flag(args) -> Optional[Ring]:
    if getattr(args, "ring", None):
        return parse_ring(args.ring)
    return None


# ---------------------------------------------------------------------------
# verb handlers
# ---------------------------------------------------------------------------

def cmd_witt(args, cfg: RunConfig) -> str:
    op = args.op
    if op in ("add", "mul"):
        ring = _ring_from_flag(args)
        m = args.m
        if m is None or ring is None:
            raise WittlabError("witt add/mul needs --m and --ring")
        trunc = TruncatedPolyRing(ring, m)
        u1 = parse_element(args.args[0], trunc)
        u2 = parse_element(args.args[1], trunc)
        w1 = from_series(series(ring, m, list(u1.data)), ring)
        w2 = from_series(series(ring, m, list(u2.data)), ring)
        w = w1 + w2 if op == "add" else witt_mul(w1, w2)
        s = to_series(w)
        return _emit(cfg, {"op": op, "coords": [repr(c) for c in
                                                w.coord_list()],
                           "series": repr(s)},
                     [f"{w!r}", f"series: {s!r}"])
    if op == "teich":
        ring = _ring_from_flag(args) or QQ
        m = args.m or 4
        c = parse_element(args.args[0], ring)
        w = teichmuller(c, m)
        return _emit(cfg, {"op": op, "coords": [repr(x) for x in
                                                w.coord_list()]},
                     [repr(w)])
    if op == "ghost":
        w = parse_witt(args.args[0], _ring_from_flag(args))
        g = ghost(w)
        return _emit(cfg, {"op": op, "ghost": [repr(v) for v in g.values]},
                     [repr(g)])
    if op in ("frobenius", "verschiebung"):
        r = int(args.args[0])
        w = parse_witt(args.args[1], _ring_from_flag(args))
        out = frobenius(r, w) if op == "frobenius" else verschiebung(r, w)
        return _emit(cfg, {"op": op, "coords": [repr(c) for c in
                                                out.coord_list()]},
                     [repr(out)])
    if op == "restrict":
        m = int(args.args[0])
        w = parse_witt(args.args[1], _ring_from_flag(args))
        out = restriction(w, m)
        return _emit(cfg, {"op": op, "coords": [repr(c) for c in
                                                out.coord_list()]},
                     [repr(out)])
    if op in ("log", "exp"):
        ring = _ring_from_flag(args) or QQ
        m = args.m
        if m is None:
            raise WittlabError("witt log/exp needs --m")
        trunc = TruncatedPolyRing(ring, m)
        u = parse_element(args.args[0], trunc)
        s_in = series(ring, m, list(u.data))
        out = formal_log(s_in) if op == "log" else formal_exp(s_in)
        return _emit(cfg, {"op": op, "series": repr(out)}, [repr(out)])
    if op in ("from-series", "to-series"):
        ring = _ring_from_flag(args)
        m = args.m
        if op == "from-series":
            if ring is None or m is None:
                raise WittlabError("from-series needs --ring and --m")
            trunc = TruncatedPolyRing(ring, m)
            u = parse_element(args.args[0], trunc)
            w = from_series(series(ring, m, list(u.data)), ring)
            return _emit(cfg, {"op": op, "coords": [repr(c) for c in
                                                    w.coord_list()]},
                         [repr(w)])
        w = parse_witt(args.args[0], ring)
        s = to_series(w)
        return _emit(cfg, {"op": op, "series": repr(s)}, [repr(s)])
    raise WittlabError(f"unknown witt op {op!r}")


def cmd_forms(args, cfg: RunConfig) -> str:
    ring = _ring_from_flag(args)
    if ring is None:
        raise WittlabError("forms needs --ring")
    form = parse_form(args.args[0], ring)
    op = args.op
    if op == "d":
        out = form_d(form)
    elif op == "wedge":
        other = parse_form(args.args[1], ring)
        out = form.wedge(other)
    elif op == "dlog":
        from .forms import dlog as form_dlog
        el = parse_element(args.args[0], ring)
        out = form_dlog(el)
    elif op == "reduce":
        rel = RelativeFormClass(form)
        out = reduce_mod_exact(rel).form
    elif op == "decompose":
        rel = RelativeFormClass(form)
        drw = drw_decompose(reduce_mod_exact(rel))
        lines = [f"t^{i}: {drw.slot(i)!r}" for i in range(1, drw.m + 1)]
        return _emit(cfg, {"op": op,
                           "slots": [repr(drw.slot(i))
                                     for i in range(1, drw.m + 1)]},
                     lines)
    else:
        raise WittlabError(f"unknown forms op {op!r}")
    return _emit(cfg, {"op": op, "form": repr(out)}, [repr(out)])


def cmd_kmilnor(args, cfg: RunConfig) -> str:
    op = args.op
    s = parse_symbol(args.args[0])
    if op == "rewrite":
        out = rewrite_basic(s, steinberg_only=args.steinberg_only)
        return _emit(cfg, {"op": op, "symbol": repr(out)},
                     [print_symbol(out) if not out.is_zero() else "0"])
    if op == "ks-improved":
        terms = ks_improved(s)
        lines = []
        data = []
        for t in terms:
            reps = [r.render("t") for r in t.reps]
            lines.append(f"{t.coeff} * {{"
                         + ", ".join(repr(e) for e in t.entries)
                         + "}  reps: " + "; ".join(reps))
            data.append({"coeff": t.coeff,
                         "entries": [repr(e) for e in t.entries],
                         "reps": reps})
        return _emit(cfg, {"op": op, "terms": data}, lines)
    if op == "dlog":
        out = dlog_k(s)
        return _emit(cfg, {"op": op, "form": repr(out)}, [repr(out)])
    raise WittlabError(f"unknown kmilnor op {op!r}")


def cmd_bloch(args, cfg: RunConfig) -> str:
    op = args.op
    if op == "phi":
        from .bloch import ClosedPointCycle, phi_rational
        ring = _ring_from_flag(args) or QQ
        m = args.m
        if m is None:
            raise WittlabError("bloch phi needs --m")
        coords = [parse_element(t.strip(), ring) for t in
                  args.args[0].split(",")]
        pt = ClosedPointCycle(ring, ring, tuple(coords))
        out = phi_rational(pt, m)
        return _emit(cfg, {"op": op, "symbol": repr(out)},
                     [print_symbol(out)])
    s = parse_symbol(args.args[0])
    if op == "dec":
        from .bloch import dec
        out = dec(s)
        return _emit(cfg, {"op": op, "class": repr(out)}, [repr(out)])
    if op == "rho":
        from .bloch import rho
        out = rho(s)
        return _emit(cfg, {"op": op, "class": repr(out)}, [repr(out)])
    if op == "log":
        from .bloch import log_n
        out = log_n(s)
        lines = [f"t^{i}: {out.slot(i)!r}" for i in range(1, out.m + 1)]
        return _emit(cfg, {"op": op,
                           "slots": [repr(out.slot(i))
                                     for i in range(1, out.m + 1)]}, lines)
    if op == "lift":
        from .bloch import lift_symbol_to_cycle
        res = lift_symbol_to_cycle(s, budget=cfg.padding_budget)
        lines = [repr(res.cycle), f"phi: {print_symbol(res.phi_value)}"]
        return _emit(cfg, {"op": op, "cycle": repr(res.cycle),
                           "single_a1": res.cycle.single_a1,
                           "phi": repr(res.phi_value)}, lines)
    raise WittlabError(f"unknown bloch op {op!r}")


def cmd_oracle(args, cfg: RunConfig) -> str:
    from .oracle import present, relative_subgroup
    ring = parse_ring(args.ring)
    pres = present(ring, args.n, cap=cfg.generator_cap)
    payload = {
        "ring": ring.describe(),
        "n": args.n,
        "invariant_factors": pres.invariant_factors(),
        "generators": pres.tuple_count,
        "relations": pres.n_multilinearity_rows + pres.steinberg_rows,
    }
    lines = [f"K^M_{args.n}({ring.describe()})",
             f"invariant factors: {pres.invariant_factors() or 'trivial'}",
             f"generators: {pres.tuple_count}",
             f"relations: {payload['relations']}"]
    if args.relative:
        rel = relative_subgroup(pres)
        payload["relative_invariant_factors"] = list(rel.kernel_invariants)
        payload["relative_order"] = rel.kernel_order
        lines.append(
            f"relative invariant factors: "
            f"{list(rel.kernel_invariants) or 'trivial'}")
    return _emit(cfg, payload, lines)


def cmd_cartier(args, cfg: RunConfig) -> str:
    from .cartier import (
        bs_member,
        cartier_C,
        inverse_cartier,
        one_form,
        p_polynomial,
        theta,
    )
    op = args.op
    if op == "P":
        p = int(args.args[0])
        coeffs = p_polynomial(p)
        text = " + ".join(
            (f"{c}*" if c != 1 else "") + f"X^{e1}*Y^{e2}"
            for e1, e2, c in coeffs)
        return _emit(cfg, {"op": op, "terms": coeffs}, [text])
    ring = _ring_from_flag(args)
    if ring is None:
        raise WittlabError("cartier needs --ring")
    if op == "C":
        form = parse_form(args.args[0], ring)
        out = cartier_C(form)
        return _emit(cfg, {"op": op, "form": repr(out)}, [repr(out)])
    if op == "Cinv":
        r = parse_element(args.args[0], ring)
        out = inverse_cartier(r)
        return _emit(cfg, {"op": op, "form": repr(out.rep), "level": 1},
                     [f"{out.rep!r}  (mod B_1)"])
    if op == "bs":
        s = int(args.args[0])
        form = parse_form(args.args[1], ring)
        member = bs_member(form, s)
        return _emit(cfg, {"op": op, "s": s, "member": member},
                     [f"B_{s} member: {member}"])
    if op == "theta":
        m = int(args.args[0])
        alpha = parse_element(args.args[1], ring)
        cls = theta(alpha, m)
        return _emit(cfg, {"op": op, "omega": repr(cls.omega),
                           "beta": repr(cls.beta),
                           "m_prime": cls.m_prime, "s": cls.s},
                     [f"omega: {cls.omega!r}", f"beta: {cls.beta!r}",
                      f"m' = {cls.m_prime}, s = {cls.s}"])
    raise WittlabError(f"unknown cartier op {op!r}")


def cmd_selftest(args, cfg: RunConfig) -> str:
    from .selftests import ALL_SUITES
    names = [args.suite] if args.suite else list(ALL_SUITES)
    lines = []
    results = []
    failed = False
    for name in names:
        if name not in ALL_SUITES:
            raise WittlabError(f"unknown suite {name!r}")
        kwargs = {}
        fn = ALL_SUITES[name]
        if args.m is not None and name == "ghost":
            kwargs["m"] = args.m
        if "seed" in fn.__code__.co_varnames:
            kwargs.setdefault("seed", cfg.seed)
        result = fn(**kwargs)
        results.append(result)
        status = "PASS" if result["passed"] else "FAIL"
        failed = failed or not result["passed"]
        lines.append(f"{status} suite={name} checks={result['checks']} "
                     f"seconds={result['seconds']} ({result['detail']})")
    out = _emit(cfg, {"results": results}, lines)
    if failed:
        raise WittlabError("selftest failed")
    return out


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="wittlab",
        description="Exact Witt-vector / Milnor-K / de Rham-Witt calculator")
    top.add_argument("--seed", type=int, default=20240)
    top.add_argument("--generator-cap", type=int, default=20000)
    top.add_argument("--degree-bound", type=int, default=8)
    top.add_argument("--padding-budget", type=int, default=10000)
    top.add_argument("--format", choices=("text", "json"), default="text")
    sub = top.add_subparsers(dest="verb", required=True)

    witt = sub.add_parser("witt", help="Witt vector operations")
    witt.add_argument("op", choices=("add", "mul", "teich", "ghost",
                                     "frobenius", "verschiebung", "restrict",
                                     "log", "exp", "from-series",
                                     "to-series"))
    witt.add_argument("args", nargs="*")
    witt.add_argument("--ring")
    witt.add_argument("--m", type=int)

    forms = sub.add_parser("forms", help="differential form operations")
    forms.add_argument("op", choices=("d", "wedge", "dlog", "reduce",
                                      "decompose"))
    forms.add_argument("args", nargs="*")
    forms.add_argument("--ring")

    km = sub.add_parser("kmilnor", help="Milnor symbol operations")
    km.add_argument("op", choices=("rewrite", "ks-improved", "dlog"))
    km.add_argument("args", nargs="*")
    km.add_argument("--steinberg-only", action="store_true")

    bloch = sub.add_parser("bloch", help="inverse Bloch machinery")
    bloch.add_argument("op", choices=("phi", "lift", "dec", "rho", "log"))
    bloch.add_argument("args", nargs="*")
    bloch.add_argument("--ring")
    bloch.add_argument("--m", type=int)

    oracle = sub.add_parser("oracle", help="brute-force K-group oracle")
    oracle_sub = oracle.add_subparsers(dest="oracle_op", required=True)
    km_oracle = oracle_sub.add_parser("kmilnor")
    km_oracle.add_argument("--ring", required=True)
    km_oracle.add_argument("--n", type=int, required=True)
    km_oracle.add_argument("--relative", action="store_true")

    cartier = sub.add_parser("cartier", help="inverse Cartier calculus")
    cartier.add_argument("op", choices=("C", "Cinv", "bs", "theta", "P"))
    cartier.add_argument("args", nargs="*")
    cartier.add_argument("--ring")

    selftest = sub.add_parser("selftest", help="run acceptance suites")
    selftest.add_argument("--suite")
    selftest.add_argument("--m", type=int)

    return top


def dispatch(argv: List[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig.from_args(args)
    handlers = {
        "witt": cmd_witt,
        "forms": cmd_forms,
        "kmilnor": cmd_kmilnor,
        "bloch": cmd_bloch,
        "oracle": cmd_oracle,
        "cartier": cmd_cartier,
        "selftest": cmd_selftest,
    }
    try:
        output = handlers[args.verb](args, cfg)
    except WittlabError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    print(output)
    return 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
