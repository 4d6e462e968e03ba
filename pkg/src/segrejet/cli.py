"""Command line front end: ``segrejet COMMAND SOURCE [TARGET] [options]``.

Manifolds and maps are given as text (see :mod:`segrejet.parser`); an
argument ``@path`` reads the text from a file and ``-`` from standard input.
Exit status: 0 when the verdict passes, 1 on a mathematical failure, 2 on
usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .coeff import Coeff
from .errors import DomainError, ParseError, SegreJetError, TruncationExhausted
from .manifold import (
    finite_type_hypersurface,
    finite_type_lie,
    graph_reality_residual,
    normality_residual,
)
from .normal import involution_residual, normalize, segre_constancy_residual
from .parser import format_series, parse_constants, parse_manifold, parse_map
from .reconstruction import (
    HoloMapGerm,
    ball_model_G,
    equivalence_criterion,
    extension_exists,
    independence_residual,
    jet_determination,
    map_residual,
    map_witness,
    prepare_frame,
    reconstruct_full_map,
)
from .segre import (
    frame_identity_residual,
    iterated_segre,
    rank_check,
    restriction_residual,
    select_sigma_prime,
    build_U,
    theta_roundtrip_residual,
    theta_vanishing_residual,
)
from .series import MultiSeries, SeriesVec

SCHEMA = 1
COMMANDS = (
    "normalize",
    "segre-chain",
    "finite-type",
    "frame",
    "verify-map",
    "reconstruct",
    "criterion",
    "equivalence",
    "jet-determine",
    "ball-model",
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# report helpers


def _coeff_json(c: Coeff) -> list[str]:
    return list(Coeff.of(c).as_strings())


def series_payload(s: MultiSeries, names: Sequence[str]) -> dict:
    return {
        "names": list(names),
        "trunc": s.trunc,
        "text": format_series(s, names),
        "terms": [[list(k), _coeff_json(c)] for k, c in s.sorted_terms()],
    }


def vec_payload(v, names: Sequence[str]) -> list[dict]:
    return [series_payload(c, names) for c in v]


def _witness(w) -> Optional[dict]:
    if w is None:
        return None
    c, k, v = w
    return {"component": c, "exponent": list(k), "coefficient": _coeff_json(v)}


def _pf(ok: bool) -> str:
    return "pass" if ok else "fail"


def _znames(n: int, d: int) -> tuple[list[str], list[str]]:
    if n == 1 and d == 1:
        return ["z"], ["w"]
    return [f"z{j + 1}" for j in range(n)], [f"w{k + 1}" for k in range(d)]


def _qnames(n: int, d: int) -> list[str]:
    zs, ws = _znames(n, d)
    return zs + [f"conj({z})" for z in zs] + [f"conj({w})" for w in ws]


class Report:
    def __init__(self, command: str, args):
        self.data = {
            "schema": SCHEMA,
            "command": command,
            "config": {"order": args.order, "seed": args.seed, "base": args.base},
            "verdict": None,
            "checks": {},
            "values": {},
            "series": {},
        }

    def check(self, name: str, ok: bool) -> bool:
        self.data["checks"][name] = _pf(ok)
        return ok

    def value(self, name: str, v) -> None:
        self.data["values"][name] = v

    def series(self, name: str, payload) -> None:
        self.data["series"][name] = payload

    def verdict(self, v: str) -> None:
        self.data["verdict"] = v

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.data, sort_keys=True, indent=2)
        d = self.data
        lines = [f"command: {d['command']}", f"verdict: {d['verdict']}"]
        for k in sorted(d["checks"]):
            lines.append(f"check {k}: {d['checks'][k]}")
        for k in sorted(d["values"]):
            lines.append(f"{k}: {json.dumps(d['values'][k], sort_keys=True)}")
        for k in sorted(d["series"]):
            p = d["series"][k]
            if isinstance(p, dict):
                lines.append(f"{k} = {p['text']}")
            else:
                for i, c in enumerate(p):
                    lines.append(f"{k}[{i + 1}] = {c['text']}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# input


def _read(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    return arg


def _manifold(text: Optional[str], args, order: Optional[int] = None, target: bool = False):
    if text is None:
        raise UsageError("a manifold argument is required")
    n = args.target_dim if target and args.target_dim is not None else args.dim
    d = args.codim
    try:
        return parse_manifold(_read(text), order or args.order, n=n, d=d)
    except DomainError as e:
        raise UsageError(f"manifold rejected: {e}") from None


def _map(text: Optional[str], n: int, d: int, order: int, what: str) -> SeriesVec:
    if text is None:
        raise UsageError(f"--{what} is required")
    return parse_map(_read(text), n, d, order)


def _base(args):
    return None if args.base is None else parse_constants(args.base)


# ---------------------------------------------------------------------------
# commands


def cmd_normalize(args, rep: Report) -> bool:
    M = _manifold(args.source, args)
    zt = None
    if args.ztilde is not None:
        zt = _map(args.ztilde, M.n, M.d, args.order, "ztilde")
    r = normalize(M, zt)
    nr = normality_residual(r.Qnormal)
    d = M.d
    ok = rep.check("normal_z", SeriesVec(nr[:d]).is_zero())
    ok &= rep.check("normal_chi", SeriesVec(nr[d:]).is_zero())
    ok &= rep.check("reality", graph_reality_residual(r.Qnormal).is_zero())
    ok &= rep.check("involution", involution_residual(r.iota).is_zero())
    ok &= rep.check("segre_constancy", segre_constancy_residual(M, r).is_zero())
    zs, ws = _znames(M.n, M.d)
    rep.series("Q", vec_payload(r.Qnormal.Q, _qnames(M.n, M.d)))
    rep.series("wtilde", vec_payload(r.wtilde, zs + ws))
    rep.series("iota", vec_payload(r.iota, [f"s{k + 1}" for k in range(d)]))
    rep.series("beta", vec_payload(r.beta, [f"s{k + 1}" for k in range(d)]))
    rep.verdict(_pf(ok))
    return ok


def _tnames(n: int, count: int) -> list[str]:
    if n == 1:
        return [f"t{j}" for j in range(1, count + 1)]
    return [f"t{j}_{i}" for j in range(1, count + 1) for i in range(1, n + 1)]


def cmd_segre_chain(args, rep: Report) -> bool:
    M = _manifold(args.source, args)
    chain = iterated_segre(M, args.count)
    names = _tnames(chain.n, chain.count)
    for j, u in enumerate(chain.u, start=1):
        rep.series(f"u{j}", vec_payload(u, names))
    ok = True
    for j in range(1, chain.count):
        ok &= rep.check(f"restriction_{j}", restriction_residual(chain, j).is_zero())
    if chain.count >= 2 * chain.m:
        rc = rank_check(chain, seed=args.seed)
        rep.value("rank", {"found": rc.rank, "expected": rc.expected})
        ok &= rep.check("generic_rank", rc.full)
    rep.verdict(_pf(ok))
    return ok


def cmd_finite_type(args, rep: Report) -> bool:
    M = _manifold(args.source, args)
    G = M.graph
    if not G.normal:
        G = normalize(M).Qnormal
    lie = finite_type_lie(G, args.lie_maxlen)
    rep.value("lie", {"verdict": lie.verdict, "order": lie.order, "brackets": lie.witness})
    verdicts = [lie.finite]
    if G.d == 1:
        hs = finite_type_hypersurface(G)
        rep.value("hypersurface", {"verdict": hs.verdict, "order": hs.order})
        verdicts.append(hs.finite)
    try:
        U, lay = build_U(iterated_segre(G))
        sp, _, delta = select_sigma_prime(U, lay)
        rep.value("delta", {"verdict": "nonzero", "order": delta.order(), "sigma_prime": list(sp)})
    except SegreJetError as e:
        rep.value("delta", {"verdict": "vanishes-to-order-K", "message": str(e)})
    ok = all(verdicts)
    rep.verdict("yes" if ok else "no-up-to-order-K")
    return ok


def _frame_names(mf) -> list[str]:
    f = mf.frame
    zs, ws = _znames(f.chain.n, f.chain.d)
    return zs + ws + [f"deta{j + 1}" for j in range(f.layout.n_eta)] + [f"s{j + 1}" for j in range(f.layout.n_sigma2)]


def cmd_frame(args, rep: Report) -> bool:
    M = _manifold(args.source, args)
    Mt = _manifold(args.target, args, target=True) if args.target else M
    mf = prepare_frame(M, Mt, base=_base(args), seed=args.seed)
    f = mf.frame
    lay = f.U_layout
    n = lay.n
    unames = ([f"eta{j}" for j in range(1, lay.m + 1)] if n == 1 else
              [f"eta{j}_{i}" for j in range(1, lay.m + 1) for i in range(1, n + 1)])
    unames += _znames(n, lay.d)[0]
    unames += ([f"sigma{j}" for j in range(1, lay.m)] if n == 1 else
               [f"sigma{j}_{i}" for j in range(1, lay.m) for i in range(1, n + 1)])
    rep.series("U", vec_payload(f.U, unames))
    rep.series("Delta", series_payload(f.Delta, unames[:len(lay.eta_vars)]))
    rep.series("Theta", vec_payload(f.Theta, _frame_names(mf)))
    rep.value("sigma_prime", list(f.sigma_prime))
    rep.value("sigma_dprime", list(f.sigma_dprime))
    rep.value("base", [_coeff_json(b) for b in f.base])
    ok = rep.check("theta_roundtrip", theta_roundtrip_residual(f).is_zero())
    ok &= rep.check("frame_identity", frame_identity_residual(f).is_zero())
    ok &= rep.check("theta_vanishing", theta_vanishing_residual(f).is_zero())
    rep.verdict(_pf(ok))
    return ok


def _src_tgt(args):
    M = _manifold(args.source, args)
    if args.target is None:
        raise UsageError("a target manifold is required")
    Mt = _manifold(args.target, args, target=True)
    return M, Mt


def cmd_verify_map(args, rep: Report) -> bool:
    M, Mt = _src_tgt(args)
    F = _map(args.F, M.n, M.d, args.order, "F")
    G = _map(args.G, M.n, M.d, args.order, "G")
    H = HoloMapGerm(F, G)
    ok = map_residual(M, Mt, H).is_zero()
    rep.value("witness", _witness(map_witness(M, Mt, H)))
    rep.verdict(_pf(ok))
    return ok


def _criterion(args, rep: Report, full: bool) -> bool:
    M, Mt = _src_tgt(args)
    F = _map(args.F, M.n, M.d, args.order, "F")
    mf = prepare_frame(M, Mt, base=_base(args), seed=args.seed)
    Fn = F
    if mf.source_chart is not None:
        Fn = Fn.compose(list(mf.source_chart.chart_inverse.truncate(F.trunc)))
    if mf.target_chart is not None:
        Fn = mf.target_chart.alpha.compose(list(Fn))
    crit = independence_residual(mf.frame, Fn)
    ok = rep.check("independence", crit.passed)
    rep.value("witness", _witness(crit.witness))
    rep.value("base", [_coeff_json(b) for b in mf.frame.base])
    zs, ws = _znames(M.n, M.d)
    if crit.passed or full:
        H = reconstruct_full_map(mf, F, check=False)
        rep.series("G", vec_payload(H.G, zs + ws))
        if full:
            ok &= rep.check("verify_map", map_residual(M, Mt, H).is_zero())
    if args.oracle:
        ext = extension_exists(M, Mt, F)
        rep.check("oracle_extension_exists", ext)
        rep.value("oracle_agrees", ext == crit.passed)
    rep.verdict(_pf(ok))
    return ok


def cmd_reconstruct(args, rep: Report) -> bool:
    return _criterion(args, rep, full=True)


def cmd_criterion(args, rep: Report) -> bool:
    return _criterion(args, rep, full=False)


def cmd_equivalence(args, rep: Report) -> bool:
    M, Mt = _src_tgt(args)
    F = _map(args.F, M.n, M.d, args.order, "F")
    try:
        er = equivalence_criterion(M, Mt, F, base=_base(args), seed=args.seed)
    except SegreJetError as e:
        rep.value("reason", type(e).__name__)
        rep.value("message", str(e))
        rep.verdict("not-established")
        return False
    zs, ws = _znames(M.n, M.d)
    rep.series("F", vec_payload(er.H.F, zs + ws))
    rep.series("G", vec_payload(er.H.G, zs + ws))
    rep.verdict("equivalent")
    return True


def cmd_jet_determine(args, rep: Report) -> bool:
    order = args.order
    direction = _base(args) if args.direction is None else parse_constants(args.direction)
    for _ in range(8):
        M = _manifold(args.source, args, order=order)
        Mt = _manifold(args.target, args, order=order, target=True) if args.target else M
        F = _map(args.F, M.n, M.d, order, "F")
        try:
            jr = jet_determination(M, Mt, F, args.k0, direction=direction, seed=args.seed)
            break
        except TruncationExhausted as e:
            need = getattr(e, "required", None)
            if need is None or need <= order:
                raise
            order = need
    else:
        raise TruncationExhausted("could not reach the required jet order")
    zs, ws = _znames(M.n, M.d)
    rep.value("l", jr.l)
    rep.value("k", jr.k)
    rep.value("k0", jr.k0)
    rep.value("e", jr.e)
    rep.value("direction", [_coeff_json(c) for c in jr.D])
    rep.value("working_order", order)
    rep.series("Gjet", vec_payload(jr.Gjet, zs + ws))
    ok = rep.check("lambda_consistent", jr.lambda_consistent)
    rep.verdict(_pf(ok))
    return ok


def cmd_ball_model(args, rep: Report) -> bool:
    n = args.dim or 1
    nt = args.target_dim or n
    F = _map(args.F, n, 1, args.order, "F")
    if len(F) != nt:
        raise UsageError(f"F needs {nt} components")
    G, crit = ball_model_G(F, n, nt, base=_base(args), seed=args.seed)
    zs, ws = _znames(n, 1)
    rep.series("G", vec_payload(G, zs + ws))
    rep.value("witness", _witness(crit.witness))
    ok = rep.check("parameter_independence", crit.passed)
    rep.verdict(_pf(ok))
    return ok


HANDLERS = {
    "normalize": cmd_normalize,
    "segre-chain": cmd_segre_chain,
    "finite-type": cmd_finite_type,
    "frame": cmd_frame,
    "verify-map": cmd_verify_map,
    "reconstruct": cmd_reconstruct,
    "criterion": cmd_criterion,
    "equivalence": cmd_equivalence,
    "jet-determine": cmd_jet_determine,
    "ball-model": cmd_ball_model,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=6, help="truncation order K (default 6)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled base points and directions")
    common.add_argument("--base", default=None, help="comma separated base point, e.g. '0,1'")
    common.add_argument("--codim", type=int, default=None, help="codimension d of the manifolds")
    common.add_argument("--dim", type=int, default=None, help="CR dimension n of the source")
    common.add_argument("--target-dim", type=int, default=None, help="CR dimension of the target")
    common.add_argument("--lie-maxlen", type=int, default=None, help="longest bracket for the Lie test")
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    p = argparse.ArgumentParser(prog="segrejet", description="Jet computations for maps of generic submanifolds.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name != "ball-model":
            sp.add_argument("source", help="source manifold text, @file or -")
        if name in ("frame", "verify-map", "reconstruct", "criterion", "equivalence", "jet-determine"):
            sp.add_argument("target", nargs="?", default=None, help="target manifold")
        if name in ("verify-map", "reconstruct", "criterion", "equivalence", "jet-determine", "ball-model"):
            sp.add_argument("--F", dest="F", default=None, help="components of F separated by ';'")
        if name == "verify-map":
            sp.add_argument("--G", dest="G", default=None, help="components of G separated by ';'")
        if name == "normalize":
            sp.add_argument("--ztilde", default=None, help="submersion components in z, w")
        if name == "segre-chain":
            sp.add_argument("--count", type=int, default=None, help="number of Segre maps (default 2(d+1))")
        if name in ("reconstruct", "criterion"):
            sp.add_argument("--oracle", action="store_true", help="also run the coefficient-matching oracle")
        if name == "jet-determine":
            sp.add_argument("--k0", type=int, default=1, help="order of the G jet to determine")
            sp.add_argument("--direction", default=None, help="direction of the line D(lambda)")
    return p


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    rep = Report(args.command, args)
    try:
        ok = HANDLERS[args.command](args, rep)
        code = 0 if ok else 1
    except (ParseError, UsageError, OSError) as e:
        print(f"segrejet: error: {e}", file=sys.stderr)
        return 2
    except SegreJetError as e:
        rep.verdict("error")
        rep.value("error", {"type": type(e).__name__, "message": str(e)})
        code = 1
    print(rep.render(args.json), file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
