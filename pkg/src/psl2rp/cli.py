"""Command-line front end: ``psl2rp <command> [args] [options]``.

Exit codes: 0 all checks agree with the predictions, 1 disagreement or a
failed replay, 2 usage error, 3 unresolved within budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import __version__
from .certificate import (SCHEMA_VERSION, ConstructionError, applicable_variants, certificate_to_json,
                          construct_failure_certificate, diagram_dot, replay_certificate, variant_obstruction)
from .fpgroup import GroupError, build_group, check_prime, is_prime
from .genseq import compute_m
from .oracle import oracle_check_rp
from .rp import EXCEPTIONAL, RPReport, check_rp, predict_rp, predict_witness_orders
from .subgroups import dickson_tags, frattini, maximal_subgroups

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE, EXIT_UNRESOLVED = 0, 1, 2, 3
CEILINGS = {"verify": 41, "oracle": 13, "certify": 41}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    mode: str = "predict"
    fmt: str = "json"
    threads: int = 1
    budget: int | None = None
    cache_dir: str | None = None
    seed: int = 0
    beyond_ceiling: bool = False
    compute_m: bool = False


def parse_primes(text: str) -> list[int]:
    """``7..43``, ``17`` or ``7,11,13``; ranges keep only the primes."""
    out: set[int] = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = (int(x) for x in part.split("..", 1))
                out.update(q for q in range(max(lo, 7), hi + 1) if is_prime(q))
            else:
                out.add(check_prime(int(part)))
    except GroupError as e:
        raise UsageError(str(e)) from None
    except ValueError:
        raise UsageError(f"cannot parse prime list {text!r}") from None
    if not out:
        raise UsageError(f"{text!r} contains no prime p > 5")
    return sorted(out)


def _ceiling(cfg: RunConfig, mode: str, p: int) -> None:
    limit = CEILINGS.get(mode)
    if limit is not None and p > limit and not cfg.beyond_ceiling:
        raise UsageError(f"p={p} is above the {mode} ceiling {limit}; pass --beyond-ceiling to run anyway")


def _group(cfg: RunConfig, p: int):
    return build_group(p, cache_dir=cfg.cache_dir)


def _maximals(cfg: RunConfig, G):
    return maximal_subgroups(G, seed=cfg.seed)


def _mat(G, g: int) -> list[list[int]]:
    a, b, c, d = G.matrix(g)
    return [[a, b], [c, d]]


def report_json(G, mx, r: RPReport) -> dict:
    witnesses = []
    for w in r.witnesses:
        c = w.certificate
        entry = {"order": w.order, "class_size": w.class_size, "representative": _mat(G, w.element),
                 "sequence": [_mat(G, g) for g in c.sequence]}
        if c.members:
            entry["tuple_tags"] = [mx[k].tag.label(G.p) for k in c.members]
        witnesses.append(entry)
    return {
        "p": r.p, "method": r.method, "m": r.m, "m_source": r.m_source, "status": r.status,
        "verdict": r.verdict, "predicted": "holds" if r.prediction else "fails", "agreement": r.agreement,
        "witness_count": r.witness_count, "witness_orders": sorted(r.witness_orders),
        "predicted_witness_orders": sorted(predict_witness_orders(r.p)),
        "witnesses": witnesses, "tuples_examined": r.tuples_examined,
        "tuples_nontrivial_radical": r.tuples_nontrivial, "tuples_realizable": r.tuples_realizable,
        "realizable_member_tags": dict(sorted(r.realizable_tags.items())),
    }


def _rp_report(cfg: RunConfig, p: int, mode: str) -> dict:
    G = _group(cfg, p)
    if mode == "oracle":
        r = oracle_check_rp(G, budget=cfg.budget, max_order=G.order)
        return report_json(G, None, r)
    mx = _maximals(cfg, G)
    m = None
    if cfg.compute_m:
        m = compute_m(mx).m
    r = check_rp(mx, m=m, budget=cfg.budget)
    if cfg.compute_m:
        r.m_source = "computed"
    return report_json(G, mx, r)


def _table_row(cfg: RunConfig, p: int) -> dict:
    row = {"p": p, "p_mod_8": p % 8, "p_mod_10": p % 10,
           "predicted": "holds" if predict_rp(p) else "fails", "verified": "—", "agreement": None}
    if cfg.mode in ("verify", "oracle"):
        rep = _rp_report(cfg, p, cfg.mode)
        row.update(verified=rep["verdict"], agreement=rep["agreement"], m=rep["m"], method=rep["method"])
    return row


def _run_many(cfg: RunConfig, fn, primes: list[int]) -> list:
    """Per-prime jobs, concurrently when threads > 1; results in ascending p."""
    if cfg.threads > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            return list(pool.map(fn, [cfg] * len(primes), primes))
    return [fn(cfg, p) for p in primes]


def _status(rows) -> int:
    if any(r.get("verified") == "unresolved" or r.get("status") == "unresolved" for r in rows):
        return EXIT_UNRESOLVED
    if any(r.get("agreement") is False for r in rows):
        return EXIT_DISAGREE
    return EXIT_OK


# -- commands ---------------------------------------------------------------

def cmd_table(cfg: RunConfig, primes: list[int]):
    if cfg.mode not in ("predict", "verify", "oracle"):
        raise UsageError("table supports --mode predict, verify or oracle")
    for p in primes:
        _ceiling(cfg, cfg.mode, p)
    rows = _run_many(cfg, _table_row, primes)
    return {"command": "table", "mode": cfg.mode, "rows": rows}, _status(rows)


def _maximals_doc(cfg: RunConfig, p: int) -> dict:
    G = _group(cfg, p)
    mx = _maximals(cfg, G)
    doc = mx.to_json()
    expected = sorted(t.label(p) for t in dickson_tags(p))
    present = sorted({M.tag.label(p) for M in mx})
    doc.update(p_mod_8=p % 8, p_mod_10=p % 10, expected_tags=expected,
               frattini_size=frattini(mx).size, agreement=present == expected and frattini(mx).size == 1)
    return doc


def cmd_maximals(cfg: RunConfig, primes: list[int]):
    docs = _run_many(cfg, _maximals_doc, primes)
    return {"command": "maximals", "results": docs}, _status(docs)


def _witness_doc(cfg: RunConfig, p: int) -> dict:
    if cfg.mode == "predict":
        return {"p": p, "predicted": "holds" if predict_rp(p) else "fails",
                "predicted_witness_orders": sorted(predict_witness_orders(p))}
    rep = _rp_report(cfg, p, cfg.mode)
    if rep["status"] == "resolved" and rep["witness_orders"] != rep["predicted_witness_orders"]:
        rep["agreement"] = False
    return rep


def cmd_witnesses(cfg: RunConfig, primes: list[int]):
    for p in primes:
        _ceiling(cfg, cfg.mode, p)
    docs = _run_many(cfg, _witness_doc, primes)
    return {"command": "witnesses", "mode": cfg.mode, "results": docs}, _status(docs)


def cmd_verify(cfg: RunConfig, primes: list[int]):
    mode = "oracle" if cfg.mode == "oracle" else "verify"
    for p in primes:
        _ceiling(cfg, mode, p)
    cfg2 = RunConfig(**{**cfg.__dict__, "mode": mode})
    docs = _run_many(cfg2, _verify_doc, primes)
    return {"command": "verify", "mode": mode, "results": docs}, _status(docs)


def _verify_doc(cfg: RunConfig, p: int) -> dict:
    return _rp_report(cfg, p, cfg.mode)


def _build_certificate(cfg: RunConfig, p: int, variant: str | None, allow_exceptional: bool):
    _ceiling(cfg, "certify", p)
    if variant is not None and (why := variant_obstruction(p, variant)):
        raise UsageError(why)
    if predict_rp(p) and not (allow_exceptional and p in EXCEPTIONAL):
        raise UsageError(f"PSL(2,{p}) has the replacement property (p = {p % 8} mod 8, {p % 10} mod 10); "
                         "nothing to certify")
    G = _group(cfg, p)
    mx = _maximals(cfg, G)
    return mx, construct_failure_certificate(mx, variant, allow_exceptional=allow_exceptional)


def cmd_certify(cfg: RunConfig, p: int, variant: str | None, allow_exceptional: bool):
    variants = [variant] if variant else applicable_variants(p)
    certs = []
    for v in variants:
        mx, cert = _build_certificate(cfg, p, v, allow_exceptional)
        data = certificate_to_json(mx, cert)
        if not replay_certificate(data, group=mx.group).ok:
            return {"command": "certify", "certificates": [data], "replay": "failed"}, EXIT_DISAGREE
        certs.append(data)
    if len(certs) == 1:
        return certs[0], EXIT_OK
    return {"schema_version": SCHEMA_VERSION, "kind": "certificate_bundle", "certificates": certs}, EXIT_OK


def cmd_replay(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read certificate: {e}") from None
    items = data.get("certificates") if isinstance(data, dict) and data.get("kind") == "certificate_bundle" else [data]
    results = [replay_certificate(d).to_json() for d in items]
    ok = all(r["ok"] for r in results)
    return {"command": "replay", "results": results}, EXIT_OK if ok else EXIT_DISAGREE


def cmd_diagram(cfg: RunConfig, p: int, variant: str | None, allow_exceptional: bool):
    mx, cert = _build_certificate(cfg, p, variant, allow_exceptional)
    return diagram_dot(mx, cert), EXIT_OK


# -- rendering --------------------------------------------------------------

def _scalar(v) -> str:
    if v is None:
        return "—"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    return str(v)


def render_text(doc) -> str:
    """Plain text view of a JSON document: rows become an aligned table."""
    if isinstance(doc, str):
        return doc
    lines = []
    for key in sorted(doc):
        val = doc[key]
        if key in ("rows", "results", "certificates") and isinstance(val, list):
            if key == "rows":
                cols = list(val[0]) if val else []
                table = [cols] + [[_scalar(r.get(c)) for c in cols] for r in val]
                widths = [max(len(r[i]) for r in table) for i in range(len(cols))]
                lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in table]
            else:
                for item in val:
                    lines.append("")
                    lines += [f"  {k}: {_scalar(item[k])}" for k in sorted(item)]
        else:
            lines.append(f"{key}: {_scalar(val)}")
    return "\n".join(lines) + "\n"


def emit(doc, fmt: str, out) -> None:
    if isinstance(doc, str):
        out.write(doc)
        return
    if isinstance(doc, dict) and "schema_version" not in doc:
        doc = {"schema_version": SCHEMA_VERSION, **doc}
    if fmt == "text":
        out.write(render_text(doc))
    elif fmt == "dot":
        raise UsageError("--format dot is only available for the diagram command")
    else:
        out.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="psl2rp", description="Replacement property of PSL(2,p).")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("command", choices=["table", "maximals", "witnesses", "verify", "certify", "replay", "diagram"])
    ap.add_argument("target", help="primes (7..43, 17 or 7,11,13) or a certificate file for replay")
    ap.add_argument("--mode", choices=["predict", "verify", "oracle", "certify"], default=None)
    ap.add_argument("--format", dest="fmt", choices=["json", "text", "dot"], default=None)
    ap.add_argument("--threads", type=int, default=None, help="worker processes (env PSL2RP_THREADS)")
    ap.add_argument("--budget", type=int, default=None, help="tuple or sequence limit before giving up")
    ap.add_argument("--cache", default=None, help="group table cache directory (env PSL2RP_CACHE)")
    ap.add_argument("--seed", type=int, default=0, help="seed for sampled maximality checks")
    ap.add_argument("--variant", choices=["case1", "case2", "order3"], default=None)
    ap.add_argument("--allow-exceptional", action="store_true",
                    help="build triple-level configurations at p in {7, 11, 19, 31}")
    ap.add_argument("--beyond-ceiling", action="store_true",
                    help="acknowledge running verify/oracle above the default prime ceilings")
    ap.add_argument("--compute-m", action="store_true", help="compute m(G) instead of using the known value")
    ap.add_argument("-o", "--output", default=None, help="write the report to this file")
    return ap


def _threads(arg: int | None) -> int:
    if arg is not None:
        n = arg
    else:
        try:
            n = int(os.environ.get("PSL2RP_THREADS", "1"))
        except ValueError:
            raise UsageError("PSL2RP_THREADS must be an integer") from None
    if n < 1:
        raise UsageError("thread count must be positive")
    return n


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    default_mode = {"verify": "verify", "witnesses": "verify"}.get(args.command, "predict")
    fmt = args.fmt or ("dot" if args.command == "diagram" else "json")
    try:
        cfg = RunConfig(mode=args.mode or default_mode, fmt=fmt, threads=_threads(args.threads),
                        budget=args.budget, cache_dir=args.cache or os.environ.get("PSL2RP_CACHE") or None,
                        seed=args.seed, beyond_ceiling=args.beyond_ceiling, compute_m=args.compute_m)
        if args.command == "diagram" and fmt != "dot":
            raise UsageError("diagram only emits --format dot")
        if args.command == "replay":
            doc, code = cmd_replay(args.target)
        elif args.command in ("certify", "diagram"):
            primes = parse_primes(args.target)
            if len(primes) != 1:
                raise UsageError(f"{args.command} takes a single prime")
            fn = cmd_certify if args.command == "certify" else cmd_diagram
            doc, code = fn(cfg, primes[0], args.variant, args.allow_exceptional)
        else:
            primes = parse_primes(args.target)
            doc, code = {"table": cmd_table, "maximals": cmd_maximals, "witnesses": cmd_witnesses,
                         "verify": cmd_verify}[args.command](cfg, primes)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                emit(doc, fmt, fh)
        else:
            emit(doc, fmt, out)
        return code
    except UsageError as e:
        print(f"psl2rp: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConstructionError as e:
        print(f"psl2rp: construction failed: {e}", file=sys.stderr)
        return EXIT_DISAGREE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
