"""Command-line front end.

    chainlocal blocks   --group S4 --p 2
    chainlocal chains   --group A5 --p 2 --format table
    chainlocal triples  --group D8 --p 2
    chainlocal verify am --group S3 --p 2
    chainlocal verify local --fn const:5 --group A5 --p 2 --positive-defect
    chainlocal verify tau | involution | star-block --group SL(2,3) --p 2

Exit status: 0 when every verdict passes, 1 when some check fails (the report
carries witnesses), 2 on bad input or an exceeded size guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from . import localfn as lf
from .blocks import block_record, modular_system, bc_summands, block_induction
from .catalog import REQUIRED, STRETCH, catalog_names, resolve_catalog
from .chains import chain_record, enumerate_chain_orbits
from .errors import ChainLocalError, FilterInvarianceError, InputError, InvariantError, ResourceError
from .perm import read_generator_file
from .permgroup import Config, PermGroup, is_prime, p_core
from .triples import (
    defect_group_filter,
    enumerate_triple_orbits,
    orbit_pairing,
    signed_orbit_total,
    triple_record,
    verify_involution,
    verify_star_blocks,
    verify_tau_bijection,
)

DEFAULT_SEED = 20240611
REPORT_DIR_ENV = "CHAINLOCAL_REPORT_DIR"
CANDIDATE_PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass
class RunConfig:
    command: str
    groups: list[str]
    primes: list[int]
    fn: str | None = None
    mode: str = "all"
    positive_defect: bool = False
    seed: int = DEFAULT_SEED
    fmt: str = "json"
    out: str | None = None
    stretch: bool = False
    config: Config = field(default_factory=Config)


# ---------------------------------------------------------------------------
# groups


def _cyclic(n: int, config: Config) -> PermGroup:
    if n < 1:
        raise InputError("cyclic group order must be positive")
    gen = tuple(list(range(1, n)) + [0]) if n > 1 else (0,)
    return PermGroup(n, [gen], config=config, name=f"C{n}")


def resolve_group(spec: str, stretch: bool = False, config: Config | None = None) -> PermGroup:
    """A catalog name, 'C<n>', a generator file path, or 'label=path'."""
    config = config or Config()
    label = None
    if "=" in spec:
        label, spec = spec.split("=", 1)
    if spec in REQUIRED or spec in STRETCH:
        G = resolve_catalog(spec, stretch=stretch, config=config)
        if label:
            G.name = label
        return G
    m = re.fullmatch(r"C(\d+)", spec)
    if m:
        return _cyclic(int(m.group(1)), config)
    path = Path(spec)
    if path.is_file():
        degree, gens = read_generator_file(path)
        return PermGroup(degree, gens, config=config, name=label or path.stem)
    raise InputError(f"unknown group {spec!r}; catalog: {', '.join(catalog_names(stretch))}, C<n>, or a generator file")


def _primes_for(G: PermGroup, primes: list[int]) -> list[int]:
    if primes:
        return primes
    return [p for p in CANDIDATE_PRIMES if G.order % p == 0]


def _audit(G: PermGroup, p: int) -> dict:
    orbits = enumerate_chain_orbits(G.full, p)
    return {
        "p_subgroups": len(orbits.poset),
        "chains": len(orbits.chains),
        "chain_orbits": len(orbits.representatives),
        "orbits_per_length": {str(k): v for k, v in orbits.lengths_histogram().items()},
    }


# ---------------------------------------------------------------------------
# commands; each returns (payload, csv rows, witnesses)


def _cmd_blocks(G, p, cfg):
    ms = modular_system(G, p)
    recs = [block_record(G.name, p, B) for B in ms.blocks(G.full)]
    return {"blocks": recs}, recs, []


def _cmd_chains(G, p, cfg):
    orbits = enumerate_chain_orbits(G.full, p)
    recs = [chain_record(orbits, i) for i in range(len(orbits.representatives))]
    rows = [{**r, "subgroup_orders": " ".join(map(str, r["subgroup_orders"]))} for r in recs]
    return {"chains": recs}, rows, []


def _cmd_triples(G, p, cfg):
    orbits = enumerate_triple_orbits(G.full, p)
    chains = enumerate_chain_orbits(G.full, p)
    witnesses = []
    try:
        pairing = orbit_pairing(orbits)
    except InvariantError as exc:
        pairing = {}
        witnesses.append({"group": G.name, "prime": p, "block": None, "chain_rep": None, "error": str(exc)})
    total = signed_orbit_total(orbits)
    if total:
        witnesses.append({"group": G.name, "prime": p, "block": None, "chain_rep": None, "signed_total": total})
    recs = [triple_record(orbits, chains, i, pairing.get(i)) for i in range(len(orbits))]
    return {"triples": recs, "signed_total": total, "restriction": "X = N_{G_C}(P)"}, recs, witnesses


def _cmd_am(G, p, cfg):
    ms = modular_system(G, p)
    recs = lf.verify_am_equality(ms, G.full)
    wit = [{"group": G.name, "prime": p, "block": r["block_id"], "chain_rep": 0, "am_G": r["am_G"], "am_N": r["am_N"]} for r in recs if not r["equal"]]
    return {"am_equality": recs}, recs, wit


def _functions(G, p, cfg, ms) -> list[lf.BlockFunction] | None:
    sel = cfg.fn or ""
    if sel == "am":
        return [lf.fn_am()]
    if sel == "am0":
        return [lf.fn_am0()]
    if sel == "k1":
        return [lf.fn_k1()]
    if sel.startswith("const:"):
        try:
            return [lf.fn_constant(int(sel[6:]))]
        except ValueError:
            raise InputError(f"bad constant in {sel!r}") from None
    if sel.startswith("omegaN:"):
        name = sel[7:]
        if name == "auto":
            return [lf.fn_omega_N(N, f"cand{i}") for i, N in enumerate(lf.omega_N_candidates(ms, G.full))]
        N = resolve_group(name, stretch=True, config=cfg.config)
        return [lf.fn_omega_N(N.full, name)]
    if sel == "omegaPX":
        return [lf.fn_omega_PX(G.full, P, X, f"cand{i}") for i, (P, X) in enumerate(lf.omega_PX_candidates(ms, G.full))]
    if sel == "normsum" or sel.startswith("normsum:"):
        try:
            count = int(sel[8:]) if sel.startswith("normsum:") else 1
        except ValueError:
            raise InputError(f"bad count in {sel!r}") from None
        return [lf.fn_normalizer_sum(lf.random_isomorphism_constant(cfg.seed + i), cfg.mode) for i in range(count)]
    if sel.startswith("random:"):
        try:
            count = int(sel[7:])
        except ValueError:
            raise InputError(f"bad count in {sel!r}") from None
        if p_core(G.full, p).order == 1:
            return None
        return [lf.random_conjugacy_constant(G.full, cfg.seed + i) for i in range(count)]
    raise InputError(f"unknown function selector {sel!r}")


def _claims_every_block(sel: str | None) -> bool:
    """k1, random conjugacy-constant and normalizer-sum functions are claimed
    local on every block; the others only on blocks of positive defect."""
    sel = sel or ""
    return sel == "k1" or sel.startswith(("random:", "normsum"))


def _cmd_local(G, p, cfg):
    ms = modular_system(G, p)
    fns = _functions(G, p, cfg, ms)
    if fns is None:
        note = "skipped: O_p(G) = 1, random conjugacy-constant functions are only claimed local when O_p(G) > 1"
        return {"function": cfg.fn, "skipped": note, "reports": []}, [], []
    every_block = _claims_every_block(cfg.fn)
    positive_only = cfg.positive_defect or cfg.fn == "am0"
    reports, rows, wit = [], [], []
    for f in fns:
        for rep in lf.verify_block_chain_local(ms, G.full, f, positive_only):
            d = rep.to_dict()
            in_scope = every_block or rep.block_defect > 0
            if rep.total and not in_scope:
                d["verdict"] = "outside-claim"
            reports.append(d)
            rows.append({"group": G.name, "prime": p, "block": rep.block_id, "function": f.name, "total": rep.total, "verdict": d["verdict"]})
            if rep.total and in_scope:
                for t in rep.terms:
                    if any(t.values):
                        wit.append({"group": G.name, "prime": p, "block": rep.block_id, "function": f.name, "chain_rep": t.rep_id, "contribution": t.sign * sum(t.values)})
    return {"function": cfg.fn, "reports": reports}, rows, wit


def _cmd_tau(G, p, cfg):
    ms = modular_system(G, p)
    chains = enumerate_chain_orbits(G.full, p)
    recs, wit = [], []
    sets = [("all", enumerate_triple_orbits(G.full, p))]
    for B in ms.blocks(G.full):
        if B.defect:
            sets.append((f"defect-filter:{B.id}", enumerate_triple_orbits(G.full, p, defect_group_filter(ms, chains.poset, B))))
    for label, orbits in sets:
        for rid, C in enumerate(chains.representatives):
            r = verify_tau_bijection(orbits, C)
            recs.append({"triple_set": label, "chain_rep": rid, "local_orbits": r.local_orbits, "global_orbits": r.global_orbits, "ok": r.ok})
            if not r.ok:
                wit.append({"group": G.name, "prime": p, "block": None, "chain_rep": rid, "triple_set": label, "detail": r.witnesses})
    return {"tau": recs}, recs, wit


def _cmd_involution(G, p, cfg):
    chains = enumerate_chain_orbits(G.full, p)
    r = verify_involution(chains.poset, chains.chains)
    wit = []
    for f in r.failures:
        wit.append({"group": G.name, "prime": p, "block": None, "chain_rep": chains.orbit_of[tuple(f["chain"])], **f})
    orbits = enumerate_triple_orbits(G.full, p)
    try:
        pairing = orbit_pairing(orbits)
    except InvariantError as exc:
        pairing = None
        wit.append({"group": G.name, "prime": p, "block": None, "chain_rep": None, "error": str(exc)})
    rec = {"pairs_checked": r.pairs_checked, "failures": len(r.failures), "triple_orbits": len(orbits), "orbits_paired": pairing is not None}
    return {"involution": rec}, [rec], wit


def _cmd_star(G, p, cfg):
    ms = modular_system(G, p)
    chains = enumerate_chain_orbits(G.full, p)
    recs, wit = [], []
    for B in ms.blocks(G.full):
        if B.defect == 0:
            continue
        r = verify_star_blocks(ms, chains, B)
        recs.append({"block_id": B.id, "checked": r.checked, "ok": r.ok})
        for f in r.failures:
            wit.append({"group": G.name, "prime": p, "block": B.id, **f})
        # Knorr-Robinson consistency: B_C picks out exactly the blocks inducing to B
        for rid, C in enumerate(chains.representatives):
            GC = chains.poset.stabilizer(C)
            summ = {b.id for b in bc_summands(ms, G.full, B, chains.poset.members(C), GC).summands}
            induced = {b.id for b in ms.blocks(GC) if block_induction(ms, G.full, b) is B}
            if summ != induced:
                wit.append({"group": G.name, "prime": p, "block": B.id, "chain_rep": rid, "summands": sorted(summ), "inducing": sorted(induced)})
    return {"star_block": recs}, recs, wit


COMMANDS = {
    "blocks": _cmd_blocks,
    "chains": _cmd_chains,
    "triples": _cmd_triples,
    "verify am": _cmd_am,
    "verify local": _cmd_local,
    "verify tau": _cmd_tau,
    "verify involution": _cmd_involution,
    "verify star-block": _cmd_star,
}


# ---------------------------------------------------------------------------
# driver


def execute(cfg: RunConfig) -> tuple[dict, list[dict], int]:
    """Run a command; returns (bundle, csv rows, exit code). Raises on input errors."""
    handler = COMMANDS[cfg.command]
    for p in cfg.primes:
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
    results, rows, witnesses = [], [], []
    for spec in cfg.groups:
        G = resolve_group(spec, cfg.stretch, cfg.config)
        for p in _primes_for(G, cfg.primes):
            payload, r, w = handler(G, p, cfg)
            results.append({"group": G.name, "order": G.order, "prime": p, "chain_audit": _audit(G, p), **payload, "verdict": "fail" if w else "pass"})
            rows.extend({"group": G.name, "prime": p, **x} if "group" not in x else x for x in r)
            witnesses.extend(w)
    bundle = {
        "command": cfg.command,
        "config": {"groups": cfg.groups, "primes": cfg.primes, "function": cfg.fn, "mode": cfg.mode, "positive_defect": cfg.positive_defect, "seed": cfg.seed},
        "results": results,
        "witnesses": witnesses,
        "verdict": "fail" if witnesses else "pass",
    }
    return bundle, rows, 1 if witnesses else 0


def render(bundle: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(bundle, sort_keys=True, indent=2) + "\n"
    if not rows:
        return ""
    cols = list(rows[0])
    for r in rows[1:]:
        cols += [c for c in r if c not in cols]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(v) for k, v in r.items()})
        return buf.getvalue()
    cells = [[_cell(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(x[i]) for x in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)) for row in cells]
    lines.append(f"verdict: {bundle['verdict']}")
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, list):
        return " ".join(map(str, v))
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", action="append", help="catalog name, C<n>, or generator file (repeatable; default: required catalog)")
    common.add_argument("--p", type=int, action="append", default=[], help="prime (repeatable; default: primes dividing |G|)")
    common.add_argument("--positive-defect", action="store_true")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--out", help=f"output path (relative paths honour ${REPORT_DIR_ENV})")
    common.add_argument("--stretch", action="store_true", help="allow S6, A6, PSL(2,7)")
    common.add_argument("--max-order", type=int, default=Config.max_order)

    ap = argparse.ArgumentParser(prog="chainlocal", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("blocks", "chains", "triples"):
        sub.add_parser(name, parents=[common])
    verify = sub.add_parser("verify")
    vsub = verify.add_subparsers(dest="what", required=True)
    for name in ("am", "tau", "involution", "star-block"):
        vsub.add_parser(name, parents=[common])
    loc = vsub.add_parser("local", parents=[common])
    loc.add_argument("--fn", required=True, help="am | am0 | k1 | const:<c> | omegaN:<group|auto> | omegaPX | normsum[:<count>] | random:<count>")
    loc.add_argument("--mode", choices=("all", "radical"), default="all", help="normsum: all or radical p-subgroups")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command if args.command != "verify" else f"verify {args.what}"
    cfg = RunConfig(
        command=command,
        groups=args.group or list(REQUIRED),
        primes=args.p,
        fn=getattr(args, "fn", None),
        mode=getattr(args, "mode", "all"),
        positive_defect=args.positive_defect,
        seed=args.seed,
        fmt=args.format,
        out=args.out,
        stretch=args.stretch,
        config=Config(max_order=args.max_order),
    )
    try:
        bundle, rows, code = execute(cfg)
    except (InputError, ResourceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvariantError, FilterInvarianceError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except ChainLocalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(bundle, rows, cfg.fmt)
    if cfg.out:
        path = Path(cfg.out)
        base = os.environ.get(REPORT_DIR_ENV)
        if base and not path.is_absolute():
            path = Path(base) / path
        write_atomic(path, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
