"""Acceptance criteria, one test each. Every test prints a single
``[criterion N] PASS|FAIL ...`` line (also under pytest's output capture).

Run standalone with ``python tests/test_acceptance.py``.
"""

import json
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from chainlocal import localfn as lf
from chainlocal.blocks import bc_summands, block_degrees, block_induction, defect_one_count, height_zero_count, modular_system
from chainlocal.catalog import REQUIRED, resolve_catalog
from chainlocal.chains import enumerate_chain_orbits
from chainlocal.chartab import character_table, check_orthogonality
from chainlocal.permgroup import p_core
from chainlocal.triples import (
    defect_group_filter,
    enumerate_triple_orbits,
    orbit_pairing,
    signed_orbit_total,
    verify_involution,
    verify_star_blocks,
    verify_tau_bijection,
)

HERE = Path(__file__).parent
FIXTURE = json.loads((HERE / "fixtures" / "gap_blocks.json").read_text())
SEED = 20240611
FIXTURE_GROUPS = ("S3", "S4", "S5", "A4", "A5", "D8", "D12", "Q8", "SL(2,3)")

_groups = {}


def group(name):
    if name not in _groups:
        _groups[name] = resolve_catalog(name)
    return _groups[name]


def pairs(names=REQUIRED, primes=(2, 3, 5, 7)):
    return [(n, p) for n in names for p in primes if group(n).order % p == 0]


def report(n, ok, detail, capsys=None):
    line = f"[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


# ---------------------------------------------------------------------------
# criteria; each returns (ok, detail, failures)


def crit_1():
    fails, slowest = [], 0.0
    for name in REQUIRED:
        G = resolve_catalog(name)  # fresh handle so the timing includes everything
        t = time.perf_counter()
        T = character_table(G)
        ok = len(T.rows) == len(T.classes) and sum(d * d for d in T.degrees) == G.order and check_orthogonality(T)
        dt = time.perf_counter() - t
        slowest = max(slowest, dt)
        if not ok or dt >= 10:
            fails.append((name, ok, round(dt, 2)))
    return not fails, f"{len(REQUIRED)} tables exact, slowest {slowest:.2f}s", fails


def crit_2():
    fails, n = [], 0
    for name, p in pairs(FIXTURE_GROUPS, (2, 3, 5)):
        G = group(name)
        ms = modular_system(G, p)
        got = sorted(
            ({"am": height_zero_count(G, B), "defect": B.defect, "degrees": sorted(block_degrees(B)),
              "k1": defect_one_count(G, B), "principal": B.principal} for B in ms.blocks(G.full)),
            key=lambda b: (not b["principal"], b["degrees"], b["defect"]),
        )
        n += 1
        if got != FIXTURE["groups"][name]["blocks"][str(p)]:
            fails.append((name, p))
    return not fails, f"{n} (group, prime) pairs match the GAP fixture", fails


def crit_3():
    t = time.perf_counter()
    fails, n = [], 0
    for name, p in pairs():
        G = group(name)
        for r in lf.verify_am_equality(modular_system(G, p), G.full):
            n += 1
            if not r["equal"]:
                fails.append((name, p, r))
    return not fails, f"{n} positive-defect blocks, am(G,B) = am(N_G(D),B') ({time.perf_counter() - t:.1f}s)", fails


def crit_4():
    fails, n = [], 0
    for name, p in pairs():
        G = group(name)
        for rep in lf.verify_block_chain_local(modular_system(G, p), G.full, lf.fn_am(), positive_defect_only=True):
            n += 1
            if rep.total:
                fails.append((name, p, rep.block_id, rep.total))
    return not fails, f"{n} alternating sums of am vanish", fails


def crit_5():
    fails, n, used = [], 0, []
    for name, p in pairs():
        G = group(name)
        if p_core(G.full, p).order == 1:
            continue
        used.append(f"{name}/{p}")
        ms = modular_system(G, p)
        for i in range(100):
            f = lf.random_conjugacy_constant(G.full, SEED + i)
            for rep in lf.verify_block_chain_local(ms, G.full, f):
                n += 1
                if rep.total:
                    fails.append((name, p, i, rep.block_id, rep.total))
    required = {"S4/2", "A4/2", "D8/2", "Q8/2", "SL(2,3)/2"}
    ok = not fails and required <= set(used)
    return ok, f"{n} sums over {len(used)} pairs with O_p(G) > 1 ({', '.join(used)})", fails


def crit_6():
    fails, n_px, n_n = [], 0, 0
    for name, p in pairs():
        G = group(name)
        ms = modular_system(G, p)
        for i, (P, X) in enumerate(lf.omega_PX_candidates(ms, G.full)):
            for rep in lf.verify_block_chain_local(ms, G.full, lf.fn_omega_PX(G.full, P, X), True):
                n_px += 1
                if rep.total:
                    fails.append(("omegaPX", name, p, i, rep.block_id, rep.total))
        for i, N in enumerate(lf.omega_N_candidates(ms, G.full)):
            for rep in lf.verify_block_chain_local(ms, G.full, lf.fn_omega_N(N), True):
                n_n += 1
                if rep.total:
                    fails.append(("omegaN", name, p, i, rep.block_id, rep.total))
    return not fails, f"{n_px} omega_(P,X) and {n_n} omega_N sums vanish", fails


def crit_7():
    fails, n = [], 0
    rng = random.Random(SEED)
    for name, p in pairs():
        G = group(name)
        ms = modular_system(G, p)
        for c in (-3, 0, 1, 7):
            for rep in lf.verify_block_chain_local(ms, G.full, lf.fn_constant(c), True):
                n += 1
                if rep.total:
                    fails.append(("const", name, p, c, rep.block_id))
        pool = [lf.fn_am(), lf.fn_k1(), lf.fn_constant(rng.randint(-9, 9))]
        pool += [lf.fn_normalizer_sum(lf.random_isomorphism_constant(rng.randrange(10**6))) for _ in range(2)]
        k = rng.choice([k for k in range(-5, 6) if k])
        for i, f in enumerate(pool):
            for g in pool[i:]:
                for kind, h in (("sum", f + g), ("product", f * g), ("multiple", k * f)):
                    for rep in lf.verify_block_chain_local(ms, G.full, h, True):
                        n += 1
                        if rep.total:
                            fails.append((kind, name, p, h.name, rep.block_id, rep.total))
    kinds = sorted({f[0] for f in fails})
    if fails:
        return False, f"{len(fails)} of {n} totals nonzero, all of kind {kinds}; first {fails[0]}", fails
    return not fails, f"{n} sums of constants, sums, products and multiples vanish", fails


def crit_8():
    fails, n = [], 0
    for name, p in pairs():
        G = group(name)
        ms = modular_system(G, p)
        for mode in ("all", "radical"):
            for i in range(20):
                f = lf.fn_normalizer_sum(lf.random_isomorphism_constant(SEED + i), mode)
                for rep in lf.verify_block_chain_local(ms, G.full, f):
                    n += 1
                    if rep.total:
                        fails.append((name, p, mode, i, rep.block_id, rep.total))
    return not fails, f"{n} normalizer-sum totals vanish (20 h x 2 modes)", fails


def crit_9():
    fails, n, checked = [], 0, 0
    for name, p in pairs():
        G = group(name)
        ms = modular_system(G, p)
        for rep in lf.verify_block_chain_local(ms, G.full, lf.fn_k1()):
            n += 1
            if rep.total:
                fails.append(("sum", name, p, rep.block_id, rep.total))
        orbits = enumerate_chain_orbits(G.full, p)
        for C in orbits.representatives:
            H = orbits.poset.stabilizer(C)
            for b in ms.blocks(H):
                checked += 1
                if b.defect != 1 and defect_one_count(H, b):
                    fails.append(("brauer", name, p, C, b.id))
    return not fails, f"{n} k1 sums vanish; k1 = 0 off defect one on {checked} blocks", fails


def crit_10():
    fails, stats = [], {"pairs": 0, "orbits": 0, "tau": 0, "star": 0}
    for name, p in pairs(primes=(2, 3)):
        G = group(name)
        ms = modular_system(G, p)
        chains = enumerate_chain_orbits(G.full, p)
        inv = verify_involution(chains.poset, chains.chains)
        stats["pairs"] += inv.pairs_checked
        fails += [(name, p, f) for f in inv.failures]
        sets = [enumerate_triple_orbits(G.full, p)]
        sets += [enumerate_triple_orbits(G.full, p, defect_group_filter(ms, chains.poset, B)) for B in ms.blocks(G.full) if B.defect]
        for orbits in sets:
            try:
                orbit_pairing(orbits)
            except Exception as exc:  # reported as a failure, not raised
                fails.append((name, p, "pairing", str(exc)))
            if signed_orbit_total(orbits):
                fails.append((name, p, "signed total"))
            stats["orbits"] += len(orbits)
            for C in chains.representatives:
                stats["tau"] += 1
                if not verify_tau_bijection(orbits, C).ok:
                    fails.append((name, p, "tau", C))
        for B in ms.blocks(G.full):
            r = verify_star_blocks(ms, chains, B)
            stats["star"] += r.checked
            fails += [(name, p, B.id, f) for f in r.failures]
    detail = f"{stats['pairs']} (C,P) involutions, {stats['orbits']} triple orbits paired, {stats['tau']} tau checks, {stats['star']} star blocks"
    return not fails, detail, fails


def crit_11():
    fails, n = [], 0
    for name, p in pairs():
        G = group(name)
        ms = modular_system(G, p)
        orbits = enumerate_chain_orbits(G.full, p)
        poset = orbits.poset
        for C in orbits.representatives:
            H = poset.stabilizer(C)
            induced = {}
            for b in ms.blocks(H):
                n += 1
                B = block_induction(ms, G.full, b)
                if B is None:
                    fails.append((name, p, C, b.id, "undefined"))
                induced[b.id] = B
            for B in ms.blocks(G.full):
                summ = {b.id for b in bc_summands(ms, G.full, B, poset.members(C), H).summands}
                if summ != {k for k, v in induced.items() if v is B}:
                    fails.append((name, p, C, B.id))
    return not fails, f"{n} blocks of chain stabilizers: b^G defined and B_C membership agrees", fails


BUNDLE_SCRIPT = """
import json, sys
from chainlocal import cli
runs = [("blocks", None), ("chains", None), ("triples", None), ("verify am", None),
        ("verify local", "am"), ("verify local", "k1"), ("verify local", "random:5"),
        ("verify local", "normsum:3"), ("verify local", "omegaN:auto"), ("verify local", "omegaPX"),
        ("verify tau", None), ("verify involution", None), ("verify star-block", None)]
out = []
for cmd, fn in runs:
    cfg = cli.RunConfig(command=cmd, groups=list(cli.REQUIRED), primes=[], fn=fn, seed=int(sys.argv[1]))
    out.append(cli.execute(cfg)[0])
sys.stdout.write(json.dumps(out, sort_keys=True))
"""


def crit_12():
    bundles = []
    for hashseed in ("0", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        res = subprocess.run([sys.executable, "-c", BUNDLE_SCRIPT, str(SEED)], env=env, capture_output=True, check=True)
        bundles.append(res.stdout)
    ok = bundles[0] == bundles[1] and len(bundles[0]) > 0
    verdicts = {b["verdict"] for b in json.loads(bundles[0])}
    return ok and verdicts == {"pass"}, f"two fresh processes, {len(bundles[0])} bytes, identical={bundles[0] == bundles[1]}, verdicts={sorted(verdicts)}", []


CRITERIA = {i: globals()[f"crit_{i}"] for i in range(1, 13)}


# The product clause of criterion 7 is false: squares of normalizer-sum
# functions with random isomorphism-constant weights do not vanish on the
# principal 2-block of S5 (see test_localfn.test_product_not_closed). The
# criterion is reported FAIL and kept as a strict expected failure.
PRODUCT_CLOSURE_FALSE = "products of block chain local functions need not be block chain local"


@pytest.mark.parametrize(
    "n",
    [pytest.param(n, marks=pytest.mark.xfail(reason=PRODUCT_CLOSURE_FALSE, strict=True)) if n == 7 else n for n in sorted(CRITERIA)],
)
def test_criterion(n, capsys):
    ok, detail, fails = CRITERIA[n]()
    report(n, ok, detail, capsys)
    assert ok, fails[:5]


if __name__ == "__main__":
    results = []
    for n, fn in CRITERIA.items():
        ok, detail, fails = fn()
        results.append(report(n, ok, detail))
    sys.exit(0 if all(results) else 1)
