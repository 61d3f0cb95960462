import random

import pytest
from hypothesis import given, settings, strategies as st

from chainlocal import localfn as lf
from chainlocal.blocks import block_induction, modular_system
from chainlocal.chains import enumerate_chain_orbits
from chainlocal.errors import DomainError
from chainlocal.perm import parse_cycles
from chainlocal.permgroup import PermGroup, normalizer, p_core

from conftest import catalog_pairs, group

PAIRS = catalog_pairs()


def ms_of(name, p):
    G = group(name)
    return G, modular_system(G, p)


def C(n):
    return PermGroup(n, [tuple(list(range(1, n)) + [0])]).full


def test_basic_function_examples():
    G, ms = ms_of("S3", 2)
    B0, B1 = ms.blocks(G.full)
    assert lf.fn_constant(0)(ms, G.full, B0) == 0
    assert lf.fn_am()(ms, G.full, B0) == 2
    assert lf.fn_k1()(ms, G.full, B0) == 2
    assert lf.fn_am()(ms, G.full, B1) == 1
    S, msS = ms_of("S4", 2)
    assert lf.fn_k1()(msS, S.full, msS.blocks(S.full)[0]) == 0


def test_omega_n_examples():
    G, ms = ms_of("S3", 2)
    B0, B1 = ms.blocks(G.full)
    assert lf.fn_omega_N(C(2))(ms, G.full, B0) == 1
    assert lf.fn_omega_N(C(4))(ms, G.full, B0) == 0
    assert lf.fn_omega_N(C(2))(ms, G.full, B1) == 0
    # O_2(S3) = 1, so no defect-group normalizer can be isomorphic to S3
    for name, p in PAIRS:
        if p != 2:
            continue
        H, msH = ms_of(name, p)
        for b in msH.blocks(H.full):
            assert lf.fn_omega_N(group("S3").full)(msH, H.full, b) == 0


def test_omega_px_examples():
    for name, p in PAIRS:
        G, ms = ms_of(name, p)
        for B in ms.blocks(G.full):
            if B.defect == 0:
                continue
            D = B.defect_group
            f = lf.fn_omega_PX(G.full, D, normalizer(G.full, D))
            assert f(ms, G.full, B) == 1
    G, ms = ms_of("S4", 3)
    B0 = ms.blocks(G.full)[0]
    # a 3-subgroup of a different normalizer shape gives 0
    P = B0.defect_group
    assert lf.fn_omega_PX(G.full, P, P)(ms, G.full, B0) == 0
    with pytest.raises(DomainError):
        lf.fn_omega_PX(G.full, G.trivial, G.full)


def test_g_n_examples():
    S3 = group("S3")
    assert lf.fn_g_N(S3.full, 3)(S3.full) == 1
    assert lf.fn_g_N(S3.full, 2)(group("S4").full) == 0
    # O_p(N) = 1 gives 0 everywhere
    for name, p in PAIRS:
        if p == 2:
            assert lf.fn_g_N(S3.full, 2)(group(name).full) == 0


@pytest.mark.parametrize("name,p", PAIRS)
def test_g_n_and_r_n_chain_sums(name, p):
    G, ms = ms_of(name, p)
    for N in lf.omega_N_candidates(ms, G.full):
        signed, unsigned = lf.group_chain_sums(G.full, p, lf.fn_g_N(N, p))
        assert signed == 0 and unsigned >= 0
        signed, _ = lf.group_chain_sums(G.full, p, lf.fn_r_N(N, p))
        assert signed == 0


def test_normalizer_sum_trivial_cases():
    G, ms = ms_of("S4", 2)
    zero = lf.BlockFunction("zero", lambda ms, H, b: 0)
    f = lf.fn_normalizer_sum(zero)
    assert all(f(ms, G.full, B) == 0 for B in ms.blocks(G.full))
    # a 2'-subgroup has no nontrivial 2-subgroups
    C3 = G.generated_by([parse_cycles("(0 1 2)", 4)])
    one = lf.fn_constant(1)
    assert all(lf.fn_normalizer_sum(one)(ms, C3, b) == 0 for b in ms.blocks(C3))
    with pytest.raises(ValueError):
        lf.fn_normalizer_sum(one, "some")


def test_am0_examples():
    G, ms = ms_of("S3", 2)
    assert lf.fn_am0()(ms, G.full, ms.blocks(G.full)[0]) == 2
    with pytest.raises(DomainError):
        lf.fn_am0()(ms, G.full, ms.blocks(G.full)[1])
    A, msA = ms_of("A5", 2)
    assert lf.fn_am0()(msA, A.full, msA.blocks(A.full)[0]) == 4
    # normal defect group: am0 = am
    S, msS = ms_of("S4", 2)
    V = p_core(S.full, 2)
    for b in msS.blocks(V):
        assert lf.fn_am0()(msS, V, b) == lf.fn_am()(msS, V, b)


@pytest.mark.parametrize("name,p", PAIRS)
def test_report_invariants(name, p):
    G, ms = ms_of(name, p)
    for rep in lf.verify_block_chain_local(ms, G.full, lf.fn_am()):
        assert rep.total == sum(t.sign * sum(t.values) for t in rep.terms)
        assert rep.verdict == ("zero" if rep.total == 0 else "nonzero")
        assert rep.terms[0].chain == (0,) and rep.terms[0].sign == 1
        assert rep.terms[0].summands == [rep.block_id]
        assert rep.trivial_chain_value() == lf.fn_am()(ms, G.full, ms.blocks(G.full)[rep.block_id])
        d = rep.to_dict()
        assert d["total"] == rep.total and len(d["terms"]) == len(rep.terms)


def test_defect_zero_report_only():
    G, ms = ms_of("S3", 2)
    reps = lf.verify_block_chain_local(ms, G.full, lf.fn_am())
    assert [r.block_defect for r in reps] == [1, 0]
    # the defect-zero block has no summands on nontrivial chains, so only f(G, B) = 1 remains
    assert reps[1].total == 1 and all(not t.summands for t in reps[1].terms[1:])
    assert len(lf.verify_block_chain_local(ms, G.full, lf.fn_am(), positive_defect_only=True)) == 1


def test_evaluator_errors_name_the_pair():
    G, ms = ms_of("S4", 2)

    def boom(ms, H, b):
        if H.order < 24:
            raise DomainError("boom")
        return 0

    with pytest.raises(DomainError, match="chain rep"):
        lf.alternating_chain_sum(ms, G.full, ms.blocks(G.full)[0], lf.BlockFunction("boom", boom))


def test_am_equality_examples():
    G, ms = ms_of("S3", 2)
    (r,) = lf.verify_am_equality(ms, G.full)
    assert (r["am_G"], r["am_N"], r["equal"]) == (2, 2, True)
    A, msA = ms_of("A5", 2)
    (r,) = lf.verify_am_equality(msA, A.full)
    assert (r["am_G"], r["am_N"], r["normalizer_order"]) == (4, 4, 12)


def test_lemma_fg_examples():
    G, ms = ms_of("S5", 2)
    reps = lf.verify_lemma_fg(ms, G.full, lf.fn_am(), lf.fn_am0())
    assert reps and all(r.hypothesis and r.conclusion for r in reps)
    same = lf.verify_lemma_fg(ms, G.full, lf.fn_k1(), lf.fn_k1())
    assert all(r.hypothesis and r.conclusion for r in same)
    diff = lf.verify_lemma_fg(ms, G.full, lf.fn_constant(1), lf.fn_constant(2))
    assert all(not r.hypothesis and r.conclusion is None and r.witnesses for r in diff)


@pytest.mark.parametrize("name,p", [(n, p) for n, p in PAIRS if p_core(group(n).full, p).order == 1])
def test_trivial_chain_extraction(name, p):
    G, ms = ms_of(name, p)
    for f in (lf.fn_am(), lf.fn_k1(), lf.fn_constant(3)):
        for rep in lf.verify_block_chain_local(ms, G.full, f, positive_defect_only=True):
            assert rep.total == 0
            assert rep.trivial_chain_value() == -rep.nontrivial_part()


def _pool(G, p, seed):
    pool = [lf.fn_am(), lf.fn_k1(), lf.fn_constant(2), lf.fn_normalizer_sum(lf.random_isomorphism_constant(seed))]
    if p_core(G.full, p).order > 1:
        pool.append(lf.random_conjugacy_constant(G.full, seed))
    return pool


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(PAIRS), st.integers(0, 10**6), st.integers(-5, 5))
def test_sum_and_multiple_closure(pair, seed, n):
    name, p = pair
    G, ms = ms_of(name, p)
    rng = random.Random(seed)
    pool = _pool(G, p, seed)
    f, g = rng.choice(pool), rng.choice(pool)
    for B in ms.blocks(G.full):
        if B.defect == 0:
            continue
        assert lf.alternating_chain_sum(ms, G.full, B, f).total == 0
        assert lf.alternating_chain_sum(ms, G.full, B, g).total == 0
        for h in (f + g, n * f, f * n):
            assert lf.alternating_chain_sum(ms, G.full, B, h).total == 0


@pytest.mark.parametrize("name,p", [("S4", 2), ("S4", 3), ("A5", 2), ("A5", 3), ("S5", 3), ("D12", 2)])
def test_products_of_named_functions(name, p):
    """am, k1 and constants multiply to local functions on these pairs."""
    G, ms = ms_of(name, p)
    pool = [lf.fn_am(), lf.fn_k1(), lf.fn_constant(-4)]
    for i, f in enumerate(pool):
        for g in pool[i:]:
            for rep in lf.verify_block_chain_local(ms, G.full, f * g, positive_defect_only=True):
                assert rep.total == 0


def test_product_not_closed():
    """f vanishes on the principal 2-block of S5 but f*f does not.

    The trivial chain contributes -23; the other distinct term values are 26, 29,
    32 and 36, and after cancellation the signed sum reads -23 + 26 + 29 - 32 = 0.
    Squaring breaks the relation: 529 - 676 - 841 + 1024 = 36.
    """
    G, ms = ms_of("S5", 2)
    B = ms.blocks(G.full)[0]
    f = lf.fn_normalizer_sum(lf.random_isomorphism_constant(0))
    assert lf.alternating_chain_sum(ms, G.full, B, f).total == 0
    assert lf.alternating_chain_sum(ms, G.full, B, f + f).total == 0
    assert lf.alternating_chain_sum(ms, G.full, B, f * f).total == 36


@pytest.mark.parametrize("name", ["S4", "A4", "D8", "SL(2,3)"])
def test_conjugacy_contract(name):
    """Random conjugacy-constant functions agree on conjugate pairs (H^g, b^g)."""
    G, ms = ms_of(name, 2)
    f = lf.random_conjugacy_constant(G.full, 11)
    orbits = enumerate_chain_orbits(G.full, 2)
    rng = random.Random(5)
    for C in orbits.chains[:40]:
        H = orbits.poset.stabilizer(C)
        g = rng.randrange(G.order)
        for b in ms.blocks(H):
            bg = lf.transport_block(ms, b, g)
            assert f(ms, bg.group, bg) == f(ms, H, b)
            assert lf.fn_am()(ms, bg.group, bg) == lf.fn_am()(ms, H, b)


def test_isomorphism_contract_across_embeddings():
    """S3 as a point stabilizer of S4 and the catalog S3 give the same value multisets."""
    S4, ms4 = ms_of("S4", 2)
    S3, ms3 = ms_of("S3", 2)
    stab = S4.generated_by([parse_cycles("(0 1)", 4), parse_cycles("(0 1 2)", 4)])
    fns = [lf.random_isomorphism_constant(s) for s in range(5)] + [lf.fn_am0(), lf.fn_omega_N(C(2))]
    for f in fns:
        def vals(ms, H):
            return sorted(f(ms, H, b) for b in ms.blocks(H) if b.defect)
        assert vals(ms4, stab) == vals(ms3, S3.full)


@pytest.mark.parametrize("name,p", PAIRS)
def test_blocks_of_chain_stabilizers_induce(name, p):
    """Every summand met by a chain sum induces to the root block."""
    G, ms = ms_of(name, p)
    for B in ms.blocks(G.full):
        rep = lf.alternating_chain_sum(ms, G.full, B, lf.fn_constant(1))
        orbits = enumerate_chain_orbits(G.full, p)
        for t in rep.terms:
            H = orbits.poset.stabilizer(orbits.representatives[t.rep_id])
            for bid in t.summands:
                assert block_induction(ms, G.full, ms.blocks(H)[bid]) is B


@pytest.mark.parametrize("name,p", [("S5", 2), ("A5", 2), ("S4", 3), ("A5", 5)])
def test_negative_control(name, p):
    """Without O_p(G) > 1 generic functions are not local, so the sums must not
    vanish identically; guards against an engine that always returns zero."""
    G, ms = ms_of(name, p)
    totals = [r.total for s in range(4) for r in lf.verify_block_chain_local(ms, G.full, lf.random_conjugacy_constant(G.full, s), True)]
    assert any(totals)
    totals = [r.total for s in range(4) for r in lf.verify_block_chain_local(ms, G.full, lf.random_isomorphism_constant(s), True)]
    assert any(totals)
