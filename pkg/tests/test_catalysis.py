import random

import pytest

from qcatalyst.ring import make_clifford_t_tower, make_cyclotomic_tower
from qcatalyst.circuit import (
    CCX, CCZ, CPHASEK, CS, CSDG, CX, CZ, H, PHASEK, S, SDG, SWAP, T, TDG, X, Y, Z,
    Circuit,
    apply_to_state,
    basis_state,
    gate_matrix,
    mat_eq,
    prepare,
    simulate,
    unitary_of,
)
from qcatalyst.catalysis import (
    CatalysisError,
    adder,
    apply_embedding,
    catalyst_bank,
    ccz_to_3t,
    check_catalysis_identity,
    controlled_decrementer,
    controlled_phase_gadget,
    cs_encoding_vs_toffoli,
    decompose_t_dm,
    phase_gadget,
    phase_gadget_catalyst_tag,
    real_encode_circuit,
    real_encode_matrix,
    run_gadget_suite,
    subtractor,
    synth_small_phase,
    t_gadget,
    t_to_cs_embedding,
    transpile_t_to_cs,
    verify_adder_catalysis,
    verify_ccz_to_3t,
    verify_embedding,
    verify_synth_small_phase,
)

TOWER = make_clifford_t_tower()


def random_clifford_t(rng, width=None, max_gates=12):
    w = width or rng.randint(1, 3)
    one_q = [X, Y, Z, S, SDG, T, TDG, H]
    two_q = [CX, CZ, CS, CSDG, SWAP]
    gates = []
    for _ in range(rng.randint(1, max_gates)):
        if w >= 2 and rng.random() < 0.4:
            a, b = rng.sample(range(w), 2)
            gates.append(rng.choice(two_q)(a, b))
        else:
            gates.append(rng.choice(one_q)(rng.randrange(w)))
    return Circuit(w, tuple(gates))


def test_t_gadget_exact():
    rep = check_catalysis_identity(
        t_gadget(), Circuit(1, (T(0),)), ("T",), TOWER, extra_states=5
    )
    assert rep.passed, rep.to_text()


def test_t_gadget_gate_order_matters():
    swapped = Circuit(2, (CS(0, 1), CX(0, 1)))
    rep = check_catalysis_identity(swapped, Circuit(1, (T(0),)), ("T",), TOWER)
    assert not rep.passed


def test_phase_gadgets():
    for k in (2, 3):
        rep = check_catalysis_identity(
            phase_gadget(k), Circuit(1, (PHASEK(k, 0),)),
            phase_gadget_catalyst_tag(k), TOWER,
        )
        assert rep.passed, k
    rep = check_catalysis_identity(
        phase_gadget(4), Circuit(1, (PHASEK(4, 0),)),
        phase_gadget_catalyst_tag(4), make_cyclotomic_tower(4),
    )
    assert rep.passed
    with pytest.raises(CatalysisError):
        phase_gadget(1)


def test_controlled_phase_gadgets():
    for k, m in ((1, 1), (2, 1), (2, 2), (3, 2)):
        target = Circuit(m + 1, (CPHASEK(k, *range(m + 1)),))
        rep = check_catalysis_identity(
            controlled_phase_gadget(k, m), target,
            phase_gadget_catalyst_tag(k), TOWER,
        )
        assert rep.passed, (k, m)


def test_transpile_t_to_cs_property():
    rng = random.Random(5)
    for _ in range(15):
        c = random_clifford_t(rng)
        out = transpile_t_to_cs(c)
        assert out.width == c.width + 1
        assert out.count("t", "tdg", "y", "csdg") == 0
        assert out.prep_tags()[-1] == "T"
        rep = check_catalysis_identity(out, c, ("T",), TOWER, extra_states=2)
        assert rep.passed, rep.to_text()


def test_transpile_rejects_foreign_gates():
    with pytest.raises(CatalysisError):
        transpile_t_to_cs(Circuit(3, (CCX(0, 1, 2),)))


def test_embedding_contract():
    assert verify_embedding(t_to_cs_embedding(), TOWER).passed
    c = Circuit(1, (T(0), TDG(0)))
    assert mat_eq(
        unitary_of(apply_embedding(c, t_to_cs_embedding()), TOWER),
        unitary_of(transpile_t_to_cs(c), TOWER),
    )


def test_ccz_to_3t():
    rep = verify_ccz_to_3t(TOWER)
    assert rep.passed, rep.to_text()
    assert ccz_to_3t().count("t", "tdg") == 1


def test_t_dm_decomposition():
    dec = decompose_t_dm(TOWER)
    psi = prepare(Circuit(1, (), ("T",)), TOWER)
    want = [[a * b.conj() for b in psi.amplitudes] for a in psi.amplitudes]
    assert mat_eq(dec.reconstruct(TOWER), want)
    assert abs(dec.one_norm() - (2 * 2 ** 0.5 - 1)) < 1e-12


def test_real_encoding_matrix_and_circuit_agree():
    rng = random.Random(9)
    gates_pool = [X, Z, S, SDG, H]
    for _ in range(10):
        w = rng.randint(1, 3)
        gates = []
        for _ in range(rng.randint(1, 8)):
            r = rng.random()
            if w >= 3 and r < 0.2:
                gates.append(rng.choice([CCX, CCZ])(*rng.sample(range(w), 3)))
            elif w >= 2 and r < 0.5:
                gates.append(rng.choice([CX, CZ, CS, CSDG, SWAP])(*rng.sample(range(w), 2)))
            else:
                gates.append(rng.choice(gates_pool)(rng.randrange(w)))
        c = Circuit(w, tuple(gates))
        enc = real_encode_circuit(c)
        assert enc.gateset_tag == "toffoli+h"
        assert mat_eq(
            unitary_of(enc, TOWER, cap=w + 1),
            real_encode_matrix(unitary_of(c, TOWER), TOWER),
        )


def test_real_encoding_catalysis_with_minus_i():
    c = Circuit(2, (H(0), CS(0, 1), S(1), CX(0, 1), SDG(0)))
    enc = real_encode_circuit(c)
    cat = prepare(Circuit(1, (), ("-i",)), TOWER)
    for x in range(4):
        v = basis_state(2, x, TOWER)
        assert apply_to_state(enc, cat.tensor(v)) == cat.tensor(apply_to_state(c, v))


def test_real_encoding_rejects_complex_preps_and_nonunitary():
    with pytest.raises(CatalysisError):
        real_encode_circuit(Circuit(1, (), ("i",)))
    not_unitary = [[TOWER.one(), TOWER.one()], [TOWER.zero(), TOWER.one()]]
    with pytest.raises(CatalysisError):
        real_encode_matrix(not_unitary, TOWER)


def test_cs_encoding_toffoli_relation():
    rep = cs_encoding_vs_toffoli(TOWER)
    assert rep.passed, rep.to_text()


def test_subtractor_adder_brute_force():
    for n in (1, 2, 3):
        sub, add = subtractor(n), adder(n)
        for a in range(1 << n):
            for b in range(1 << n):
                idx = (a << n) | b
                got = apply_to_state(sub, basis_state(2 * n, idx, TOWER))
                hits = [i for i, amp in enumerate(got.amplitudes) if not amp.is_zero()]
                assert hits == [(a << n) | ((b - a) % (1 << n))]
                got = apply_to_state(add, basis_state(2 * n, idx, TOWER))
                hits = [i for i, amp in enumerate(got.amplitudes) if not amp.is_zero()]
                assert hits == [(a << n) | ((a + b) % (1 << n))]


def test_controlled_decrementer_example():
    out = apply_to_state(controlled_decrementer(2), basis_state(3, 0b100, TOWER))
    hits = [i for i, amp in enumerate(out.amplitudes) if not amp.is_zero()]
    assert hits == [0b111]


def test_subtractor_document_example():
    out = apply_to_state(subtractor(3), basis_state(6, 0b010101, TOWER))
    hits = [i for i, amp in enumerate(out.amplitudes) if not amp.is_zero()]
    assert hits == [0b010011]


def test_adder_catalysis_bank():
    assert catalyst_bank(3) == (("zk", 1, 1), ("zk", 2, 1), ("zk", 3, 1))
    for n in (1, 2, 3):
        assert verify_adder_catalysis(n, TOWER).passed
    assert verify_adder_catalysis(4, make_cyclotomic_tower(4)).passed


def test_corrupted_bank_detected():
    rep = verify_adder_catalysis(
        2, TOWER, bank_tags=(("zk", 2, 1), ("zk", 1, 1))
    )
    assert not rep.passed and rep.failures


def test_synth_small_phase():
    assert verify_synth_small_phase(3, 5, TOWER).passed
    c = synth_small_phase(3, 5)
    assert c.width == 7
    with pytest.raises(CatalysisError):
        synth_small_phase(3, 8)
    with pytest.raises(CatalysisError):
        synth_small_phase(0, 1)


def test_gadget_suite_green():
    reports = run_gadget_suite()
    assert all(r.passed for r in reports)
    assert any(not r.passed for r in run_gadget_suite(scope="t", fault_hook=True))
