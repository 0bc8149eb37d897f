import random

import pytest

from qcatalyst.ring import Dyadic, format_ring, make_clifford_t_tower
from qcatalyst.circuit import (
    CCX, CCZ, CPHASEK, CS, CSDG, CX, CZ, H, MCX, PHASEK, S, SDG, SWAP, T, TDG, X, Y, Z,
    Circuit,
    CircuitError,
    CircuitParseError,
    Observable,
    StateVector,
    apply_to_state,
    basis_state,
    expectation,
    gate_matrix,
    is_unitary,
    marginal_distribution,
    mat_eq,
    mat_identity,
    mat_mul,
    parse_circuit,
    prepare,
    serialize_circuit,
    simulate,
    unitary_of,
)

TOWER = make_clifford_t_tower()


def test_gate_arity_validation():
    with pytest.raises(CircuitError):
        CS(0, 0)
    with pytest.raises(CircuitError):
        Circuit(1, (CX(0, 1),))
    with pytest.raises(CircuitError):
        MCX(0)


def test_basic_gate_algebra():
    assert mat_eq(mat_mul(gate_matrix(S(0), TOWER), gate_matrix(S(0), TOWER)),
                  gate_matrix(Z(0), TOWER))
    assert mat_eq(unitary_of(Circuit(2, (CS(0, 1), CSDG(0, 1))), TOWER),
                  mat_identity(4, TOWER))
    assert mat_eq(unitary_of(Circuit(1, (T(0),) * 8), TOWER),
                  mat_identity(2, TOWER))
    assert mat_eq(unitary_of(Circuit(1, (H(0), H(0))), TOWER),
                  mat_identity(2, TOWER))
    assert mat_eq(unitary_of(Circuit(1, (PHASEK(3, 0), PHASEK(3, 0, sign=-1))), TOWER),
                  mat_identity(2, TOWER))


def test_t_on_plus():
    psi = simulate(Circuit(1, (H(0), T(0)), ("0",)), TOWER)
    w = TOWER.root_of_unity(3)
    s = TOWER.sqrt2_over_2()
    assert psi.amplitudes == (s, s * w)


def test_y_decomposition():
    got = unitary_of(Circuit(1, (SDG(0), X(0), S(0))), TOWER)
    assert mat_eq(got, gate_matrix(Y(0), TOWER))


def test_qubit_zero_is_most_significant():
    psi = simulate(Circuit(2, (X(0),), ("0", "0")), TOWER)
    assert [a.is_zero() for a in psi.amplitudes] == [True, True, False, True]


def test_simulate_matches_unitary_on_random_circuits():
    rng = random.Random(11)
    one_q = [X, Y, Z, S, SDG, T, TDG, H]
    two_q = [CX, CZ, CS, CSDG, SWAP]
    for _ in range(10):
        w = rng.randint(1, 3)
        gates = []
        for _ in range(rng.randint(1, 15)):
            if w >= 2 and rng.random() < 0.4:
                a, b = rng.sample(range(w), 2)
                gates.append(rng.choice(two_q)(a, b))
            else:
                gates.append(rng.choice(one_q)(rng.randrange(w)))
        c = Circuit(w, tuple(gates))
        u = unitary_of(c, TOWER)
        assert is_unitary(u)
        for x in range(1 << w):
            got = apply_to_state(c, basis_state(w, x, TOWER))
            assert got.amplitudes == tuple(u[r][x] for r in range(1 << w))


def test_norm_preserved():
    c = Circuit(2, (H(0), T(0), CX(0, 1), CS(1, 0), H(1)), ("+", "-i"))
    psi = simulate(c, TOWER)
    assert psi.norm_sq() == TOWER.one()


def test_bell_marginal():
    psi = simulate(Circuit(2, (H(0), CX(0, 1)), ("0", "0")), TOWER)
    dist = marginal_distribution(psi, (0,))
    assert dist == {"0": TOWER.from_dyadic(Dyadic(1, 1)),
                    "1": TOWER.from_dyadic(Dyadic(1, 1))}


def test_expectation_t_state():
    psi = prepare(Circuit(1, (), ("T",)), TOWER)
    val = expectation(psi, Observable("X"))
    assert val == TOWER.sqrt2_over_2()
    with pytest.raises(CircuitError):
        expectation(psi, Observable("XX"))


def test_ccz_state_preparation():
    psi = prepare(Circuit(3, (), ("ccz0", "ccz1", "ccz2")), TOWER)
    assert psi.norm_sq() == TOWER.one()
    # applying CCZ^-1 (= CCZ) and undoing the Hadamards gives |000>
    undo = Circuit(3, (CCZ(0, 1, 2), H(0), H(1), H(2)))
    back = apply_to_state(undo, psi)
    assert back.amplitudes[0] == TOWER.one()
    with pytest.raises(CircuitError):
        Circuit(3, (), ("ccz0", "ccz2", "ccz1"))


def test_parse_and_serialize_round_trip():
    text = """\
qubits 3
prep 0 +
prep 2 zk 3
h 0
phasek 3 1
cphasek -2 0 1 2
mcx 0 1 2
swap 1 2
"""
    c = parse_circuit(text)
    c2 = parse_circuit(serialize_circuit(c))
    assert c2.gates == c.gates and c2.prep_tags() == c.prep_tags()
    assert c.gates[2].sign == -1


def test_parse_errors_carry_line_numbers():
    with pytest.raises(CircuitParseError, match="line 2"):
        parse_circuit("qubits 2\ncs 0\n")
    with pytest.raises(CircuitParseError):
        parse_circuit("h 0\n")  # missing qubits header
    with pytest.raises(CircuitParseError, match="line 2"):
        parse_circuit("qubits 1\nbogus 0\n")


def test_gateset_validation():
    with pytest.raises(CircuitError):
        Circuit(1, (T(0),), gateset_tag="cs+h")
    Circuit(1, (T(0),), gateset_tag="clifford+t")


def test_pauli_observable_validation():
    with pytest.raises(CircuitError):
        Observable("XQ")
    assert Observable("XY").extend(2).pauli_string == "XYII"
