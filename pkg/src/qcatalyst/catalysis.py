"""Catalysis gadgets and circuit encodings.

Every construction here is a pure transformation on circuits that is meant
to satisfy the catalytic contract

    gadget (|psi> (x) |c>)  =  (U |psi>) (x) |c>     exactly,

for a dedicated catalyst state |c>.  Nothing is trusted from derivations:
each gadget ships with a verifier that replays the contract through the
exact simulator.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .ring import Dyadic, RingElement, TowerSpec, make_clifford_t_tower
from .circuit import (
    CCX, CCZ, CPHASEK, CS, CSDG, CX, CZ, H, MCX, PHASEK, S, SDG, SWAP, T, TDG, X, Z,
    Circuit,
    CircuitError,
    Gate,
    Observable,
    StateVector,
    apply_to_state,
    basis_state,
    gate_matrix,
    is_unitary,
    mat_add,
    mat_dagger,
    mat_eq,
    mat_identity,
    mat_mul,
    mat_scale,
    prepare,
    simulate,
    unitary_of,
)


class CatalysisError(Exception):
    """A gadget cannot be built or an input gate has no mapping."""


# -- verification reports -----------------------------------------------------


@dataclass
class VerificationReport:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"]
        for k, v in self.details.items():
            lines.append(f"  {k}={v}")
        for f in self.failures:
            lines.append(f"  witness: {f}")
        return "\n".join(lines)


def check_catalysis_identity(
    gadget: Circuit,
    target: Circuit,
    catalyst_tags: tuple,
    tower: TowerSpec | None = None,
    extra_states: int = 0,
    rng: random.Random | None = None,
    name: str = "catalysis",
) -> VerificationReport:
    """Check gadget(|v> (x) |c>) == (target|v>) (x) |c> on all basis |v>.

    ``extra_states`` adds that many random ring-valued (unnormalised) data
    states; the contract is linear, so exact equality on those is meaningful.
    """
    tower = tower or make_clifford_t_tower()
    n_cat = len(catalyst_tags)
    d = gadget.width - n_cat
    if target.width != d:
        raise CatalysisError("target width does not match gadget data register")
    cat = prepare(Circuit(n_cat, (), tuple(catalyst_tags)), tower)
    failures = []
    states: list[StateVector] = [basis_state(d, j, tower) for j in range(1 << d)]
    if extra_states:
        rng = rng or random.Random(0)
        for _ in range(extra_states):
            amps = tuple(
                tower.from_coeffs(
                    {m: Dyadic(rng.randint(-8, 8), rng.randint(0, 2)) for m in range(tower.dim)}
                )
                for _ in range(1 << d)
            )
            states.append(StateVector(d, amps))
    for idx, v in enumerate(states):
        lhs = apply_to_state(gadget, v.tensor(cat))
        rhs = apply_to_state(target, v).tensor(cat)
        if lhs != rhs:
            failures.append(f"state#{idx}")
    return VerificationReport(
        name,
        not failures,
        {"data_qubits": d, "catalyst_qubits": n_cat, "states_checked": len(states)},
        failures,
    )


# -- T and phase gadgets ------------------------------------------------------


def t_gadget() -> Circuit:
    """Apply T to qubit 0 with a |T> catalyst on qubit 1, using one CX + one CS.

    The gate order is fixed by verification against the exact simulator; the
    identity holds on the nose, including the global phase.
    """
    return Circuit(2, (CX(0, 1), CS(0, 1)))


def phase_gadget(k: int) -> Circuit:
    """Catalyse Z(2 pi / 2^k) on qubit 0 with a |Z(2 pi / 2^k)> catalyst.

    Uses one CX plus one controlled-Z(2 pi / 2^(k-1)); requires k >= 2.
    k = 3 is the T gadget with the controlled phase being CS.
    """
    if k < 2:
        raise CatalysisError("phase_gadget needs k >= 2")
    return Circuit(2, (CX(0, 1), CPHASEK(k - 1, 0, 1)))


def controlled_phase_gadget(k: int, controls: int) -> Circuit:
    """Catalyse the m-controlled Z(2 pi / 2^k); controls first, then data, then catalyst.

    Built from one multiply-controlled X and one (m+1)-controlled
    Z(2 pi / 2^(k-1)); for k = 1 the residual controlled phase is the
    identity and is dropped.
    """
    if controls < 0:
        raise CatalysisError("negative control count")
    if k < 1:
        raise CatalysisError("controlled_phase_gadget needs k >= 1")
    m = controls
    data, cat = m, m + 1
    wires = tuple(range(m)) + (data, cat)
    gates: list[Gate] = [MCX(*wires) if m else CX(data, cat)]
    if k >= 2:
        gates.append(CPHASEK(k - 1, *wires))
    return Circuit(m + 2, tuple(gates))


def phase_gadget_catalyst_tag(k: int) -> tuple:
    return (("zk", k, 1),)


# -- catalytic embeddings -----------------------------------------------------


@dataclass(frozen=True)
class CatalyticEmbedding:
    """A gate-by-gate translation enabled by a fixed catalyst preparation.

    ``gadget_map`` maps a source gate kind to a template
    ``f(gate, catalyst_base) -> tuple[Gate, ...]`` over the target gate set;
    ``passthrough`` kinds are shared between the gate sets and copied as-is.
    """

    source_gateset: str
    target_gateset: str | None
    catalyst_tags: tuple
    gadget_map: dict
    passthrough: frozenset

    @property
    def n_ancillas(self) -> int:
        return len(self.catalyst_tags)

    def catalyst_prep(self) -> Circuit:
        """Circuit fragment preparing the catalyst on dedicated ancillas."""
        return Circuit(self.n_ancillas, (), tuple(self.catalyst_tags))


def apply_embedding(c: Circuit, e: CatalyticEmbedding) -> Circuit:
    """Replace each gate of ``c`` via the embedding, appending catalyst ancillas."""
    base = c.width
    gates: list[Gate] = []
    for g in c.gates:
        if g.kind in e.gadget_map:
            gates.extend(e.gadget_map[g.kind](g, base))
        elif g.kind in e.passthrough:
            gates.append(g)
        else:
            raise CatalysisError(f"gate {g.kind} has no mapping in the embedding")
    preps = c.prep_tags() + tuple(e.catalyst_tags)
    return Circuit(base + e.n_ancillas, tuple(gates), preps, e.target_gateset)


def verify_embedding(
    e: CatalyticEmbedding, tower: TowerSpec | None = None
) -> VerificationReport:
    """Check the Def-of-catalysis contract for every mapped gate kind."""
    tower = tower or make_clifford_t_tower()
    failures = []
    checked = 0
    for kind in sorted(e.gadget_map):
        arity = 2 if kind in ("csdg", "cs", "cz", "cx", "swap") else 1
        g = Gate(kind, tuple(range(arity)))
        gadget = Circuit(arity + e.n_ancillas, tuple(e.gadget_map[kind](g, arity)))
        rep = check_catalysis_identity(
            gadget, Circuit(arity, (g,)), e.catalyst_tags, tower, name=kind
        )
        checked += 1
        if not rep.passed:
            failures.append(kind)
    return VerificationReport(
        "embedding", not failures, {"kinds_checked": checked}, failures
    )


def _t_template(g: Gate, base: int):
    (q,) = g.qubits
    return (CX(q, base), CS(q, base))


def _tdg_template(g: Gate, base: int):
    # T-dagger = S-dagger after the T gadget, keeping one catalyst species.
    (q,) = g.qubits
    return (CX(q, base), CS(q, base), SDG(q))


def _y_template(g: Gate, base: int):
    (q,) = g.qubits
    return (SDG(q), X(q), S(q))


def _csdg_template(g: Gate, base: int):
    a, b = g.qubits
    return (CS(a, b), CZ(a, b))


def t_to_cs_embedding() -> CatalyticEmbedding:
    """The Clifford+T -> CS+H embedding with a single |T> catalyst."""
    return CatalyticEmbedding(
        source_gateset="clifford+t",
        target_gateset="cs+h",
        catalyst_tags=("T",),
        gadget_map={
            "t": _t_template,
            "tdg": _tdg_template,
            "y": _y_template,
            "csdg": _csdg_template,
        },
        passthrough=GATESET_CS_H_PASSTHROUGH,
    )


GATESET_CS_H_PASSTHROUGH = frozenset(
    {"x", "z", "s", "sdg", "h", "cx", "cz", "cs", "swap"}
)


def transpile_t_to_cs(c: Circuit) -> Circuit:
    """Rewrite a Clifford+T circuit over {CX, CZ, CS, H, S, Sdg, X, Z, SWAP}
    plus one appended catalyst qubit prepared in |T>.

    The output satisfies C'(|psi> (x) |T>) = (C|psi>) (x) |T> exactly.
    """
    allowed = GATESETS_CLIFFORD_T
    for g in c.gates:
        if g.kind not in allowed:
            raise CatalysisError(f"gate {g.kind} is outside Clifford+T")
    return apply_embedding(c, t_to_cs_embedding())


GATESETS_CLIFFORD_T = frozenset(
    {"x", "y", "z", "s", "sdg", "h", "t", "tdg", "cx", "cz", "cs", "csdg", "swap"}
)


# -- CCZ magic state conversion ------------------------------------------------


def ccz_to_3t() -> Circuit:
    """Clifford circuit plus a single T mapping |CCZ> to |T> (x) |T> (x) |T>.

    Diagonal construction: cancel the pairwise i^(ab+ac+bc) factors with
    CS-dagger gates, add w^(2(a+b+c)) with S gates, and remove the residual
    w^(a XOR b XOR c) with a phase on the computed parity.
    """
    return Circuit(
        3,
        (
            CSDG(0, 1), CSDG(0, 2), CSDG(1, 2),
            S(0), S(1), S(2),
            CX(0, 2), CX(1, 2), SDG(2), T(2), CX(1, 2), CX(0, 2),
        ),
    )


def verify_ccz_to_3t(tower: TowerSpec | None = None) -> VerificationReport:
    tower = tower or make_clifford_t_tower()
    conv = ccz_to_3t()
    got = apply_to_state(conv, prepare(Circuit(3, (), ("ccz0", "ccz1", "ccz2")), tower))
    want = prepare(Circuit(3, (), ("T", "T", "T")), tower)
    passed = got == want
    return VerificationReport(
        "ccz_to_3t",
        passed,
        {
            "t_count": conv.count("t", "tdg"),
            "global_phase": "1",
            "residual_zero": passed,
        },
        [] if passed else ["|CCZ> image differs from |T>^3"],
    )


# -- magic state decomposition --------------------------------------------------


@dataclass(frozen=True)
class MixedDecomposition:
    """A signed ensemble of pure preparations representing a density matrix."""

    terms: tuple  # of (weight: RingElement with conj(w) = w, prep: Circuit)
    target_description: str

    def reconstruct(self, tower: TowerSpec | None = None):
        """Sum of weight * |psi><psi| as an exact matrix."""
        tower = tower or make_clifford_t_tower()
        dim = 1 << self.terms[0][1].width
        acc = mat_scale(mat_identity(dim, tower), tower.zero())
        for weight, prep in self.terms:
            psi = simulate(prep, tower)
            proj = [
                [a * b.conj() for b in psi.amplitudes] for a in psi.amplitudes
            ]
            acc = mat_add(acc, mat_scale(proj, weight))
        return acc

    def one_norm(self) -> float:
        return sum(abs(w.embed_float().real) for w, _ in self.terms)


def decompose_t_dm(tower: TowerSpec | None = None) -> MixedDecomposition:
    """|T><T| as a four-term signed sum of Clifford-state projectors.

    Weights 1/sqrt(2) on |+> and |+i>, and -(sqrt(2)-1)/2 on |0> and |1>;
    the one-norm overhead is 2*sqrt(2) - 1.
    """
    tower = tower or make_clifford_t_tower()
    inv_sqrt2 = tower.sqrt2_over_2()
    sqrt2 = inv_sqrt2 + inv_sqrt2
    neg = (tower.one() - sqrt2).half()  # -(sqrt(2)-1)/2
    def prep(tag):
        return Circuit(1, (), (tag,))
    return MixedDecomposition(
        terms=(
            (inv_sqrt2, prep("+")),
            (inv_sqrt2, prep("i")),
            (neg, prep("0")),
            (neg, prep("1")),
        ),
        target_description="|T><T|",
    )


# -- real encoding ---------------------------------------------------------------


def real_encode_matrix(u, tower: TowerSpec | None = None):
    """The (n+1)-qubit real encoding [[Re U, -Im U], [Im U, Re U]] of a unitary.

    The encoding qubit is the new most significant one.  Raises on
    non-unitary input (checked exactly).
    """
    if not is_unitary(u):
        raise CatalysisError("real_encode_matrix requires an exactly unitary input")
    dim = len(u)
    re = [[v.real_part() for v in row] for row in u]
    im = [[v.imag_part() for v in row] for row in u]
    out = []
    for r in range(dim):
        out.append(re[r] + [-v for v in im[r]])
    for r in range(dim):
        out.append(im[r] + re[r])
    return out


_REAL_SHIFT_KINDS = frozenset({"h", "x", "cx", "ccx", "swap"})


def _shift(g: Gate) -> Gate:
    return Gate(g.kind, tuple(q + 1 for q in g.qubits), g.k, g.sign)


def real_encode_gate(g: Gate) -> tuple[Gate, ...]:
    """Real encoding of one gate, over Toffoli+Hadamard (+X, CX, SWAP).

    The encoding qubit is 0; original qubit q moves to q + 1.  Phase-type
    gates become (multi-)controlled XZ on the encoding qubit, with Z-type
    conjugations spelled with Hadamards to stay in the target gate set.
    """
    qs = tuple(q + 1 for q in g.qubits)
    if g.kind in _REAL_SHIFT_KINDS:
        return (_shift(g),)
    if g.kind == "z":
        return (H(qs[0]), X(qs[0]), H(qs[0]))
    if g.kind == "cz":
        return (H(qs[1]), CX(qs[0], qs[1]), H(qs[1]))
    if g.kind == "ccz":
        return (H(qs[2]), CCX(qs[0], qs[1], qs[2]), H(qs[2]))
    if g.kind == "s":
        return (H(0), CX(qs[0], 0), H(0), CX(qs[0], 0))
    if g.kind == "sdg":
        return (CX(qs[0], 0), H(0), CX(qs[0], 0), H(0))
    if g.kind == "cs":
        return (H(0), CCX(qs[0], qs[1], 0), H(0), CCX(qs[0], qs[1], 0))
    if g.kind == "csdg":
        return (CCX(qs[0], qs[1], 0), H(0), CCX(qs[0], qs[1], 0), H(0))
    raise CatalysisError(f"gate {g.kind} has no registered real encoding")


_REAL_PREPS = frozenset({"0", "1", "+", "-"})


def real_encode_circuit(c: Circuit) -> Circuit:
    """Encode a CS+H (plus real-encodable Clifford) circuit over Toffoli+H.

    Adds the encoding qubit at position 0, prepared in |0>; the unitary of
    the result equals ``real_encode_matrix(unitary_of(c))`` exactly.
    """
    for tag in c.prep_tags():
        if tag not in _REAL_PREPS:
            raise CatalysisError(
                f"preparation {tag!r} is not real-valued; encode it as gates instead"
            )
    gates: list[Gate] = []
    for g in c.gates:
        gates.extend(real_encode_gate(g))
    preps = ("0",) + c.prep_tags()
    return Circuit(c.width + 1, tuple(gates), preps, "toffoli+h")


def cs_encoding_vs_toffoli(tower: TowerSpec | None = None) -> VerificationReport:
    """Relate the real encoding of CS to the Toffoli gate.

    The encoded CS acts on the computational basis exactly like a Toffoli
    targeting the encoding qubit (controls = the CS qubits); the lone
    difference is a -1 phase on one transition, i.e. an extra CCZ factor.
    The report carries the wire permutation and that exact factorisation.
    """
    tower = tower or make_clifford_t_tower()
    enc = real_encode_matrix(gate_matrix(CS(0, 1), tower), tower)
    # wires of enc: 0 = encoding qubit, 1..2 = CS qubits; the matching
    # Toffoli has controls 1, 2 and target 0.
    tof_ccz = unitary_of(Circuit(3, (CCZ(1, 2, 0), CCX(1, 2, 0))), tower)
    factored = mat_eq(enc, tof_ccz)
    tof = unitary_of(Circuit(3, (CCX(1, 2, 0),)), tower)
    abs_match = all(
        (enc[r][c].is_zero()) == (tof[r][c].is_zero())
        and (enc[r][c].is_zero() or (enc[r][c] * enc[r][c].conj()) == tower.one())
        for r in range(8)
        for c in range(8)
    )
    return VerificationReport(
        "cs_real_encoding",
        factored and abs_match,
        {
            "permutation": "controls=(cs qubits), target=encoding qubit 0",
            "factorisation": "encoded CS = Toffoli * CCZ (exact)",
            "basis_action_matches_toffoli": abs_match,
        },
        [] if factored else ["factorisation mismatch"],
    )


# -- adders, subtractors and the catalyst bank -----------------------------------


def _decrementer_gates(register: tuple[int, ...], controls: tuple[int, ...]):
    """Decrement an MSB-first register by 1 (mod 2^n), with extra controls."""
    n = len(register)
    gates: list[Gate] = []
    lsb = register[n - 1]
    gates.append(MCX(*controls, lsb) if controls else X(lsb))
    for j in range(n - 2, -1, -1):
        ctrls = controls + tuple(register[j + 1:])
        gates.append(MCX(*ctrls, register[j]))
    return gates


def controlled_decrementer(n: int) -> Circuit:
    """Width n+1: qubit 0 controls a decrement of the n-bit register 1..n."""
    if n < 1:
        raise CatalysisError("register needs at least one bit")
    return Circuit(n + 1, tuple(_decrementer_gates(tuple(range(1, n + 1)), (0,))))


def subtractor(n: int) -> Circuit:
    """Width 2n: |a, b> -> |a, (b - a) mod 2^n>, registers MSB-first."""
    if n < 1:
        raise CatalysisError("register needs at least one bit")
    gates: list[Gate] = []
    for j in range(n):
        # bit j of a has weight 2^(n-1-j); subtracting it decrements the
        # top j+1 bits of b.
        gates.extend(_decrementer_gates(tuple(range(n, n + j + 1)), (j,)))
    return Circuit(2 * n, tuple(gates))


def adder(n: int) -> Circuit:
    """Width 2n: |a, b> -> |a, (a + b) mod 2^n>; the inverse of the subtractor."""
    sub = subtractor(n)
    # every gate is an X-type permutation, hence self-inverse
    return Circuit(2 * n, tuple(reversed(sub.gates)))


def catalyst_bank(n: int, sign: int = 1) -> tuple:
    """Preparation tags of the n-qubit catalyst bank.

    Qubit p holds |Z(sign * 2 pi / 2^(p+1))>, i.e. |->, |i>, |T>, ...; the
    ordering is the one that makes the adder catalysis identity hold with
    the bank as the MSB-first addend target.
    """
    if n < 1:
        raise CatalysisError("bank needs at least one qubit")
    return tuple(("zk", p + 1, sign) for p in range(n))


def verify_adder_catalysis(
    n: int, tower: TowerSpec | None = None, bank_tags: tuple | None = None
) -> VerificationReport:
    """Check Adder(data, bank) == (tensor of Z(2 pi / 2^(p+1))^dagger on data) (x) id.

    Exact, on every data basis input.  ``bank_tags`` may override the bank
    preparation (used as a negative control).
    """
    if n > 6:
        raise CatalysisError("adder verification capped at n = 6")
    tower = tower or make_clifford_t_tower()
    tags = bank_tags if bank_tags is not None else catalyst_bank(n)
    add = adder(n)
    bank = prepare(Circuit(n, (), tuple(tags)), tower)
    failures = []
    for x in range(1 << n):
        inp = basis_state(n, x, tower).tensor(bank)
        got = apply_to_state(add, inp)
        phase = tower.one()
        for p in range(n):
            if (x >> (n - 1 - p)) & 1:
                phase = phase * tower.root_of_unity(p + 1).conj()
        want = StateVector(2 * n, tuple(phase * a for a in inp.amplitudes))
        if got != want:
            failures.append(format(x, f"0{n}b"))
    return VerificationReport(
        "adder_catalysis",
        not failures,
        {"n": n, "phases": "Z(2pi/2^(p+1))^dagger on data qubit p"},
        failures,
    )


# -- small-angle phase synthesis ---------------------------------------------------


def synth_small_phase(k: int, m: int) -> Circuit:
    """Implement Z(2 pi m / 2^k) on qubit 0 via the adder and a catalyst bank.

    Layout: data qubit 0; k zeroed ancillas 1..k; k bank qubits k+1..2k
    prepared in the conjugated bank states.  Each set bit of m is fanned out
    onto the ancilla whose adder weight matches it; one adder application
    kicks the exact phase back onto the data qubit and restores both the
    ancillas and the bank.
    """
    if k < 1:
        raise CatalysisError("k must be >= 1")
    if not 1 <= m < (1 << k):
        raise CatalysisError(f"m must satisfy 1 <= m < 2^{k}")
    fanout = []
    for j in range(k):
        if (m >> j) & 1:
            # ancilla p = k-1-j carries weight 2^j in the MSB-first register
            fanout.append(CX(0, 1 + (k - 1 - j)))
    add = adder(k)
    shifted = tuple(
        Gate(g.kind, tuple(q + 1 for q in g.qubits), g.k, g.sign) for g in add.gates
    )
    gates = tuple(fanout) + shifted + tuple(reversed(fanout))
    preps = ("0",) * (k + 1) + catalyst_bank(k, sign=-1)
    return Circuit(2 * k + 1, gates, preps)


def verify_synth_small_phase(
    k: int, m: int, tower: TowerSpec | None = None
) -> VerificationReport:
    """Exact check of the synthesised phase, with ancilla/bank restoration."""
    tower = tower or make_clifford_t_tower()
    circ = synth_small_phase(k, m)
    rest = prepare(Circuit(circ.width - 1, (), circ.prep_tags()[1:]), tower)
    failures = []
    phase = tower.root_of_unity(k) ** m
    for b in (0, 1):
        inp = basis_state(1, b, tower).tensor(rest)
        got = apply_to_state(circ, inp)
        scale = phase if b else tower.one()
        want = StateVector(circ.width, tuple(scale * a for a in inp.amplitudes))
        if got != want:
            failures.append(f"data={b}")
    return VerificationReport(
        "synth_small_phase",
        not failures,
        {"k": k, "m": m, "phase": f"Z(2*pi*{m}/2^{k})"},
        failures,
    )


# -- gadget suite (used by the CLI and the acceptance tests) ------------------------


def run_gadget_suite(
    scope: str = "all", fault_hook: bool = False
) -> list[VerificationReport]:
    """Run the full catalysis verification suite; see the CLI ``verify-gadgets``."""
    tower = make_clifford_t_tower()
    deep = None
    reports: list[VerificationReport] = []

    def want(section: str) -> bool:
        return scope in ("all", section)

    if want("t"):
        reports.append(
            check_catalysis_identity(
                t_gadget(), Circuit(1, (T(0),)), ("T",), tower, extra_states=5,
                name="t_gadget",
            )
        )
    if want("phase"):
        for k in (2, 3, 4):
            tw = tower if k <= 3 else _deep_tower(4)
            reports.append(
                check_catalysis_identity(
                    phase_gadget(k),
                    Circuit(1, (PHASEK(k, 0),)),
                    phase_gadget_catalyst_tag(k),
                    tw,
                    name=f"phase_gadget(k={k})",
                )
            )
        for k, m in ((2, 1), (1, 2), (3, 2)):
            ctrl_target = Circuit(m + 1, (CPHASEK(k, *range(m + 1)),))
            reports.append(
                check_catalysis_identity(
                    controlled_phase_gadget(k, m),
                    ctrl_target,
                    phase_gadget_catalyst_tag(k),
                    tower,
                    name=f"controlled_phase_gadget(k={k}, m={m})",
                )
            )
    if want("ccz"):
        reports.append(verify_ccz_to_3t(tower))
    if want("adder"):
        for n in (1, 2, 3, 4):
            tw = tower if n <= 3 else _deep_tower(n)
            reports.append(verify_adder_catalysis(n, tw))
    if want("synth"):
        for k in (1, 2, 3, 4):
            tw = tower if k <= 3 else _deep_tower(k)
            for m in range(1, 1 << k):
                reports.append(verify_synth_small_phase(k, m, tw))
    if want("real"):
        reports.append(cs_encoding_vs_toffoli(tower))
    if fault_hook:
        reports.append(
            VerificationReport("injected_fault", False, {}, ["test hook"])
        )
    return reports


def _deep_tower(k: int) -> TowerSpec:
    from .ring import make_cyclotomic_tower

    return make_cyclotomic_tower(max(3, k))
