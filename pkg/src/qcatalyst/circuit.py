"""Gate-level circuit IR and exact statevector/unitary simulation.

The simulator is the oracle against which every gadget in
:mod:`qcatalyst.catalysis` is verified, so it performs no decompositions:
every gate acts exactly, with amplitudes in a :class:`~qcatalyst.ring.TowerSpec`
ring.  Qubit 0 is the leftmost / most significant position in bitstrings.

All but the Hadamard gate are *monomial* operators (they map each basis
state to a phase times a basis state), which keeps the exact simulation
cheap: only H mixes amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .ring import (
    Dyadic,
    RingElement,
    RingError,
    TowerSpec,
    make_clifford_t_tower,
    parse_ring,
    format_ring,
)


class CircuitError(Exception):
    """Structural error in a circuit (indices, arity, gate set)."""


class CircuitParseError(CircuitError):
    def __init__(self, line_no: int, msg: str):
        super().__init__(f"line {line_no}: {msg}")
        self.line_no = line_no


# gate kind -> arity; None means variadic (>= minimum given separately)
_FIXED_ARITY = {
    "x": 1, "y": 1, "z": 1, "s": 1, "sdg": 1, "t": 1, "tdg": 1, "h": 1,
    "cx": 2, "cz": 2, "cs": 2, "csdg": 2, "swap": 2,
    "ccz": 3, "ccx": 3,
    "phasek": 1,
}
_VARIADIC_MIN = {"mcx": 2, "cphasek": 1}


@dataclass(frozen=True)
class Gate:
    """A named gate applied to an ordered list of qubits.

    ``phasek``/``cphasek`` carry the extra parameter k, denoting the phase
    2*pi/2^k, and a sign selecting the gate or its adjoint.  For ``mcx`` and
    ``cphasek`` the last qubit is the target, the rest are controls.
    """

    kind: str
    qubits: tuple[int, ...]
    k: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.kind in _FIXED_ARITY:
            if len(self.qubits) != _FIXED_ARITY[self.kind]:
                raise CircuitError(
                    f"{self.kind} takes {_FIXED_ARITY[self.kind]} qubit(s), "
                    f"got {len(self.qubits)}"
                )
        elif self.kind in _VARIADIC_MIN:
            if len(self.qubits) < _VARIADIC_MIN[self.kind]:
                raise CircuitError(f"{self.kind} needs more qubits")
        else:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.kind} has repeated qubit indices")
        if self.kind in ("phasek", "cphasek"):
            if self.k < 1:
                raise CircuitError("phase exponent k must be >= 1")
            if self.sign not in (1, -1):
                raise CircuitError("phase sign must be +1 or -1")


def X(q): return Gate("x", (q,))
def Y(q): return Gate("y", (q,))
def Z(q): return Gate("z", (q,))
def S(q): return Gate("s", (q,))
def SDG(q): return Gate("sdg", (q,))
def T(q): return Gate("t", (q,))
def TDG(q): return Gate("tdg", (q,))
def H(q): return Gate("h", (q,))
def CX(c, t): return Gate("cx", (c, t))
def CZ(a, b): return Gate("cz", (a, b))
def CS(a, b): return Gate("cs", (a, b))
def CSDG(a, b): return Gate("csdg", (a, b))
def SWAP(a, b): return Gate("swap", (a, b))
def CCZ(a, b, c): return Gate("ccz", (a, b, c))
def CCX(a, b, t): return Gate("ccx", (a, b, t))
def MCX(*qs): return Gate("mcx", tuple(qs))
def PHASEK(k, q, sign=1): return Gate("phasek", (q,), k=k, sign=sign)
def CPHASEK(k, *qs, sign=1): return Gate("cphasek", tuple(qs), k=k, sign=sign)


# Preparation tags: "0" "1" "+" "-" "i" "-i" "T",
# ("zk", k, sign) for |Z(sign * 2 pi / 2^k)>, and "ccz0"/"ccz1"/"ccz2"
# marking the three consecutive qubits of a |CCZ> block.
PrepTag = object

GATESETS = {
    "clifford+t": frozenset(
        {"x", "y", "z", "s", "sdg", "h", "t", "tdg", "cx", "cz", "cs", "csdg", "swap"}
    ),
    "cs+h": frozenset({"cx", "cz", "cs", "h", "s", "sdg", "x", "z", "swap"}),
    "toffoli+h": frozenset({"ccx", "h", "x", "cx", "swap"}),
    "adder": frozenset({"x", "cx", "ccx", "mcx"}),
}


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    preps: tuple = ()  # empty means all-|0>
    gateset_tag: str | None = None

    def __post_init__(self):
        if self.width < 0:
            raise CircuitError("negative width")
        if self.preps and len(self.preps) != self.width:
            raise CircuitError("preparation list length differs from width")
        for pos, tag in enumerate(self.preps):
            if tag == "ccz0":
                if pos + 2 >= self.width or self.preps[pos + 1] != "ccz1" or self.preps[pos + 2] != "ccz2":
                    raise CircuitError("|CCZ> block must span three consecutive qubits")
        for g in self.gates:
            if any(q < 0 or q >= self.width for q in g.qubits):
                raise CircuitError(f"gate {g.kind} touches qubit outside width {self.width}")
        if self.gateset_tag is not None:
            allowed = GATESETS.get(self.gateset_tag)
            if allowed is None:
                raise CircuitError(f"unknown gate set {self.gateset_tag!r}")
            for g in self.gates:
                if g.kind not in allowed:
                    raise CircuitError(
                        f"gate {g.kind} is not in declared gate set {self.gateset_tag!r}"
                    )

    def prep_tags(self) -> tuple:
        return self.preps if self.preps else ("0",) * self.width

    def then(self, *gates: Gate) -> "Circuit":
        return replace(self, gates=self.gates + tuple(gates))

    def count(self, *kinds: str) -> int:
        return sum(1 for g in self.gates if g.kind in kinds)


@dataclass(frozen=True)
class StateVector:
    width: int
    amplitudes: tuple[RingElement, ...]

    def __post_init__(self):
        if len(self.amplitudes) != 1 << self.width:
            raise CircuitError("amplitude vector has wrong length")

    @property
    def tower(self) -> TowerSpec:
        return self.amplitudes[0].tower

    def inner(self, other: "StateVector") -> RingElement:
        """<self|other>, exact."""
        if self.width != other.width:
            raise CircuitError("width mismatch in inner product")
        acc = self.tower.zero()
        for a, b in zip(self.amplitudes, other.amplitudes):
            acc = acc + a.conj() * b
        return acc

    def norm_sq(self) -> RingElement:
        return self.inner(self)

    def tensor(self, other: "StateVector") -> "StateVector":
        amps = tuple(a * b for a in self.amplitudes for b in other.amplitudes)
        return StateVector(self.width + other.width, amps)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, StateVector)
            and self.width == other.width
            and self.amplitudes == other.amplitudes
        )


@dataclass(frozen=True)
class Observable:
    """A Pauli string, one letter of IXYZ per qubit."""

    pauli_string: str

    def __post_init__(self):
        if not all(p in "IXYZ" for p in self.pauli_string):
            raise CircuitError(f"bad Pauli string {self.pauli_string!r}")

    def __len__(self) -> int:
        return len(self.pauli_string)

    def extend(self, n_extra: int) -> "Observable":
        return Observable(self.pauli_string + "I" * n_extra)


# -- gate semantics -----------------------------------------------------------


def _phase_root(tower: TowerSpec, k: int, sign: int) -> RingElement:
    r = tower.root_of_unity(k)
    return r if sign == 1 else r.conj()


def _monomial_action(g: Gate, tower: TowerSpec):
    """Return f(bits) -> (new_bits, phase) for monomial gates, else None."""
    one = tower.one()
    if g.kind == "x":
        return lambda b: ((1 - b[0],), one)
    if g.kind == "y":
        i = tower.imag_unit()
        mi = -i
        return lambda b: ((1 - b[0],), i if b[0] == 0 else mi)
    if g.kind in ("z", "s", "sdg", "t", "tdg", "phasek"):
        if g.kind == "z":
            ph = tower.from_dyadic(-1)
        elif g.kind == "s":
            ph = tower.imag_unit()
        elif g.kind == "sdg":
            ph = -tower.imag_unit()
        elif g.kind == "t":
            ph = tower.root_of_unity(3)
        elif g.kind == "tdg":
            ph = tower.root_of_unity(3).conj()
        else:
            ph = _phase_root(tower, g.k, g.sign)
        return lambda b: (b, ph if b[0] else one)
    if g.kind == "cx":
        return lambda b: ((b[0], b[1] ^ b[0]), one)
    if g.kind == "swap":
        return lambda b: ((b[1], b[0]), one)
    if g.kind in ("cz", "cs", "csdg", "ccz", "cphasek"):
        if g.kind == "cz":
            ph = tower.from_dyadic(-1)
        elif g.kind == "cs":
            ph = tower.imag_unit()
        elif g.kind == "csdg":
            ph = -tower.imag_unit()
        elif g.kind == "ccz":
            ph = tower.from_dyadic(-1)
        else:
            ph = _phase_root(tower, g.k, g.sign)
        return lambda b: (b, ph if all(b) else one)
    if g.kind == "ccx":
        return lambda b: ((b[0], b[1], b[2] ^ (b[0] & b[1])), one)
    if g.kind == "mcx":
        def act(b):
            if all(b[:-1]):
                return b[:-1] + (1 - b[-1],), one
            return b, one
        return act
    return None  # h


def gate_matrix(g: Gate, tower: TowerSpec) -> list[list[RingElement]]:
    """Exact 2^m x 2^m matrix of a gate (m = number of touched qubits)."""
    m = len(g.qubits)
    dim = 1 << m
    if g.kind == "h":
        r = tower.sqrt2_over_2()
        return [[r, r], [r, -r]]
    act = _monomial_action(g, tower)
    zero = tower.zero()
    mat = [[zero] * dim for _ in range(dim)]
    for col in range(dim):
        bits = tuple((col >> (m - 1 - j)) & 1 for j in range(m))
        new_bits, phase = act(bits)
        row = 0
        for b in new_bits:
            row = row << 1 | b
        mat[row][col] = phase
    return mat


def _apply_gate(amps: list[RingElement], width: int, g: Gate, tower: TowerSpec):
    shifts = [width - 1 - q for q in g.qubits]
    if g.kind == "h":
        r = tower.sqrt2_over_2()
        sh = shifts[0]
        bit = 1 << sh
        for idx in range(len(amps)):
            if idx & bit:
                continue
            a0, a1 = amps[idx], amps[idx | bit]
            amps[idx] = (a0 + a1) * r
            amps[idx | bit] = (a0 - a1) * r
        return amps
    act = _monomial_action(g, tower)
    out = [None] * len(amps)
    one = tower.one()
    for idx, amp in enumerate(amps):
        bits = tuple((idx >> sh) & 1 for sh in shifts)
        new_bits, phase = act(bits)
        new_idx = idx
        for sh, b_old, b_new in zip(shifts, bits, new_bits):
            if b_old != b_new:
                new_idx ^= 1 << sh
        out[new_idx] = amp if phase is one else amp * phase
    return out


def _single_qubit_state(tag, tower: TowerSpec) -> list[RingElement]:
    one, zero = tower.one(), tower.zero()
    if tag == "0":
        return [one, zero]
    if tag == "1":
        return [zero, one]
    r = tower.sqrt2_over_2()
    if tag == "+":
        return [r, r]
    if tag == "-":
        return [r, -r]
    if tag == "i":
        return [r, r * tower.imag_unit()]
    if tag == "-i":
        return [r, -(r * tower.imag_unit())]
    if tag == "T":
        return [r, r * tower.root_of_unity(3)]
    if isinstance(tag, tuple) and tag[0] == "zk":
        _, k, sign = tag
        return [r, r * _phase_root(tower, k, sign)]
    raise CircuitError(f"unknown preparation tag {tag!r}")


def _ccz_block_state(tower: TowerSpec) -> list[RingElement]:
    r = tower.sqrt2_over_2()
    scale = r * r * r
    return [scale if i != 7 else -scale for i in range(8)]


def prepare(c: Circuit, tower: TowerSpec) -> StateVector:
    """The initial state of a circuit, before any gate."""
    amps = [tower.one()]
    tags = c.prep_tags()
    pos = 0
    while pos < c.width:
        if tags[pos] == "ccz0":
            block = _ccz_block_state(tower)
            pos += 3
        else:
            block = _single_qubit_state(tags[pos], tower)
            pos += 1
        amps = [a * b for a in amps for b in block]
    return StateVector(c.width, tuple(amps))


def simulate(c: Circuit, tower: TowerSpec | None = None) -> StateVector:
    """Exact statevector after applying the circuit to its prepared input."""
    tower = tower or make_clifford_t_tower()
    amps = list(prepare(c, tower).amplitudes)
    for g in c.gates:
        amps = _apply_gate(amps, c.width, g, tower)
    return StateVector(c.width, tuple(amps))


def apply_to_state(c: Circuit, psi: StateVector) -> StateVector:
    """Apply a circuit's gates (preparations ignored) to an existing state."""
    if psi.width != c.width:
        raise CircuitError("state width differs from circuit width")
    amps = list(psi.amplitudes)
    tower = psi.tower
    for g in c.gates:
        amps = _apply_gate(amps, c.width, g, tower)
    return StateVector(c.width, tuple(amps))


def basis_state(width: int, index: int, tower: TowerSpec) -> StateVector:
    amps = [tower.zero()] * (1 << width)
    amps[index] = tower.one()
    return StateVector(width, tuple(amps))


def unitary_of(
    c: Circuit, tower: TowerSpec | None = None, cap: int = 10
) -> list[list[RingElement]]:
    """Exact unitary of the gate list; column j is the image of basis state j."""
    tower = tower or make_clifford_t_tower()
    if c.width > cap:
        raise CircuitError(f"width {c.width} exceeds unitary cap {cap}")
    dim = 1 << c.width
    cols = []
    for j in range(dim):
        cols.append(apply_to_state(c, basis_state(c.width, j, tower)).amplitudes)
    return [[cols[j][r] for j in range(dim)] for r in range(dim)]


def pauli_apply(psi: StateVector, obs: Observable) -> StateVector:
    """P|psi> for a Pauli string, exactly."""
    if len(obs) != psi.width:
        raise CircuitError("observable length differs from state width")
    amps = list(psi.amplitudes)
    tower = psi.tower
    for q, p in enumerate(obs.pauli_string):
        if p == "I":
            continue
        amps = _apply_gate(amps, psi.width, Gate(p.lower(), (q,)), tower)
    return StateVector(psi.width, tuple(amps))


def expectation(psi: StateVector, obs: Observable) -> RingElement:
    """<psi|P|psi>; asserts the result is real and returns it."""
    val = psi.inner(pauli_apply(psi, obs))
    if not val.is_real():
        raise CircuitError(f"expectation value {val} is not real")
    return val


def pauli_measurement_basis_change(psi: StateVector, obs: Observable) -> StateVector:
    """Rotate the state so measuring ``obs`` becomes a Z-basis parity read."""
    out = psi
    for q, p in enumerate(obs.pauli_string):
        if p == "X":
            out = StateVector(
                out.width,
                tuple(_apply_gate(list(out.amplitudes), out.width, H(q), out.tower)),
            )
        elif p == "Y":
            amps = _apply_gate(list(out.amplitudes), out.width, SDG(q), out.tower)
            amps = _apply_gate(amps, out.width, H(q), out.tower)
            out = StateVector(out.width, tuple(amps))
    return out


def marginal_distribution(psi: StateVector, keep) -> dict[str, RingElement]:
    """Exact Born probabilities of the kept qubits, marginalising the rest."""
    keep = sorted(set(keep))
    if any(q < 0 or q >= psi.width for q in keep):
        raise CircuitError("kept qubit outside state width")
    probs: dict[str, RingElement] = {}
    for idx, amp in enumerate(psi.amplitudes):
        if amp.is_zero():
            continue
        key = "".join(str((idx >> (psi.width - 1 - q)) & 1) for q in keep)
        p = amp.conj() * amp
        probs[key] = probs.get(key, psi.tower.zero()) + p
    return {k: v for k, v in probs.items() if not v.is_zero()}


# -- matrix helpers (exact, list-of-lists over RingElement) -------------------


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    zero = a[0][0].tower.zero()
    out = [[zero] * p for _ in range(n)]
    for r in range(n):
        ar = a[r]
        for k in range(m):
            c = ar[k]
            if c.is_zero():
                continue
            bk = b[k]
            orow = out[r]
            for j in range(p):
                if not bk[j].is_zero():
                    orow[j] = orow[j] + c * bk[j]
    return out

def mat_identity(dim: int, tower: TowerSpec):
    one, zero = tower.one(), tower.zero()
    return [[one if r == c else zero for c in range(dim)] for r in range(dim)]

def mat_transpose(a):
    return [list(row) for row in zip(*a)]

def mat_dagger(a):
    return [[a[c][r].conj() for c in range(len(a))] for r in range(len(a[0]))]

def mat_eq(a, b) -> bool:
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))

def mat_scale(a, s: RingElement):
    return [[s * v for v in row] for row in a]

def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]

def mat_kron(a, b):
    return [
        [av * bv for av in arow for bv in brow]
        for arow in a
        for brow in b
    ]

def is_unitary(a) -> bool:
    tower = a[0][0].tower
    return mat_eq(mat_mul(mat_dagger(a), a), mat_identity(len(a), tower))


# -- text format --------------------------------------------------------------

_GATE_WORDS = set(_FIXED_ARITY) | set(_VARIADIC_MIN)


def parse_circuit(text: str, gateset_tag: str | None = None) -> Circuit:
    """Parse the line-based circuit format (see README for the grammar)."""
    width = None
    preps: dict[int, object] = {}
    gates: list[Gate] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        word = parts[0].lower()
        try:
            if word == "qubits":
                if width is not None:
                    raise CircuitParseError(line_no, "duplicate qubits line")
                width = int(parts[1])
                continue
            if width is None:
                raise CircuitParseError(line_no, "qubits line must come first")
            if word == "prep":
                q = int(parts[1])
                tag = parts[2]
                if tag == "zk":
                    k = int(parts[3])
                    if k == 0:
                        raise CircuitParseError(line_no, "zk exponent must be nonzero")
                    preps[q] = ("zk", abs(k), 1 if k > 0 else -1)
                elif tag == "ccz":
                    preps[q] = "ccz0"
                    preps[q + 1] = "ccz1"
                    preps[q + 2] = "ccz2"
                elif tag in ("0", "1", "+", "-", "i", "-i", "T"):
                    preps[q] = tag
                else:
                    raise CircuitParseError(line_no, f"unknown prep tag {tag!r}")
                continue
            if word in ("phasek", "cphasek"):
                k = int(parts[1])
                qs = tuple(int(p) for p in parts[2:])
                sign = 1
                if k < 0:
                    k, sign = -k, -1
                gates.append(Gate(word, qs, k=k, sign=sign))
                continue
            if word in _GATE_WORDS:
                qs = tuple(int(p) for p in parts[1:])
                gates.append(Gate(word, qs))
                continue
            raise CircuitParseError(line_no, f"unknown directive {word!r}")
        except CircuitParseError:
            raise
        except (CircuitError, ValueError, IndexError) as exc:
            raise CircuitParseError(line_no, str(exc)) from exc
    if width is None:
        raise CircuitParseError(0, "missing qubits line")
    prep_tuple = ()
    if preps:
        prep_tuple = tuple(preps.get(q, "0") for q in range(width))
    try:
        return Circuit(width, tuple(gates), prep_tuple, gateset_tag)
    except CircuitError as exc:
        raise CircuitParseError(0, str(exc)) from exc


def serialize_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.width}"]
    tags = c.prep_tags()
    q = 0
    while q < c.width:
        tag = tags[q]
        if tag == "ccz0":
            lines.append(f"prep {q} ccz")
            q += 3
            continue
        if isinstance(tag, tuple):
            _, k, sign = tag
            lines.append(f"prep {q} zk {k * sign}")
        elif tag != "0":
            lines.append(f"prep {q} {tag}")
        q += 1
    for g in c.gates:
        if g.kind in ("phasek", "cphasek"):
            lines.append(
                f"{g.kind} {g.k * g.sign} " + " ".join(str(q) for q in g.qubits)
            )
        else:
            lines.append(f"{g.kind} " + " ".join(str(q) for q in g.qubits))
    return "\n".join(lines) + "\n"


def format_state(psi: StateVector) -> str:
    """Human-readable amplitudes: exact ring text plus float embedding."""
    lines = []
    for idx, amp in enumerate(psi.amplitudes):
        if amp.is_zero():
            continue
        bits = format(idx, f"0{psi.width}b") if psi.width else ""
        lines.append(f"|{bits}>  {format_ring(amp)}  ~ {amp.embed_float():.12g}")
    return "\n".join(lines)
