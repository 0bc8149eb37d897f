"""ZH diagrams with exact ring-valued tensor semantics.

A diagram is an open undirected multigraph.  Node kinds:

  * ``z``    Z-spider; tensor is 1 when all incident wires agree, else 0.
  * ``h``    H-box with a ring label a; tensor entry is a when all incident
             wires are 1, else 1.  A 0-ary H-box is the scalar a, which is
             how exact global scalars are carried around.
  * ``star`` the scalar 1/2, always degree 0.
  * ``b``    boundary vertex, degree exactly 1, listed in the input or the
             output order.

Evaluation is a sparse variable-elimination contraction; the result is an
exact matrix of ring elements with 2^|out| rows and 2^|in| columns, qubit 0
most significant on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..ring import RingElement, TowerSpec, format_ring, make_clifford_t_tower, parse_ring
from ..circuit import Circuit, Gate


class ZhError(Exception):
    pass


class EvalCapError(ZhError):
    """A size cap was exceeded during evaluation."""


_KINDS = ("z", "h", "star", "b")


@dataclass(frozen=True)
class ZhDiagram:
    tower: TowerSpec
    nodes: dict  # id -> (kind, label: RingElement | None)
    edges: tuple  # multiset of (a, b) with a <= b; self-loops allowed
    inputs: tuple
    outputs: tuple

    def __post_init__(self):
        deg = {n: 0 for n in self.nodes}
        for a, b in self.edges:
            if a not in self.nodes or b not in self.nodes:
                raise ZhError(f"edge ({a}, {b}) references a missing node")
            deg[a] += 1
            deg[b] += 1
        bset = {n for n, (k, _) in self.nodes.items() if k == "b"}
        ordered = self.inputs + self.outputs
        if len(set(ordered)) != len(ordered) or set(ordered) != bset:
            raise ZhError("boundary lists must cover each boundary node exactly once")
        for n, (k, label) in self.nodes.items():
            if k not in _KINDS:
                raise ZhError(f"unknown node kind {k!r}")
            if k == "b" and deg[n] != 1:
                raise ZhError(f"boundary node {n} has degree {deg[n]}, want 1")
            if k == "star" and deg[n] != 0:
                raise ZhError(f"star node {n} must have degree 0")
            if k == "h":
                if not isinstance(label, RingElement) or label.tower is not self.tower:
                    raise ZhError(f"H-box {n} needs a label from the diagram tower")
            elif label is not None:
                raise ZhError(f"node {n} of kind {k} cannot carry a label")

    def degree(self, n: int) -> int:
        return sum((a == n) + (b == n) for a, b in self.edges)

    def neighbours(self, n: int):
        out = []
        for a, b in self.edges:
            if a == n:
                out.append(b)
            if b == n:
                out.append(a)
        return out

    def kind(self, n: int) -> str:
        return self.nodes[n][0]

    def label(self, n: int) -> RingElement | None:
        return self.nodes[n][1]

    def internal_nodes(self):
        return [n for n, (k, _) in sorted(self.nodes.items()) if k in ("z", "h")]

    def h_boxes_with_label(self, a: RingElement):
        return [
            n for n, (k, lab) in sorted(self.nodes.items()) if k == "h" and lab == a
        ]

    def fresh_id(self) -> int:
        return max(self.nodes, default=-1) + 1


class DiagramBuilder:
    """Mutable helper for assembling a ZhDiagram."""

    def __init__(self, tower: TowerSpec | None = None):
        self.tower = tower or make_clifford_t_tower()
        self._nodes = {}
        self._edges = []
        self._inputs = []
        self._outputs = []
        self._next = 0

    def _add(self, kind, label=None) -> int:
        n = self._next
        self._next += 1
        self._nodes[n] = (kind, label)
        return n

    def z(self) -> int:
        return self._add("z")

    def h(self, label) -> int:
        if not isinstance(label, RingElement):
            label = self.tower.from_dyadic(label)
        return self._add("h", label)

    def star(self) -> int:
        return self._add("star")

    def edge(self, a: int, b: int) -> None:
        self._edges.append((min(a, b), max(a, b)))

    def input(self, attach: int) -> int:
        b = self._add("b")
        self._inputs.append(b)
        self.edge(b, attach)
        return b

    def output(self, attach: int) -> int:
        b = self._add("b")
        self._outputs.append(b)
        self.edge(b, attach)
        return b

    def wire(self) -> tuple[int, int]:
        """A bare input-output wire; returns the two boundary ids."""
        i = self._add("b")
        o = self._add("b")
        self._inputs.append(i)
        self._outputs.append(o)
        self.edge(i, o)
        return i, o

    def x_node(self, legs: int) -> int:
        """An exact X-spider (parity tensor): Z-spider with an H(-1) box on
        every leg plus one star; returns the id whose legs are the outer
        H-box stubs, exposed via x_leg."""
        core = self.z()
        self.star()
        self._x_stubs = getattr(self, "_x_stubs", {})
        stubs = []
        minus_one = self.tower.from_dyadic(-1)
        for _ in range(legs):
            hb = self._add("h", minus_one)
            self.edge(core, hb)
            stubs.append(hb)
        self._x_stubs[core] = stubs
        return core

    def x_leg(self, x: int, j: int) -> int:
        return self._x_stubs[x][j]

    def build(self) -> ZhDiagram:
        return ZhDiagram(
            self.tower,
            dict(self._nodes),
            tuple(self._edges),
            tuple(self._inputs),
            tuple(self._outputs),
        )


# -- evaluation -----------------------------------------------------------------


def _node_entries(kind, label, n_vars, tower):
    """Local tensor of a node over its distinct incident edge variables."""
    if kind == "z":
        if n_vars == 0:
            return {(): tower.from_dyadic(2)}
        return {(0,) * n_vars: tower.one(), (1,) * n_vars: tower.one()}
    # h-box: label on the all-ones assignment, 1 elsewhere; 0-ary = label
    entries = {}
    for a in range(1 << n_vars):
        bits = tuple((a >> (n_vars - 1 - i)) & 1 for i in range(n_vars))
        entries[bits] = label if all(bits) or n_vars == 0 else tower.one()
    return entries


def eval_tensor(
    d: ZhDiagram,
    boundary_cap: int = 12,
    node_cap: int = 200,
    var_cap: int = 22,
):
    """Exact matrix of the diagram: 2^|out| rows by 2^|in| columns."""
    tower = d.tower
    n_in, n_out = len(d.inputs), len(d.outputs)
    if n_in + n_out > boundary_cap:
        raise EvalCapError(f"{n_in + n_out} boundary wires exceed cap {boundary_cap}")
    internal = d.internal_nodes()
    if len(internal) > node_cap:
        raise EvalCapError(f"{len(internal)} internal nodes exceed cap {node_cap}")

    scalar = tower.one()
    for n, (k, _) in d.nodes.items():
        if k == "star":
            scalar = scalar.half()

    # incidence: node -> list of edge indices (self-loop edge listed twice)
    incidence = {n: [] for n in d.nodes}
    boundary_edge = {}
    for e, (a, b) in enumerate(d.edges):
        incidence[a].append(e)
        if b != a:
            incidence[b].append(e)
        for n in (a, b):
            if d.kind(n) == "b":
                boundary_edge[n] = e
    keeps = set(boundary_edge.values())
    remaining = {
        e: sum(1 for n in internal for ee in incidence[n] if ee == e)
        for e in range(len(d.edges))
    }

    open_vars: list[int] = []
    acc = {(): tower.one()}
    for n in internal:
        legs = incidence[n]
        dvars = sorted(set(legs))
        entries = _node_entries(d.kind(n), d.label(n), len(dvars), tower)
        shared_pos = [
            (i, open_vars.index(v)) for i, v in enumerate(dvars) if v in open_vars
        ]
        new_idx = [i for i, v in enumerate(dvars) if v not in open_vars]
        if len(open_vars) + len(new_idx) > var_cap:
            raise EvalCapError("contraction frontier exceeds the variable cap")
        new_open = open_vars + [dvars[i] for i in new_idx]
        nxt = {}
        for key, val in acc.items():
            for bits, tval in entries.items():
                if tval.is_zero() or val.is_zero():
                    continue
                if any(bits[i] != key[p] for i, p in shared_pos):
                    continue
                nkey = key + tuple(bits[i] for i in new_idx)
                prod = val * tval
                if nkey in nxt:
                    nxt[nkey] = nxt[nkey] + prod
                else:
                    nxt[nkey] = prod
        open_vars, acc = new_open, nxt
        for v in set(legs):
            remaining[v] -= sum(1 for ee in legs if ee == v)
        done = [
            p for p, v in enumerate(open_vars)
            if remaining[v] == 0 and v not in keeps
        ]
        if done:
            keep_pos = [p for p in range(len(open_vars)) if p not in done]
            merged = {}
            for key, val in acc.items():
                nkey = tuple(key[p] for p in keep_pos)
                merged[nkey] = merged[nkey] + val if nkey in merged else val
            open_vars = [open_vars[p] for p in keep_pos]
            acc = merged

    # remaining open variables all touch boundaries
    var_pos = {v: p for p, v in enumerate(open_vars)}
    rows, cols = 1 << n_out, 1 << n_in
    zero = tower.zero()
    out = [[zero for _ in range(cols)] for _ in range(rows)]
    for r in range(rows):
        for c in range(cols):
            want = {}
            ok = True
            for j, bnode in enumerate(d.inputs):
                bit = (c >> (n_in - 1 - j)) & 1
                v = boundary_edge[bnode]
                if want.setdefault(v, bit) != bit:
                    ok = False
                    break
            if ok:
                for j, bnode in enumerate(d.outputs):
                    bit = (r >> (n_out - 1 - j)) & 1
                    v = boundary_edge[bnode]
                    if want.setdefault(v, bit) != bit:
                        ok = False
                        break
            if not ok:
                continue
            key = tuple(want.get(v, 0) for v in open_vars)
            # edges between two boundaries may carry vars not in open_vars
            # only if they never met an internal node; those are in keeps
            missing = [v for v in want if v not in var_pos]
            if missing:
                # a boundary-boundary wire: its variable was never
                # introduced; consistency already enforced via want
                key = tuple(want.get(v, 0) for v in open_vars)
            val = acc.get(key)
            if val is not None:
                out[r][c] = val * scalar
    return out


def semantic_equal(d1: ZhDiagram, d2: ZhDiagram, **caps) -> bool:
    """Exact equality of the evaluated matrices."""
    if len(d1.inputs) != len(d2.inputs) or len(d1.outputs) != len(d2.outputs):
        return False
    m1, m2 = eval_tensor(d1, **caps), eval_tensor(d2, **caps)
    return all(a == b for r1, r2 in zip(m1, m2) for a, b in zip(r1, r2))


# -- composition ------------------------------------------------------------------


def _relabel(d: ZhDiagram, offset: int):
    nodes = {n + offset: v for n, v in d.nodes.items()}
    edges = tuple((a + offset, b + offset) for a, b in d.edges)
    return nodes, edges, tuple(n + offset for n in d.inputs), tuple(
        n + offset for n in d.outputs
    )


def tensor(d1: ZhDiagram, d2: ZhDiagram) -> ZhDiagram:
    """Disjoint union; inputs and outputs concatenate, d1 first."""
    if d1.tower is not d2.tower:
        raise ZhError("tensor requires a shared tower")
    off = d1.fresh_id()
    n2, e2, i2, o2 = _relabel(d2, off)
    return ZhDiagram(
        d1.tower,
        {**d1.nodes, **n2},
        d1.edges + e2,
        d1.inputs + i2,
        d1.outputs + o2,
    )


def compose(d1: ZhDiagram, d2: ZhDiagram) -> ZhDiagram:
    """Plug d1's outputs into d2's inputs (diagram order = execution order).

    eval(compose(d1, d2)) = eval(d2) . eval(d1).  Each junction becomes a
    fresh degree-2 Z-spider, which is the identity wire.
    """
    if d1.tower is not d2.tower:
        raise ZhError("compose requires a shared tower")
    if len(d1.outputs) != len(d2.inputs):
        raise ZhError(
            f"arity mismatch: {len(d1.outputs)} outputs vs {len(d2.inputs)} inputs"
        )
    off = d1.fresh_id()
    n2, e2, i2, o2 = _relabel(d2, off)
    nodes = {**d1.nodes, **n2}
    edges = list(d1.edges + e2)

    def reattach(bnode, to):
        for idx, (a, b) in enumerate(edges):
            if a == bnode:
                edges[idx] = (min(b, to), max(b, to))
                return
            if b == bnode:
                edges[idx] = (min(a, to), max(a, to))
                return
        raise ZhError("boundary node has no edge")

    nid = max(nodes, default=-1) + 1
    for o, i in zip(d1.outputs, i2):
        glue = nid
        nid += 1
        nodes[glue] = ("z", None)
        reattach(o, glue)
        reattach(i, glue)
        del nodes[o]
        del nodes[i]
    return ZhDiagram(d1.tower, nodes, tuple(edges), d1.inputs, o2)


# -- serialization -----------------------------------------------------------------


def serialize_diagram(d: ZhDiagram) -> str:
    lines = []
    for n, (k, label) in sorted(d.nodes.items()):
        if k == "h":
            lines.append(f"node {n} h {format_ring(label)}")
        else:
            lines.append(f"node {n} {k}")
    for a, b in d.edges:
        lines.append(f"edge {a} {b}")
    if d.inputs:
        lines.append("in " + " ".join(str(n) for n in d.inputs))
    if d.outputs:
        lines.append("out " + " ".join(str(n) for n in d.outputs))
    return "\n".join(lines) + "\n"


def parse_diagram(text: str, tower: TowerSpec | None = None) -> ZhDiagram:
    tower = tower or make_clifford_t_tower()
    nodes, edges, inputs, outputs = {}, [], [], []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "node":
                nid, kind = int(parts[1]), parts[2]
                if kind == "h":
                    label = parse_ring(" ".join(parts[3:]), tower)
                    nodes[nid] = ("h", label)
                elif kind in ("z", "star", "b") and len(parts) == 3:
                    nodes[nid] = (kind, None)
                else:
                    raise ZhError(f"bad node kind {kind!r}")
            elif parts[0] == "edge" and len(parts) == 3:
                a, b = int(parts[1]), int(parts[2])
                edges.append((min(a, b), max(a, b)))
            elif parts[0] == "in":
                inputs.extend(int(p) for p in parts[1:])
            elif parts[0] == "out":
                outputs.extend(int(p) for p in parts[1:])
            else:
                raise ZhError(f"unrecognised directive {parts[0]!r}")
        except ZhError:
            raise
        except Exception as exc:
            raise ZhError(f"line {ln}: {exc}") from exc
    return ZhDiagram(tower, nodes, tuple(edges), tuple(inputs), tuple(outputs))


# -- basic constructors ---------------------------------------------------------------


def wire_diagram(n: int = 1, tower: TowerSpec | None = None) -> ZhDiagram:
    b = DiagramBuilder(tower)
    for _ in range(n):
        b.wire()
    return b.build()


def z_spider_diagram(n_in: int, n_out: int, tower: TowerSpec | None = None) -> ZhDiagram:
    b = DiagramBuilder(tower)
    z = b.z()
    for _ in range(n_in):
        b.input(z)
    for _ in range(n_out):
        b.output(z)
    return b.build()


def h_box_diagram(label, n_in: int, n_out: int, tower: TowerSpec | None = None) -> ZhDiagram:
    b = DiagramBuilder(tower)
    h = b.h(label)
    for _ in range(n_in):
        b.input(h)
    for _ in range(n_out):
        b.output(h)
    return b.build()


def h_state(label, tower: TowerSpec | None = None) -> ZhDiagram:
    """The state (1, label) as a unary H-box with one output."""
    return h_box_diagram(label, 0, 1, tower)


def x_spider_diagram(n_in: int, n_out: int, tower: TowerSpec | None = None) -> ZhDiagram:
    """Exact X-spider (even-parity tensor): Z-spider dressed with H(-1)
    boxes on every leg plus one star."""
    b = DiagramBuilder(tower)
    x = b.x_node(n_in + n_out)
    for j in range(n_in):
        b.input(b.x_leg(x, j))
    for j in range(n_out):
        b.output(b.x_leg(x, n_in + j))
    return b.build()


def state_zero(tower: TowerSpec | None = None) -> ZhDiagram:
    return h_state(0, tower)


def state_plus(tower: TowerSpec | None = None) -> ZhDiagram:
    return h_state(1, tower)


def state_one(tower: TowerSpec | None = None) -> ZhDiagram:
    """|1> = NOT applied to |0>, spelled with exact scalars."""
    b = DiagramBuilder(tower)
    hs = b.h(-1)
    z = b.z()
    b.edge(hs, z)
    hb = b.h(-1)
    b.edge(z, hb)
    b.star()
    b.output(hb)
    return b.build()


# -- gate diagrams ----------------------------------------------------------------------


def phase_gate_diagram(a, tower: TowerSpec | None = None) -> ZhDiagram:
    """diag(1, a): Z-spider with a unary H(a) box; exact, no scalar."""
    b = DiagramBuilder(tower)
    z = b.z()
    hb = b.h(a)
    b.edge(z, hb)
    b.input(z)
    b.output(z)
    return b.build()


def x_gate_diagram(tower: TowerSpec | None = None) -> ZhDiagram:
    """NOT gate: H(-1) conjugation of diag(1, -1) with one star."""
    b = DiagramBuilder(tower)
    h1 = b.h(-1)
    z = b.z()
    hp = b.h(-1)
    h2 = b.h(-1)
    b.edge(h1, z)
    b.edge(z, hp)
    b.edge(z, h2)
    b.star()
    b.input(h1)
    b.output(h2)
    return b.build()


def cx_diagram(tower: TowerSpec | None = None) -> ZhDiagram:
    """CNOT: Z-spider on the control wired to an exact X-spider on the target."""
    b = DiagramBuilder(tower)
    zc = b.z()
    x = b.x_node(3)
    b.edge(zc, b.x_leg(x, 2))
    b.input(zc)
    b.input(b.x_leg(x, 0))
    b.output(zc)
    b.output(b.x_leg(x, 1))
    return b.build()


def cz_diagram(label=None, tower: TowerSpec | None = None) -> ZhDiagram:
    """CZ(alpha)-style gate: two Z-spiders joined by a binary H-box.

    label -1 gives CZ, label i gives CS, a 2^k-th root gives the
    controlled Z(2 pi / 2^k).
    """
    b = DiagramBuilder(tower)
    if label is None:
        label = -1
    za, zb_ = b.z(), b.z()
    hb = b.h(label)
    b.edge(za, hb)
    b.edge(zb_, hb)
    b.input(za)
    b.input(zb_)
    b.output(za)
    b.output(zb_)
    return b.build()


def controlled_phase_diagram(a, controls: int, tower: TowerSpec | None = None) -> ZhDiagram:
    """diag(1,...,1,a) on controls+1 wires: spiders joined by one H(a) box."""
    b = DiagramBuilder(tower)
    hb = b.h(a)
    for _ in range(controls + 1):
        z = b.z()
        b.edge(z, hb)
        b.input(z)
        b.output(z)
    return b.build()


def ccz_diagram(tower: TowerSpec | None = None) -> ZhDiagram:
    return controlled_phase_diagram(-1, 2, tower)


def ccx_diagram(tower: TowerSpec | None = None) -> ZhDiagram:
    """Toffoli: CCZ with H(-1) conjugation on the target plus one star."""
    b = DiagramBuilder(tower)
    hb = b.h(-1)
    z1, z2, zt = b.z(), b.z(), b.z()
    for z in (z1, z2, zt):
        b.edge(z, hb)
    hin = b.h(-1)
    hout = b.h(-1)
    b.edge(hin, zt)
    b.edge(zt, hout)
    b.star()
    b.input(z1)
    b.input(z2)
    b.input(hin)
    b.output(z1)
    b.output(z2)
    b.output(hout)
    return b.build()


def h_gate_diagram(tower: TowerSpec | None = None) -> ZhDiagram:
    """Hadamard as a binary H(-1) box with the exact sqrt(2)/2 scalar box.

    Requires a tower containing 1/sqrt(2) (e.g. the Clifford+T tower).
    """
    b = DiagramBuilder(tower)
    hb = b.h(-1)
    b.h(b.tower.sqrt2_over_2())
    b.input(hb)
    b.output(hb)
    return b.build()


def h_box_euler(a, tower: TowerSpec | None = None) -> ZhDiagram:
    """Euler-style decomposition of the binary H(a^2) box.

    diag-phase(a) on each leg around an X-spider loaded with a conj(a)
    state; exact for unit-modulus tower labels (a * conj(a) = 1).
    """
    tower = tower or make_clifford_t_tower()
    if not isinstance(a, RingElement):
        a = tower.from_dyadic(a)
    if a.is_zero() or (a * a.conj()) != tower.one():
        raise ZhError("Euler decomposition needs a unit-modulus label")
    b = DiagramBuilder(tower)
    z1, z2 = b.z(), b.z()
    h1, h2 = b.h(a), b.h(a)
    b.edge(z1, h1)
    b.edge(z2, h2)
    x = b.x_node(3)
    b.edge(z1, b.x_leg(x, 0))
    b.edge(z2, b.x_leg(x, 1))
    hc = b.h(a.conj())
    b.edge(hc, b.x_leg(x, 2))
    b.input(z1)
    b.output(z2)
    return b.build()


_PHASE_GATES = {"s": ("i", 2), "t": ("w", 3)}


def circuit_to_diagram(c: Circuit, tower: TowerSpec | None = None):
    """Translate a circuit to a diagram; returns (diagram, scalar) with
    unitary_of(c) = scalar * eval_tensor(diagram) exactly.

    Supported gates: X, Z, S, T, H, CX, CZ, CS, CCZ, CCX, PhaseK; every
    gate except H translates exactly, and each H contributes one factor of
    sqrt(2)/2 to the recorded scalar.
    """
    tower = tower or make_clifford_t_tower()
    d = wire_diagram(c.width, tower)
    scalar = tower.one()

    def on_wires(gd: ZhDiagram, qubits):
        nonlocal d
        layer = DiagramBuilder(tower)
        zs = [layer.z() for _ in range(c.width)]
        for z in zs:
            layer.input(z)
        # splice the gate diagram in with the given qubits as its wires
        sub_nodes, sub_edges, sub_in, sub_out = _relabel(gd, layer._next)
        layer._next = max(sub_nodes) + 1
        layer._nodes.update(sub_nodes)
        layer._edges.extend(sub_edges)
        edges = layer._edges
        for j, q in enumerate(qubits):
            # connect wire q's z-spider to the sub-diagram input j
            bnode = sub_in[j]
            (other,) = [a if b == bnode else b for a, b in sub_edges if bnode in (a, b)]
            edges[:] = [e for e in edges if bnode not in e]
            del layer._nodes[bnode]
            layer.edge(zs[q], other)
        for q in range(c.width):
            if q in qubits:
                j = qubits.index(q)
                bnode = sub_out[j]
                (other,) = [
                    a if b == bnode else b for a, b in layer._edges if bnode in (a, b)
                ]
                layer._edges[:] = [e for e in layer._edges if bnode not in e]
                del layer._nodes[bnode]
                zo = layer.z()
                layer.edge(other, zo)
                layer.output(zo)
            else:
                layer.output(zs[q])
        d = compose(d, layer.build())

    for g in c.gates:
        k = g.kind
        if k == "x":
            on_wires(x_gate_diagram(tower), list(g.qubits))
        elif k == "z":
            on_wires(phase_gate_diagram(-1, tower), list(g.qubits))
        elif k in _PHASE_GATES:
            _, kk = _PHASE_GATES[k]
            on_wires(phase_gate_diagram(tower.root_of_unity(kk), tower), list(g.qubits))
        elif k == "phasek":
            a = tower.root_of_unity(g.k)
            if g.sign < 0:
                a = a.conj()
            on_wires(phase_gate_diagram(a, tower), list(g.qubits))
        elif k == "h":
            on_wires(h_box_diagram(-1, 1, 1, tower), list(g.qubits))
            scalar = scalar * tower.sqrt2_over_2()
        elif k == "cx":
            on_wires(cx_diagram(tower), list(g.qubits))
        elif k == "cz":
            on_wires(cz_diagram(-1, tower), list(g.qubits))
        elif k == "cs":
            on_wires(cz_diagram(tower.imag_unit(), tower), list(g.qubits))
        elif k == "ccz":
            on_wires(ccz_diagram(tower), list(g.qubits))
        elif k == "ccx":
            on_wires(ccx_diagram(tower), list(g.qubits))
        else:
            raise ZhError(f"gate {k} has no diagram translation")
    return d, scalar
