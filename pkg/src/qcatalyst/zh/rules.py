"""Rewrite rules with an evaluation soundness gate.

A rule is a pair of small diagrams with the same boundary arity; it is only
admitted after its two sides evaluate to exactly the same matrix.  Matching
is explicit: the caller (or the ``find_matches`` helper) supplies the map
from the left side's internal nodes to nodes of the host diagram.  Spider
and H-box legs are fully symmetric, so boundary legs attach to the context
in any order without changing the tensor.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..ring import RingElement, TowerSpec, format_ring, make_clifford_t_tower
from .diagram import (
    DiagramBuilder,
    ZhDiagram,
    ZhError,
    eval_tensor,
    wire_diagram,
)


class UnsoundRuleError(ZhError):
    """The two sides of a rule evaluate to different tensors."""


class MatchError(ZhError):
    """The supplied node map is not an embedding of the rule's left side."""


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: ZhDiagram
    rhs: ZhDiagram
    verified: bool = False

    def __post_init__(self):
        if len(self.lhs.inputs) != len(self.rhs.inputs) or len(
            self.lhs.outputs
        ) != len(self.rhs.outputs):
            raise ZhError(f"rule {self.name}: boundary arity mismatch")

    def reversed(self) -> "RewriteRule":
        return RewriteRule(self.name + "^-1", self.rhs, self.lhs, self.verified)


def register_rule(rule: RewriteRule, **caps) -> RewriteRule:
    """Admit a rule only if both sides evaluate to the same exact matrix."""
    m1 = eval_tensor(rule.lhs, **caps)
    m2 = eval_tensor(rule.rhs, **caps)
    for r, (r1, r2) in enumerate(zip(m1, m2)):
        for c, (a, b) in enumerate(zip(r1, r2)):
            if a != b:
                raise UnsoundRuleError(
                    f"rule {rule.name} unsound at entry ({r},{c}): "
                    f"{format_ring(a)} vs {format_ring(b)}"
                )
    return RewriteRule(rule.name, rule.lhs, rule.rhs, verified=True)


def _boundary_order(d: ZhDiagram):
    return d.inputs + d.outputs


def _pattern_nodes(lhs: ZhDiagram):
    return [n for n, (k, _) in sorted(lhs.nodes.items()) if k != "b"]


def _labels_equal(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return a == b


def apply_rule(d: ZhDiagram, rule: RewriteRule, match) -> ZhDiagram:
    """Replace one occurrence of the rule's left side.

    ``match`` maps each non-boundary node id of ``rule.lhs`` (including
    scalar stars) to a node of ``d`` (a dict, or a sequence aligned with the
    sorted ids).  The embedding must reproduce the lhs's internal wiring
    exactly; lhs boundary legs absorb the remaining context edges of the
    matched nodes.
    """
    lhs = rule.lhs
    internal = _pattern_nodes(lhs)
    if not isinstance(match, dict):
        if len(match) != len(internal):
            raise MatchError("match arity differs from pattern size")
        match = dict(zip(internal, match))
    if set(match) != set(internal):
        raise MatchError("match must cover exactly the pattern's internal nodes")
    if len(set(match.values())) != len(internal):
        raise MatchError("match must be injective")
    for ln, dn in match.items():
        if dn not in d.nodes:
            raise MatchError(f"node {dn} not in diagram")
        if d.kind(dn) != lhs.kind(ln) or not _labels_equal(d.label(dn), lhs.label(ln)):
            raise MatchError(f"node {dn} does not match pattern node {ln}")

    matched = set(match.values())
    inv = {v: k for k, v in match.items()}

    # edges of d incident to matched nodes, split into internal and context
    internal_d = []
    context_d = {dn: [] for dn in matched}
    others = []
    for idx, (a, b) in enumerate(d.edges):
        ain, bin_ = a in matched, b in matched
        if ain and bin_:
            internal_d.append((inv[a], inv[b]) if inv[a] <= inv[b] else (inv[b], inv[a]))
        elif ain:
            context_d[a].append(b)
        elif bin_:
            context_d[b].append(a)
        else:
            others.append((a, b))

    # internal wiring must coincide as a multiset
    internal_l = []
    bound_l = {ln: 0 for ln in internal}
    boundary_edges = []  # (boundary node, internal node) in boundary order
    bpos = {bn: i for i, bn in enumerate(_boundary_order(lhs))}
    for a, b in lhs.edges:
        ka, kb = lhs.kind(a), lhs.kind(b)
        if ka != "b" and kb != "b":
            internal_l.append((a, b) if a <= b else (b, a))
        else:
            bn, un = (a, b) if ka == "b" else (b, a)
            if lhs.kind(un) == "b":
                raise MatchError("pattern with a bare boundary wire is not matchable")
            bound_l[un] += 1
            boundary_edges.append((bpos[bn], un))
    if sorted(internal_d) != sorted(internal_l):
        raise MatchError("internal wiring differs from the pattern")
    for ln in internal:
        if len(context_d[match[ln]]) != bound_l[ln]:
            raise MatchError(
                f"node {match[ln]} has {len(context_d[match[ln]])} context edges, "
                f"pattern wants {bound_l[ln]}"
            )

    # assign context endpoints to lhs boundary positions (legs are symmetric)
    attach = {}
    pools = {dn: list(es) for dn, es in context_d.items()}
    for pos, un in sorted(boundary_edges):
        attach[pos] = pools[match[un]].pop()

    # build the result: drop matched nodes, splice in the rhs
    rhs = rule.rhs
    nodes = {n: v for n, v in d.nodes.items() if n not in matched}
    edges = list(others)
    base = max(list(nodes) + [d.fresh_id() - 1], default=-1) + 1
    rhs_map = {}
    for n, v in rhs.nodes.items():
        if rhs.kind(n) != "b":
            rhs_map[n] = base
            nodes[base] = v
            base += 1
    rpos = {bn: i for i, bn in enumerate(_boundary_order(rhs))}
    pending = {}  # boundary position -> rhs boundary's partner
    for a, b in rhs.edges:
        ka, kb = rhs.kind(a), rhs.kind(b)
        if ka != "b" and kb != "b":
            edges.append((min(rhs_map[a], rhs_map[b]), max(rhs_map[a], rhs_map[b])))
        elif ka == "b" and kb == "b":
            # bare wire in the replacement: context endpoints join directly
            u, v = attach[rpos[a]], attach[rpos[b]]
            edges.append((min(u, v), max(u, v)))
        else:
            bn, un = (a, b) if ka == "b" else (b, a)
            u, v = attach[rpos[bn]], rhs_map[un]
            edges.append((min(u, v), max(u, v)))
    return ZhDiagram(d.tower, nodes, tuple(edges), d.inputs, d.outputs)


def find_matches(d: ZhDiagram, rule: RewriteRule, limit: int = 64):
    """Enumerate embeddings of the rule's left side (small patterns only)."""
    internal = _pattern_nodes(rule.lhs)
    out = []

    def backtrack(i, current, used):
        if len(out) >= limit:
            return
        if i == len(internal):
            try:
                apply_rule(d, rule, dict(current))
            except MatchError:
                return
            out.append(dict(current))
            return
        ln = internal[i]
        for dn, (k, label) in sorted(d.nodes.items()):
            if dn in used or k != rule.lhs.kind(ln):
                continue
            if not _labels_equal(label, rule.lhs.label(ln)):
                continue
            if d.degree(dn) != rule.lhs.degree(ln):
                continue
            current[ln] = dn
            used.add(dn)
            backtrack(i + 1, current, used)
            used.discard(dn)
            del current[ln]

    backtrack(0, {}, set())
    return out


# -- the rule library -------------------------------------------------------------


def fusion_rule(m: int, n: int, tower: TowerSpec | None = None) -> RewriteRule:
    """zs: two Z-spiders joined by a wire fuse into one (m and n open legs)."""
    b = DiagramBuilder(tower)
    z1, z2 = b.z(), b.z()
    b.edge(z1, z2)
    for _ in range(m):
        b.input(z1)
    for _ in range(n):
        b.output(z2)
    lhs = b.build()
    b2 = DiagramBuilder(tower)
    z = b2.z()
    for _ in range(m):
        b2.input(z)
    for _ in range(n):
        b2.output(z)
    return RewriteRule(f"zs[{m},{n}]", lhs, b2.build())


def identity_rule(tower: TowerSpec | None = None) -> RewriteRule:
    """id: a degree-2 Z-spider is a plain wire."""
    b = DiagramBuilder(tower)
    z = b.z()
    b.input(z)
    b.output(z)
    b2 = DiagramBuilder(tower)
    b2.wire()
    return RewriteRule("id", b.build(), b2.build())


def h_cancel_rule(tower: TowerSpec | None = None) -> RewriteRule:
    """hs: two binary H(-1) boxes in series equal a wire times the scalar 2."""
    b = DiagramBuilder(tower)
    h1, h2 = b.h(-1), b.h(-1)
    b.edge(h1, h2)
    b.input(h1)
    b.output(h2)
    b2 = DiagramBuilder(tower)
    b2.wire()
    b2.h(2)
    return RewriteRule("hs", b.build(), b2.build())


def multiply_rule(a, bb, legs: int = 1, tower: TowerSpec | None = None) -> RewriteRule:
    """m: two H-box states on one Z-spider multiply their labels."""
    b = DiagramBuilder(tower)
    z = b.z()
    ha, hb = b.h(a), b.h(bb)
    b.edge(z, ha)
    b.edge(z, hb)
    for _ in range(legs):
        b.output(z)
    lhs = b.build()
    b2 = DiagramBuilder(tower)
    z2 = b2.z()
    prod = (lhs.label(1)) * (lhs.label(2))
    hp = b2.h(prod)
    b2.edge(z2, hp)
    for _ in range(legs):
        b2.output(z2)
    return RewriteRule(f"m[{format_ring(lhs.label(1))},{format_ring(lhs.label(2))}]",
                       lhs, b2.build())


def parallel_edge_rule(a, z_extra: int = 1, h_extra: int = 1,
                       tower: TowerSpec | None = None) -> RewriteRule:
    """and: parallel wires between a Z-spider and an H-box collapse to one."""
    def side(parallel):
        b = DiagramBuilder(tower)
        z, h = b.z(), b.h(a)
        for _ in range(parallel):
            b.edge(z, h)
        for _ in range(z_extra):
            b.input(z)
        for _ in range(h_extra):
            b.output(h)
        return b.build()
    lhs = side(2)
    return RewriteRule(f"and[{format_ring(lhs.label(1))}]", lhs, side(1))


def copy_rule(a, n: int, tower: TowerSpec | None = None) -> RewriteRule:
    """hc: a |0> state (H(0) box) into an (n+1)-ary H-box disconnects it
    into n trivial H(1) states."""
    b = DiagramBuilder(tower)
    h0 = b.h(0)
    ha = b.h(a)
    b.edge(h0, ha)
    for _ in range(n):
        b.output(ha)
    lhs = b.build()
    b2 = DiagramBuilder(tower)
    for _ in range(n):
        h1 = b2.h(1)
        b2.output(h1)
    return RewriteRule(f"hc[{format_ring(lhs.label(1))},{n}]", lhs, b2.build())


def bialgebra_zx_rule(n: int, m: int, tower: TowerSpec | None = None) -> RewriteRule:
    """ba1: an X-spider feeding a Z-spider equals the complete bipartite form."""
    b = DiagramBuilder(tower)
    x = b.x_node(n + 1)
    z = b.z()
    b.edge(b.x_leg(x, n), z)
    for j in range(n):
        b.input(b.x_leg(x, j))
    for _ in range(m):
        b.output(z)
    lhs = b.build()
    b2 = DiagramBuilder(tower)
    zs = [b2.z() for _ in range(n)]
    xs = [b2.x_node(n + 1) for _ in range(m)]
    for i, zn in enumerate(zs):
        b2.input(zn)
        for j, xn in enumerate(xs):
            b2.edge(zn, b2.x_leg(xn, i))
    for j, xn in enumerate(xs):
        b2.output(b2.x_leg(xn, n))
    return RewriteRule(f"ba1[{n},{m}]", lhs, b2.build())


def bialgebra_xh_rule(n: int, m: int, tower: TowerSpec | None = None) -> RewriteRule:
    """ba2: an X-spider feeding an H(-1) box equals the bipartite H/Z form."""
    b = DiagramBuilder(tower)
    x = b.x_node(n + 1)
    h = b.h(-1)
    b.edge(b.x_leg(x, n), h)
    for j in range(n):
        b.input(b.x_leg(x, j))
    for _ in range(m):
        b.output(h)
    lhs = b.build()
    b2 = DiagramBuilder(tower)
    hs = [b2.h(-1) for _ in range(n)]
    zs = [b2.z() for _ in range(m)]
    for i, hn in enumerate(hs):
        b2.input(hn)
        for zn in zs:
            b2.edge(hn, zn)
    for zn in zs:
        b2.output(zn)
    return RewriteRule(f"ba2[{n},{m}]", lhs, b2.build())


def catalysis_rule(a, tower: TowerSpec | None = None) -> RewriteRule:
    """Two H(a) states catalyse into one via a binary H(a^2) box.

    Left: two disconnected unary H(a) states.  Right: two Z-spiders joined
    by an H(a^2) box, their parity fed by a single H(a) state; the identity
    a^(y1 XOR y2) * (a^2)^(y1 y2) = a^y1 * a^y2 makes it exact with no
    extra scalar.  Requires a != 0 with a^2 still in the tower (automatic).
    """
    tower = tower or make_clifford_t_tower()
    if not isinstance(a, RingElement):
        a = tower.from_dyadic(a)
    if a.is_zero():
        raise ZhError("catalysis label must be non-zero")
    b = DiagramBuilder(tower)
    h1, h2 = b.h(a), b.h(a)
    b.output(h1)
    b.output(h2)
    lhs = b.build()
    b2 = DiagramBuilder(tower)
    z1, z2 = b2.z(), b2.z()
    hsq = b2.h(a * a)
    b2.edge(z1, hsq)
    b2.edge(z2, hsq)
    x = b2.x_node(3)
    b2.edge(z1, b2.x_leg(x, 0))
    b2.edge(z2, b2.x_leg(x, 1))
    ha = b2.h(a)
    b2.edge(ha, b2.x_leg(x, 2))
    b2.output(z1)
    b2.output(z2)
    return RewriteRule(f"catalysis[{format_ring(a)}]", lhs, b2.build())


def scalar_intro_rule(a, tower: TowerSpec | None = None) -> RewriteRule:
    """The empty diagram equals <1| NOT |a-state>, which carries one H(a) box.

    Both sides are the scalar 1 exactly: NOT maps (1, a) to (a, 1) and the
    <1| cap picks the second entry.  The scalar bookkeeping (one star for
    the NOT, one for the cap) cancels the two H(-1) conjugation pairs.
    """
    tower = tower or make_clifford_t_tower()
    if not isinstance(a, RingElement):
        a = tower.from_dyadic(a)
    lhs = ZhDiagram(tower, {}, (), (), ())
    b = DiagramBuilder(tower)
    ha = b.h(a)
    # NOT: H(-1) conjugation of the -1 phase, one star
    h1, zx, h2 = b.h(-1), b.z(), b.h(-1)
    hp = b.h(-1)
    b.edge(zx, hp)
    b.edge(h1, zx)
    b.edge(zx, h2)
    b.star()
    b.edge(ha, h1)
    # <1| cap: binary H(-1) into a spider with an H(-1) state, one star
    hb, zc, hsc = b.h(-1), b.z(), b.h(-1)
    b.edge(h2, hb)
    b.edge(hb, zc)
    b.edge(zc, hsc)
    b.star()
    return RewriteRule(f"scalar_intro[{format_ring(a)}]", lhs, b.build())


def standard_rules(tower: TowerSpec | None = None) -> dict:
    """The verified rule library, instantiated up to degree 5."""
    tower = tower or make_clifford_t_tower()
    i = tower.imag_unit()
    w = tower.root_of_unity(3)
    out: dict[str, list[RewriteRule]] = {}

    def add(family, rule):
        out.setdefault(family, []).append(register_rule(rule))

    for m in range(0, 4):
        for n in range(0, 4):
            if m + n <= 5:
                add("zs", fusion_rule(m, n, tower))
    add("id", identity_rule(tower))
    add("hs", h_cancel_rule(tower))
    for a, bb in ((-1, -1), (i, i), (i, -1), (w, w), (w, i)):
        for legs in (1, 2):
            add("m", multiply_rule(a, bb, legs, tower))
    for a in (-1, i, w, 2):
        add("and", parallel_edge_rule(a, 1, 1, tower))
        add("and", parallel_edge_rule(a, 2, 1, tower))
    for a in (-1, i, w):
        for n in (1, 2, 3):
            add("hc", copy_rule(a, n, tower))
    for n in (1, 2):
        for m in (1, 2):
            add("ba1", bialgebra_zx_rule(n, m, tower))
            add("ba2", bialgebra_xh_rule(n, m, tower))
    for a in (tower.from_dyadic(-1), i, w):
        add("catalysis", catalysis_rule(a, tower))
        add("scalar_intro", scalar_intro_rule(a, tower))
    return out
