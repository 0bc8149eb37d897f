"""Catalyst extraction and the two-component split of a diagram.

Extraction rewrites a diagram so that a chosen unary H-box label occurs
exactly once, pairing occurrences with the catalysis rule (and introducing
one occurrence with the scalar rule if there were none).  Every step is
recorded in a replayable proof trace.  The split then opens the remaining
catalyst wire and separates the tensor into components with and without the
label's generator, which is exactly why one catalyst suffices: the two
components are uniquely determined.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..ring import RingElement, TowerSpec, format_ring
from .diagram import ZhDiagram, ZhError, eval_tensor
from .rules import RewriteRule, apply_rule, catalysis_rule, register_rule, scalar_intro_rule


class ExtractError(ZhError):
    pass


@dataclass(frozen=True)
class ProofTrace:
    """Replayable rewrite log.

    Steps are either ("insert_id", (u, v)) splitting one u-v edge with a
    fresh degree-2 Z-spider, or ("rule", rule, match) applying a verified
    rewrite at the given internal-node match (sorted pattern-id order).
    """

    steps: tuple

    def __len__(self) -> int:
        return len(self.steps)


def _insert_identity(d: ZhDiagram, u: int, v: int) -> ZhDiagram:
    key = (min(u, v), max(u, v))
    edges = list(d.edges)
    try:
        edges.remove(key)
    except ValueError:
        raise ExtractError(f"no edge between {u} and {v}") from None
    z = d.fresh_id()
    nodes = dict(d.nodes)
    nodes[z] = ("z", None)
    edges.append((min(u, z), max(u, z)))
    edges.append((min(v, z), max(v, z)))
    return ZhDiagram(d.tower, nodes, tuple(edges), d.inputs, d.outputs)


def replay(d: ZhDiagram, trace: ProofTrace) -> ZhDiagram:
    for step in trace.steps:
        if step[0] == "insert_id":
            d = _insert_identity(d, *step[1])
        elif step[0] == "rule":
            _, rule, match = step
            d = apply_rule(d, rule, match)
        else:
            raise ExtractError(f"unknown step kind {step[0]!r}")
    return d


def serialize_trace(trace: ProofTrace) -> str:
    lines = []
    for step in trace.steps:
        if step[0] == "insert_id":
            u, v = step[1]
            lines.append(f"step insert_id {u} {v}")
        else:
            _, rule, match = step
            lines.append(f"step {rule.name} " + " ".join(str(n) for n in match))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_trace(text: str, rule_lookup) -> ProofTrace:
    """Parse `step NAME ids...` lines; ``rule_lookup(name)`` supplies rules."""
    steps = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "step" or len(parts) < 2:
            raise ExtractError(f"line {ln}: expected `step NAME ids...`")
        name, ids = parts[1], tuple(int(p) for p in parts[2:])
        if name == "insert_id":
            if len(ids) != 2:
                raise ExtractError(f"line {ln}: insert_id takes two node ids")
            steps.append(("insert_id", ids))
        else:
            steps.append(("rule", rule_lookup(name), ids))
    return ProofTrace(tuple(steps))


def _unary_boxes(d: ZhDiagram, a: RingElement):
    boxes = d.h_boxes_with_label(a)
    for n in boxes:
        if d.degree(n) != 1:
            raise ExtractError(
                f"H-box {n} with label {format_ring(a)} has arity {d.degree(n)}; "
                "extraction handles unary state boxes only"
            )
    return boxes


def extract_catalyst(d: ZhDiagram, a) -> tuple[ZhDiagram, ProofTrace]:
    """Rewrite so exactly one unary H(a) box remains; returns the trace.

    With c occurrences this takes max(c - 1, 1) recorded rule steps: c - 1
    catalysis steps, or a single scalar introduction when c = 0.
    """
    tower = d.tower
    if not isinstance(a, RingElement):
        a = tower.from_dyadic(a)
    boxes = _unary_boxes(d, a)
    steps = []
    if not boxes:
        rule = register_rule(scalar_intro_rule(a, tower))
        steps.append(("rule", rule, ()))
        d = apply_rule(d, rule, ())
        return d, ProofTrace(tuple(steps))
    cat = register_rule(catalysis_rule(a, tower))
    while len(boxes) > 1:
        u, v = boxes[0], boxes[1]
        (nu,) = d.neighbours(u)
        if nu == v:
            # the two state boxes are plugged into each other; split the
            # edge so each gets its own context spider
            steps.append(("insert_id", (u, v)))
            d = _insert_identity(d, u, v)
        match = (u, v)
        steps.append(("rule", cat, match))
        d = apply_rule(d, cat, match)
        boxes = _unary_boxes(d, a)
    return d, ProofTrace(tuple(steps))


def split_on_catalyst(d: ZhDiagram, a, **caps):
    """Open the single H(a) state into a fresh input and split on it.

    Returns (m0, m1) with eval(d) = m0 + a * m1; both checked exactly, and
    every entry of m0 and m1 is verified to have no coefficient on any
    basis monomial involving a's generator.
    """
    tower = d.tower
    if not isinstance(a, RingElement):
        a = tower.from_dyadic(a)
    try:
        gen_bit = next(
            1 << j for j, name in enumerate(tower.names)
            if tower.generator(name) == a
        )
    except StopIteration:
        raise ExtractError(
            f"{format_ring(a)} is not a generator of the tower"
        ) from None
    boxes = _unary_boxes(d, a)
    if len(boxes) != 1:
        raise ExtractError(
            f"need exactly one unary H({format_ring(a)}) box, found {len(boxes)}"
        )
    box = boxes[0]
    nodes = {n: v for n, v in d.nodes.items() if n != box}
    bnode = d.fresh_id()
    nodes[bnode] = ("b", None)
    # replace the box's endpoint in its single edge with the new boundary
    new_edges = []
    for x, y in d.edges:
        if x == box:
            new_edges.append((min(y, bnode), max(y, bnode)))
        elif y == box:
            new_edges.append((min(x, bnode), max(x, bnode)))
        else:
            new_edges.append((x, y))
    opened = ZhDiagram(
        tower, nodes, tuple(new_edges), d.inputs + (bnode,), d.outputs
    )
    big = eval_tensor(opened, **caps)
    n_in = len(d.inputs)
    cols = 1 << n_in
    m0 = [[row[2 * c] for c in range(cols)] for row in big]
    m1 = [[row[2 * c + 1] for c in range(cols)] for row in big]
    whole = eval_tensor(d, **caps)
    for r in range(len(whole)):
        for c in range(cols):
            if whole[r][c] != m0[r][c] + a * m1[r][c]:
                raise ExtractError("split does not recompose the diagram")
            for part in (m0[r][c], m1[r][c]):
                if any(
                    coeff for mask, coeff in enumerate(part.coeffs)
                    if mask & gen_bit
                ):
                    raise ExtractError(
                        "split component leaks the catalyst generator"
                    )
    return m0, m1
