"""Walkthrough: merging phase boxes in a ZH diagram down to one catalyst.

ZH diagrams are graphs of Z-spiders and H-boxes evaluated exactly over a
ring.  The key rewrite below merges two unary H(a) boxes into a single one
(plus phase-free structure), using the identity

    a^y1 * a^y2 = a^(y1 xor y2) * (a^2)^(y1 and y2).

Repeating it turns a diagram with many a-boxes into one with a single
a-box, with a machine-checkable proof trace.  Splitting on that box then
writes the diagram's matrix as M0 + a*M1 where neither component involves
the generator a at all.
"""

from qcatalyst import make_clifford_t_tower
from qcatalyst.circuit import mat_eq
from qcatalyst.zh import (
    DiagramBuilder,
    eval_tensor,
    extract_catalyst,
    replay,
    serialize_trace,
    split_on_catalyst,
    standard_rules,
)

tower = make_clifford_t_tower()
w = tower.root_of_unity(3)  # primitive 8th root of unity, the T-gate phase

# Every rule in the library is admitted by an exact evaluation gate before
# it may be applied.
lib = standard_rules(tower)
total = sum(len(rs) for rs in lib.values())
print(f"rule library: {total} verified instances across {len(lib)} families")

# A diagram with three w-boxes: three T-type phases hanging off spiders.
b = DiagramBuilder(tower)
z1, z2 = b.z(), b.z()
h = b.h(-1)
b.edge(z1, h)
b.edge(z2, h)
for z in (z1, z1, z2):
    box = b.h(w)
    b.edge(z, box)
b.output(z1)
b.output(z2)
d = b.build()

before = eval_tensor(d)
out, trace = extract_catalyst(d, w)
after = eval_tensor(out)
print(f"\nw-boxes before: {len(d.h_boxes_with_label(w))}, "
      f"after: {len(out.h_boxes_with_label(w))}, "
      f"proof steps: {len(trace.steps)}")
print("evaluation preserved exactly:", mat_eq(before, after))

print("\nproof trace:")
print(serialize_trace(trace))

# The trace replays from the original diagram to the extracted one.
replayed = eval_tensor(replay(d, trace))
print("replay matches:", mat_eq(replayed, after))

# Split the extracted diagram on its single w-box: M = M0 + w*M1 with both
# components free of w in every coefficient.
m0, m1 = split_on_catalyst(out, w)
print("\nsplit components (M = M0 + w*M1):")
for name, m in (("M0", m0), ("M1", m1)):
    print(f"  {name}:")
    for row in m:
        print("   ", [str(x) for x in row])
