"""Region map of two noisy singlets: where CHSH and the network test fire.

Both sources are werner states with visibilities (v_ab, v_bc).  Closed
forms make the whole map analytic:

    link AB violates CHSH      iff  v_ab > 1/sqrt(2)
    link BC violates CHSH      iff  v_bc > 1/sqrt(2)
    the pair is non-bilocal    iff  v_ab * v_bc > 1/2

Run:  python3 demos/demo_werner_map.py
"""

import math

from qnetmax import rows_to_csv, werner_scan

STEP = 0.05
values = [round(i * STEP, 10) for i in range(int(1 / STEP) + 1)]

rows = werner_scan([(va, vb) for va in values for vb in values])
by_point = {(row.params[0][1], row.params[1][1]): row.flags for row in rows}


def glyph(flags):
    if flags.nonbilocal and flags.ab_nonlocal and flags.bc_nonlocal:
        return "#"  # network and both links
    if flags.nonbilocal:
        return "+"  # network fires though one link alone does not
    if flags.ab_nonlocal or flags.bc_nonlocal:
        return "o"  # a link fires but the network does not
    return "."


print("Network-violation map over (v_ab, v_bc)")
print("---------------------------------------")
print("  . nothing fires   o one link only   + network, one quiet link   "
      "# network and both links\n")
print(" " * 10 + " ".join(f"{v:.2f}" for v in values))
for va in reversed(values):
    cells = " ".join(f" {glyph(by_point[(va, vb)])}  " for vb in values)
    print(f"v_ab {va:.2f} {cells}".rstrip())
print()
onset = 1 / math.sqrt(2)
print(f"  link onsets at v = {onset:.4f}; the network boundary is the")
print(f"  hyperbola v_ab * v_bc = 1/2, which dips below the link onsets")
print(f"  on the diagonal (0.7071^2 = 1/2 exactly).\n")

print("CSV rows near the diagonal boundary")
print("-----------------------------------")
sample = werner_scan([(v, v) for v in (0.70, 0.7071, 0.7072, 0.71)])
print("  " + rows_to_csv(sample).replace("\n", "\n  ").rstrip())
