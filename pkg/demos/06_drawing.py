"""Render KM fans as SVG pictures.

Lattice points of the free quotient are open circles; points of the fine
support are filled; each torsion element gets its own layer.  Output lands
in demos/output/.  Run:  python3 demos/06_drawing.py
"""

import os

from kmfan import Cone, FgaGroup, KmFan, LatticeDatum, dilate, from_classical, roots
from kmfan.drawing import draw_fan_svg

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "output")
os.makedirs(OUT, exist_ok=True)

line = from_classical(FgaGroup(1), [Cone.from_generators([(1,)], 1)])

N = FgaGroup(1, (2,))
p22 = KmFan(N, [Cone.zero(1), Cone.from_generators([(1,)], 1), Cone.from_generators([(-1,)], 1)], {
    Cone.zero(1): LatticeDatum.from_generators(N, []),
    Cone.from_generators([(1,)], 1): LatticeDatum.from_generators(N, [(1, 1)]),
    Cone.from_generators([(-1,)], 1): LatticeDatum.from_generators(N, [(-1, 0)]),
})

plane = from_classical(FgaGroup(2), [Cone.from_generators([(1, 0), (0, 1)], 2)])

pictures = {
    "line.svg": draw_fan_svg(line, window=4),
    "line_root2.svg": draw_fan_svg(roots(line, [2])[0], window=4),
    "p22.svg": draw_fan_svg(p22, window=4),
    "plane_dilated.svg": draw_fan_svg(dilate(plane, 2)[0], window=3),
}
for name, svg in pictures.items():
    path = os.path.join(OUT, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {path} ({len(svg)} bytes)")

print("\nfilled circles mark the fine support; in line_root2.svg only the even")
print("points are filled, and p22.svg shows one layer per torsion element.")
