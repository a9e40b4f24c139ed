"""The seven-row eta table of the exact Heffernan-Tawn model.

Prints one representative of each row, the row-2 split into sub-cases (2a)
and (2b), and a coarse text view of eta over (alpha, beta) on the boundary
``delta = 1/(1 - beta)``.

Run: ``python demos/ht_case_table.py``
"""
import numpy as np

from condextremes import ht_model as ht
from condextremes.ht_model import HtParams

examples = [
    (0.3, 0.2, 1.0, 3.0),
    (0.5, 0.5, 1.0, 2.0),
    (0.5, 0.5, 3.0, 2.0),
    (0.5, 0.0, 3.0, 1.0),
    (0.5, 0.0, 1.0, 1.0),
    (0.0, 0.5, 1.0, 3.0),
    (0.0, 0.5, 1.0, 2.0),
    (0.0, 0.5, 3.0, 2.0),
]
print("alpha  beta  gamma  delta   row   eta")
for a, b, g, d in examples:
    p = HtParams(a, b, g, d)
    case = ht.classify(p)
    s = ht.eta(p)
    tag = f"{case.row}{case.sub_case[1] if case.sub_case else ''}"
    eta = "undefined" if s.eta is None else f"{s.eta:.6f}"
    print(f"{a:5.2f} {b:5.2f} {g:6.2f} {d:6.3f}   {tag:<4}  {eta}")

print("\nc0 for (alpha, gamma, delta) = (0.5, 1, 2):", ht.solve_c0(0.5, 1.0, 2.0), "= sqrt(0.8)")

grid = np.round(np.arange(0, 0.951, 0.15), 10)
for g in (1.0, 5.0):
    print(f"\neta on delta = 1/(1 - beta), gamma = {g}: rows alpha, columns beta")
    print("       " + " ".join(f"{b:6.2f}" for b in grid))
    for a in grid:
        row = [ht.eta(HtParams(a, b, g, 1 / (1 - b))).eta for b in grid]
        print(f"{a:6.2f} " + " ".join(f"{e:6.3f}" for e in row))
