"""How well can an attacker read the true value off one sanitized report?

Compares the closed-form expected attack accuracy with a Monte-Carlo
simulation of the per-protocol prediction rules, then shows how the
accuracy compounds over repeated collections (the multi-survey products),
including the with-replacement completion factor d!/d^d.
"""

import math

from ldpsim import attacks as atk
from ldpsim import oracles as oc
from ldpsim.rng import stream

KS = [74, 7, 16]

print("single report, k = 74")
print(f"{'eps':>4} " + " ".join(f"{p:>12}" for p in oc.PROTOCOLS))
for eps in (1, 2, 4, 6, 8, 10):
    cells = []
    for proto in oc.PROTOCOLS:
        ana = atk.analytic_acc(proto, eps, 74)
        emp = atk.empirical_attack_acc(proto, eps, 74, 50_000, stream(2024_02, eps))
        cells.append(f"{ana:6.2f}/{emp:5.2f}")
    print(f"{eps:>4} " + " ".join(f"{c:>12}" for c in cells))
print("(left: closed form, right: Monte-Carlo over 50k reports)")

print()
print(f"full profile over d = {len(KS)} surveys, k = {KS}")
print(f"{'eps':>4} {'uniform %':>12} {'non-uniform %':>14}   (non-uniform/uniform)")
for eps in (1, 4, 7, 10):
    u = atk.multi_collection_acc("grr", eps, KS, "uniform")
    nu = atk.multi_collection_acc("grr", eps, KS, "non_uniform")
    print(f"{eps:>4} {u:>12.4f} {nu:>14.4f}   {nu / u:.4f}")
d = len(KS)
print(f"the ratio is the completion factor d!/d^d = {math.factorial(d) / d**d:.4f}:")
print("with replacement, only users who happened to cover all attributes")
print("can be profiled completely.")
