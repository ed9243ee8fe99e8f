"""Full saddle searches on the six-hump camel function.

Two runs: one between the two global minimizers (the chord passes straight
through the origin saddle), and one between the adjacent minima on the left
side of the plot, whose connecting ridge carries the saddle near (-1, 0.8).
The per-iteration trace shows the level rising toward the critical value
while the endpoint gap collapses.
"""

import numpy as np

from mtnpass import six_hump_camel, solve

RUNS = [
    ("between the two global minimizers",
     np.array([0.0898, -0.7126]), np.array([-0.0898, 0.7126])),
    ("across the ridge near (-1, 0.8)",
     np.array([-1.7036067150, 0.7960835687]),
     np.array([-0.0898420131, 0.7126564030])),
]

for title, a, b in RUNS:
    camel = six_hump_camel()
    report = solve(camel, a, b)
    print(f"=== {title} ===")
    print(f"  a = {a.round(4)}, b = {b.round(4)}")
    print("  iter  step   level        gap        |grad f(z)|")
    for rec in report.trace:
        print(f"  {rec.iteration:4d}  {rec.step:<5s} {rec.level:+.6f}  "
              f"{rec.gap:9.3e}  {rec.grad_norm_z:9.3e}")
    print(f"  status      : {report.status}")
    print(f"  saddle      : {report.x.round(10)}")
    print(f"  f(saddle)   : {report.f:+.10f}")
    print(f"  |grad f|    : {report.grad_norm:.3e}")
    print(f"  morse index : {report.morse_index}")
    print(f"  evaluations : {report.eval_counts}")
    print()
