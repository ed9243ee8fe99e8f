"""Export contour data and a solver trace, then render them if matplotlib
is available.

Uses the CLI entry points programmatically: `solve` writes report.json and
trace.json, `contour` writes the value grid plus the iterate polyline as
CSV. Rendering is optional; the CSV files are the deliverable and feed any
external plotting tool.
"""

import csv
import json
from pathlib import Path

from mtnpass.cli import main as mtnpass

OUT = Path("demo_output")
OUT.mkdir(exist_ok=True)

mtnpass(["solve", "--function", "six_hump_camel",
         "--a", "-1.7036,0.7961", "--b", "-0.0898,0.7126",
         "--out", str(OUT)])
mtnpass(["contour", "--function", "six_hump_camel",
         "--bounds", "-2,2,-1.5,1.5", "--resolution", "201",
         "--out", str(OUT / "camel.csv"),
         "--trace", str(OUT / "trace.json")])

report = json.loads((OUT / "report.json").read_text())["report"]
print(f"solver: {report['status']} at {report['x']}, f = {report['f']:.6f}")
print(f"files: {OUT}/camel.csv, {OUT}/camel_trace.csv")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np
except ImportError:
    print("matplotlib not installed; skipping the rendering step")
    raise SystemExit(0)

xs, ys, fs = [], [], []
with open(OUT / "camel.csv") as fh:
    for row in csv.DictReader(fh):
        xs.append(float(row["x1"]))
        ys.append(float(row["x2"]))
        fs.append(float(row["f"]))
n = int(round(len(fs) ** 0.5))
X = np.reshape(xs, (n, n))
Y = np.reshape(ys, (n, n))
F = np.reshape(fs, (n, n))

tx, ty = [], []
with open(OUT / "camel_trace.csv") as fh:
    for row in csv.DictReader(fh):
        tx.append(float(row["x1"]))
        ty.append(float(row["x2"]))

fig, ax = plt.subplots(figsize=(7, 5))
ax.contour(X, Y, F, levels=30, linewidths=0.6)
ax.plot(tx, ty, "o-", color="crimson", label="iterate base points")
ax.plot(report["x"][0], report["x"][1], "k*", markersize=12, label="saddle")
ax.set_xlabel("x1")
ax.set_ylabel("x2")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "camel_run.png", dpi=140)
print(f"rendered {OUT}/camel_run.png")
