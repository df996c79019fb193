"""Boxplot and per-pair ladder plot from a ``ecgi compare`` JSON report.

    python scripts/plot_report.py report.json -o report.png
"""
import argparse
import json

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
ap.add_argument("report")
ap.add_argument("-o", "--out", default="report.png")
args = ap.parse_args()

with open(args.report) as fh:
    doc = json.load(fh)
label_a = doc["config"].get("label_a", "A")
label_b = doc["config"].get("label_b", "B")
s_a = [p["s_a"] for p in doc["pairs"]]
s_b = [p["s_b"] for p in doc["pairs"]]

fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(11, 4), gridspec_kw={"width_ratios": [1, 3]})
# whis=1.5 with linear quartiles matches the report's boxplot summaries
ax0.boxplot([s_a, s_b], whis=1.5)
ax0.set_xticks([1, 2], [label_a, label_b])
ax0.set_ylabel("ECGI (bits)")
x = range(1, len(s_a) + 1)
ax1.plot(x, s_a, "-", lw=2, label=label_a)
ax1.plot(x, s_b, "-", lw=1, label=label_b)
ax1.set_xlabel("pair")
ax1.legend()
s = doc["summary"]
fig.suptitle(f"mean {label_a} {s['mean_a']:.4f}  mean {label_b} {s['mean_b']:.4f}  "
             f"p={s['p']}  {label_a}>{label_b}: {s['pct_a_greater']:.1f}%")
fig.tight_layout()
fig.savefig(args.out, dpi=120)
print(f"wrote {args.out}")
