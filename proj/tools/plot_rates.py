#!/usr/bin/env python3
"""Plot per-layer error medians from an evaluation CSV on log-log axes.

Usage: plot_rates.py eval.csv [out.png]
"""
import csv
import math
import sys
from collections import defaultdict


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__)
        return 2
    path = sys.argv[1]
    out = sys.argv[2] if len(sys.argv) > 2 else "rates.png"

    series = defaultdict(lambda: defaultdict(list))  # (dim, loss) -> n -> values
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            n = int(row["n"])
            dim = int(row["dim"])
            for loss in ("hausdorff", "clustering", "tangent"):
                v = float(row[loss])
                if math.isfinite(v) and v > 0:
                    series[(dim, loss)][n].append(v)

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; printing medians instead")
        for (dim, loss), by_n in sorted(series.items()):
            for n, vals in sorted(by_n.items()):
                vals.sort()
                print(f"dim={dim} loss={loss} n={n} median={vals[len(vals) // 2]:.6g}")
        return 0

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for (dim, loss), by_n in sorted(series.items()):
        xs, ys = [], []
        for n, vals in sorted(by_n.items()):
            vals.sort()
            xs.append(n / math.log(n))
            ys.append(vals[len(vals) // 2])
        ax.loglog(xs, ys, "o-", label=f"d={dim} {loss}")
    ax.set_xlabel("n / log n")
    ax.set_ylabel("median error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
