"""Sweep every augmentation heuristic over a budget grid on one graph.

For each (heuristic, budget) cell this runs the augmentation with a shared
seed and records welfare, the worst broadcast, and the broadcast gap before
and after. Results land in one CSV plus a JSON echo of the run parameters.

Example:
    python3 scripts/run_experiment.py --input data/bench1133.edges \
        --alpha 0.4 --budgets 0,50,100,200 --out results/sweep
"""
import argparse
import csv
import json
import os
import time

import netaccess as na


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--input", default="data/bench1133.edges")
    ap.add_argument("--alpha", type=float, default=0.4)
    ap.add_argument("--R", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budgets", default="0,50,100,200")
    ap.add_argument("--kinds", default=",".join(na.HEURISTIC_KINDS))
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out", default="results/sweep")
    args = ap.parse_args()

    budgets = [int(b) for b in args.budgets.split(",")]
    kinds = args.kinds.split(",")
    g = na.largest_connected_component(na.load_edge_list(args.input))
    os.makedirs(args.out, exist_ok=True)

    _, est0 = na.build_ensemble(g, args.alpha, args.R, args.seed, workers=args.workers)
    w0, _ = na.welfare(est0)
    b0 = na.broadcast_all(est0)
    gap0 = float(b0.max() - b0.min())
    rel0 = gap0 / float(b0.min()) if b0.min() > 0 else None

    rows = []
    for kind in kinds:
        for k in budgets:
            if k % 2 != 0 and kind in ("bc-both", "diam-both"):
                continue
            t0 = time.perf_counter()
            if k == 0:
                wk, bmin, gap = w0, float(b0.min()), gap0
            else:
                trace, _ = na.run_augmentation(
                    g, kind, k, args.alpha, args.R, args.seed, workers=args.workers
                )
                last = trace.steps[-1]
                wk, bmin = last.welfare, last.min_broadcast
                # recompute the gap from the final counters via a coupled rebuild
                _, estk = na.build_ensemble(
                    g.with_edges(trace.edges_added), args.alpha, args.R, args.seed,
                    workers=args.workers,
                )
                bk = na.broadcast_all(estk)
                gap = float(bk.max() - bk.min())
            rows.append(
                {
                    "kind": kind,
                    "k": k,
                    "welfare": wk,
                    "min_broadcast": bmin,
                    "broadcast_gap": gap,
                    "welfare_gain": wk - w0,
                    "seconds": round(time.perf_counter() - t0, 2),
                }
            )
            print(f"{kind:10s} k={k:4d} welfare={wk:.4f} gain={wk - w0:+.4f}")

    with open(os.path.join(args.out, "sweep.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    with open(os.path.join(args.out, "params.json"), "w", encoding="utf-8") as fh:
        json.dump(
            {
                "input": args.input,
                "alpha": args.alpha,
                "R": args.R,
                "seed": args.seed,
                "budgets": budgets,
                "kinds": kinds,
                "initial_welfare": w0,
                "initial_broadcast_gap": gap0,
                "initial_relative_gap": rel0,
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    print(f"wrote {args.out}/sweep.csv")
    return 0


if __name__ == "__main__":
    import sys

    sys.exit(main())
