"""Rule-level scaling on the synthetic independent-rule program.

    python demos/scaling.py --workers 1,2,4 --rules 32
"""

import argparse
import os
import time

from tyr.datalog import seminaive_evaluate, stratify
from tyr.generators import synthetic_triangles
from tyr.parallel import Executor, ExecutorConfig
from tyr.stats import amdahl_bound, gc_paused, rule_skew


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workers", default="1,2,4")
    ap.add_argument("--rules", type=int, default=64)
    ap.add_argument("--nodes", type=int, default=40)
    ap.add_argument("--backend", choices=("thread", "process"), default="process")
    args = ap.parse_args()
    workers = [int(w) for w in args.workers.split(",")]

    prog = stratify(synthetic_triangles(args.rules, args.nodes))
    print(f"{args.rules} rules over {args.nodes} nodes, {os.cpu_count()} CPUs visible, backend {args.backend}")
    base = None
    for n in workers:
        with gc_paused(), Executor(ExecutorConfig(n, backend=args.backend)) as ex:
            t0 = time.perf_counter()
            res = seminaive_evaluate(prog, ex, keep_instances=False)
            took = time.perf_counter() - t0
        base = base or took
        b = res.breakdown
        par = (b.inter_us + b.intra_us) / b.total_us
        per_rule = list(res.rule_us.values())
        print(f"workers {n}: {took:.2f}s  speedup {base / took:.2f}  skew {rule_skew(per_rule):.2f}  "
              f"parallel fraction {par:.2f} (Amdahl bound {amdahl_bound(min(par, 0.999)):.1f})")


if __name__ == "__main__":
    main()
