"""Check the interpreter against the brute-force oracle and explore mode
against its own programs over many random frames.

    python3 scripts/sweep.py --frames 2000 --seed 1
"""

import argparse
import logging
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from oracle import oracle  # noqa: E402

from vizfilter.interpreter import run_chain  # noqa: E402
from vizfilter.randscene import add_consistent_hints, random_chain, random_frame  # noqa: E402
from vizfilter.registry import default_registry  # noqa: E402
from vizfilter.synthesis import build_scene_graph, generate_from_selection  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--frames", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-detections", type=int, default=10)
    args = ap.parse_args()
    logging.getLogger("vizfilter").setLevel(logging.ERROR)

    reg = default_registry()
    t0 = time.perf_counter()
    mismatches, nonempty = 0, 0
    for i in range(args.frames):
        rng = random.Random(args.seed * 1_000_003 + i)
        f = random_frame(rng, args.max_detections)
        chain = random_chain(rng)
        got = {(m.path, m.value) for m in run_chain(chain, f, registry=reg).matches}
        want, _ = oracle(chain, f, reg)
        nonempty += bool(want)
        if got != want:
            mismatches += 1
            print(f"mismatch at frame {i}: {chain}")
    print(f"oracle: {args.frames} frames, {nonempty} with matches, {mismatches} mismatches "
          f"({time.perf_counter() - t0:.1f}s)")

    t0 = time.perf_counter()
    nodes, misses = 0, 0
    for i in range(args.frames):
        rng = random.Random(args.seed * 7_000_001 + i)
        f = random_frame(rng, args.max_detections)
        g = build_scene_graph(f)
        f = add_consistent_hints(f, {k: n.parent for k, n in g.nodes.items()}, rng)
        g = build_scene_graph(f)
        for nid in g.nodes:
            nodes += 1
            p = generate_from_selection(g, nid)
            if not any(m.path[-1] == nid for m in run_chain(p.chains[0], f, registry=reg).matches):
                misses += 1
                print(f"selection {nid} in frame {i} not re-found")
    print(f"explore: {nodes} selections, {misses} not re-found ({time.perf_counter() - t0:.1f}s)")
    return 1 if mismatches or misses else 0


if __name__ == "__main__":
    sys.exit(main())
