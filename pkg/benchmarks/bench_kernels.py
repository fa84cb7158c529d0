"""Compare the compiled and pure-Python kernel backends on identical inputs.

Usage: python3 benchmarks/bench_kernels.py [--n 2000] [--repeat 5] [--seed 1]

Each kernel is timed on the same buffers for every available backend; the
outputs are compared before timing so a speedup never hides a mismatch.
"""

import argparse
import random
import timeit

from blockade import kernels
from blockade.generate import random_matroid_pair, random_tree


def tree_cases(rng, n, count):
    cases = []
    for _ in range(count):
        tree = random_tree(rng, n, p_open=0.1)
        x = tree.mask({v for v in tree.edges if rng.random() < 0.3})
        cases.append((tree, x))
    return cases


def dp_cases(rng, count):
    cases = []
    for _ in range(count):
        pair = random_matroid_pair(rng, 12, 50, 6, min_nodes=6)
        post, node_parent, masks, ranks, width, index = pair.m._oracle
        if width > kernels.MASK_BITS:
            continue
        subsets = [sum(1 << i for i in index.values() if rng.random() < 0.4)
                   for _ in range(20)]
        cases.append((post, node_parent, masks, ranks, subsets))
    return cases


def kernel_calls(impl, trees, dps):
    return {
        "overflow": lambda: [impl.overflow(t.parent_buf, t.blue_mask, x) for t, x in trees],
        "flow": lambda: [impl.flow(t.parent_buf, t.red_mask, x) for t, x in trees],
        "leafless": lambda: [impl.leafless(t.parent_buf, t.open_mask, x) for t, x in trees],
        "fixed_pair": lambda: [impl.fixed_pair(t.parent_buf, t.blue_mask, t.red_mask)
                               for t, _ in trees],
        "independent": lambda: [impl.independent(p, q, m, r, s)
                                for p, q, m, r, subsets in dps for s in subsets],
    }


def _normalise(value):
    # kernels may return buffers or tuples of buffers; compare as plain lists
    if isinstance(value, (list, tuple)):
        return [_normalise(v) for v in value]
    try:
        return list(value)
    except TypeError:
        return value


def run(n, repeat, seed):
    rng = random.Random(seed)
    trees = tree_cases(rng, n, 20)
    dps = dp_cases(rng, 20)
    backends = kernels.backends()
    calls = {name: kernel_calls(impl, trees, dps) for name, impl in backends.items()}
    rows = []
    for kernel in calls["python"]:
        reference = _normalise(calls["python"][kernel]())
        times = {}
        for name in backends:
            if _normalise(calls[name][kernel]()) != reference:
                raise SystemExit(f"{kernel}: backend {name} disagrees with python")
            times[name] = min(timeit.repeat(calls[name][kernel], number=1, repeat=repeat))
        rows.append((kernel, times))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2000, help="vertices per random tree")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args(argv)
    rows = run(args.n, args.repeat, args.seed)
    names = sorted({name for _, times in rows for name in times}, reverse=True)
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<12}" + "".join(f"{n + ' ms':>14}" for n in names) + f"{'speedup':>10}")
    for kernel, times in rows:
        cells = "".join(f"{times[n] * 1e3:>14.2f}" for n in names)
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{kernel:<12}{cells}{speed:>10.1f}")


if __name__ == "__main__":
    main()
