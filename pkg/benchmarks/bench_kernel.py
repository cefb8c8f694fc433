"""Compare the compiled and pure-Python transduction kernels.

    python benchmarks/bench_kernel.py [--sentences 5000] [--length 20] [--repeat 3]

Also times the tree-walking reference evaluator, which builds the unfolded
tree explicitly. All three must agree; the script checks that first.
"""
import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from conftest import random_tree  # noqa: E402
from deptrans import kernel  # noqa: E402
from deptrans.operations import (ALL_OPERATIONS, EdgewiseTransform,  # noqa: E402
                                 apply_transformation_reference, tree_arrays)


def workload(n, length, seed):
    rng = random.Random(seed)
    jobs = []
    for _ in range(n):
        tree = random_tree(max(1, int(rng.gauss(length, 6))), rng)
        rels = sorted(tree.relations)
        t = EdgewiseTransform(tuple((r, rng.choice(ALL_OPERATIONS))
                                    for r in rng.sample(rels, rng.randint(0, len(rels)))))
        heads, forms, lemmas, labels = tree_arrays(tree)
        codes = [t.lookup(lab).code for lab in labels]
        jobs.append((tree, t, (heads, codes, forms, lemmas, labels)))
    return jobs


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sentences", type=int, default=5000)
    ap.add_argument("--length", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    jobs = workload(args.sentences, args.length, args.seed)
    candidates = {"python": kernel.python_transduce}
    if kernel.compiled_transduce is not None:
        candidates["compiled"] = kernel.compiled_transduce
    else:
        print("compiled kernel not built; timing the Python kernel only")

    for tree, t, arrays in jobs[:500]:
        ref = apply_transformation_reference(tree, t)
        for name, fn in candidates.items():
            assert " ".join(fn(*arrays)) == ref, name

    timings = {name: best_of(lambda fn=fn: [fn(*a) for _, _, a in jobs], args.repeat)
               for name, fn in candidates.items()}
    timings["reference"] = best_of(
        lambda: [apply_transformation_reference(tr, t) for tr, t, _ in jobs], args.repeat)

    base = timings["python"]
    print(f"{args.sentences} sentences, mean length ~{args.length}, best of {args.repeat}")
    print(f"{'kernel':<10} {'seconds':>9} {'sent/s':>11} {'vs python':>10}")
    for name, secs in sorted(timings.items(), key=lambda kv: kv[1]):
        print(f"{name:<10} {secs:>9.3f} {args.sentences / secs:>11,.0f} {base / secs:>9.2f}x")


if __name__ == "__main__":
    main()
