"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import random
import timeit

from nonor4 import kernels


def arf_case(n, seed=1):
    rng = random.Random(seed)
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return rng.getrandbits(n), rows, n


CASES = {
    "arf_ones n=16": ("arf_ones", arf_case(16)),
    "arf_ones n=18": ("arf_ones", arf_case(18)),
    "residue_counts 4 vars mod 169": ("residue_counts", ([1, 3, -5, 7], [13, 13, 13, 13], 169)),
    "coset_min box=200": ("coset_min", (37, 11, 53, 1, 0, 200)),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; timing the Python fallback only")
    print(f"{'case':34s}" + "".join(f"{b:>12s}" for b in backends) + "     speedup")
    for label, (fn, inputs) in CASES.items():
        results, times = set(), []
        for mod in backends.values():
            f = getattr(mod, fn)
            results.add(repr(f(*inputs)))
            times.append(min(timeit.repeat(lambda: f(*inputs), number=1, repeat=args.repeat)))
        assert len(results) == 1, f"backends disagree on {label}"
        speed = f"{times[0] / times[-1]:10.1f}x" if len(times) > 1 else ""
        print(f"{label:34s}" + "".join(f"{t:11.4f}s" for t in times) + speed)


if __name__ == "__main__":
    main()
