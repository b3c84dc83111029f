"""Compare the compiled and pure-Python kernels on realistic workloads.

    python3 benchmarks/bench_kernels.py [--count 150] [--repeat 3]

Each workload goes through the public entry points with the kernel
attributes of ``ltlfrag._kernels`` swapped, so the numbers include the
Python glue around each kernel call.
"""
import argparse
import random
import statistics
import time

from ltlfrag import _kernels
from ltlfrag.efgame import spoiler_wins
from ltlfrag.gcma import build_gcma, trim
from ltlfrag.looplang import check_stutter_closure, check_swap_closure
from ltlfrag.ltl import Alphabet, to_nnf
from ltlfrag.quotient import left_congruence
from ltlfrag.selftest import random_formula, up_words

KERNELS = ("tableau_delta", "loop_product_search", "ef_tables")


def use(backend):
    impl = _kernels.backends()[backend]
    for name in KERNELS:
        setattr(_kernels, name, getattr(impl, name))


def workloads(count, seed):
    alphabet = Alphabet("abc")
    rng = random.Random(seed)
    nnf = [to_nnf(random_formula(rng, alphabet, 4), alphabet) for _ in range(count)]
    automata = [trim(build_gcma(phi, alphabet)) for phi in nnf]
    parts = [left_congruence(A) for A in automata]
    words = list(up_words(Alphabet("ab"), 3, 3))
    pairs = [(rng.choice(words), rng.choice(words)) for _ in range(count)]

    def tableau():
        for phi in nnf:
            build_gcma(phi, alphabet)

    def loops():
        for A, P in zip(automata, parts):
            check_stutter_closure(A, P)
            check_swap_closure(A, P)

    def games():
        for u, v in pairs:
            spoiler_wins(u, v, "XF", 6)

    return {"tableau": tableau, "loop search": loops, "EF game": games}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=150)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)

    names = sorted(_kernels.backends())
    jobs = workloads(args.count, args.seed)
    results = {}
    for backend in names:
        use(backend)
        for job, fn in jobs.items():
            runs = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                fn()
                runs.append(time.perf_counter() - t0)
            results[job, backend] = statistics.median(runs)
    use(_kernels.BACKEND)

    print(f"{'workload':<14}" + "".join(f"{b:>12}" for b in names)
          + ("     speedup" if len(names) > 1 else ""))
    for job in jobs:
        row = [results[job, b] for b in names]
        line = f"{job:<14}" + "".join(f"{t * 1000:>10.1f}ms" for t in row)
        if len(names) > 1:
            line += f"{results[job, 'python'] / results[job, 'cython']:>11.1f}x"
        print(line)
    if len(names) == 1:
        print("compiled extension not available; only the fallback was timed")


if __name__ == "__main__":
    main()
