"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Times the Gaussian stream, the tail second moment T(u) on a dense grid, and
(optionally) a short Monte Carlo run under each backend.
"""
import argparse
import importlib
import os
import subprocess
import sys
import timeit

import numpy as np

from rlpwidth import _kernels_py


def load_compiled():
    try:
        return importlib.import_module("rlpwidth._kernels_c")
    except ImportError:
        return None


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_rows(mod, repeat):
    u = np.linspace(-10.0, 40.0, 1_000_000)
    return {
        "normals 1e6": best_of(lambda: mod.normals(12345, 1_000_000), repeat),
        "uniforms 1e6": best_of(lambda: mod.uniforms(12345, 1_000_000), repeat),
        "T(u) 1e6": best_of(lambda: mod.tail_second_moment(u), repeat),
        "T(u) scaled 1e6": best_of(lambda: mod.tail_second_moment(u, True), repeat),
    }


def end_to_end(pure: bool) -> float:
    # a fresh interpreter so the backend choice at import is honest
    env = dict(os.environ)
    env.pop("RLPWIDTH_PURE_PYTHON", None)
    if pure:
        env["RLPWIDTH_PURE_PYTHON"] = "1"
    code = ("import time;from rlpwidth.montecarlo import TrialConfig, run_trials;"
            "t=time.perf_counter();run_trials(TrialConfig(alpha=20, n=50, trials=20, master_seed=1));"
            "print(time.perf_counter()-t)")
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(res.stdout.strip())


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--end-to-end", action="store_true")
    args = parser.parse_args()

    compiled = load_compiled()
    py = kernel_rows(_kernels_py, args.repeat)
    c = kernel_rows(compiled, args.repeat) if compiled is not None else {}
    if compiled is None:
        print("compiled kernels not built; showing the fallback only")

    print(f"{'kernel':<18}{'python [ms]':>13}{'cython [ms]':>13}{'speedup':>9}")
    for name, t_py in py.items():
        t_c = c.get(name)
        cs = "" if t_c is None else f"{1e3 * t_c:13.2f}{t_py / t_c:8.1f}x"
        print(f"{name:<18}{1e3 * t_py:13.2f}{cs}")

    if args.end_to_end:
        t_py = end_to_end(True)
        line = f"{'20 trials a=20':<18}{1e3 * t_py:13.1f}"
        if compiled is not None:
            t_c = end_to_end(False)
            line += f"{1e3 * t_c:13.1f}{t_py / t_c:8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
