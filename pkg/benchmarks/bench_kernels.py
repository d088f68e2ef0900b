"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat N] [--skip-verify]

Kernel timings call both implementations in-process. The end-to-end
verifier timing runs in a subprocess per backend, since the backend is
fixed at import time by MODALQ_BACKEND.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from modalq import kernels
from modalq.broadcast import _stack, enumerate_broadcast_candidates
from modalq.field import FieldSpec
from modalq.subspace import Subspace

VERIFY_SNIPPET = """
import time
from modalq import kernels
from modalq.broadcast import verify_no_broadcast
from modalq.field import FieldSpec
from modalq.subspace import find_diamonds
ds = find_diamonds(4, FieldSpec(2), True, 2)
verify_no_broadcast(ds[0])  # warm-up / jit
t0 = time.perf_counter()
for d in ds[:{n}]:
    assert verify_no_broadcast(d).impossible
print(kernels.BACKEND, (time.perf_counter() - t0) / {n})
"""


def workloads(rng):
    f2, f4 = FieldSpec(2), FieldSpec.builtin(4)
    cands = enumerate_broadcast_candidates(Subspace.full(f2, 2))
    s = _stack(cands, 4, 4)
    return {
        "rref 12x16 GF(2)": ("rref", (rng.integers(0, 2, (12, 16)),), f2),
        "rref 12x16 GF(4)": ("rref", (rng.integers(0, 4, (12, 16)),), f4),
        "batch_rank 2000x4x8 GF(2)": ("batch_rank", (rng.integers(0, 2, (2000, 4, 8)),), f2),
        "stacked_inclusion 51^3 GF(2)": ("stacked_inclusion", (s, s, s), f2),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--verify-count", type=int, default=20)
    ap.add_argument("--skip-verify", action="store_true")
    args = ap.parse_args()

    impls = kernels.implementations()
    rng = np.random.default_rng(0)
    print(f"{'workload':32s}" + "".join(f"{name:>12s}" for name in impls) + "   speedup")
    for label, (fn, inputs, spec) in workloads(rng).items():
        times = {}
        ref = None
        for name, impl in impls.items():
            f = getattr(impl, fn)
            out = f(*[x.copy() for x in inputs], *spec.kernel_args)  # also compiles
            flat = out[0] if isinstance(out, tuple) else out
            if ref is None:
                ref = flat
            assert np.array_equal(ref, flat), f"{name} disagrees on {label}"
            times[name] = min(
                timeit.repeat(lambda: f(*[x.copy() for x in inputs], *spec.kernel_args), number=1, repeat=args.repeat)
            )
        speed = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        print(f"{label:32s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in impls) + f"   {speed:6.1f}x")

    if args.skip_verify:
        return
    print(f"\nverify_no_broadcast, mean of {args.verify_count} GF(2)^4 diamonds:")
    for name in impls:
        env = dict(os.environ, MODALQ_BACKEND=name)
        res = subprocess.run(
            [sys.executable, "-c", VERIFY_SNIPPET.format(n=args.verify_count)],
            env=env, capture_output=True, text=True, check=True,
        )
        backend, secs = res.stdout.split()
        print(f"  {backend:8s} {float(secs) * 1e3:9.1f} ms per diamond")


if __name__ == "__main__":
    main()
