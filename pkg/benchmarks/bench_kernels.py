"""Time the hot kernels on the numba and numpy backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--field 2^8]

The first numba call of each kernel (compilation) is timed separately and
excluded from the steady-state median. Outputs of both backends are compared.
"""

import argparse
import statistics
import time

import numpy as np

from galoispts import kernels
from galoispts.cli import parse_field
from galoispts.curve import make_curve
from galoispts.projective import plane_points


def _median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def _cases(F, rng):
    C = make_curve({"hermitian": int(round(F.q ** 0.5))} if F.n % 2 == 0 else {"fermat": 5}, F)
    exps = np.array(list(C.coeffs), dtype=np.int64)
    coefs = np.array(list(C.coeffs.values()), dtype=np.int64)
    pts = np.array([P.coords for P in plane_points(F)], dtype=np.int64)
    mats = rng.integers(0, F.q, size=(2000, 3, 3), dtype=np.int64)
    kt = F.kt
    A = rng.integers(0, F.q, size=(120, 160), dtype=np.int64)
    return {
        "eval_poly": lambda: kernels.eval_poly(kt, exps, coefs, pts),
        "apply_mats": lambda: kernels.apply_mats(kt, mats[:64], pts[:4096]),
        "maps_onto": lambda: kernels.maps_onto(kt, mats, pts[:256], exps, coefs),
        "row_reduce": lambda: kernels.row_reduce(kt, A),
        "chart_zeros": lambda: kernels.chart_zeros(kt, exps, coefs, F.q),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", default="2^8", help="field order, e.g. 2^8 or 3^6")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    F = parse_field(args.field)
    backends = ["numpy"] + (["numba"] if kernels.numba is not None else [])
    cases = _cases(F, np.random.default_rng(0))
    print(f"field {F}, {len(plane_points(F))} plane points, backends {backends}")
    print(f"{'kernel':<12} {'numpy (s)':>10} {'numba (s)':>10} {'compile (s)':>12} {'speedup':>8} same")
    prev = kernels.backend()
    try:
        for name, fn in cases.items():
            row, outs, compile_t = {}, {}, float("nan")
            for b in backends:
                kernels.set_backend(b)
                t0 = time.perf_counter()
                outs[b] = fn()
                if b == "numba":
                    compile_t = time.perf_counter() - t0
                row[b] = _median_time(fn, args.repeat)
            same = "-"
            if len(outs) == 2:
                a, b = outs["numpy"], outs["numba"]
                same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) \
                    else np.array_equal(a, b)
            nb = row.get("numba", float("nan"))
            print(f"{name:<12} {row['numpy']:>10.4f} {nb:>10.4f} {compile_t:>12.2f} "
                  f"{row['numpy'] / nb:>8.1f} {same}")
    finally:
        kernels.set_backend(prev)


if __name__ == "__main__":
    main()
