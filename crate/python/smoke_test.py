#!/usr/bin/env python3
"""Smoke test for the shiftlab_py extension module.

Build the extension first:

    cargo build -p shiftlab-py --release

then run:

    python3 python/smoke_test.py
"""

import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / "release" / "libshiftlab_py.so",
        REPO / "target" / "debug" / "libshiftlab_py.so",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit(
            "libshiftlab_py.so not found; run `cargo build -p shiftlab-py --release` first"
        )
    staging = Path(tempfile.mkdtemp(prefix="shiftlab-py-"))
    shutil.copy2(built, staging / "shiftlab_py.so")
    sys.path.insert(0, str(staging))
    import shiftlab_py

    return shiftlab_py


def check(name, ok):
    print(f"{'PASS' if ok else 'FAIL'}  {name}")
    if not ok:
        sys.exit(1)


def main():
    sl = load_module()

    fib = sl.Subshift.substitution({"0": "01", "1": "0"})
    oracle = fib.oracle(60)
    check("fibonacci oracle certified", not oracle.is_unstable())
    series = oracle.complexity_series(30)
    check("fibonacci P(n) = n + 1", series == [n + 1 for n in range(1, 31)])
    check("fibonacci L_2", oracle.factors(2) == ["00", "01", "10"])
    check("fibonacci k_1 = 2", oracle.k_n(1) == 2)
    check("fibonacci d_3 = 4", oracle.doubling_time(3) == 4)
    check("fibonacci '1' extends uniquely once", oracle.unique_extensions("1")[:2] == (1, 1))
    k_w, returns = oracle.max_return_gap("1")
    check("fibonacci K_1 = 3", k_w == 3)
    check("fibonacci aut count at range 1", oracle.automorphism_count(1) == 3)
    check("fibonacci gamma(n) = 2n + 1", oracle.growth_sigma(6) == [2 * n + 1 for n in range(1, 7)])

    tm = sl.Subshift.substitution({"0": "01", "1": "10"})
    tmo = tm.oracle(60)
    check("thue-morse P(1..6)", tmo.complexity_series(6) == [2, 4, 6, 10, 12, 16])
    check("thue-morse Aut_0 has 2 elements", tmo.automorphism_count(0) == 2)
    auts1 = tmo.automorphisms(1)
    check("thue-morse Aut_1 has 6 elements", len(auts1) == 6)
    exchange = next(
        a for a in auts1 if a.minimal_range() == 0 and a.apply("0110") == "1001"
    )
    check("exchange is an involution", exchange.equals(exchange.inverse()))

    fib_big = fib.oracle(200)
    folner = fib_big.folner_empirical(1, 1, 2)
    check("fibonacci F_1 has 5 elements", folner.size() == 5)
    check("fibonacci f values (3, 5, 7)", folner.f_values() == [3, 5, 7])
    sigma = fib_big.shift_power(1)
    check("folner ratio of sigma is 2/5", folner.ratio(sigma) == (2, 5))
    ident = fib_big.shift_power(0)
    check("folner ratio of id is 0", folner.ratio(ident)[0] == 0)

    check("step bound d=3", sl.nilpotent_step_bound(3) == 1)
    check("step bound d=7", sl.nilpotent_step_bound(7) == 3)
    check("reference doubling (100, 1/2, 2) = 21", sl.reference_doubling_time(100, 0.5, 2.0) == 21)
    check("slow window on constant f", sl.find_slow_window([5] * 300, 3, 0.4) == 100)

    per = sl.Subshift.periodic("01")
    per_oracle = per.oracle(20)
    check("periodic flagged at n = 1", per_oracle.detect_periodicity() == 1)

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
