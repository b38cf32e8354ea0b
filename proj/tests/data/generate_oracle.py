#!/usr/bin/env python3
"""Regenerate specfun_oracle.inc (frozen reference values for the special-function tests).

Points come from a splitmix64 stream so the set is reproducible; values are
computed with mpmath at 30 significant digits and rounded to double.
"""
import mpmath as mp

mp.mp.dps = 30

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self, lo, hi):
        return lo + (hi - lo) * (self.next_u64() >> 11) * (1.0 / (1 << 53))


def faddeeva(z):
    return mp.exp(-z * z) * mp.erfc(-1j * z)


def main():
    rng = SplitMix64(0x5EED5EED)
    rows = []
    # kind 0: w(z), |z| <= 30, capped so the lower-half growth stays in double range
    n = 0
    while n < 400:
        x = rng.uniform(-30.0, 30.0)
        y = rng.uniform(-30.0, 30.0)
        if x * x + y * y > 900.0:
            continue
        if y < 0 and y * y - x * x > 600.0:
            continue
        w = faddeeva(mp.mpc(x, y))
        rows.append((0, x, y, w))
        n += 1
    # kind 1: erf(z), |z| <= 25
    n = 0
    while n < 300:
        x = rng.uniform(-25.0, 25.0)
        y = rng.uniform(-25.0, 25.0)
        if x * x + y * y > 625.0:
            continue
        if y * y - x * x > 600.0:
            continue
        rows.append((1, x, y, mp.erf(mp.mpc(x, y))))
        n += 1
    # kind 2: erfi(z), same domain as erf rotated
    n = 0
    while n < 300:
        x = rng.uniform(-25.0, 25.0)
        y = rng.uniform(-25.0, 25.0)
        if x * x + y * y > 625.0:
            continue
        if x * x - y * y > 600.0:
            continue
        rows.append((2, x, y, mp.erfi(mp.mpc(x, y))))
        n += 1

    with open("specfun_oracle.inc", "w") as fh:
        fh.write("// generated by generate_oracle.py; do not edit by hand\n")
        for kind, x, y, v in rows:
            fh.write("{%d, %.17g, %.17g, %.17g, %.17g},\n"
                     % (kind, x, y, float(v.real), float(v.imag)))
    print(f"wrote {len(rows)} rows")


if __name__ == "__main__":
    main()
