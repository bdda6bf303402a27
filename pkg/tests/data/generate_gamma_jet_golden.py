"""Regenerate gamma_jet_golden.json.

Run manually: python3 tests/data/generate_gamma_jet_golden.py

The oracle is mpmath at 50 digits: Taylor coefficients of
eps -> 1/Gamma(l + 1 + eps) by high-precision numerical differentiation.
The library under test never imports mpmath; these frozen numbers are the
independent route the jet code is compared against.
"""

import json
import os
from fractions import Fraction

import mpmath as mp

L_VALUES = ["-3", "-2", "-1", "0", "1", "2", "3", "-11/4", "1/3"]
ORDER = 6


def main() -> None:
    mp.mp.dps = 50
    entries = []
    for s in L_VALUES:
        l = Fraction(s)
        lm = mp.mpf(l.numerator) / mp.mpf(l.denominator)
        coeffs = mp.taylor(lambda e: mp.rgamma(lm + 1 + e), 0, ORDER - 1)
        entries.append({"l": s, "coeffs": [float(c) for c in coeffs]})
    out = os.path.join(os.path.dirname(__file__), "gamma_jet_golden.json")
    with open(out, "w") as fh:
        json.dump({"order": ORDER, "entries": entries}, fh, indent=1)
        fh.write("\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
