"""Regenerate the frozen oracle values used by test_acceptance.py.

Run from the repo root:  python tests/tools/regen_pins.py
The printed dict literals are pasted into the PINNED_* constants.
"""

import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import oracles  # noqa: E402

CFG = dict(alpha_name="sqrt2", beta="0", c="1.05", theta="0.05", eta="0.01")


def main():
    out = {}
    for X in (10 ** 5, 10 ** 6, 10 ** 7):
        t0 = time.time()
        h = oracles.headline_counts(CFG["alpha_name"], CFG["beta"], CFG["c"],
                                    CFG["theta"], CFG["eta"], X)
        out[f"headline_{X}"] = h
        print(f"headline X={X}: {h}  ({time.time()-t0:.0f}s)", flush=True)
    for X in (10 ** 4, 10 ** 5, 10 ** 6):
        t0 = time.time()
        t1 = oracles.type1_sides(CFG["alpha_name"], CFG["beta"], CFG["c"],
                                 CFG["theta"], CFG["eta"], X)
        out[f"type1_{X}"] = t1
        print(f"type1 X={X}: {t1}  ({time.time()-t0:.0f}s)", flush=True)
    t0 = time.time()
    A = oracles.build_A(CFG["alpha_name"], CFG["beta"], CFG["c"],
                        CFG["theta"], CFG["eta"], 10 ** 4)
    out["A_10000"] = {"count": len(A), "first": A[:5], "last": A[-5:]}
    print(f"A at 1e4: {out['A_10000']}  ({time.time()-t0:.0f}s)", flush=True)
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
