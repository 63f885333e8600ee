#!/usr/bin/env python3
"""End-to-end demo of the witness machinery: seed a witness for a
quantifier array, transfer it across a prefix transform, and (for the
single-existential case) round-trip it through a checked proof of falsum.

Example:
    python scripts/witness_pipeline_demo.py --bound 3
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from omegacon import prover as pv, syntax as sx, toytheory as tt
from omegacon.syntax import FALSUM, QuantifierArray

A = QuantifierArray.from_spec


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=3,
                    help="instance range for seeded evidence")
    ns = ap.parse_args()

    # 1. seed and check a single-universal witness
    y = sx.parse("(x0 + 0) = x0")
    w = tt.seed_witness(y, A("A"), bound=ns.bound)
    print(f"seeded witness for {sx.print_formula(y)} over array A: "
          f"{len(w.evidence)} evidence entries, "
          f"check = {tt.witness_check(w)}")

    # 2. transfer it across prefix padding
    w2 = tt.transfer_witness(w, "pad_prefix", extra=A("AE"))
    ok2 = tt.witness_check(w2, tt.WitnessBounds(instance_range=2 * ns.bound))
    print(f"transferred across pad_prefix to array {w2.array.spec()}: "
          f"{len(w2.evidence)} entries, check = {ok2}")

    # 3. single-existential witness -> checked falsum proof -> back
    y_e = sx.parse("x0 = 0")
    we = tt.seed_witness(y_e, A("E"), bound=ns.bound)
    p = tt.falsum_from_witness(we)
    checked = p is not None and pv.check_proof(p, FALSUM, we.theory().formulas())
    print(f"falsum proof from single-existential witness: checked = {checked}")
    wb = tt.witness_from_falsum(p, extra_axioms=we.extra_axioms)
    print(f"witness recovered from falsum proof: check = {tt.witness_check(wb)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
