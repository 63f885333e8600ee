#!/usr/bin/env python3
"""Sweep the quantifier-prefix transforms over random matrices and
discharge every equivalence obligation, reporting timing and verdicts.

Example:
    python scripts/obligation_sweep.py --samples 10 --seed 42 --depth 16
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from omegacon import prover as pv, transforms as tf, truth as tr
from omegacon.prover import Limits, Proved
from omegacon.syntax import And, Eq, QuantifierArray, Var, free_vars


@dataclass(frozen=True)
class SweepConfig:
    samples: int = 10
    seed: int = 0
    depth: int = 16
    node_budget: int = 1_000_000
    verbose: bool = False


A = QuantifierArray.from_spec


def random_matrix(rng: random.Random, arity: int):
    vars = [f"x{j}" for j in range(arity)]
    f = tr.random_formula(rng, vars, depth=2)
    for v in vars:
        if v not in free_vars(f):
            f = And(f, Eq(Var(v), Var(v)))
    return f


def batch(rng: random.Random):
    return [
        ("pad_prefix", tf.pad_prefix(
            random_matrix(rng, rng.choice([1, 2, 3])),
            A(rng.choice(["A", "E", "AE"])))),
        ("pad_suffix", tf.pad_suffix(
            random_matrix(rng, rng.choice([1, 2, 3])),
            A(rng.choice(["A", "E", "EA"])))),
        ("pair_leading/universal", tf.pair_leading(
            random_matrix(rng, rng.choice([2, 3])), "universal")),
        ("pair_leading/existential", tf.pair_leading(
            random_matrix(rng, rng.choice([2, 3])), "existential")),
        ("absorb_inner_exists", tf.absorb_inner_exists(random_matrix(rng, 2))),
        ("absorb_trailing_exists", tf.absorb_trailing_exists(
            random_matrix(rng, rng.choice([2, 3])))),
    ]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--depth", type=int, default=16)
    ap.add_argument("--nodes", type=int, default=1_000_000)
    ap.add_argument("--verbose", action="store_true")
    ns = ap.parse_args()
    cfg = SweepConfig(ns.samples, ns.seed, ns.depth, ns.nodes, ns.verbose)

    rng = random.Random(cfg.seed)
    limits = Limits(depth=cfg.depth, node_budget=cfg.node_budget,
                    countermodels=False)
    total = failures = 0
    t0 = time.time()
    for i in range(cfg.samples):
        for name, res in batch(rng):
            for ob in res.obligations:
                total += 1
                ot = time.time()
                v = pv.discharge(ob, limits)
                ok = isinstance(v, Proved) and pv.check_proof(
                    v.proof, ob.goal, [f for _, f in ob.background])
                dt = time.time() - ot
                if not ok:
                    failures += 1
                    print(f"FAIL {name} [{ob.source}] {type(v).__name__} {dt:.1f}s")
                elif cfg.verbose:
                    print(f"ok   {name} [{ob.source}] {dt:.2f}s")
        print(f"round {i + 1}/{cfg.samples} done "
              f"(cumulative {time.time() - t0:.1f}s)", flush=True)
    print(f"\n{total - failures}/{total} obligations proved "
          f"in {time.time() - t0:.1f}s")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
