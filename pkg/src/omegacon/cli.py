"""Command-line front end: reproducible verification runs with
machine-readable reports.

Verbs:

* ``emit ARRAY``            — print the generalized omega-consistency
                              sentence for an array spec over {A, E}
                              (``--as-code`` prints its decimal code);
* ``transform STEP FORMULA``— apply an array rewrite and print the
                              result and its proof obligations
                              (``--verify`` discharges them);
* ``verify SCOPE``          — discharge the obligation suite for a
                              claim id (T4, T5, P6, P8..P12), a chain
                              ``main:N,M``, or ``all``;
* ``witness``               — ``--check FILE`` or ``--transfer STEP
                              FILE`` on witness files;
* ``truth-check``           — ``--axioms``, ``--lemma12 ARRAY FORMULA``
                              or ``--theorem13 FILE``.

Global flags: ``--depth``, ``--nodes``, ``--bound``, ``--seed``,
``--json`` (structured report), ``--proof-out FILE``.  Exit status is 0
exactly when every record passes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import __version__, coding, prover as pv, statements, syntax as sx, toytheory as tt
from . import transforms as tf, truth as tru
from .prover import Limits, Proved
from .syntax import QuantifierArray


# ---------------------------------------------------------------------------
# run reports


@dataclass
class Record:
    claim: str
    description: str
    verdict: str  # pass | fail | unknown
    resources: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"


@dataclass
class RunReport:
    command: str
    records: list[Record] = field(default_factory=list)

    def add(self, claim: str, description: str, ok: bool, **resources) -> None:
        self.records.append(
            Record(claim, description, "pass" if ok else "fail", dict(resources))
        )

    @property
    def status(self) -> str:
        return "pass" if all(r.ok for r in self.records) else "fail"

    def to_json(self) -> str:
        return json.dumps(
            {
                "tool": "omegacon",
                "version": __version__,
                "command": self.command,
                "records": [
                    {
                        "claim": r.claim,
                        "description": r.description,
                        "verdict": r.verdict,
                        "resources": r.resources,
                    }
                    for r in self.records
                ],
                "status": self.status,
            },
            indent=2,
        )

    def print_text(self) -> None:
        for r in self.records:
            mark = "ok " if r.ok else "FAIL"
            extra = f"  ({', '.join(f'{k}={v}' for k, v in r.resources.items())})" if r.resources else ""
            print(f"[{mark}] {r.claim}: {r.description}{extra}")
        print(f"status: {self.status}")


# ---------------------------------------------------------------------------
# shared helpers


def _limits(args) -> Limits:
    return Limits(depth=args.depth, node_budget=args.nodes, seed=args.seed)


def _array(spec: str) -> QuantifierArray:
    if not spec:
        raise SystemExit("error: empty quantifier array spec")
    try:
        return QuantifierArray.from_spec(spec)
    except ValueError as e:
        raise SystemExit(f"error: {e}")


_PROOF_SINK: list[tuple[str, pv.ProofNode]] = []


def _discharge(ob: tf.Obligation, limits: Limits, report: RunReport, what: str) -> None:
    v = pv.discharge(ob, limits)
    ok = isinstance(v, Proved)
    if ok:
        ok = pv.check_proof(v.proof, ob.goal, [f for _, f in ob.background])
    res = {"steps": v.proof.steps()} if ok else {"outcome": type(v).__name__.lower()}
    report.add(ob.source, what, ok, **res)
    if ok:
        _PROOF_SINK.append((f"{ob.source}: {what}", v.proof))


def _canonical_formula(arity: int) -> sx.Formula:
    """A formula with exactly ``arity`` distinct free variables, used to
    instantiate obligation suites."""
    if arity <= 0:
        raise ValueError("arity must be positive")
    if arity == 1:
        return sx.parse("x0 = 0")
    f = sx.parse("x0 = x1")
    for i in range(2, arity):
        f = sx.And(f, sx.parse(f"x{i-1} = x{i}"))
    return f


# ---------------------------------------------------------------------------
# verbs


def cmd_emit(args) -> RunReport:
    q = _array(args.array)
    st = statements.build_sentence(q)
    if args.as_code:
        print(coding.encode(st.sentence).value)
    else:
        print(sx.print_formula(st.sentence))
    report = RunReport(command="emit")
    report.add("emit", f"statement for array {q.spec()}", True)
    return report


_TRANSFORMS = {
    "pad_prefix": lambda y, a: tf.pad_prefix(y, a),
    "pad_suffix": lambda y, a: tf.pad_suffix(y, a),
    "pair_leading_universal": lambda y, a: tf.pair_leading(y, "universal"),
    "pair_leading_existential": lambda y, a: tf.pair_leading(y, "existential"),
    "absorb_inner_exists": lambda y, a: tf.absorb_inner_exists(y),
    "absorb_trailing_exists": lambda y, a: tf.absorb_trailing_exists(y),
    "fix_first_by_numeral": None,  # handled separately (takes a numeral)
}


def cmd_transform(args) -> RunReport:
    report = RunReport(command="transform")
    y = sx.parse(args.formula)
    if args.step == "fix_first_by_numeral":
        res = tf.fix_first_by_numeral(y, args.numeral)
    elif args.step in _TRANSFORMS:
        extra = _array(args.extra) if args.extra else None
        fn = _TRANSFORMS[args.step]
        if args.step.startswith("pad_") and extra is None:
            raise SystemExit("error: padding needs --extra")
        res = fn(y, extra)
    else:
        raise SystemExit(f"error: unknown transform {args.step!r}")
    print(sx.print_formula(res.output))
    for ob in res.obligations:
        print(f"obligation [{ob.source}]: {sx.print_formula(ob.goal)}")
    if args.verify:
        limits = _limits(args)
        for ob in res.obligations:
            _discharge(ob, limits, report, f"{args.step} obligation")
    report.add("transform", f"{args.step} applied", True)
    return report


_PAD_CORPUS = [(1, "A"), (1, "E"), (2, "A"), (2, "AE")]


def _verify_claim(claim: str, limits: Limits, report: RunReport) -> None:
    if claim == "T4":
        for arity, extra in _PAD_CORPUS:
            res = tf.pad_prefix(_canonical_formula(arity), _array(extra))
            for ob in res.obligations:
                _discharge(ob, limits, report, f"front padding, arity {arity}, extra {extra}")
    elif claim == "T5":
        for arity, extra in _PAD_CORPUS:
            res = tf.pad_suffix(_canonical_formula(arity), _array(extra))
            for ob in res.obligations:
                _discharge(ob, limits, report, f"back padding, arity {arity}, extra {extra}")
    elif claim == "P6":
        w = tt.seed_witness(sx.parse("x0 = x0"), _array("E"), bound=2, limits=limits)
        ok = tt.witness_check(w, tt.WitnessBounds(2, limits))
        report.add("P6", "seeded single-existential witness accepted", ok)
        fp = tt.falsum_from_witness(w, limits)
        ok2 = fp is not None and pv.check_proof(fp, sx.FALSUM, w.theory().formulas())
        report.add("P6", "witness yields a checked proof of falsum", ok2)
        if ok2:
            w2 = tt.witness_from_falsum(fp, w.extra_axioms, limits)
            report.add(
                "P6",
                "proof of falsum converts back to an accepted witness",
                tt.witness_check(w2, tt.WitnessBounds(0, limits)),
            )
    elif claim in ("P8", "P9"):
        kind = "universal" if claim == "P8" else "existential"
        for arity in (2, 3):
            res = tf.pair_leading(_canonical_formula(arity), kind)
            for ob in res.obligations:
                _discharge(ob, limits, report, f"{kind} pairing, arity {arity}")
    elif claim == "P10":
        res = tf.absorb_inner_exists(_canonical_formula(2))
        for ob in res.obligations:
            _discharge(ob, limits, report, "inner existential absorption")
    elif claim == "P11":
        res = tf.fix_first_by_numeral(_canonical_formula(2), 3)
        report.add(
            "P11",
            "numeral fixing emits no obligation (evidence re-indexing only)",
            len(res.obligations) == 0,
        )
    elif claim == "P12":
        for arity in (2, 3):
            res = tf.absorb_trailing_exists(_canonical_formula(arity))
            for ob in res.obligations:
                _discharge(ob, limits, report, f"trailing existential absorption, arity {arity}")
    elif claim.startswith("main:"):
        try:
            n, m = (int(x) for x in claim[5:].split(","))
        except ValueError:
            raise SystemExit(f"error: bad chain spec {claim!r} (use main:N,M)")
        for step in tf.main_chain(n, m):
            what = f"{step.source_array.spec()} -> {step.target_array.spec()} ({step.transform})"
            if step.transform == "identity":
                report.add(step.claim, what, True)
                continue
            if step.transform == "fix_first_by_numeral":
                res = tf.fix_first_by_numeral(_canonical_formula(len(step.source_array)), 0)
                report.add(step.claim, what, len(res.obligations) == 0)
                continue
            y = _canonical_formula(len(step.source_array))
            if step.transform == "pair_leading_universal":
                res = tf.pair_leading(y, "universal")
            elif step.transform == "absorb_inner_exists":
                res = tf.absorb_inner_exists(y)
            elif step.transform == "absorb_trailing_exists":
                res = tf.absorb_trailing_exists(y)
            else:
                raise SystemExit(f"error: unexpected chain transform {step.transform!r}")
            for ob in res.obligations:
                _discharge(ob, limits, report, what)
    else:
        raise SystemExit(f"error: unknown claim id {claim!r}")


_ALL_CLAIMS = ["T4", "T5", "P6", "P8", "P9", "P10", "P11", "P12"]


def cmd_verify(args) -> RunReport:
    report = RunReport(command="verify")
    limits = _limits(args)
    scope = args.scope
    if scope == "all":
        for claim in _ALL_CLAIMS:
            _verify_claim(claim, limits, report)
        for n in range(3):
            for m in range(3):
                _verify_claim(f"main:{n},{m}", limits, report)
    else:
        _verify_claim(scope, limits, report)
    return report


def cmd_witness(args) -> RunReport:
    report = RunReport(command="witness")
    with open(args.file) as fh:
        w = tt.witness_from_json(fh.read())
    limits = _limits(args)
    bounds = tt.WitnessBounds(args.bound, limits)
    if args.transfer:
        options = {"limits": limits}
        if args.extra:
            options["extra"] = _array(args.extra)
        w2 = tt.transfer_witness(w, args.transfer, **options)
        ok = tt.witness_check(w2, bounds)
        report.add(
            "transfer",
            f"{args.transfer}: {w.array.spec()} -> {w2.array.spec()}, rechecked",
            ok,
            instances=len(w2.evidence),
        )
        out = args.out or (args.file + ".transferred.json")
        with open(out, "w") as fh:
            fh.write(tt.witness_to_json(w2))
        print(f"wrote {out}")
    else:
        ok = tt.witness_check(w, bounds)
        report.add(
            "check",
            f"witness for array {w.array.spec()} at range {min(w.bound, args.bound)}",
            ok,
            instances=len(w.evidence),
        )
    return report


def cmd_truth_check(args) -> RunReport:
    report = RunReport(command="truth-check")
    limits = _limits(args)
    if args.axioms:
        rep = tru.check_axioms(samples=args.samples, bound=args.bound, proof_limits=limits, seed=args.seed)
        for ax, (p, t) in sorted(rep.results.items()):
            report.add(ax, f"{p}/{t} determined-case instances", p == t)
    if args.lemma12:
        spec, formula = args.lemma12
        rep = tru.replay_lemma12(_array(spec), sx.parse(formula), bound=args.bound)
        for link in rep.links:
            report.add(
                "L12",
                f"link {link.index} ({link.quantifier}): {link.checked} cases",
                link.confirmed,
            )
    if args.theorem13:
        with open(args.theorem13) as fh:
            w = tt.witness_from_json(fh.read())
        rep = tru.replay_theorem13(w.array, w, bound=args.bound, proof_limits=limits)
        for mv in rep.moves:
            report.add("T13", mv.name, True, outcome="holds" if mv.passed else f"blocks: {mv.detail}")
        report.add(
            "T13",
            "no contradiction derivable over the sound base theory",
            not rep.contradiction_reached,
        )
    if not report.records:
        raise SystemExit("error: choose --axioms, --lemma12 or --theorem13")
    return report


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="omegacon",
        description="workbench for generalized omega-consistency statements",
    )
    p.add_argument("--depth", type=int, default=12, help="gamma-round deepening limit")
    p.add_argument("--nodes", type=int, default=200_000, help="search node budget")
    p.add_argument("--bound", type=int, default=8, help="instance / quantifier range")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--json", action="store_true", help="print a structured report")
    p.add_argument("--proof-out", help="write found proofs to this file")
    sub = p.add_subparsers(dest="verb", required=True)

    pe = sub.add_parser("emit", help="print a generalized omega-consistency sentence")
    pe.add_argument("array", help="quantifier array spec over {A, E}")
    pe.add_argument("--as-code", action="store_true")
    pe.set_defaults(fn=cmd_emit)

    pt = sub.add_parser("transform", help="apply an array rewrite to a formula")
    pt.add_argument("step", choices=sorted(_TRANSFORMS))
    pt.add_argument("formula")
    pt.add_argument("--extra", help="array spec for padding steps")
    pt.add_argument("--numeral", type=int, default=0)
    pt.add_argument("--verify", action="store_true", help="discharge the obligations")
    pt.set_defaults(fn=cmd_transform)

    pV = sub.add_parser("verify", help="discharge an obligation suite")
    pV.add_argument("scope", help="T4, T5, P6, P8..P12, main:N,M, or all")
    pV.set_defaults(fn=cmd_verify)

    pw = sub.add_parser("witness", help="check or transfer a witness file")
    pw.add_argument("file")
    pw.add_argument("--check", action="store_true", help="(default action)")
    pw.add_argument("--transfer", help="transfer step name")
    pw.add_argument("--extra", help="array spec for padding transfers")
    pw.add_argument("--out", help="output file for the transferred witness")
    pw.set_defaults(fn=cmd_witness)

    pc = sub.add_parser("truth-check", help="bounded truth-oracle checks")
    pc.add_argument("--axioms", action="store_true")
    pc.add_argument("--samples", type=int, default=100)
    pc.add_argument("--lemma12", nargs=2, metavar=("ARRAY", "FORMULA"))
    pc.add_argument("--theorem13", metavar="WITNESSFILE")
    pc.set_defaults(fn=cmd_truth_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _PROOF_SINK.clear()
    report: RunReport = args.fn(args)
    if args.proof_out and _PROOF_SINK:
        with open(args.proof_out, "w") as fh:
            for title, proof in _PROOF_SINK:
                fh.write(f"# {title}\n{pv.serialize_proof(proof)}\n")
    if args.json:
        print(report.to_json())
    else:
        report.print_text()
    return 0 if report.status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
