"""Desk-scale workbench for generalized omega-consistency statements
over quantifier arrays.

Layers, bottom to top:

* ``syntax``     — first-order arithmetic ASTs, parser, printer.
* ``coding``     — Goedel numbering and the code-level function layer.
* ``prover``     — bounded tableau prover with checkable proof objects.
* ``statements`` — the generalized omega-consistency formula builder.
* ``transforms`` — quantifier-array rewrites with proof obligations.
* ``toytheory``  — a finite object theory, derivability-condition tests,
                   bounded omega-inconsistency witnesses.
* ``truth``      — bounded three-valued standard-model truth oracle.
* ``cli``        — reproducible verification runs.
"""

__version__ = "0.1.0"
