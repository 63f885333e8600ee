"""Bounded first-order validity search with checkable proof objects.

The calculus is a ground tableau over closed formulas with

* the usual alpha/beta rules for connectives,
* gamma (universal) instantiation from a pool of branch terms, extended
  with pair constructors up to nesting two,
* delta (existential) expansion with fresh witness constants,
* a cut rule (used only when composing proofs, never during search),
* branch closure modulo a congruence closure of the branch equations.

``prove`` runs a finite countermodel scan first and then iterative
deepening on the number of gamma rounds per branch.  Proof objects are
plain trees of inference steps; ``check_proof`` replays them against the
published rule table independently of the search.
"""

from __future__ import annotations

import itertools
import random
import sys
from collections import deque
from dataclasses import dataclass, field, replace

from . import syntax as sx
from .syntax import (
    Add,
    And,
    App,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Imp,
    Mul,
    Not,
    Or,
    Pair,
    Pred,
    Proj,
    Succ,
    Term,
    Var,
    Zero,
)


def neg(f: Formula) -> Formula:
    return f.arg if isinstance(f, Not) else Not(f)


def _ensure_recursion_room(n: int = 20_000) -> None:
    # moderately deep recursion is normal here; truly deep structures
    # (linear gamma chains) are walked iteratively instead
    if sys.getrecursionlimit() < n:
        sys.setrecursionlimit(n)


# ---------------------------------------------------------------------------
# limits and verdicts


@dataclass(frozen=True, slots=True)
class Limits:
    depth: int = 12
    node_budget: int = 200_000
    pool_cap: int = 32
    model_size: int = 4
    model_budget: int = 20_000
    countermodels: bool = True
    seed: int = 0


@dataclass(frozen=True)
class ProofNode:
    rule: str  # close | alpha | beta | gamma | delta | cut
    principal: Formula | None = None
    term: Term | None = None
    cut_formula: Formula | None = None
    children: tuple["ProofNode", ...] = ()

    def steps(self) -> int:
        count = 0
        stack = [self]
        while stack:
            node = stack.pop()
            count += 1
            stack.extend(node.children)
        return count


@dataclass(frozen=True)
class FiniteModel:
    size: int
    funcs: dict
    preds: dict

    def describe(self) -> str:
        parts = [f"domain size {self.size}"]
        for k, tbl in sorted(self.funcs.items(), key=lambda kv: str(kv[0])):
            parts.append(f"{k} -> {tbl}")
        for k, tbl in sorted(self.preds.items(), key=lambda kv: str(kv[0])):
            parts.append(f"{k} true on {sorted(tbl)}")
        return "; ".join(parts)


@dataclass(frozen=True)
class Proved:
    proof: ProofNode


@dataclass(frozen=True)
class Refuted:
    model: FiniteModel


@dataclass(frozen=True)
class Unknown:
    resource: str


Verdict = Proved | Refuted | Unknown


class ProofError(ValueError):
    pass


# ---------------------------------------------------------------------------
# congruence closure


def _decompose(t: Term) -> tuple[object, tuple[Term, ...]]:
    if isinstance(t, Zero):
        return "0", ()
    if isinstance(t, Succ):
        return "S", (t.arg,)
    if isinstance(t, Add):
        return "+", (t.left, t.right)
    if isinstance(t, Mul):
        return "*", (t.left, t.right)
    if isinstance(t, Pair):
        return "pair", (t.left, t.right)
    if isinstance(t, Proj):
        return ("proj", t.index), (t.arg,)
    if isinstance(t, Var):
        return ("var", t.name), ()
    if isinstance(t, App):
        return ("app", t.name), t.args
    raise TypeError(f"not a term: {t!r}")


class CC:
    """Congruence closure over ground equations."""

    def __init__(self) -> None:
        self.parent: dict[Term, Term] = {}
        self.size: dict[Term, int] = {}
        self.sig: dict[tuple, Term] = {}
        self.uses: dict[Term, list[Term]] = {}

    def clone(self) -> "CC":
        c = CC.__new__(CC)
        c.parent = dict(self.parent)
        c.size = dict(self.size)
        c.sig = dict(self.sig)
        c.uses = {k: list(v) for k, v in self.uses.items()}
        return c

    def find(self, t: Term) -> Term:
        p = self.parent
        root = t
        while p[root] is not root:
            root = p[root]
        while p[t] is not root:
            p[t], t = root, p[t]
        return root

    def add_term(self, t: Term) -> None:
        if t in self.parent:
            return
        label, children = _decompose(t)
        for c in children:
            self.add_term(c)
        self.parent[t] = t
        self.size[t] = 1
        self.uses[t] = []
        for c in children:
            self.uses[self.find(c)].append(t)
        self._check_sig(t)

    def _check_sig(self, t: Term) -> None:
        label, children = _decompose(t)
        key = (label, tuple(self.find(c) for c in children))
        other = self.sig.get(key)
        if other is None:
            self.sig[key] = t
        else:
            self._merge(other, t)

    def _merge(self, a: Term, b: Term) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra is rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        moved = self.uses.pop(rb, [])
        self.uses.setdefault(ra, []).extend(moved)
        for p in moved:
            self._check_sig(p)

    def add_equation(self, t: Term, u: Term) -> None:
        self.add_term(t)
        self.add_term(u)
        self._merge(t, u)

    def equiv(self, t: Term, u: Term) -> bool:
        self.add_term(t)
        self.add_term(u)
        return self.find(t) is self.find(u)


# ---------------------------------------------------------------------------
# formula comparison modulo branch equalities


def _term_ground(t: Term) -> bool:
    return not sx.term_vars(t)


def _terms_match(t: Term, u: Term, env: dict[str, str], cc: CC) -> bool:
    if isinstance(t, Var) or isinstance(u, Var):
        if isinstance(t, Var) and isinstance(u, Var):
            return env.get(t.name, t.name) == u.name
        return False
    if _term_ground(t) and _term_ground(u):
        return cc.equiv(t, u)
    lt, ct = _decompose(t)
    lu, cu = _decompose(u)
    if lt != lu or len(ct) != len(cu):
        return False
    return all(_terms_match(a, b, env, cc) for a, b in zip(ct, cu))


def _formulas_match(f: Formula, g: Formula, env: dict[str, str], cc: CC) -> bool:
    if type(f) is not type(g):
        return False
    if isinstance(f, Eq):
        return _terms_match(f.left, g.left, env, cc) and _terms_match(f.right, g.right, env, cc)
    if isinstance(f, Pred):
        return (
            f.name == g.name
            and len(f.args) == len(g.args)
            and all(_terms_match(a, b, env, cc) for a, b in zip(f.args, g.args))
        )
    if isinstance(f, Not):
        return _formulas_match(f.arg, g.arg, env, cc)
    if isinstance(f, (And, Or, Imp, Iff)):
        return _formulas_match(f.left, g.left, env, cc) and _formulas_match(f.right, g.right, env, cc)
    if isinstance(f, (Forall, Exists)):
        return _formulas_match(f.body, g.body, {**env, f.var: g.var}, cc)
    raise TypeError(f"not a formula: {f!r}")


def _skeleton(f: Formula) -> str:
    if isinstance(f, Eq):
        return "="
    if isinstance(f, Pred):
        return f"P:{f.name}/{len(f.args)}"
    if isinstance(f, Not):
        return "!" + _skeleton(f.arg)
    if isinstance(f, And):
        return f"&({_skeleton(f.left)},{_skeleton(f.right)})"
    if isinstance(f, Or):
        return f"|({_skeleton(f.left)},{_skeleton(f.right)})"
    if isinstance(f, Imp):
        return f">({_skeleton(f.left)},{_skeleton(f.right)})"
    if isinstance(f, Iff):
        return f"~({_skeleton(f.left)},{_skeleton(f.right)})"
    if isinstance(f, Forall):
        return f"A({_skeleton(f.body)})"
    if isinstance(f, Exists):
        return f"E({_skeleton(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


def branch_closes(formulas: list[Formula], base_cc: CC | None = None) -> bool:
    """True iff the branch is contradictory modulo its positive equations."""
    cc = base_cc.clone() if base_cc is not None else CC()
    pos: dict[str, list[Formula]] = {}
    negd: dict[str, list[Formula]] = {}
    for f in formulas:
        if isinstance(f, Eq) and _term_ground(f.left) and _term_ground(f.right):
            cc.add_equation(f.left, f.right)
    for f in formulas:
        if isinstance(f, Not):
            negd.setdefault(_skeleton(f.arg), []).append(f.arg)
        else:
            pos.setdefault(_skeleton(f), []).append(f)
    # an inequality t != u with t ~ u (covers reflexivity t != t)
    for g in negd.get("=", []):
        assert isinstance(g, Eq)
        if _term_ground(g.left) and _term_ground(g.right) and cc.equiv(g.left, g.right):
            return True
    for key, gs in negd.items():
        for g in gs:
            for h in pos.get(key, []):
                if _formulas_match(h, g, {}, cc):
                    return True
    return False


# ---------------------------------------------------------------------------
# expansion rules


def alpha_expand(f: Formula) -> list[Formula] | None:
    if isinstance(f, And):
        return [f.left, f.right]
    if isinstance(f, Not):
        g = f.arg
        if isinstance(g, Not):
            return [g.arg]
        if isinstance(g, Or):
            return [neg(g.left), neg(g.right)]
        if isinstance(g, Imp):
            return [g.left, neg(g.right)]
    return None


def beta_expand(f: Formula) -> tuple[list[Formula], list[Formula]] | None:
    if isinstance(f, Or):
        return [f.left], [f.right]
    if isinstance(f, Imp):
        return [neg(f.left)], [f.right]
    if isinstance(f, Iff):
        return [f.left, f.right], [neg(f.left), neg(f.right)]
    if isinstance(f, Not):
        g = f.arg
        if isinstance(g, And):
            return [neg(g.left)], [neg(g.right)]
        if isinstance(g, Iff):
            return [g.left, neg(g.right)], [neg(g.left), g.right]
    return None


def is_gamma(f: Formula) -> bool:
    return isinstance(f, Forall) or (isinstance(f, Not) and isinstance(f.arg, Exists))


def gamma_instance(f: Formula, t: Term) -> Formula:
    if isinstance(f, Forall):
        return sx.substitute(f.body, f.var, t)
    if isinstance(f, Not) and isinstance(f.arg, Exists):
        return neg(sx.substitute(f.arg.body, f.arg.var, t))
    raise ProofError(f"not a gamma formula: {sx.print_formula(f)}")


_WANTS_PAIR_CACHE: dict[Formula, bool] = {}


def _gamma_wants_pair(f: Formula) -> bool:
    """Whether the gamma formula projects its bound variable — then only
    pair-shaped instantiations can say anything about the projections,
    so they should be tried first."""
    cached = _WANTS_PAIR_CACHE.get(f)
    if cached is not None:
        return cached
    if isinstance(f, Forall):
        var, body = f.var, f.body
    else:
        var, body = f.arg.var, f.arg.body

    def term_hits(t: Term) -> bool:
        if isinstance(t, Proj) and t.arg == Var(var):
            return True
        _, children = _decompose(t)
        return any(term_hits(c) for c in children)

    def walk(g: Formula) -> bool:
        if isinstance(g, Eq):
            return term_hits(g.left) or term_hits(g.right)
        if isinstance(g, Pred):
            return any(term_hits(a) for a in g.args)
        if isinstance(g, Not):
            return walk(g.arg)
        if isinstance(g, (And, Or, Imp, Iff)):
            return walk(g.left) or walk(g.right)
        if isinstance(g, (Forall, Exists)):
            return False if g.var == var else walk(g.body)
        return False

    out = walk(body)
    _WANTS_PAIR_CACHE[f] = out
    return out


def _strip_core(f: Formula, var: str) -> tuple[Formula, set[str]]:
    """Strip leading negations and quantifiers from a gamma body; the
    stripped bound variables (and ``var`` itself if rebound) become
    wildcards for connection matching."""
    wild: set[str] = set()
    g = f
    while True:
        if isinstance(g, Not):
            g = g.arg
        elif isinstance(g, (Forall, Exists)):
            wild.add(g.var)
            g = g.body
        else:
            return g, wild


def _conn_match_term(p: Term, t: Term, var: str, wild: set[str], out: list[Term]) -> bool:
    if isinstance(p, Var):
        if p.name == var:
            if not _term_ground(t):
                return False
            if out:
                return out[0] == t
            out.append(t)
            return True
        if p.name in wild:
            return True
        return p == t
    lp, cp = _decompose(p)
    lt, ct = _decompose(t)
    if lp != lt or len(cp) != len(ct):
        return False
    return all(_conn_match_term(a, b, var, wild, out) for a, b in zip(cp, ct))


def _conn_match(p: Formula, t: Formula, var: str, wild: set[str], out: list[Term]) -> bool:
    if type(p) is not type(t):
        return False
    if isinstance(p, Eq):
        return _conn_match_term(p.left, t.left, var, wild, out) and _conn_match_term(
            p.right, t.right, var, wild, out
        )
    if isinstance(p, Pred):
        return (
            p.name == t.name
            and len(p.args) == len(t.args)
            and all(_conn_match_term(a, b, var, wild, out) for a, b in zip(p.args, t.args))
        )
    if isinstance(p, Not):
        return _conn_match(p.arg, t.arg, var, wild, out)
    if isinstance(p, (And, Or, Imp, Iff)):
        return _conn_match(p.left, t.left, var, wild, out) and _conn_match(
            p.right, t.right, var, wild, out
        )
    if isinstance(p, (Forall, Exists)):
        inner = wild | {p.var}
        return _conn_match(p.body, t.body, var, inner, out)
    return False


def _atoms(f: Formula, wild: frozenset[str]) -> list[tuple[Formula, frozenset[str]]]:
    """All atomic subformulas paired with the bound variables in scope
    at their position (those act as wildcards when matching)."""
    if isinstance(f, (Eq, Pred)):
        return [(f, wild)]
    if isinstance(f, Not):
        return _atoms(f.arg, wild)
    if isinstance(f, (And, Or, Imp, Iff)):
        return _atoms(f.left, wild) + _atoms(f.right, wild)
    if isinstance(f, (Forall, Exists)):
        return _atoms(f.body, wild | {f.var})
    return []


def _gamma_connections(f: Formula, formulas: list[Formula], cap: int = 4) -> list[Term]:
    """Instantiation terms suggested by connection: ground values of the
    bound variable under which the gamma body's core structurally matches
    a formula already on the branch (modulo outer negations).  Blind pool
    enumeration beta-expands junk instances of complex matrices
    exponentially; a matching instance closes by the complement buckets
    at once, so these terms are tried first.

    Whole-core matches come first.  When the branch holds only a reshaped
    image of the matrix (e.g. after negations were pushed inward), the
    core no longer matches as a unit, so atoms of the core containing the
    bound variable are matched individually as a fallback, ranked by how
    many distinct branch atoms agree on the same value."""
    if isinstance(f, Forall):
        var, body = f.var, f.body
    else:
        var, body = f.arg.var, f.arg.body
    core, wild = _strip_core(body, var)
    if var in wild or isinstance(core, (Forall, Exists)):
        return []
    suggestions: list[Term] = []
    for g in formulas:
        if g is f:
            continue
        h = g
        while isinstance(h, Not):
            h = h.arg
        out: list[Term] = []
        if _conn_match(core, h, var, wild, out) and out and out[0] not in suggestions:
            suggestions.append(out[0])
            if len(suggestions) >= cap:
                return suggestions

    frozen = frozenset(wild)
    core_atoms = [
        (a, w) for a, w in _atoms(core, frozen) if var in sx.free_vars(a)
    ]
    if not core_atoms:
        return suggestions
    votes: dict[Term, int] = {}
    for g in formulas:
        if g is f:
            continue
        for b, b_wild in _atoms(g, frozenset()):
            if b_wild:
                continue  # only ground branch atoms anchor a connection
            for a, a_wild in core_atoms:
                out = []
                if _conn_match(a, b, var, a_wild, out) and out:
                    votes[out[0]] = votes.get(out[0], 0) + 1
    ranked = sorted(votes, key=lambda t: -votes[t])
    for t in ranked:
        if t not in suggestions:
            suggestions.append(t)
            if len(suggestions) >= cap:
                break
    return suggestions


def is_delta(f: Formula) -> bool:
    return isinstance(f, Exists) or (isinstance(f, Not) and isinstance(f.arg, Forall))


def delta_instance(f: Formula, t: Term) -> Formula:
    if isinstance(f, Exists):
        return sx.substitute(f.body, f.var, t)
    if isinstance(f, Not) and isinstance(f.arg, Forall):
        return neg(sx.substitute(f.arg.body, f.arg.var, t))
    raise ProofError(f"not a delta formula: {sx.print_formula(f)}")


def _app_names(f: Formula) -> set[str]:
    names: set[str] = set()

    def walk_term(t: Term) -> None:
        if isinstance(t, App):
            names.add(t.name)
            for a in t.args:
                walk_term(a)
        elif isinstance(t, (Succ, Proj)):
            walk_term(t.arg)
        elif isinstance(t, (Add, Mul, Pair)):
            walk_term(t.left)
            walk_term(t.right)

    def walk(g: Formula) -> None:
        if isinstance(g, Eq):
            walk_term(g.left)
            walk_term(g.right)
        elif isinstance(g, Pred):
            for a in g.args:
                walk_term(a)
        elif isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, (And, Or, Imp, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    walk(f)
    return names


def _ground_subterms(f: Formula) -> set[Term]:
    out: set[Term] = set()

    def walk_term(t: Term) -> None:
        if _term_ground(t):
            out.add(t)
        _, children = _decompose(t)
        for c in children:
            walk_term(c)

    def walk(g: Formula) -> None:
        if isinstance(g, Eq):
            walk_term(g.left)
            walk_term(g.right)
        elif isinstance(g, Pred):
            for a in g.args:
                walk_term(a)
        elif isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, (And, Or, Imp, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    walk(f)
    return out


def _mentions_pairing(f: Formula) -> bool:
    """Whether the formula contains any pairing or projection term."""

    def walk_term(t: Term) -> bool:
        if isinstance(t, (Pair, Proj)):
            return True
        _, children = _decompose(t)
        return any(walk_term(c) for c in children)

    def walk(g: Formula) -> bool:
        if isinstance(g, Eq):
            return walk_term(g.left) or walk_term(g.right)
        if isinstance(g, Pred):
            return any(walk_term(a) for a in g.args)
        if isinstance(g, Not):
            return walk(g.arg)
        if isinstance(g, (And, Or, Imp, Iff)):
            return walk(g.left) or walk(g.right)
        if isinstance(g, (Forall, Exists)):
            return walk(g.body)
        return False

    return walk(f)


def _term_size(t: Term) -> int:
    _, children = _decompose(t)
    return 1 + sum(_term_size(c) for c in children)


def instantiation_pool(formulas: list[Formula], cap: int) -> list[Term]:
    """Initial gamma pool: ground subterms of the branch, smallest first,
    plus pair constructors over the smallest few (nesting kept shallow).
    During search the pool also grows by delta-witness constants, their
    projections, and pairs involving them."""
    terms: set[Term] = {Zero()}
    for f in formulas:
        terms.update(_ground_subterms(f))
    base = sorted(terms, key=lambda t: (_term_size(t), sx.print_term(t)))[:cap]
    if not any(_mentions_pairing(f) for f in formulas):
        return base
    small = [t for t in base if _term_size(t) <= 3][:4]
    extra = [Pair(a, b) for a, b in itertools.product(small, small)]
    return base + [p for p in extra if p not in terms]


# ---------------------------------------------------------------------------
# search


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n

    def spend(self, n: int = 1) -> bool:
        self.left -= n
        return self.left >= 0


class _OutOfBudget(Exception):
    pass


class _SearchState:
    def __init__(self, limits: Limits):
        self.limits = limits
        self.budget = _Budget(limits.node_budget)
        self.sk_counter = 0

    def fresh_sk(self, taken: set[str]) -> Term:
        while True:
            name = f"w{self.sk_counter}c"
            self.sk_counter += 1
            if name not in taken:
                return App(name, ())


class _Branch:
    """Mutable per-branch search state: formulas with incremental closure
    bookkeeping (congruence classes of the positive ground equations,
    complement buckets keyed by connective skeleton) and the gamma
    instantiation pool."""

    __slots__ = (
        "formulas",
        "present",
        "queue",
        "betas",
        "beta_ptr",
        "gammas",
        "gamma_tried",
        "gamma_rr",
        "gamma_suggest",
        "cc",
        "neg_eqs",
        "pos_bucket",
        "neg_bucket",
        "delta_consts",
        "init_terms",
        "derived_terms",
        "pool_set",
        "uses_pairing",
        "app_names",
        "closed",
        "eq_dirty",
    )

    def __init__(self) -> None:
        self.formulas: list[Formula] = []
        self.present: set[Formula] = set()
        self.queue: deque[Formula] = deque()  # pending alpha/delta principals
        self.betas: list[Formula] = []
        self.beta_ptr = 0
        self.gammas: list[Formula] = []
        self.gamma_tried: dict[Formula, set[Term]] = {}
        self.gamma_rr = 0  # round-robin cursor over gamma formulas
        self.gamma_suggest: dict[Formula, tuple[int, list[Term]]] = {}
        self.cc = CC()
        self.neg_eqs: list[Eq] = []
        self.pos_bucket: dict[str, list[Formula]] = {}
        self.neg_bucket: dict[str, list[Formula]] = {}
        self.delta_consts: list[Term] = []
        self.init_terms: list[Term] = []
        self.derived_terms: list[Term] = []
        self.pool_set: set[Term] = set()
        self.uses_pairing = False
        self.app_names: set[str] = set()
        self.closed = False
        self.eq_dirty = False

    def clone(self) -> "_Branch":
        b = _Branch.__new__(_Branch)
        b.formulas = list(self.formulas)
        b.present = set(self.present)
        b.queue = deque(self.queue)
        b.betas = list(self.betas)
        b.beta_ptr = self.beta_ptr
        b.gammas = list(self.gammas)
        b.gamma_tried = {k: set(v) for k, v in self.gamma_tried.items()}
        b.gamma_rr = self.gamma_rr
        b.gamma_suggest = dict(self.gamma_suggest)
        b.cc = self.cc.clone()
        b.neg_eqs = list(self.neg_eqs)
        b.pos_bucket = {k: list(v) for k, v in self.pos_bucket.items()}
        b.neg_bucket = {k: list(v) for k, v in self.neg_bucket.items()}
        b.delta_consts = list(self.delta_consts)
        b.init_terms = list(self.init_terms)
        b.derived_terms = list(self.derived_terms)
        b.pool_set = set(self.pool_set)
        b.uses_pairing = self.uses_pairing
        b.app_names = set(self.app_names)
        b.closed = self.closed
        b.eq_dirty = self.eq_dirty
        return b

    def add_init_term(self, t: Term) -> None:
        if t not in self.pool_set:
            self.pool_set.add(t)
            self.init_terms.append(t)

    def add_delta_const(self, sk: Term) -> None:
        """Register a fresh witness constant as a gamma candidate.  When
        the problem mentions pairing at all, the constant's projections
        and its pairings with the previous constant follow it
        immediately in chronological order (pairing witnesses are
        usually built from the latest constant); otherwise such terms
        can never help and would only dilute the pool."""
        prev = self.delta_consts[-1] if self.delta_consts else None
        self.delta_consts.append(sk)
        batch = [sk]
        if self.uses_pairing:
            batch += [Proj(0, sk), Proj(1, sk)]
            if prev is not None:
                batch += [Pair(prev, sk), Pair(sk, prev)]
        for t in batch:
            if t not in self.pool_set:
                self.pool_set.add(t)
                self.derived_terms.append(t)

    def candidates(self) -> list[Term]:
        return self.derived_terms + self.init_terms

    def suggestions(self, f: Formula) -> list[Term]:
        """Connection-driven gamma terms for f, cached until the branch
        grows (new formulas can enable new matches)."""
        stamp = len(self.formulas)
        cached = self.gamma_suggest.get(f)
        if cached is not None and cached[0] == stamp:
            return cached[1]
        sugg = _gamma_connections(f, self.formulas)
        self.gamma_suggest[f] = (stamp, sugg)
        return sugg

    def add(self, f: Formula) -> bool:
        """Add a formula; returns True if it was new.  Updates closure
        state incrementally."""
        if f in self.present:
            return False
        self.present.add(f)
        self.formulas.append(f)
        self.app_names.update(_app_names(f))
        if alpha_expand(f) is not None or is_delta(f):
            self.queue.append(f)
        elif beta_expand(f) is not None:
            self.betas.append(f)
        elif is_gamma(f):
            self.gammas.append(f)
            self.gamma_tried[f] = set()
        if isinstance(f, Not):
            g = f.arg
            key = _skeleton(g)
            for h in self.pos_bucket.get(key, []):
                if _formulas_match(h, g, {}, self.cc):
                    self.closed = True
            self.neg_bucket.setdefault(key, []).append(g)
            if isinstance(g, Eq) and _term_ground(g.left) and _term_ground(g.right):
                if self.cc.equiv(g.left, g.right):
                    self.closed = True
                self.neg_eqs.append(g)
        else:
            key = _skeleton(f)
            for h in self.neg_bucket.get(key, []):
                if _formulas_match(f, h, {}, self.cc):
                    self.closed = True
            self.pos_bucket.setdefault(key, []).append(f)
            if isinstance(f, Eq) and _term_ground(f.left) and _term_ground(f.right):
                self.cc.add_equation(f.left, f.right)
                for ne in self.neg_eqs:
                    if self.cc.equiv(ne.left, ne.right):
                        self.closed = True
                self.eq_dirty = True
        return True

    def full_rescan(self) -> None:
        """Re-check non-atomic complement pairs after class merges."""
        self.eq_dirty = False
        for key, negs in self.neg_bucket.items():
            poss = self.pos_bucket.get(key)
            if not poss:
                continue
            for g in negs:
                for h in poss:
                    if _formulas_match(h, g, {}, self.cc):
                        self.closed = True
                        return


def _wrap_spine(spine: list[ProofNode], node: ProofNode) -> ProofNode:
    for step in reversed(spine):
        node = ProofNode(step.rule, principal=step.principal, term=step.term, children=(node,))
    return node


def _run_branch(br: _Branch, state: _SearchState, per_gamma: int, level: int) -> ProofNode | None:
    if level > 4_000:
        # treat runaway branching as resource exhaustion rather than
        # risking the interpreter stack
        raise _OutOfBudget
    spine: list[ProofNode] = []
    while True:
        if br.closed:
            return _wrap_spine(spine, ProofNode("close"))
        if not state.budget.spend():
            raise _OutOfBudget

        if br.queue:
            f = br.queue.popleft()
            comps = alpha_expand(f)
            if comps is not None:
                spine.append(ProofNode("alpha", principal=f))
                for c in comps:
                    br.add(c)
            else:
                sk = state.fresh_sk(br.app_names)
                spine.append(ProofNode("delta", principal=f, term=sk))
                br.add_delta_const(sk)
                br.add(delta_instance(f, sk))
            continue

        if br.beta_ptr < len(br.betas):
            f = br.betas[br.beta_ptr]
            br.beta_ptr += 1
            left, right = beta_expand(f)
            lbr = br.clone()
            for c in left:
                lbr.add(c)
            lnode = _run_branch(lbr, state, per_gamma, level + 1)
            if lnode is None:
                return None
            rbr = br  # safe to consume: this frame returns right after
            for c in right:
                rbr.add(c)
            rnode = _run_branch(rbr, state, per_gamma, level + 1)
            if rnode is None:
                return None
            return _wrap_spine(spine, ProofNode("beta", principal=f, children=(lnode, rnode)))

        # one gamma instantiation, round-robin over gamma formulas so no
        # single formula floods the witness tier with junk chains
        progressed = False
        pool = br.candidates()
        n = len(br.gammas)
        for offset in range(n):
            pos = (br.gamma_rr + offset) % n
            f = br.gammas[pos]
            tried = br.gamma_tried[f]
            if len(tried) >= per_gamma:
                continue
            ordered = br.suggestions(f)
            if _gamma_wants_pair(f):
                ordered = ordered + [t for t in pool if isinstance(t, Pair)]
                ordered += [t for t in pool if not isinstance(t, Pair)]
            else:
                ordered = ordered + pool
            for t in ordered:
                if t in tried:
                    continue
                tried.add(t)
                inst = gamma_instance(f, t)
                if inst not in br.present:
                    spine.append(ProofNode("gamma", principal=f, term=t))
                    br.add(inst)
                    progressed = True
                    break
                if len(tried) >= per_gamma:
                    break
            if progressed:
                br.gamma_rr = (pos + 1) % n
                break
        if progressed:
            continue
        if br.eq_dirty:
            br.full_rescan()
            if br.closed:
                continue
        return None


def _prove_from(formulas: list[Formula], limits: Limits) -> ProofNode | None:
    _ensure_recursion_room()
    state = _SearchState(limits)
    pool = instantiation_pool(list(formulas), limits.pool_cap)
    pairing = any(_mentions_pairing(f) for f in formulas)
    try:
        for per_gamma in range(1, limits.depth + 1):
            br = _Branch()
            br.uses_pairing = pairing
            for t in pool:
                br.add_init_term(t)
            for f in formulas:
                br.add(f)
            node = _run_branch(br, state, per_gamma, 0)
            if node is not None:
                return node
    except _OutOfBudget:
        return None
    return None


# ---------------------------------------------------------------------------
# finite models


_BASE_FUNCS = {
    ("0", 0): Zero,
    ("S", 1): Succ,
}


def _signature(formulas: list[Formula]) -> tuple[list[tuple[object, int]], list[tuple[str, int]]]:
    funcs: set[tuple[object, int]] = set()
    preds: set[tuple[str, int]] = set()

    def walk_term(t: Term) -> None:
        label, children = _decompose(t)
        if not (isinstance(label, tuple) and label[0] == "var"):
            funcs.add((label, len(children)))
        for c in children:
            walk_term(c)

    def walk(g: Formula) -> None:
        if isinstance(g, Eq):
            walk_term(g.left)
            walk_term(g.right)
        elif isinstance(g, Pred):
            preds.add((g.name, len(g.args)))
            for a in g.args:
                walk_term(a)
        elif isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, (And, Or, Imp, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    for f in formulas:
        walk(f)
    return sorted(funcs, key=str), sorted(preds, key=str)


def eval_term_in_model(model: FiniteModel, t: Term, env: dict[str, int]) -> int:
    label, children = _decompose(t)
    if isinstance(label, tuple) and label[0] == "var":
        return env[label[1]]
    args = tuple(eval_term_in_model(model, c, env) for c in children)
    return model.funcs[(label, len(children))][args]


def eval_formula_in_model(model: FiniteModel, f: Formula, env: dict[str, int]) -> bool:
    if isinstance(f, Eq):
        return eval_term_in_model(model, f.left, env) == eval_term_in_model(model, f.right, env)
    if isinstance(f, Pred):
        args = tuple(eval_term_in_model(model, a, env) for a in f.args)
        return args in model.preds[(f.name, len(f.args))]
    if isinstance(f, Not):
        return not eval_formula_in_model(model, f.arg, env)
    if isinstance(f, And):
        return eval_formula_in_model(model, f.left, env) and eval_formula_in_model(model, f.right, env)
    if isinstance(f, Or):
        return eval_formula_in_model(model, f.left, env) or eval_formula_in_model(model, f.right, env)
    if isinstance(f, Imp):
        return (not eval_formula_in_model(model, f.left, env)) or eval_formula_in_model(model, f.right, env)
    if isinstance(f, Iff):
        return eval_formula_in_model(model, f.left, env) == eval_formula_in_model(model, f.right, env)
    if isinstance(f, Forall):
        return all(eval_formula_in_model(model, f.body, {**env, f.var: d}) for d in range(model.size))
    if isinstance(f, Exists):
        return any(eval_formula_in_model(model, f.body, {**env, f.var: d}) for d in range(model.size))
    raise TypeError(f"not a formula: {f!r}")


def model_satisfies(model: FiniteModel, sentences: list[Formula]) -> bool:
    return all(eval_formula_in_model(model, f, {}) for f in sentences)


def _iter_models(size: int, funcs, preds, budget: int, rng: random.Random):
    """Yield candidate models: exhaustively if the space is small, randomly
    sampled otherwise."""
    domain = list(range(size))
    func_domains = []
    space = 1
    for label, arity in funcs:
        cells = size**arity
        func_domains.append(cells)
        space *= size**cells
    for name, arity in preds:
        space *= 2 ** (size**arity)

    def build(choice_funcs, choice_preds):
        ftables = {}
        for (label, arity), table in zip(funcs, choice_funcs):
            keys = list(itertools.product(domain, repeat=arity))
            ftables[(label, arity)] = dict(zip(keys, table))
        ptables = {}
        for (name, arity), rows in zip(preds, choice_preds):
            keys = list(itertools.product(domain, repeat=arity))
            ptables[(name, arity)] = frozenset(k for k, bit in zip(keys, rows) if bit)
        return FiniteModel(size, ftables, ptables)

    if space <= budget:
        func_iters = [itertools.product(domain, repeat=cells) for cells in func_domains]
        pred_iters = [
            itertools.product((0, 1), repeat=size**arity) for _, arity in preds
        ]
        for choice in itertools.product(*func_iters, *pred_iters):
            yield build(choice[: len(funcs)], choice[len(funcs) :])
    else:
        for _ in range(budget):
            cf = [
                tuple(rng.randrange(size) for _ in range(cells)) for cells in func_domains
            ]
            cp = [
                tuple(rng.randrange(2) for _ in range(size**arity)) for _, arity in preds
            ]
            yield build(cf, cp)


def find_countermodel(
    goal: Formula, background: list[Formula], limits: Limits
) -> FiniteModel | None:
    """A finite model of the background that falsifies the goal, if one is
    found within the model budget."""
    sentences = list(background) + [neg(goal)]
    funcs, preds = _signature(sentences)
    rng = random.Random(limits.seed)
    for size in range(1, limits.model_size + 1):
        for model in _iter_models(size, funcs, preds, limits.model_budget, rng):
            if model_satisfies(model, sentences):
                return model
    return None


# ---------------------------------------------------------------------------
# public entry points


def prove(goal: Formula, background: list[Formula] | tuple = (), limits: Limits = Limits()) -> Verdict:
    """Sound bounded validity search: Proved only if background entails the
    goal; Refuted only with a verified finite countermodel."""
    _ensure_recursion_room()
    for f in [goal, *background]:
        if sx.free_vars(f):
            raise ValueError(f"not a sentence: {sx.print_formula(f)}")
    if limits.countermodels:
        model = find_countermodel(goal, list(background), limits)
        if model is not None:
            return Refuted(model)
    node = _prove_from(list(background) + [neg(goal)], limits)
    if node is not None:
        return Proved(node)
    return Unknown("depth/node budget exhausted")


def discharge(ob, limits: Limits = Limits()) -> Verdict:
    """Run ``prove`` on an obligation (object with goal and background)."""
    return prove(ob.goal, [f for _, f in ob.background], limits)


def derive_with_lemmas(
    goal: Formula,
    lemmas: list[tuple[Formula, ProofNode]],
    background: list[Formula] | tuple = (),
    limits: Limits = Limits(),
) -> ProofNode | None:
    """Proof of ``goal`` from ``background`` given proofs of the lemmas:
    each lemma is introduced by a cut whose refutation side grafts the
    lemma's proof; the remaining branch is closed by search."""
    _ensure_recursion_room()
    branch = list(background) + [neg(goal)] + [f for f, _ in lemmas]
    limits = replace(limits, countermodels=False)
    node = _prove_from(branch, limits)
    if node is None:
        return None
    for lemma_formula, lemma_proof in reversed(lemmas):
        node = ProofNode(
            "cut",
            cut_formula=lemma_formula,
            children=(lemma_proof, node),
        )
    return node


# ---------------------------------------------------------------------------
# proof checking


def check_proof(p: ProofNode, goal: Formula, background: list[Formula] | tuple = ()) -> bool:
    """Replay a proof object against the rule table; true iff it is a
    well-formed closed tableau for the goal over the background."""
    _ensure_recursion_room()
    try:
        start = list(background) + [neg(goal)]
        _check_node(p, start, set(start))
        return True
    except (ProofError, TypeError, ValueError):
        return False


def _check_node(node: ProofNode, branch: list[Formula], present: set[Formula]) -> None:
    # walk single-child spines iteratively; proofs are mostly linear
    # chains of gamma steps far deeper than any sane recursion limit
    while node.rule in ("alpha", "gamma", "delta"):
        if len(node.children) != 1:
            raise ProofError(f"{node.rule} has one child")
        if node.principal not in present:
            raise ProofError(f"{node.rule} principal not on branch")
        if node.rule == "alpha":
            comps = alpha_expand(node.principal)
            if comps is None:
                raise ProofError("not an alpha formula")
            new = comps
        elif node.rule == "gamma":
            if node.term is None or sx.term_vars(node.term):
                raise ProofError("gamma needs a ground instantiating term")
            new = [gamma_instance(node.principal, node.term)]
        else:
            if not isinstance(node.term, App) or node.term.args:
                raise ProofError("delta witness must be a fresh constant")
            wname = node.term.name
            for g in branch:
                if wname in _app_names(g):
                    raise ProofError(f"witness constant {wname} is not fresh")
            new = [delta_instance(node.principal, node.term)]
        branch = branch + new
        present = present | set(new)
        node = node.children[0]
    if node.rule == "close":
        if node.children:
            raise ProofError("closure must be a leaf")
        if not branch_closes(branch):
            raise ProofError("branch does not close")
        return
    if node.rule == "beta":
        if node.principal not in present:
            raise ProofError("beta principal not on branch")
        comps = beta_expand(node.principal)
        if comps is None:
            raise ProofError("not a beta formula")
        if len(node.children) != 2:
            raise ProofError("beta has two children")
        _check_node(node.children[0], branch + comps[0], present | set(comps[0]))
        _check_node(node.children[1], branch + comps[1], present | set(comps[1]))
        return
    if node.rule == "cut":
        if node.cut_formula is None or sx.free_vars(node.cut_formula):
            raise ProofError("cut formula must be a sentence")
        if len(node.children) != 2:
            raise ProofError("cut has two children")
        nc = neg(node.cut_formula)
        _check_node(node.children[0], branch + [nc], present | {nc})
        _check_node(node.children[1], branch + [node.cut_formula], present | {node.cut_formula})
        return
    raise ProofError(f"unknown rule {node.rule!r}")


# ---------------------------------------------------------------------------
# serialization (one inference per line)


def serialize_proof(p: ProofNode) -> str:
    _ensure_recursion_room()
    lines: list[str] = []
    ids: dict[int, int] = {}
    stack: list[tuple[ProofNode, bool]] = [(p, False)]
    while stack:
        node, expanded = stack.pop()
        if not expanded:
            stack.append((node, True))
            for c in reversed(node.children):
                stack.append((c, False))
            continue
        idx = len(lines)
        ids[id(node)] = idx
        child_ids = [ids[id(c)] for c in node.children]
        fields = [
            str(idx),
            node.rule,
            sx.print_formula(node.principal) if node.principal is not None else "-",
            sx.print_term(node.term) if node.term is not None else "-",
            sx.print_formula(node.cut_formula) if node.cut_formula is not None else "-",
            ",".join(str(i) for i in child_ids) if child_ids else "-",
        ]
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def parse_proof(text: str) -> ProofNode:
    _ensure_recursion_room()
    nodes: dict[int, ProofNode] = {}
    last = -1
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise ProofError(f"bad proof line: {line!r}")
        idx = int(parts[0])
        rule = parts[1]
        principal = sx.parse(parts[2]) if parts[2] != "-" else None
        term = sx.parse_term(parts[3]) if parts[3] != "-" else None
        cut_formula = sx.parse(parts[4]) if parts[4] != "-" else None
        children: tuple[ProofNode, ...] = ()
        if parts[5] != "-":
            children = tuple(nodes[int(i)] for i in parts[5].split(","))
        nodes[idx] = ProofNode(rule, principal, term, cut_formula, children)
        last = idx
    if last < 0:
        raise ProofError("empty proof")
    return nodes[last]
