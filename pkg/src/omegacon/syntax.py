"""Abstract syntax, parsing and printing for first-order arithmetic.

Terms are built from 0, S, +, *, a pairing constructor with two
projections, named variables, and applications of extra function symbols
(used for the object-level code functions).  Formulas add equality atoms,
extra predicate symbols, the usual connectives and quantifiers.

Everything here is an immutable value; all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


# ---------------------------------------------------------------------------
# terms


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Zero(Term):
    pass


@dataclass(frozen=True, slots=True)
class Succ(Term):
    arg: Term


@dataclass(frozen=True, slots=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Proj(Term):
    index: int  # 0 or 1
    arg: Term

    def __post_init__(self) -> None:
        if self.index not in (0, 1):
            raise ValueError(f"projection index must be 0 or 1, got {self.index}")


@dataclass(frozen=True, slots=True)
class App(Term):
    """Application of an uninterpreted function symbol (arity may be 0)."""

    name: str
    args: tuple[Term, ...] = ()


# ---------------------------------------------------------------------------
# formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Pred(Formula):
    """Atom built from an uninterpreted predicate symbol."""

    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, slots=True)
class Exists(Formula):
    var: str
    body: Formula


#: Falsum is not a primitive; this sentence plays its role everywhere.
FALSUM = Not(Eq(Zero(), Zero()))


def num_term(n: int) -> Term:
    """Unary numeral: S applied n times to 0."""
    if n < 0:
        raise ValueError("numerals are defined for naturals only")
    t: Term = Zero()
    for _ in range(n):
        t = Succ(t)
    return t


def term_value(t: Term) -> int:
    """Value of a closed numeral term (S-tower over 0)."""
    n = 0
    while isinstance(t, Succ):
        n += 1
        t = t.arg
    if not isinstance(t, Zero):
        raise ValueError("not a numeral term")
    return n


# ---------------------------------------------------------------------------
# quantifier arrays

FORALL = "A"
EXISTS = "E"


@dataclass(frozen=True, slots=True)
class QuantifierArray:
    quants: tuple[str, ...]

    def __post_init__(self) -> None:
        for q in self.quants:
            if q not in (FORALL, EXISTS):
                raise ValueError(f"bad quantifier {q!r}; use 'A' or 'E'")

    @classmethod
    def from_spec(cls, spec: str) -> "QuantifierArray":
        return cls(tuple(spec))

    def __len__(self) -> int:
        return len(self.quants)

    def __iter__(self) -> Iterator[str]:
        return iter(self.quants)

    def __add__(self, other: "QuantifierArray") -> "QuantifierArray":
        return QuantifierArray(self.quants + other.quants)

    def spec(self) -> str:
        return "".join(self.quants)


def dual(q: QuantifierArray) -> QuantifierArray:
    """Element-wise quantifier swap, order preserved."""
    return QuantifierArray(tuple(EXISTS if c == FORALL else FORALL for c in q.quants))


def prefix(q: QuantifierArray, vars: list[str] | tuple[str, ...], f: Formula) -> Formula:
    """Nest the quantifiers of ``q`` over ``vars`` (outermost first) around ``f``."""
    if len(q) != len(vars):
        raise ValueError(f"array length {len(q)} != variable count {len(vars)}")
    out = f
    for kind, v in reversed(list(zip(q.quants, vars))):
        out = Forall(v, out) if kind == FORALL else Exists(v, out)
    return out


# ---------------------------------------------------------------------------
# variable analysis


def term_vars(t: Term) -> list[str]:
    """Variable names in a term, in order of occurrence (with repeats)."""
    return _term_vars_rec(t)


def _term_vars_rec(t: Term) -> list[str]:
    if isinstance(t, Var):
        return [t.name]
    if isinstance(t, (Succ, Proj)):
        return _term_vars_rec(t.arg)
    if isinstance(t, (Add, Mul, Pair)):
        return _term_vars_rec(t.left) + _term_vars_rec(t.right)
    if isinstance(t, App):
        out: list[str] = []
        for a in t.args:
            out.extend(_term_vars_rec(a))
        return out
    return []


def free_vars(f: Formula) -> list[str]:
    """Distinct free variables in order of first free occurrence."""
    out: list[str] = []

    def walk(g: Formula, bound: frozenset[str]) -> None:
        if isinstance(g, Eq):
            names = _term_vars_rec(g.left) + _term_vars_rec(g.right)
        elif isinstance(g, Pred):
            names = []
            for a in g.args:
                names.extend(_term_vars_rec(a))
        elif isinstance(g, Not):
            walk(g.arg, bound)
            return
        elif isinstance(g, (And, Or, Imp, Iff)):
            walk(g.left, bound)
            walk(g.right, bound)
            return
        elif isinstance(g, (Forall, Exists)):
            walk(g.body, bound | {g.var})
            return
        else:
            raise TypeError(f"not a formula: {g!r}")
        for n in names:
            if n not in bound and n not in out:
                out.append(n)

    walk(f, frozenset())
    return out


def all_var_names(f: Formula) -> set[str]:
    """Every variable name occurring in ``f``, free or bound."""
    names: set[str] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, Eq):
            names.update(_term_vars_rec(g.left))
            names.update(_term_vars_rec(g.right))
        elif isinstance(g, Pred):
            for a in g.args:
                names.update(_term_vars_rec(a))
        elif isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, (And, Or, Imp, Iff)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Forall, Exists)):
            names.add(g.var)
            walk(g.body)

    walk(f)
    return names


def n_var(f: Formula, n: int) -> bool:
    """True iff ``f`` has exactly ``n`` distinct free variables."""
    return len(free_vars(f)) == n


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def fresh_name(base: str, taken: set[str]) -> str:
    """Deterministic fresh variable name: base plus the first unused index."""
    if base not in taken:
        return base
    k = 0
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def fresh_pool(prefix_letter: str, count: int, taken: set[str]) -> list[str]:
    """``count`` fresh names shaped like v0, v1, ..., skipping ``taken``."""
    out: list[str] = []
    k = 0
    while len(out) < count:
        cand = f"{prefix_letter}{k}"
        if cand not in taken:
            out.append(cand)
            taken = taken | {cand}
        k += 1
    return out


# ---------------------------------------------------------------------------
# substitution


def _subst_term(t: Term, mapping: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Zero):
        return t
    if isinstance(t, Succ):
        return Succ(_subst_term(t.arg, mapping))
    if isinstance(t, Add):
        return Add(_subst_term(t.left, mapping), _subst_term(t.right, mapping))
    if isinstance(t, Mul):
        return Mul(_subst_term(t.left, mapping), _subst_term(t.right, mapping))
    if isinstance(t, Pair):
        return Pair(_subst_term(t.left, mapping), _subst_term(t.right, mapping))
    if isinstance(t, Proj):
        return Proj(t.index, _subst_term(t.arg, mapping))
    if isinstance(t, App):
        return App(t.name, tuple(_subst_term(a, mapping) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def substitute_many(f: Formula, mapping: dict[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for free variables.

    Bound variables are renamed (deterministically) only when a capture
    would actually occur.
    """
    if not mapping:
        return f
    if isinstance(f, Eq):
        return Eq(_subst_term(f.left, mapping), _subst_term(f.right, mapping))
    if isinstance(f, Pred):
        return Pred(f.name, tuple(_subst_term(a, mapping) for a in f.args))
    if isinstance(f, Not):
        return Not(substitute_many(f.arg, mapping))
    if isinstance(f, (And, Or, Imp, Iff)):
        return type(f)(substitute_many(f.left, mapping), substitute_many(f.right, mapping))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        if not inner:
            return f
        relevant = {k: v for k, v in inner.items() if k in free_vars(f.body)}
        if not relevant:
            return f
        incoming = set()
        for v in relevant.values():
            incoming.update(_term_vars_rec(v))
        var = f.var
        body = f.body
        if var in incoming:
            taken = all_var_names(body) | incoming | set(inner)
            var = fresh_name(f.var, taken)
            body = substitute_many(body, {f.var: Var(var)})
        return type(f)(var, substitute_many(body, inner))
    raise TypeError(f"not a formula: {f!r}")


def substitute(f: Formula, var: str, t: Term) -> Formula:
    """Capture-avoiding substitution of ``t`` for the free variable ``var``."""
    return substitute_many(f, {var: t})


def instantiate(f: Formula, values: dict[str, int]) -> Formula:
    """Substitute numerals for free variables."""
    return substitute_many(f, {k: num_term(v) for k, v in values.items()})


# ---------------------------------------------------------------------------
# alpha equivalence and canonical renaming


def alpha_equal(f: Formula, g: Formula) -> bool:
    """Structural equality up to renaming of bound variables."""
    return canonicalize_bound(f) == canonicalize_bound(g)


def canonicalize_bound(f: Formula, stem: str = "b") -> Formula:
    """Rename bound variables to b0, b1, ... in traversal order."""
    counter = [0]

    def walk(g: Formula, env: dict[str, str]) -> Formula:
        if isinstance(g, Eq):
            m = {k: Var(v) for k, v in env.items()}
            return Eq(_subst_term(g.left, m), _subst_term(g.right, m))
        if isinstance(g, Pred):
            m = {k: Var(v) for k, v in env.items()}
            return Pred(g.name, tuple(_subst_term(a, m) for a in g.args))
        if isinstance(g, Not):
            return Not(walk(g.arg, env))
        if isinstance(g, (And, Or, Imp, Iff)):
            return type(g)(walk(g.left, env), walk(g.right, env))
        if isinstance(g, (Forall, Exists)):
            new = f"{stem}{counter[0]}"
            counter[0] += 1
            return type(g)(new, walk(g.body, {**env, g.var: new}))
        raise TypeError(f"not a formula: {g!r}")

    return walk(f, {})


# ---------------------------------------------------------------------------
# printing

#: names with dedicated term syntax; not usable as App/Pred symbols in print
_RESERVED = {"forall", "exists"}


def print_term(t: Term) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, Succ):
        return f"S({print_term(t.arg)})"
    if isinstance(t, Add):
        return f"({print_term(t.left)} + {print_term(t.right)})"
    if isinstance(t, Mul):
        return f"({print_term(t.left)} * {print_term(t.right)})"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Pair):
        return f"<{print_term(t.left)}, {print_term(t.right)}>"
    if isinstance(t, Proj):
        return f"p{t.index}({print_term(t.arg)})"
    if isinstance(t, App):
        return f"{t.name}({', '.join(print_term(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


def print_formula(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"{print_term(f.left)} = {print_term(f.right)}"
    if isinstance(f, Pred):
        return f"{f.name}({', '.join(print_term(a) for a in f.args)})"
    if isinstance(f, Not):
        inner = print_formula(f.arg)
        if isinstance(f.arg, (Eq, Pred, Forall, Exists)):
            return f"!({inner})"
        return f"!{inner}"
    if isinstance(f, (And, Or, Imp, Iff)):
        # a quantified left operand must be parenthesized, otherwise the
        # quantifier would re-parse as extending over the whole connective
        left = print_formula(f.left)
        if isinstance(f.left, (Forall, Exists)):
            left = f"({left})"
        op = {And: "&", Or: "|", Imp: "->", Iff: "<->"}[type(f)]
        return f"({left} {op} {print_formula(f.right)})"
    if isinstance(f, Forall):
        return f"forall {f.var}. {print_formula(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {print_formula(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str
    text: str
    pos: int


_PUNCT = ["<->", "->", "p0(", "p1(", "(", ")", "<", ">", ",", "=", "&", "|", "!", ".", "+", "*"]


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "0" and (i + 1 >= n or not text[i + 1].isalnum()):
            toks.append(_Tok("zero", "0", i))
            i += 1
            continue
        matched = False
        for p in _PUNCT:
            if text.startswith(p, i):
                if p in ("p0(", "p1("):
                    toks.append(_Tok("proj", p[:2], i))
                    toks.append(_Tok("punct", "(", i + 2))
                else:
                    toks.append(_Tok("punct", p, i))
                i += len(p)
                matched = True
                break
        if matched:
            continue
        if c == "S" and text.startswith("S(", i):
            toks.append(_Tok("succ", "S", i))
            toks.append(_Tok("punct", "(", i + 1))
            i += 2
            continue
        if c.isalpha() and c.islower():
            j = i + 1
            while j < n and (text[j].islower() or text[j].isdigit()):
                j += 1
            word = text[i:j]
            if word in ("forall", "exists"):
                toks.append(_Tok("quant", word, i))
            else:
                toks.append(_Tok("name", word, i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    toks.append(_Tok("eof", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.pos)
        return t

    # -- terms ------------------------------------------------------------

    def term(self) -> Term:
        t = self.peek()
        if t.kind == "zero":
            self.next()
            return Zero()
        if t.kind == "succ":
            self.next()
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return Succ(arg)
        if t.kind == "proj":
            idx = int(t.text[1])
            self.next()
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return Proj(idx, arg)
        if t.text == "<":
            self.next()
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(">")
            return Pair(left, right)
        if t.text == "(":
            self.next()
            left = self.term()
            op = self.next()
            if op.text not in ("+", "*"):
                raise ParseError(f"expected '+' or '*', found {op.text!r}", op.pos)
            right = self.term()
            self.expect(")")
            return Add(left, right) if op.text == "+" else Mul(left, right)
        if t.kind == "name":
            self.next()
            if self.peek().text == "(" and t.text not in _RESERVED:
                self.next()
                args: list[Term] = []
                if self.peek().text != ")":
                    args.append(self.term())
                    while self.peek().text == ",":
                        self.next()
                        args.append(self.term())
                self.expect(")")
                return App(t.text, tuple(args))
            return Var(t.text)
        raise ParseError(f"expected a term, found {t.text or 'end of input'!r}", t.pos)

    # -- formulas ---------------------------------------------------------

    def formula(self) -> Formula:
        return self._iff()

    def _iff(self) -> Formula:
        left = self._imp()
        if self.peek().text == "<->":
            self.next()
            return Iff(left, self._iff())
        return left

    def _imp(self) -> Formula:
        left = self._or()
        if self.peek().text == "->":
            self.next()
            return Imp(left, self._imp())
        return left

    def _or(self) -> Formula:
        left = self._and()
        while self.peek().text == "|":
            self.next()
            left = Or(left, self._and())
        return left

    def _and(self) -> Formula:
        left = self._unary()
        while self.peek().text == "&":
            self.next()
            left = And(left, self._unary())
        return left

    def _unary(self) -> Formula:
        t = self.peek()
        if t.text == "!":
            self.next()
            return Not(self._unary())
        if t.kind == "quant":
            self.next()
            v = self.next()
            if v.kind != "name":
                raise ParseError("expected a variable after quantifier", v.pos)
            self.expect(".")
            return (Forall if t.text == "forall" else Exists)(v.text, self.formula())
        return self._atom()

    def _atom(self) -> Formula:
        t = self.peek()
        if t.text == "(":
            # could be a parenthesized formula or a term like (a + b)
            save = self.i
            try:
                self.next()
                f = self.formula()
                self.expect(")")
                return f
            except ParseError:
                self.i = save
        term = self.term()
        if self.peek().text == "=":
            self.next()
            return Eq(term, self.term())
        if isinstance(term, App):
            return Pred(term.name, term.args)
        raise ParseError("expected '=' after term", self.peek().pos)


def parse(text: str) -> Formula:
    """Parse a formula in the ASCII grammar; raises ParseError on bad input."""
    p = _Parser(text)
    f = p.formula()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    tok = p.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)
    return t
