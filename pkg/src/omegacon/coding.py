"""Goedel numbering and the code-level syntactic function layer.

Two coding schemes live here:

* formula/term codes: the syntax tree is flattened to a prefix token
  stream over a fixed table of 64 tokens and packed into a big integer
  in base 64 behind a sentinel digit (so the code is self-delimiting and
  0 is never a valid code);
* sequence codes: arbitrary lists of naturals are packed into a big
  integer via a self-delimiting bit encoding (each payload bit b becomes
  the two bits 1b, items are terminated by 00).

The token table is frozen in docs/token_table.md and golden-tested, so
codes are bit-exact across versions.
"""

from __future__ import annotations

from dataclasses import dataclass

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
    QuantifierArray,
    Succ,
    Term,
    Var,
    Zero,
)


class CodingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# token table (frozen; see docs/token_table.md)

TOK_ZERO = 1
TOK_SUCC = 2
TOK_ADD = 3
TOK_MUL = 4
TOK_PAIR = 5
TOK_PROJ0 = 6
TOK_PROJ1 = 7
TOK_VAR = 8
TOK_EQ = 9
TOK_NOT = 10
TOK_AND = 11
TOK_OR = 12
TOK_IMP = 13
TOK_IFF = 14
TOK_FORALL = 15
TOK_EXISTS = 16
TOK_APP = 17
TOK_PRED = 18
TOK_NAME_END = 19
_TOK_ARITY_BASE = 20  # arities 0..7 occupy tokens 20..27
_TOK_LETTER_BASE = 28  # 'a'..'z' occupy tokens 28..53
_TOK_DIGIT_BASE = 54  # '0'..'9' occupy tokens 54..63

RADIX = 64
MAX_ARITY = 7

TOKEN_TABLE: dict[str, int] = {
    "0": TOK_ZERO,
    "S": TOK_SUCC,
    "+": TOK_ADD,
    "*": TOK_MUL,
    "<,>": TOK_PAIR,
    "p0": TOK_PROJ0,
    "p1": TOK_PROJ1,
    "var": TOK_VAR,
    "=": TOK_EQ,
    "!": TOK_NOT,
    "&": TOK_AND,
    "|": TOK_OR,
    "->": TOK_IMP,
    "<->": TOK_IFF,
    "forall": TOK_FORALL,
    "exists": TOK_EXISTS,
    "app": TOK_APP,
    "pred": TOK_PRED,
    "name-end": TOK_NAME_END,
}
for _k in range(MAX_ARITY + 1):
    TOKEN_TABLE[f"arity-{_k}"] = _TOK_ARITY_BASE + _k
for _i, _c in enumerate("abcdefghijklmnopqrstuvwxyz"):
    TOKEN_TABLE[f"char-{_c}"] = _TOK_LETTER_BASE + _i
for _i in range(10):
    TOKEN_TABLE[f"char-{_i}"] = _TOK_DIGIT_BASE + _i


@dataclass(frozen=True, slots=True)
class GoedelCode:
    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise CodingError("codes are naturals")


@dataclass(frozen=True, slots=True)
class SequenceCode:
    value: int
    length: int


# ---------------------------------------------------------------------------
# token stream <-> syntax


def _name_tokens(name: str) -> list[int]:
    toks = []
    for c in name:
        if "a" <= c <= "z":
            toks.append(_TOK_LETTER_BASE + ord(c) - ord("a"))
        elif "0" <= c <= "9":
            toks.append(_TOK_DIGIT_BASE + ord(c) - ord("0"))
        else:
            raise CodingError(f"name {name!r} has a character outside [a-z0-9]")
    toks.append(TOK_NAME_END)
    return toks


def _term_tokens(t: Term) -> list[int]:
    if isinstance(t, Zero):
        return [TOK_ZERO]
    if isinstance(t, Succ):
        return [TOK_SUCC] + _term_tokens(t.arg)
    if isinstance(t, Add):
        return [TOK_ADD] + _term_tokens(t.left) + _term_tokens(t.right)
    if isinstance(t, Mul):
        return [TOK_MUL] + _term_tokens(t.left) + _term_tokens(t.right)
    if isinstance(t, Pair):
        return [TOK_PAIR] + _term_tokens(t.left) + _term_tokens(t.right)
    if isinstance(t, Proj):
        return [TOK_PROJ0 if t.index == 0 else TOK_PROJ1] + _term_tokens(t.arg)
    if isinstance(t, Var):
        return [TOK_VAR] + _name_tokens(t.name)
    if isinstance(t, App):
        if len(t.args) > MAX_ARITY:
            raise CodingError(f"arity {len(t.args)} exceeds the token table maximum")
        out = [TOK_APP, _TOK_ARITY_BASE + len(t.args)] + _name_tokens(t.name)
        for a in t.args:
            out.extend(_term_tokens(a))
        return out
    raise CodingError(f"not a term: {t!r}")


def _formula_tokens(f: Formula) -> list[int]:
    if isinstance(f, Eq):
        return [TOK_EQ] + _term_tokens(f.left) + _term_tokens(f.right)
    if isinstance(f, Pred):
        if len(f.args) > MAX_ARITY:
            raise CodingError(f"arity {len(f.args)} exceeds the token table maximum")
        out = [TOK_PRED, _TOK_ARITY_BASE + len(f.args)] + _name_tokens(f.name)
        for a in f.args:
            out.extend(_term_tokens(a))
        return out
    if isinstance(f, Not):
        return [TOK_NOT] + _formula_tokens(f.arg)
    if isinstance(f, And):
        return [TOK_AND] + _formula_tokens(f.left) + _formula_tokens(f.right)
    if isinstance(f, Or):
        return [TOK_OR] + _formula_tokens(f.left) + _formula_tokens(f.right)
    if isinstance(f, Imp):
        return [TOK_IMP] + _formula_tokens(f.left) + _formula_tokens(f.right)
    if isinstance(f, Iff):
        return [TOK_IFF] + _formula_tokens(f.left) + _formula_tokens(f.right)
    if isinstance(f, Forall):
        return [TOK_FORALL] + _name_tokens(f.var) + _formula_tokens(f.body)
    if isinstance(f, Exists):
        return [TOK_EXISTS] + _name_tokens(f.var) + _formula_tokens(f.body)
    raise CodingError(f"not a formula: {f!r}")


class _TokenReader:
    def __init__(self, toks: list[int]):
        self.toks = toks
        self.i = 0

    def next(self) -> int:
        if self.i >= len(self.toks):
            raise CodingError("truncated token stream")
        t = self.toks[self.i]
        self.i += 1
        return t

    def name(self) -> str:
        chars = []
        while True:
            t = self.next()
            if t == TOK_NAME_END:
                break
            if _TOK_LETTER_BASE <= t < _TOK_DIGIT_BASE:
                chars.append(chr(ord("a") + t - _TOK_LETTER_BASE))
            elif _TOK_DIGIT_BASE <= t < RADIX:
                chars.append(chr(ord("0") + t - _TOK_DIGIT_BASE))
            else:
                raise CodingError(f"token {t} is not a name character")
        if not chars:
            raise CodingError("empty name")
        return "".join(chars)

    def term(self) -> Term:
        t = self.next()
        if t == TOK_ZERO:
            return Zero()
        if t == TOK_SUCC:
            return Succ(self.term())
        if t == TOK_ADD:
            return Add(self.term(), self.term())
        if t == TOK_MUL:
            return Mul(self.term(), self.term())
        if t == TOK_PAIR:
            return Pair(self.term(), self.term())
        if t == TOK_PROJ0:
            return Proj(0, self.term())
        if t == TOK_PROJ1:
            return Proj(1, self.term())
        if t == TOK_VAR:
            return Var(self.name())
        if t == TOK_APP:
            arity_tok = self.next()
            if not _TOK_ARITY_BASE <= arity_tok <= _TOK_ARITY_BASE + MAX_ARITY:
                raise CodingError(f"token {arity_tok} is not an arity")
            arity = arity_tok - _TOK_ARITY_BASE
            name = self.name()
            return App(name, tuple(self.term() for _ in range(arity)))
        raise CodingError(f"token {t} does not start a term")

    def formula(self) -> Formula:
        t = self.next()
        if t == TOK_EQ:
            return Eq(self.term(), self.term())
        if t == TOK_PRED:
            arity_tok = self.next()
            if not _TOK_ARITY_BASE <= arity_tok <= _TOK_ARITY_BASE + MAX_ARITY:
                raise CodingError(f"token {arity_tok} is not an arity")
            arity = arity_tok - _TOK_ARITY_BASE
            name = self.name()
            return Pred(name, tuple(self.term() for _ in range(arity)))
        if t == TOK_NOT:
            return Not(self.formula())
        if t == TOK_AND:
            return And(self.formula(), self.formula())
        if t == TOK_OR:
            return Or(self.formula(), self.formula())
        if t == TOK_IMP:
            return Imp(self.formula(), self.formula())
        if t == TOK_IFF:
            return Iff(self.formula(), self.formula())
        if t == TOK_FORALL:
            return Forall(self.name(), self.formula())
        if t == TOK_EXISTS:
            return Exists(self.name(), self.formula())
        raise CodingError(f"token {t} does not start a formula")

    def done(self) -> None:
        if self.i != len(self.toks):
            raise CodingError("trailing tokens after decode")


def _pack(tokens: list[int]) -> int:
    value = 1  # sentinel digit keeps leading token 0s and makes 0 a non-code
    for t in tokens:
        if not 0 <= t < RADIX:
            raise CodingError(f"token {t} out of range")
        value = value * RADIX + t
    return value


def _unpack(value: int) -> list[int]:
    if value < 1:
        raise CodingError(f"{value} is not a packed token stream")
    digits: list[int] = []
    while value:
        digits.append(value % RADIX)
        value //= RADIX
    digits.reverse()
    if digits[0] != 1:
        raise CodingError("missing sentinel digit; not a valid code")
    return digits[1:]


# ---------------------------------------------------------------------------
# formula and term codes


def encode(f: Formula) -> GoedelCode:
    return GoedelCode(_pack(_formula_tokens(f)))


def decode(c: GoedelCode | int) -> Formula:
    value = c.value if isinstance(c, GoedelCode) else c
    r = _TokenReader(_unpack(value))
    f = r.formula()
    r.done()
    return f


def encode_term(t: Term) -> GoedelCode:
    return GoedelCode(_pack(_term_tokens(t)))


def decode_term(c: GoedelCode | int) -> Term:
    value = c.value if isinstance(c, GoedelCode) else c
    r = _TokenReader(_unpack(value))
    t = r.term()
    r.done()
    return t


def numeral(n: int) -> GoedelCode:
    """Code of the unary numeral term S(...S(0)...) with n applications."""
    return encode_term(sx.num_term(n))


# ---------------------------------------------------------------------------
# sequence codes


def seq_encode(items: list[int] | tuple[int, ...]) -> SequenceCode:
    bits = ["1"]
    for x in items:
        if x < 0:
            raise CodingError("sequence items are naturals")
        for b in bin(x)[2:]:
            bits.append("1")
            bits.append(b)
        bits.append("00")
    return SequenceCode(int("".join(bits), 2), len(items))


def seq_decode(value: int) -> list[int]:
    if value < 1:
        raise CodingError(f"{value} is not a sequence code")
    bits = bin(value)[2:]
    assert bits[0] == "1"
    i = 1
    items: list[int] = []
    cur_bits: list[str] = []
    while i < len(bits):
        flag = bits[i]
        if flag == "1":
            if i + 1 >= len(bits):
                raise CodingError("truncated sequence code")
            cur_bits.append(bits[i + 1])
            i += 2
        else:
            if i + 1 >= len(bits) or bits[i + 1] != "0":
                raise CodingError("malformed sequence code")
            items.append(int("".join(cur_bits), 2) if cur_bits else 0)
            cur_bits = []
            i += 2
    if cur_bits:
        raise CodingError("truncated sequence code")
    return items


def project(s: SequenceCode, i: int) -> int:
    items = seq_decode(s.value)
    if not 0 <= i < len(items):
        raise CodingError(f"index {i} out of range for sequence of length {len(items)}")
    return items[i]


EMPTY_SEQUENCE = seq_encode([])


def pair_nat(a: int, b: int) -> int:
    """Cantor pairing; the standard-model interpretation of the pair constructor."""
    return (a + b) * (a + b + 1) // 2 + a


def unpair_nat(k: int) -> tuple[int, int]:
    s = 0
    while (s + 1) * (s + 2) // 2 <= k:
        s += 1
    a = k - s * (s + 1) // 2
    return a, s - a


# ---------------------------------------------------------------------------
# substitution functions on codes


def sub(y: GoedelCode, t_codes: SequenceCode) -> GoedelCode:
    """Replace the first free variables (in occurrence order) of the formula
    coded by ``y`` with the terms coded in ``t_codes``, capture-avoidingly.

    On a sentence, returns ``y`` unchanged; with more free variables than
    terms, only the first ``len(t_codes)`` variables are substituted.
    """
    f = decode(y)
    terms = [decode_term(v) for v in seq_decode(t_codes.value)]
    names = sx.free_vars(f)
    mapping = dict(zip(names, terms))
    return encode(sx.substitute_many(f, mapping))


def sub1(y: GoedelCode, t_code: GoedelCode) -> GoedelCode:
    """Convenience wrapper: substitution with a single term code."""
    return sub(y, seq_encode([t_code.value]))


def s_num(y: GoedelCode, args: list[int] | tuple[int, ...]) -> GoedelCode:
    """Substitute the numerals of ``args`` for the first free variables."""
    return sub(y, seq_encode([numeral(a).value for a in args]))


_DOT_CONNECTIVES = {"and": And, "or": Or, "imp": Imp, "iff": Iff}


def dot_connective(op: str, a: GoedelCode, b: GoedelCode | None = None) -> GoedelCode:
    """Code-level connective: combine formula codes into the code of the
    negated / conjoined / ... formula."""
    if op == "neg":
        if b is not None:
            raise CodingError("neg is unary")
        return encode(Not(decode(a)))
    if op not in _DOT_CONNECTIVES:
        raise CodingError(f"unknown connective {op!r}")
    if b is None:
        raise CodingError(f"{op} is binary")
    return encode(_DOT_CONNECTIVES[op](decode(a), decode(b)))


def dot_quant(q: QuantifierArray, vars: list[str] | tuple[str, ...], y: GoedelCode) -> GoedelCode:
    """Code-level quantifier prefixing: code of prefix(q, vars, decode(y))."""
    if len(q) != len(vars):
        raise CodingError(f"array length {len(q)} != variable count {len(vars)}")
    return encode(sx.prefix(q, list(vars), decode(y)))
