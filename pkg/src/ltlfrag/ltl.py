"""Future LTL over letter alphabets: syntax trees, parsing, negation normal
form, and a direct evaluator on ultimately periodic words.

Atomic formulas are letters, so exactly one atom holds at each position.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Alphabet", "Formula", "Letter", "Const", "Not", "And", "Or", "Next",
    "Eventually", "Always", "Until", "Release", "UPWord", "Fragment",
    "LtlError", "ParseError", "UnknownLetterError", "UnsupportedFragmentError",
    "parse", "to_nnf", "subformulas", "eval_formula", "normalize_operator_set",
    "temporal_count", "letters_of", "is_nnf",
]

RESERVED = frozenset({"X", "F", "G", "U", "R", "SF", "true", "false"})


class LtlError(ValueError):
    pass


class ParseError(LtlError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownLetterError(LtlError):
    pass


class UnsupportedFragmentError(LtlError):
    pass


class Alphabet(tuple):
    """Ordered set of letter names."""

    def __new__(cls, letters: Iterable[str]):
        letters = tuple(letters)
        if not letters:
            raise LtlError("alphabet must be nonempty")
        if len(set(letters)) != len(letters):
            raise LtlError(f"duplicate letters in alphabet {letters!r}")
        for a in letters:
            if not isinstance(a, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", a):
                raise LtlError(f"invalid letter {a!r}")
            if a in RESERVED:
                raise LtlError(f"letter {a!r} collides with an operator keyword")
        return super().__new__(cls, letters)

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        return cls(t.strip() for t in text.split(",") if t.strip())

    def index(self, letter):  # type: ignore[override]
        try:
            return super().index(letter)
        except ValueError:
            raise UnknownLetterError(f"letter {letter!r} not in alphabet {','.join(self)}") from None

    def __repr__(self):
        return f"Alphabet({','.join(self)})"


# -- syntax tree ------------------------------------------------------------

class Formula:
    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Letter(Formula):
    name: str

    def __repr__(self):
        return f"Letter({self.name!r})"


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, repr=False)
class _Unary(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"{type(self).__name__}({self.arg!r})"


@dataclass(frozen=True, repr=False)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Not(_Unary):
    pass


class Next(_Unary):
    pass


class Eventually(_Unary):
    pass


class Always(_Unary):
    pass


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Until(_Binary):
    pass


class Release(_Binary):
    pass


TEMPORAL = (Next, Eventually, Always, Until, Release)

_UNARY_SYMBOL = {Not: "!", Next: "X", Eventually: "F", Always: "G"}
_BINARY_SYMBOL = {And: "&", Or: "|", Until: "U", Release: "R"}


def to_text(phi: Formula) -> str:
    """Canonical text: binary nodes always parenthesized, unary prefix."""
    if isinstance(phi, Letter):
        return phi.name
    if isinstance(phi, Const):
        return "true" if phi.value else "false"
    if isinstance(phi, _Unary):
        return f"{_UNARY_SYMBOL[type(phi)]} {to_text(phi.arg)}"
    if isinstance(phi, _Binary):
        return f"({to_text(phi.left)} {_BINARY_SYMBOL[type(phi)]} {to_text(phi.right)})"
    raise TypeError(phi)


def _postorder(phi: Formula) -> Iterator[Formula]:
    stack = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for child in reversed(node.children()):
            stack.append((child, False))


def subformulas(phi: Formula) -> tuple[Formula, ...]:
    """Distinct subformulas in post-order (children before parents)."""
    seen = {}
    for node in _postorder(phi):
        seen.setdefault(node, None)
    return tuple(seen)


def letters_of(phi: Formula) -> set[str]:
    return {n.name for n in _postorder(phi) if isinstance(n, Letter)}


def temporal_count(phi: Formula) -> int:
    """Number of temporal-operator occurrences in the tree."""
    return sum(isinstance(n, TEMPORAL) for n in _postorder(phi))


def is_nnf(phi: Formula) -> bool:
    return not any(isinstance(n, Not) for n in _postorder(phi))


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[!&|()~]))")
_PREFIX_OPS = {"X": Next, "F": Eventually, "G": Always, "!": Not, "~": Not}
_INFIX = {"U": Until, "R": Release}


def _split_glued(word: str, alphabet: Alphabet) -> list[str] | None:
    # "XFa" -> X F a, when the remainder is a letter
    out = []
    rest = word
    while rest and rest not in alphabet:
        for op in ("SF", "X", "F", "G"):
            if rest.startswith(op) and len(rest) > len(op):
                out.append(op)
                rest = rest[len(op):]
                break
        else:
            return None
    return out + [rest] if rest else None


def _tokenize(text: str, alphabet: Alphabet) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start(m.lastgroup)
        tok = m.group(m.lastgroup)
        pos = m.end()
        if m.lastgroup == "ident" and tok not in alphabet and tok not in RESERVED:
            parts = _split_glued(tok, alphabet)
            if parts is None:
                raise UnknownLetterError(
                    f"unknown letter {tok!r} at position {start}; alphabet is {','.join(alphabet)}")
            offset = start
            for part in parts:
                tokens.append((part, offset))
                offset += len(part)
            continue
        tokens.append((tok, start))
    return tokens


class _Parser:
    # or := and ('|' and)* ; and := until ('&' until)* ;
    # until := unary (('U'|'R') until)? ; unary := op unary | atom
    def __init__(self, tokens, alphabet, length):
        self.tokens = tokens
        self.alphabet = alphabet
        self.i = 0
        self.length = length

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else self.length

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = repr(expected) if expected else "a formula"
            raise ParseError(f"expected {want}, found {tok!r}" if tok else f"expected {want}, found end of input",
                             self.pos())
        self.i += 1
        return tok

    def parse(self):
        phi = self.disjunction()
        if self.peek() is not None:
            raise ParseError(f"unexpected token {self.peek()!r}", self.pos())
        return phi

    def disjunction(self):
        phi = self.conjunction()
        while self.peek() == "|":
            self.take()
            phi = Or(phi, self.conjunction())
        return phi

    def conjunction(self):
        phi = self.until()
        while self.peek() == "&":
            self.take()
            phi = And(phi, self.until())
        return phi

    def until(self):
        phi = self.unary()
        if self.peek() in _INFIX:
            node = _INFIX[self.take()]
            return node(phi, self.until())
        return phi

    def unary(self):
        tok = self.peek()
        if tok in _PREFIX_OPS:
            self.take()
            return _PREFIX_OPS[tok](self.unary())
        if tok == "SF":
            self.take()
            return Next(Eventually(self.unary()))
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            phi = self.disjunction()
            self.take(")")
            return phi
        if tok in ("true", "false"):
            self.take()
            return Const(tok == "true")
        if tok is None or tok in RESERVED or not re.fullmatch(r"[A-Za-z_]\w*", tok):
            self.take("a letter")  # raises
        self.take()
        return Letter(tok)


def parse(text: str, alphabet: Alphabet) -> Formula:
    """Parse formula text over ``alphabet``.

    Prefix operators bind tighter than binary ones, ``U`` and ``R`` are
    right-associative and bind tighter than ``&``, which binds tighter
    than ``|``. ``SF`` is read as ``X F``.
    """
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(alphabet)
    tokens = _tokenize(text, alphabet)
    if not tokens:
        raise ParseError("empty formula", 0)
    return _Parser(tokens, alphabet, len(text)).parse()


# -- negation normal form ---------------------------------------------------

def _disjunction(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return Const(False)
    phi = parts[0]
    for p in parts[1:]:
        phi = Or(phi, p)
    return phi


def to_nnf(phi: Formula, alphabet: Alphabet) -> Formula:
    """Push negations to the letters and replace ``!a`` by the disjunction
    of the remaining letters (``false`` when there are none)."""

    def pos(f):
        if isinstance(f, (Letter, Const)):
            return f
        if isinstance(f, Not):
            return neg(f.arg)
        if isinstance(f, _Unary):
            return type(f)(pos(f.arg))
        return type(f)(pos(f.left), pos(f.right))

    def neg(f):
        if isinstance(f, Letter):
            alphabet.index(f.name)
            return _disjunction([Letter(b) for b in alphabet if b != f.name])
        if isinstance(f, Const):
            return Const(not f.value)
        if isinstance(f, Not):
            return pos(f.arg)
        if isinstance(f, Next):
            return Next(neg(f.arg))
        if isinstance(f, Eventually):
            return Always(neg(f.arg))
        if isinstance(f, Always):
            return Eventually(neg(f.arg))
        if isinstance(f, And):
            return Or(neg(f.left), neg(f.right))
        if isinstance(f, Or):
            return And(neg(f.left), neg(f.right))
        if isinstance(f, Until):
            return Release(neg(f.left), neg(f.right))
        if isinstance(f, Release):
            return Until(neg(f.left), neg(f.right))
        raise TypeError(f)

    return pos(phi)


# -- ultimately periodic words ----------------------------------------------

def _primitive_root(y: tuple) -> tuple:
    n = len(y)
    for d in range(1, n + 1):
        if n % d == 0 and y[:d] * (n // d) == y:
            return y[:d]
    return y


@dataclass(frozen=True)
class UPWord:
    """The omega-word ``x y y y ...``."""
    x: tuple[str, ...]
    y: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "y", tuple(self.y))
        if not self.y:
            raise LtlError("the periodic part of an ultimately periodic word must be nonempty")

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> "UPWord":
        """Read ``x(y)`` or ``x(y)^w``; letters are separated by spaces or
        dots when any letter name is longer than one character."""
        m = re.fullmatch(r"\s*([^()]*)\(([^()]+)\)\s*(?:\^\s*(?:w|omega|ω))?\s*", text)
        if not m:
            raise LtlError(f"cannot read ultimately periodic word {text!r}; expected x(y)")
        return cls(_split_letters(m.group(1), alphabet), _split_letters(m.group(2), alphabet))

    def __len__(self):
        return len(self.x) + len(self.y)

    def __str__(self):
        sep = "" if all(len(a) == 1 for a in self.x + self.y) else " "
        return f"{sep.join(self.x)}({sep.join(self.y)})^ω"

    @property
    def loop_start(self) -> int:
        return len(self.x)

    def letter(self, p: int) -> str:
        return self.x[p] if p < len(self.x) else self.y[(p - len(self.x)) % len(self.y)]

    def successor(self, p: int) -> int:
        """Successor of a lasso position (positions 0 .. len-1)."""
        return p + 1 if p + 1 < len(self) else len(self.x)

    def position(self, p: int) -> int:
        """Lasso position of absolute position ``p``."""
        if p < len(self.x):
            return p
        return len(self.x) + (p - len(self.x)) % len(self.y)

    def suffix(self, i: int) -> "UPWord":
        if i <= len(self.x):
            return UPWord(self.x[i:], self.y)
        k = (i - len(self.x)) % len(self.y)
        return UPWord((), self.y[k:] + self.y[:k])

    def prefix(self, n: int) -> tuple[str, ...]:
        return tuple(self.letter(p) for p in range(n))

    def inf(self) -> frozenset[str]:
        """Letters occurring infinitely often."""
        return frozenset(self.y)

    def canonical(self) -> "UPWord":
        x, y = list(self.x), _primitive_root(self.y)
        while x and x[-1] == y[-1]:
            x.pop()
            y = y[-1:] + y[:-1]
        return UPWord(tuple(x), tuple(y))

    def letters(self) -> set[str]:
        return set(self.x) | set(self.y)


def _split_letters(text: str, alphabet: Alphabet | None) -> tuple[str, ...]:
    text = text.strip()
    if not text:
        return ()
    if re.search(r"[\s.]", text):
        parts = tuple(p for p in re.split(r"[\s.]+", text) if p)
    elif alphabet is None or all(len(a) == 1 for a in alphabet):
        parts = tuple(text)
    else:
        parts = []
        rest = text
        by_length = sorted(alphabet, key=len, reverse=True)
        while rest:
            for a in by_length:
                if rest.startswith(a):
                    parts.append(a)
                    rest = rest[len(a):]
                    break
            else:
                raise UnknownLetterError(f"cannot split {text!r} into letters of {','.join(alphabet)}")
        parts = tuple(parts)
    if alphabet is not None:
        for a in parts:
            alphabet.index(a)
    return parts


# -- evaluation -------------------------------------------------------------

def eval_formula(phi: Formula, w: UPWord, alphabet: Alphabet | None = None) -> bool:
    """Whether ``w`` satisfies ``phi``.

    Every subformula gets a truth table over the lasso positions of ``w``;
    F/U are least and G/R greatest fixpoints along the successor map.
    """
    if alphabet is not None:
        for a in w.letters() | letters_of(phi):
            alphabet.index(a)
    n = len(w)
    succ = [w.successor(p) for p in range(n)]
    letters = [w.letter(p) for p in range(n)]
    table: dict[Formula, list[bool]] = {}
    for f in subformulas(phi):
        if isinstance(f, Letter):
            val = [c == f.name for c in letters]
        elif isinstance(f, Const):
            val = [f.value] * n
        elif isinstance(f, Not):
            val = [not v for v in table[f.arg]]
        elif isinstance(f, And):
            val = [l and r for l, r in zip(table[f.left], table[f.right])]
        elif isinstance(f, Or):
            val = [l or r for l, r in zip(table[f.left], table[f.right])]
        elif isinstance(f, Next):
            sub = table[f.arg]
            val = [sub[succ[p]] for p in range(n)]
        else:
            val = _fixpoint(f, table, succ, n)
        table[f] = val
    return table[phi][0]


def _fixpoint(f, table, succ, n):
    if isinstance(f, Eventually):
        now, keep, least = table[f.arg], [False] * n, True
    elif isinstance(f, Always):
        now, keep, least = table[f.arg], [True] * n, False
    elif isinstance(f, Until):
        now, keep, least = table[f.right], table[f.left], True
    else:  # Release
        now, keep, least = table[f.right], table[f.left], False
    val = [not least] * n
    changed = True
    while changed:
        changed = False
        for p in reversed(range(n)):
            later = val[succ[p]]
            if isinstance(f, Eventually):
                v = now[p] or later
            elif isinstance(f, Always):
                v = now[p] and later
            elif least:
                v = now[p] or (keep[p] and later)
            else:
                v = now[p] and (keep[p] or later)
            if v != val[p]:
                val[p] = v
                changed = True
    return val


# -- operator sets ----------------------------------------------------------

class Fragment(str, enum.Enum):
    X = "X"
    F = "F"
    SF = "SF"
    XF = "XF"
    U = "U"
    FULL = "FULL"

    def __str__(self):
        return self.value


_OPERATOR_NAMES = {
    "X": "X", "NEXT": "X",
    "F": "F", "EVENTUALLY": "F",
    "SF": "SF", "STRICTEVENTUALLY": "SF", "STRICT_EVENTUALLY": "SF",
    "U": "U", "UNTIL": "U",
}


def normalize_operator_set(ops: Iterable[str] | str) -> Fragment:
    """Map an operator set to the fragment it determines.

    Accepts names like ``X``, ``F``, ``SF``, ``U`` (or ``Next``,
    ``Eventually``, ``Until``), as an iterable or a comma-separated string.
    A single canonical fragment id such as ``XF`` or ``FULL`` is accepted
    as-is.
    """
    if isinstance(ops, Fragment):
        return ops
    if isinstance(ops, str):
        if ops.strip().upper() == "FULL":
            return Fragment.FULL
        if ops.strip().upper() == "XF":
            return Fragment.XF
        ops = [o for o in re.split(r"[,\s{}]+", ops) if o]
    names = set()
    for op in ops:
        key = op.strip().upper()
        if key == "XF":
            names.update({"X", "F"})
            continue
        if key not in _OPERATOR_NAMES:
            raise LtlError(f"unknown temporal operator {op!r}")
        names.add(_OPERATOR_NAMES[key])
    if not names:
        raise LtlError("empty operator set")
    if "U" in names:
        if "X" in names:
            return Fragment.FULL
        if "SF" in names:
            raise UnsupportedFragmentError("the fragment determined by {SF, U} is not supported")
        return Fragment.U
    if "X" in names:
        return Fragment.XF if names & {"F", "SF"} else Fragment.X
    if "SF" in names:
        return Fragment.SF
    return Fragment.F
