"""Tokenizer and recursive-descent parser for the predicate language.

Grammar sketch (quantifiers extend as far right as possible):

    formula  := ('A'|'E'|'∀'|'∃') vars formula | iff
    iff      := implies ('<=>' implies)*
    implies  := or ('=>' implies)?
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '~' unary | '(' formula ')' | '$' NAME '(' terms ')' | atom
    atom     := operand REL operand
    operand  := term | NAME '[' term ']'
    term     := summand (('+'|'-') summand)*
    summand  := NUMBER | NUMBER '*'? NAME | NAME

A quantifier is the letter A/E glued to the variable name (``Ak``), or
the letter followed by comma-separated names.  Unicode ∀ ∃ ¬ ∧ ∨ ≠ ≤ ≥
are accepted as synonyms.  ``#`` starts a line comment.
"""

from __future__ import annotations

import re

from .ast import (Add, And, Call, Compare, Const, Exists, Forall, Iff,
                  Implies, Mul, Not, Or, SeqCompare, SeqRef, Sub, Var)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.position = pos


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op><=>|=>|<=|>=|!=|≠|≤|≥|[()\[\],+\-*=<>&|~$;¬∧∨∀∃])
""", re.VERBOSE)

_OP_SYNONYMS = {"≠": "!=", "≤": "<=", "≥": ">=", "¬": "~", "∧": "&", "∨": "|",
                "∀": "A*", "∃": "E*"}
_RELS = ("=", "!=", "<", "<=", ">", ">=")


def tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup == "ws":
            pos = m.end()
            continue
        value = m.group()
        kind = m.lastgroup
        if kind == "op":
            value = _OP_SYNONYMS.get(value, value)
        tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)
        return pos

    def error(self, msg):
        _, val, pos = self.peek()
        raise ParseError(f"{msg}, found {val or 'end of input'!r}", pos)

    # -- quantifier detection ------------------------------------------------

    def _quantifier(self):
        """Return ('A'|'E', [vars]) if the next tokens open a quantifier."""
        kind, val, pos = self.peek()
        if kind == "op" and val in ("A*", "E*"):
            self.next()
            return val[0], self._quant_vars(glued=None)
        if kind != "name" or val[0] not in "AE":
            return None
        if len(val) == 1:
            self.next()
            return val, self._quant_vars(glued=None)
        self.next()
        return val[0], self._quant_vars(glued=val[1:])

    def _quant_vars(self, glued):
        names = []
        if glued is not None:
            names.append(glued)
        else:
            kind, val, pos = self.next()
            if kind != "name":
                raise ParseError("expected a variable after the quantifier", pos)
            names.append(val)
        while self.peek()[1] == ",":
            save = self.i
            self.next()
            kind, val, _ = self.peek()
            if kind == "name" and self.tokens[self.i + 1][1] != "[":
                self.next()
                names.append(val)
            else:
                self.i = save
                break
        return names

    # -- formulas ------------------------------------------------------------

    def formula(self):
        save = self.i
        q = self._quantifier()
        if q is not None:
            letter, names = q
            # a quantifier must be followed by more formula; if not, backtrack
            try:
                body = self.formula()
            except ParseError:
                self.i = save
                return self.iff()
            node = body
            cls = Forall if letter == "A" else Exists
            for name in reversed(names):
                node = cls(name, node)
            return node
        return self.iff()

    def iff(self):
        left = self.implies()
        while self.peek()[1] == "<=>":
            self.next()
            left = Iff(left, self.implies())
        return left

    def implies(self):
        left = self.or_()
        if self.peek()[1] == "=>":
            self.next()
            return Implies(left, self.formula())
        return left

    def or_(self):
        left = self.and_()
        while self.peek()[1] == "|":
            self.next()
            left = Or(left, self.and_())
        return left

    def and_(self):
        left = self.unary()
        while self.peek()[1] == "&":
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self):
        kind, val, pos = self.peek()
        if val == "~":
            self.next()
            return Not(self.unary(), pos=pos)
        if val == "(":
            save = self.i
            self.next()
            try:
                inner = self.formula()
                self.expect(")")
                return inner
            except ParseError:
                # could be a parenthesized term comparison, e.g. (i+m) <= j
                self.i = save
                return self.atom()
        if val == "$":
            self.next()
            kind, name, npos = self.next()
            if kind != "name":
                raise ParseError("expected a predicate name after '$'", npos)
            self.expect("(")
            args = [self.term()]
            while self.peek()[1] == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
            return Call(name, tuple(args), pos=pos)
        return self.atom()

    def atom(self):
        pos = self.peek()[2]
        left = self.operand()
        kind, val, rpos = self.peek()
        if val not in _RELS:
            self.error("expected a relation")
        self.next()
        right = self.operand()
        seq_left = isinstance(left, SeqRef)
        seq_right = isinstance(right, SeqRef)
        if seq_left or seq_right:
            if val not in ("=", "!="):
                raise ParseError("sequence values only compare with = or !=", rpos)
            def as_side(x, other_pos):
                if isinstance(x, SeqRef):
                    return x
                if isinstance(x, Const):
                    return x.value
                raise ParseError(
                    "a sequence value compares only with another sequence "
                    "value or an output constant", other_pos)
            return SeqCompare(as_side(left, pos), val, as_side(right, rpos),
                              pos=pos)
        return Compare(left, val, right, pos=pos)

    def operand(self):
        kind, val, pos = self.peek()
        if kind == "name" and self.tokens[self.i + 1][1] == "[":
            self.next()
            self.expect("[")
            idx = self.term()
            self.expect("]")
            return SeqRef(val, idx, pos=pos)
        return self.term()

    # -- terms ---------------------------------------------------------------

    def term(self):
        if self.peek()[1] == "(":
            self.next()
            node = self.term()
            self.expect(")")
        else:
            node = self.summand()
        while self.peek()[1] in ("+", "-"):
            _, op, _ = self.next()
            if self.peek()[1] == "(":
                self.next()
                rhs = self.term()
                self.expect(")")
            else:
                rhs = self.summand()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def summand(self):
        kind, val, pos = self.next()
        if kind == "num":
            value = int(val)
            nkind, nval, _ = self.peek()
            if nval == "*":
                self.next()
                nkind, nval, npos = self.next()
                if nkind != "name":
                    raise ParseError("expected a variable after '*'", npos)
                return Mul(value, Var(nval), pos=pos)
            if nkind == "name" and self.tokens[self.i + 1][1] != "[":
                self.next()
                return Mul(value, Var(nval), pos=pos)
            return Const(value, pos=pos)
        if kind == "name":
            return Var(val, pos=pos)
        raise ParseError(f"expected a term, found {val or 'end of input'!r}", pos)


def parse(text: str):
    """Parse a single formula."""
    p = _Parser(text)
    f = p.formula()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {val!r}", pos)
    return f


def parse_term(text: str):
    p = _Parser(text)
    t = p.term()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {val!r}", pos)
    return t
