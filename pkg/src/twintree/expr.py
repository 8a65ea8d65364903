"""Parser for word expressions.

Grammar::

    expr    := factor*
    factor  := atom ( '^' INT | '^' atom | '~' )*
    atom    := 'a' | 'b' | 'c' | 'd' | '1' | '(' expr ')' | '[' expr ',' expr ']'

``w^k`` is a power, ``u^v`` is the conjugate ``v^-1 u v``, ``[u,v]`` is
``u^-1 v^-1 u v`` and ``~`` is the postfix inverse.  Whitespace is ignored.
"""

from __future__ import annotations

from .tree_core import LETTERS, comm, conj, inverse, power, reduce


class ParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


class _Parser:
    def __init__(self, text: str, letters: str):
        self.text = text
        self.letters = letters
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, message: str):
        raise ParseError(message, self.pos + 1)

    def expect(self, ch: str):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            self.fail(f"expected {ch!r}, got {got!r}")
        self.pos += 1

    def parse(self) -> str:
        word = self.expr()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return word

    def expr(self) -> str:
        parts = []
        while self.starts_atom(self.peek()):
            parts.append(self.factor())
        return reduce("".join(parts))

    def starts_atom(self, ch: str) -> bool:
        return bool(ch) and (ch in self.letters or ch in "1([")

    def factor(self) -> str:
        word = self.atom()
        while True:
            ch = self.peek()
            if ch == "~":
                self.pos += 1
                word = inverse(word)
            elif ch == "^":
                self.pos += 1
                nxt = self.peek()
                if nxt.isdigit() or nxt == "-":
                    word = power(word, self.integer())
                elif self.starts_atom(nxt):
                    word = conj(word, self.atom())
                else:
                    self.fail("expected exponent or conjugator after '^'")
            else:
                return word

    def integer(self) -> int:
        start = self.pos
        if self.text[self.pos] == "-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.fail("expected integer")
        return int(self.text[start:self.pos])

    def atom(self) -> str:
        ch = self.peek()
        if ch in self.letters and ch:
            self.pos += 1
            return ch
        if ch == "1":
            self.pos += 1
            return ""
        if ch == "(":
            self.pos += 1
            word = self.expr()
            self.expect(")")
            return word
        if ch == "[":
            self.pos += 1
            u = self.expr()
            self.expect(",")
            v = self.expr()
            self.expect("]")
            return comm(u, v)
        self.fail(f"unexpected {ch!r}" if ch else "unexpected end of input")


def parse(text: str, letters: str = LETTERS) -> str:
    """Parse a word expression into a freely reduced word."""
    return _Parser(text, letters).parse()
