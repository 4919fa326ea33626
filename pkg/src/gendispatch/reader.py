"""A small s-expression reader: symbols, integers, floats, strings, proper lists."""

from __future__ import annotations

import re

from .model import NIL, Cons, intern

_INT_RE = re.compile(r"[+-]?\d+$")
_FLOAT_RE = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+([eE][+-]?\d+))([eE][+-]?\d+)?$")
_DELIMITERS = '()"'


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__("%s (at position %d)" % (message, position))


def read_sexpr(text: str):
    """Parse exactly one expression from `text`."""
    reader = _Reader(text)
    reader.skip_whitespace()
    if reader.at_end():
        raise ParseError("empty input", reader.pos)
    value = reader.read_expr()
    reader.skip_whitespace()
    if not reader.at_end():
        raise ParseError("trailing garbage after expression", reader.pos)
    return value


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos]

    def skip_whitespace(self):
        while not self.at_end() and self.text[self.pos].isspace():
            self.pos += 1

    def read_expr(self):
        ch = self.peek()
        if ch == "(":
            return self.read_list()
        if ch == ")":
            raise ParseError("unbalanced close paren", self.pos)
        if ch == '"':
            return self.read_string()
        return self.read_atom()

    def read_list(self):
        open_pos = self.pos
        self.pos += 1
        items = []
        while True:
            self.skip_whitespace()
            if self.at_end():
                raise ParseError("unterminated list opened", open_pos)
            if self.peek() == ")":
                self.pos += 1
                break
            items.append(self.read_expr())
        result = NIL
        for item in reversed(items):
            result = Cons(item, result)
        return result

    def read_string(self):
        open_pos = self.pos
        self.pos += 1
        chars = []
        while True:
            if self.at_end():
                raise ParseError("unterminated string opened", open_pos)
            ch = self.text[self.pos]
            self.pos += 1
            if ch == '"':
                return "".join(chars)
            if ch == "\\":
                if self.at_end():
                    raise ParseError("unterminated string opened", open_pos)
                ch = self.text[self.pos]
                self.pos += 1
            chars.append(ch)

    def read_atom(self):
        start = self.pos
        while not self.at_end():
            ch = self.peek()
            if ch.isspace() or ch in _DELIMITERS:
                break
            self.pos += 1
        token = self.text[start : self.pos]
        if _INT_RE.match(token):
            return int(token)
        if _FLOAT_RE.match(token):
            return float(token)
        return intern(token)
