"""Tokenizer and s-expression parser: source text in, positioned forms out.

Surface syntax: symbols (case-insensitive, canonicalized upper), keywords
(:name), signed 64-bit integer literals, double-quoted strings with \\" and
\\\\ escapes, t / nil, ' and #' sugar, proper lists, and ; comments.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import ReadError
from .values import INT_MAX, INT_MIN, NIL, T, Cons, Keyword, Symbol

OPEN = "open-paren"
CLOSE = "close-paren"
QUOTE = "quote-mark"
SHARP_QUOTE = "sharp-quote"
SYMBOL = "symbol"
KEYWORD = "keyword"
INTEGER = "integer"
STRING = "string"
EOF = "eof"

# Characters that end an atom. '#' is reserved for #' and may not appear
# inside atoms.
_TERMINATORS = set("()'\";#") | set(" \t\r\n")

_QUOTE_SYM = Symbol.intern("QUOTE")
_FUNCTION_SYM = Symbol.intern("FUNCTION")


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


class Form:
    """A parsed expression with the source position of its first token.

    ``datum`` is an atom (int, str, Symbol, Keyword, T, NIL) or a Python
    list of sub-Forms. Surface lists are always proper; ``()`` reads as NIL.
    """

    __slots__ = ("datum", "line", "col")

    def __init__(self, datum, line: int, col: int):
        self.datum = datum
        self.line = line
        self.col = col

    def __repr__(self):
        if isinstance(self.datum, list):
            return "(" + " ".join(repr(f) for f in self.datum) + ")"
        return repr(self.datum)


def _is_integer_text(text: str) -> bool:
    body = text[1:] if text[0] in "+-" else text
    return len(body) > 0 and body.isdigit()


def tokenize(text: str) -> list[Token]:
    """Lex source text into tokens, ending with one eof token.

    Lexeme texts are verbatim source slices, so joining them with
    whitespace reproduces an equivalent program.
    """
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def advance(ch: str):
        nonlocal line, col
        if ch == "\n":
            line += 1
            col = 1
        else:
            col += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(ch)
            i += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                advance(text[i])
                i += 1
            continue
        start_line, start_col = line, col
        if ch == "(":
            tokens.append(Token(OPEN, "(", start_line, start_col))
            advance(ch)
            i += 1
        elif ch == ")":
            tokens.append(Token(CLOSE, ")", start_line, start_col))
            advance(ch)
            i += 1
        elif ch == "'":
            tokens.append(Token(QUOTE, "'", start_line, start_col))
            advance(ch)
            i += 1
        elif ch == "#":
            if i + 1 < n and text[i + 1] == "'":
                tokens.append(Token(SHARP_QUOTE, "#'", start_line, start_col))
                advance("#")
                advance("'")
                i += 2
            else:
                raise ReadError("illegal character '#' (only #' is supported)",
                                start_line, start_col)
        elif ch == '"':
            advance(ch)
            i += 1
            raw = ['"']
            while True:
                if i >= n:
                    raise ReadError("unterminated string literal",
                                    start_line, start_col, incomplete=True)
                ch = text[i]
                if ch == '"':
                    raw.append('"')
                    advance(ch)
                    i += 1
                    break
                if ch == "\\":
                    if i + 1 >= n:
                        raise ReadError("unterminated string literal",
                                        start_line, start_col, incomplete=True)
                    esc = text[i + 1]
                    if esc not in ('"', "\\"):
                        raise ReadError(f"unknown string escape '\\{esc}'", line, col)
                    raw.append(ch)
                    raw.append(esc)
                    advance(ch)
                    advance(esc)
                    i += 2
                    continue
                raw.append(ch)
                advance(ch)
                i += 1
            tokens.append(Token(STRING, "".join(raw), start_line, start_col))
        else:
            if ord(ch) < 32:
                raise ReadError(f"illegal character (codepoint {ord(ch)})",
                                start_line, start_col)
            chars = []
            while i < n and text[i] not in _TERMINATORS:
                if ord(text[i]) < 32:
                    raise ReadError(f"illegal character (codepoint {ord(text[i])})",
                                    line, col)
                chars.append(text[i])
                advance(text[i])
                i += 1
            lexeme = "".join(chars)
            if _is_integer_text(lexeme):
                if not INT_MIN <= int(lexeme) <= INT_MAX:
                    raise ReadError(f"integer literal {lexeme} outside the 64-bit signed range",
                                    start_line, start_col)
                tokens.append(Token(INTEGER, lexeme, start_line, start_col))
            elif lexeme.startswith(":"):
                if len(lexeme) == 1:
                    raise ReadError("lone ':' is not a keyword", start_line, start_col)
                tokens.append(Token(KEYWORD, lexeme, start_line, start_col))
            else:
                tokens.append(Token(SYMBOL, lexeme, start_line, start_col))
    tokens.append(Token(EOF, "", line, col))
    return tokens


def _decode_string(raw: str) -> str:
    # raw includes the surrounding quotes; escapes were validated by tokenize.
    body = raw[1:-1]
    out = []
    i = 0
    while i < len(body):
        if body[i] == "\\":
            out.append(body[i + 1])
            i += 2
        else:
            out.append(body[i])
            i += 1
    return "".join(out)


def _atom_datum(tok: Token):
    if tok.kind == INTEGER:
        return int(tok.text)
    if tok.kind == STRING:
        return _decode_string(tok.text)
    if tok.kind == KEYWORD:
        return Keyword.intern(tok.text[1:])
    name = tok.text.upper()
    if name == "T":
        return T
    if name == "NIL":
        return NIL
    return Symbol.intern(name)


def parse(tokens: list[Token]) -> list[Form]:
    """Parse a token stream (ending in eof) into top-level forms."""
    forms = []
    i = 0
    while tokens[i].kind != EOF:
        form, i = _parse_one(tokens, i)
        forms.append(form)
    return forms


def _parse_one(tokens: list[Token], i: int) -> tuple[Form, int]:
    tok = tokens[i]
    if tok.kind in (INTEGER, STRING, KEYWORD, SYMBOL):
        return Form(_atom_datum(tok), tok.line, tok.col), i + 1
    if tok.kind == OPEN:
        items: list[Form] = []
        j = i + 1
        while True:
            t = tokens[j]
            if t.kind == CLOSE:
                j += 1
                break
            if t.kind == EOF:
                raise ReadError("unclosed parenthesis", tok.line, tok.col,
                                incomplete=True)
            item, j = _parse_one(tokens, j)
            items.append(item)
        if not items:
            return Form(NIL, tok.line, tok.col), j
        return Form(items, tok.line, tok.col), j
    if tok.kind in (QUOTE, SHARP_QUOTE):
        wrapper = _QUOTE_SYM if tok.kind == QUOTE else _FUNCTION_SYM
        t = tokens[i + 1]
        if t.kind == EOF:
            raise ReadError(f"{tok.text} with no following form", tok.line, tok.col,
                            incomplete=True)
        if t.kind == CLOSE:
            raise ReadError(f"{tok.text} with no following form", t.line, t.col)
        inner, j = _parse_one(tokens, i + 1)
        head = Form(wrapper, tok.line, tok.col)
        return Form([head, inner], tok.line, tok.col), j
    if tok.kind == CLOSE:
        raise ReadError("unbalanced close parenthesis", tok.line, tok.col)
    raise ReadError(f"unexpected token {tok.kind}", tok.line, tok.col)


def read_source(text: str) -> list[Form]:
    return parse(tokenize(text))


def form_to_value(form: Form):
    """Quote semantics: turn a parsed form into the datum it denotes."""
    datum = form.datum
    if isinstance(datum, list):
        result = NIL
        for item in reversed(datum):
            result = Cons(form_to_value(item), result)
        return result
    return datum
