"""Lambda-list parsing: required, &optional, &rest, and &key parameters.

Parsing is purely structural — it happens once when a function object is
created. Binding argument values against the parsed shape lives in core.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .errors import EvalError
from .values import NIL, Keyword, Symbol
from .reader import Form

_OPTIONAL = Symbol.intern("&OPTIONAL")
_REST = Symbol.intern("&REST")
_KEY = Symbol.intern("&KEY")
_MARKERS = {_OPTIONAL, _REST, _KEY}


class OptionalParam(NamedTuple):
    name: Symbol
    default: Optional[Form]     # None means no default written (binds NIL)
    supplied: Optional[Symbol]  # supplied-p variable, if written


class KeyParam(NamedTuple):
    name: Symbol                # the variable bound in the body
    keyword: Keyword            # the marker callers pass, e.g. :name
    default: Optional[Form]
    supplied: Optional[Symbol]


class LambdaList:
    __slots__ = ("required", "optional", "rest", "keys")

    def __init__(self, required, optional, rest, keys):
        self.required: list[Symbol] = required
        self.optional: list[OptionalParam] = optional
        self.rest: Optional[Symbol] = rest
        self.keys: list[KeyParam] = keys

    def min_args(self) -> int:
        return len(self.required)

    def max_positional(self) -> int:
        return len(self.required) + len(self.optional)


def _bad(msg: str, form: Optional[Form]) -> EvalError:
    line = form.line if form is not None else None
    col = form.col if form is not None else None
    return EvalError(msg, line, col, kind="malformed-lambda-list")


def _param_symbol(form: Form) -> Symbol:
    d = form.datum
    if not isinstance(d, Symbol) or d in _MARKERS:
        raise _bad(f"expected a parameter name, got {form!r}", form)
    return d


def _looks_like_marker(datum) -> bool:
    return isinstance(datum, Symbol) and datum.name.startswith("&")


def parse_lambda_list(form: Form) -> LambdaList:
    """Parse the lambda-list position of lambda/defun/deflazy.

    ``form`` is either the NIL atom (an empty ``()`` list) or a list form.
    Section order is fixed: required, &optional, &rest, &key.
    """
    if form.datum is NIL:
        items: list[Form] = []
    elif isinstance(form.datum, list):
        items = form.datum
    else:
        raise _bad(f"lambda list must be a list, got {form!r}", form)

    required: list[Symbol] = []
    optional: list[OptionalParam] = []
    rest: Optional[Symbol] = None
    keys: list[KeyParam] = []
    seen: set[Symbol] = set()

    def claim(name: Symbol, where: Form):
        if name in seen:
            raise _bad(f"duplicate parameter name {name.name}", where)
        seen.add(name)

    SECTION_REQUIRED, SECTION_OPTIONAL, SECTION_REST, SECTION_KEY = 0, 1, 2, 3
    section = SECTION_REQUIRED
    i = 0
    while i < len(items):
        item = items[i]
        d = item.datum
        if _looks_like_marker(d):
            if d is _OPTIONAL and section < SECTION_OPTIONAL:
                section = SECTION_OPTIONAL
            elif d is _REST and section < SECTION_REST:
                section = SECTION_REST
                if i + 1 >= len(items) or _looks_like_marker(items[i + 1].datum):
                    raise _bad("&rest must be followed by one parameter name", item)
                rest = _param_symbol(items[i + 1])
                claim(rest, items[i + 1])
                i += 2
                # only &key may follow the rest parameter
                if i < len(items) and items[i].datum is not _KEY:
                    raise _bad("only &key may follow the &rest parameter", items[i])
                continue
            elif d is _KEY and section < SECTION_KEY:
                section = SECTION_KEY
            else:
                if d in _MARKERS:
                    raise _bad(f"{d.name} out of order", item)
                raise _bad(f"unknown lambda-list marker {d.name}", item)
            i += 1
            continue

        if section == SECTION_REQUIRED:
            name = _param_symbol(item)
            claim(name, item)
            required.append(name)
        elif section == SECTION_OPTIONAL:
            optional.append(_parse_optional(item, claim))
        elif section == SECTION_KEY:
            keys.append(_parse_key(item, claim))
        else:
            raise _bad("parameter after the &rest section", item)
        i += 1

    return LambdaList(required, optional, rest, keys)


def _parse_optional(item: Form, claim) -> OptionalParam:
    d = item.datum
    if isinstance(d, Symbol):
        claim(d, item)
        return OptionalParam(d, None, None)
    if not isinstance(d, list) or not 1 <= len(d) <= 3:
        raise _bad(f"malformed &optional parameter {item!r}", item)
    name = _param_symbol(d[0])
    claim(name, d[0])
    default = d[1] if len(d) >= 2 else None
    supplied = None
    if len(d) == 3:
        supplied = _param_symbol(d[2])
        claim(supplied, d[2])
    return OptionalParam(name, default, supplied)


def _parse_key(item: Form, claim) -> KeyParam:
    d = item.datum
    if isinstance(d, Symbol):
        claim(d, item)
        return KeyParam(d, Keyword.intern(d.name), None, None)
    if not isinstance(d, list) or not 1 <= len(d) <= 3:
        raise _bad(f"malformed &key parameter {item!r}", item)

    head = d[0]
    if isinstance(head.datum, list):
        # ((:external internal) default supplied-p)
        pair = head.datum
        if len(pair) != 2 or not isinstance(pair[0].datum, Keyword):
            raise _bad(f"malformed &key name pair {head!r}", head)
        keyword = pair[0].datum
        name = _param_symbol(pair[1])
    elif isinstance(head.datum, Symbol) and head.datum not in _MARKERS:
        name = head.datum
        keyword = Keyword.intern(name.name)
    else:
        raise _bad(f"malformed &key parameter {item!r}", item)
    claim(name, head)

    default = d[1] if len(d) >= 2 else None
    supplied = None
    if len(d) == 3:
        supplied = _param_symbol(d[2])
        claim(supplied, d[2])
    return KeyParam(name, keyword, default, supplied)
