"""Runtime data: symbols, keywords, conses, functions, thunks, and the printer.

Integers are host ints restricted to the signed 64-bit range by the
arithmetic primitives; strings are host str. Everything else is a class
below. NIL is the sole false value and doubles as the empty list.
"""

from __future__ import annotations

INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1


class Symbol:
    """Interned, case-canonicalized (upper) symbol; compare with ``is``."""

    __slots__ = ("name",)
    _table: dict[str, "Symbol"] = {}

    def __init__(self, name: str):
        self.name = name

    @classmethod
    def intern(cls, name: str) -> "Symbol":
        key = name.upper()
        sym = cls._table.get(key)
        if sym is None:
            sym = cls._table[key] = cls(key)
        return sym

    def __repr__(self):
        return self.name


class Keyword:
    """Interned keyword (``:name``); self-evaluating, compare with ``is``."""

    __slots__ = ("name",)
    _table: dict[str, "Keyword"] = {}

    def __init__(self, name: str):
        self.name = name

    @classmethod
    def intern(cls, name: str) -> "Keyword":
        key = name.upper()
        kw = cls._table.get(key)
        if kw is None:
            kw = cls._table[key] = cls(key)
        return kw

    def __repr__(self):
        return ":" + self.name


class _Nil:
    __slots__ = ()

    def __repr__(self):
        return "NIL"

    def __bool__(self):
        return False


class _True:
    __slots__ = ()

    def __repr__(self):
        return "T"


NIL = _Nil()
T = _True()


def is_truthy(value) -> bool:
    return value is not NIL


class Cons:
    """Immutable pair. Proper lists are cons chains ending in NIL."""

    __slots__ = ("car", "cdr")

    def __init__(self, car, cdr):
        self.car = car
        self.cdr = cdr

    def __repr__(self):
        return print_value(self)


class Thunk:
    """A delayed expression closed over its environment.

    ``memoizing`` is fixed at creation from the interpreter configuration.
    A non-memoizing thunk never touches ``value``; a memoizing one writes it
    at most once, and never stores another thunk there (force resolves
    chains fully before memoizing).
    """

    __slots__ = ("expr", "env", "memoizing", "done", "value")

    def __init__(self, expr, env, memoizing: bool):
        self.expr = expr
        self.env = env
        self.memoizing = memoizing
        self.done = False
        self.value = None

    def __repr__(self):
        return "#<thunk>"


class FunctionObject:
    """Interpreted function: lambda list + body + closure, strict or lazy.

    The mode is fixed at construction. A lazy-mode function can only be
    entered through the lazy call path; the strict path rejects it.
    """

    __slots__ = ("name", "lambda_list", "body", "closure", "lazy")

    def __init__(self, name, lambda_list, body, closure, lazy: bool):
        self.name = name
        self.lambda_list = lambda_list
        self.body = body
        self.closure = closure
        self.lazy = lazy

    def __repr__(self):
        return print_value(self)


class BuiltinFunction:
    """Native primitive. ``fn`` takes (interpreter, args) and returns a value."""

    __slots__ = ("name", "fn", "min_args", "max_args", "lazy")

    def __init__(self, name, fn, min_args: int, max_args: int | None, lazy: bool = False):
        self.name = name
        self.fn = fn
        self.min_args = min_args
        self.max_args = max_args
        self.lazy = lazy

    def lazified(self) -> "BuiltinFunction":
        return BuiltinFunction(self.name, self.fn, self.min_args, self.max_args, lazy=True)

    def __repr__(self):
        return print_value(self)


def cons_list(items, tail=NIL):
    """Build a proper list (or one ending in ``tail``) from a Python iterable."""
    result = tail
    for item in reversed(list(items)):
        result = Cons(item, result)
    return result


def list_values(value):
    """Python list of the elements of a proper list. Raises ValueError otherwise."""
    items = []
    while isinstance(value, Cons):
        items.append(value.car)
        value = value.cdr
    if value is not NIL:
        raise ValueError("improper list")
    return items


def _escape_string(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def print_value(value) -> str:
    """Readable rendering of a value.

    Total and side-effect free: thunks print as #<thunk> without being
    forced, so printing can never diverge or advance a memo cell.
    """
    if value is NIL:
        return "NIL"
    if value is T:
        return "T"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return '"' + _escape_string(value) + '"'
    if isinstance(value, Symbol):
        return value.name
    if isinstance(value, Keyword):
        return ":" + value.name
    if isinstance(value, Thunk):
        return "#<thunk>"
    if isinstance(value, Cons):
        parts = []
        cur = value
        while isinstance(cur, Cons):
            parts.append(print_value(cur.car))
            cur = cur.cdr
        if cur is NIL:
            return "(" + " ".join(parts) + ")"
        return "(" + " ".join(parts) + " . " + print_value(cur) + ")"
    if isinstance(value, (FunctionObject, BuiltinFunction)):
        if value.name is not None:
            return f"#<function {value.name.name}>"
        return "#<lambda>"
    raise TypeError(f"not a lisp value: {value!r}")
