"""Primitive functions installed into every fresh global environment.

Arithmetic is signed 64-bit with overflow checking; car/cdr of nil are
nil; funcall refuses lazy-mode functions so the two calling conventions
never silently cross. tick!/ticks expose the per-interpreter effect
counter, and diverge is the testable stand-in for a non-terminating form.
"""

from __future__ import annotations

from .errors import DivergenceError, EvalError
from .lazy import force
from .values import (
    INT_MAX,
    INT_MIN,
    NIL,
    T,
    BuiltinFunction,
    Cons,
    Symbol,
    cons_list,
    print_value,
)


def _check_int(value, who: str):
    if not isinstance(value, int):
        raise EvalError(f"{who} expects integers, got {print_value(value)}",
                        None, None, kind="type-error")
    return value


def _check_range(value: int, who: str) -> int:
    if not INT_MIN <= value <= INT_MAX:
        raise EvalError(f"{who}: result exceeds the 64-bit signed range",
                        None, None, kind="overflow")
    return value


def _bi_add(interp, args):
    total = 0
    for a in args:
        total = _check_range(total + _check_int(a, "+"), "+")
    return total


def _bi_sub(interp, args):
    first = _check_int(args[0], "-")
    if len(args) == 1:
        return _check_range(-first, "-")
    total = first
    for a in args[1:]:
        total = _check_range(total - _check_int(a, "-"), "-")
    return total


def _bi_mul(interp, args):
    total = 1
    for a in args:
        total = _check_range(total * _check_int(a, "*"), "*")
    return total


def _bi_add1(interp, args):
    return _check_range(_check_int(args[0], "1+") + 1, "1+")


def _bi_num_eq(interp, args):
    first = _check_int(args[0], "=")
    for a in args[1:]:
        if _check_int(a, "=") != first:
            return NIL
    return T


def _bi_num_lt(interp, args):
    prev = _check_int(args[0], "<")
    for a in args[1:]:
        cur = _check_int(a, "<")
        if not prev < cur:
            return NIL
        prev = cur
    return T


def _bi_cons(interp, args):
    return Cons(args[0], args[1])


def _bi_car(interp, args):
    v = args[0]
    if v is NIL:
        return NIL
    if isinstance(v, Cons):
        return v.car
    raise EvalError(f"car expects a cons or nil, got {print_value(v)}",
                    None, None, kind="type-error")


def _bi_cdr(interp, args):
    v = args[0]
    if v is NIL:
        return NIL
    if isinstance(v, Cons):
        return v.cdr
    raise EvalError(f"cdr expects a cons or nil, got {print_value(v)}",
                    None, None, kind="type-error")


def _bi_list(interp, args):
    return cons_list(args)


def _bi_funcall(interp, args):
    fn = args[0]
    if isinstance(fn, Symbol):
        fn = interp.lookup(fn, interp.global_env)
    return interp.apply_strict(fn, list(args[1:]))


def _bi_not(interp, args):
    return T if args[0] is NIL else NIL


def _bi_force(interp, args):
    return force(interp, args[0])


def _bi_diverge(interp, args):
    raise DivergenceError("diverge was evaluated: this path does not terminate")


def _bi_tick(interp, args):
    interp.tick_count += 1
    return interp.tick_count


def _bi_ticks(interp, args):
    return interp.tick_count


def _bi_print(interp, args):
    interp.stdout.write(print_value(args[0]) + "\n")
    return args[0]


_TABLE = [
    ("+", _bi_add, 0, None),
    ("-", _bi_sub, 1, None),
    ("*", _bi_mul, 0, None),
    ("1+", _bi_add1, 1, 1),
    ("=", _bi_num_eq, 1, None),
    ("<", _bi_num_lt, 1, None),
    ("cons", _bi_cons, 2, 2),
    ("car", _bi_car, 1, 1),
    ("cdr", _bi_cdr, 1, 1),
    ("list", _bi_list, 0, None),
    ("funcall", _bi_funcall, 1, None),
    ("not", _bi_not, 1, 1),
    ("null", _bi_not, 1, 1),
    ("force", _bi_force, 1, 1),
    ("diverge", _bi_diverge, 0, 0),
    ("tick!", _bi_tick, 0, 0),
    ("ticks", _bi_ticks, 0, 0),
    ("print", _bi_print, 1, 1),
]


def install(interp) -> None:
    for name, fn, lo, hi in _TABLE:
        symbol = Symbol.intern(name)
        interp.global_env.define(symbol, BuiltinFunction(symbol, fn, lo, hi))
