"""Shared fixtures and the generator for the strict/lazy agreement corpus."""

from __future__ import annotations

import random

import pytest

from clz import NIL, Cons, Interpreter, T


@pytest.fixture
def interp():
    return Interpreter()


@pytest.fixture
def interp_memo():
    return Interpreter(memoize=True)


def to_py(value):
    """Convert a result to plain Python for asserts (proper lists only)."""
    if value is NIL:
        return []
    if value is T:
        return True
    if isinstance(value, Cons):
        items = []
        while isinstance(value, Cons):
            items.append(to_py(value.car))
            value = value.cdr
        assert value is NIL, "improper list reached an assert helper"
        return items
    return value


# --------------------------------------------------------------- generator
#
# Random pure programs: a three-parameter function body made of integer
# arithmetic and if over (=/<) comparisons, plus three small pure argument
# forms. Every generated program carries its expected value computed here
# in Python, independently of the interpreter under test. Programs whose
# evaluated path could leave comfortable 64-bit headroom are rejected and
# redrawn, so strict and lazy runs stay inside total behavior.

_PARAMS = ("a", "b", "c")
_SAFE_MAGNITUDE = 2 ** 62


class _Overflowy(Exception):
    pass


def _gen_expr(rng: random.Random, depth: int):
    roll = rng.random()
    if depth <= 0 or roll < 0.30:
        if rng.random() < 0.5:
            return rng.randint(-50, 50)
        return ("p", rng.randrange(3))
    if roll < 0.50:
        return ("+", _gen_expr(rng, depth - 1), _gen_expr(rng, depth - 1))
    if roll < 0.65:
        return ("-", _gen_expr(rng, depth - 1), _gen_expr(rng, depth - 1))
    if roll < 0.75:
        return ("*", _gen_expr(rng, depth - 1), _gen_expr(rng, depth - 1))
    if roll < 0.83:
        return ("1+", _gen_expr(rng, depth - 1))
    cmp_op = rng.choice(("=", "<"))
    return ("if", cmp_op,
            _gen_expr(rng, depth - 1), _gen_expr(rng, depth - 1),
            _gen_expr(rng, depth - 1), _gen_expr(rng, depth - 1))


def _expr_src(node) -> str:
    if isinstance(node, int):
        return str(node)
    tag = node[0]
    if tag == "p":
        return _PARAMS[node[1]]
    if tag == "1+":
        return f"(1+ {_expr_src(node[1])})"
    if tag == "if":
        _, cmp_op, l, r, then, alt = node
        return (f"(if ({cmp_op} {_expr_src(l)} {_expr_src(r)}) "
                f"{_expr_src(then)} {_expr_src(alt)})")
    return f"({tag} {_expr_src(node[1])} {_expr_src(node[2])})"


def _expr_eval(node, args):
    """Reference evaluation, guarding every computed intermediate.

    Mirrors if semantics (only the taken branch is computed), so the guard
    covers exactly the work a run of the program performs.
    """
    if isinstance(node, int):
        return node
    tag = node[0]
    if tag == "p":
        return args[node[1]]
    if tag == "1+":
        return _guard(_expr_eval(node[1], args) + 1)
    if tag == "if":
        _, cmp_op, l, r, then, alt = node
        lv = _expr_eval(l, args)
        rv = _expr_eval(r, args)
        taken = (lv == rv) if cmp_op == "=" else (lv < rv)
        return _expr_eval(then if taken else alt, args)
    lv = _expr_eval(node[1], args)
    rv = _expr_eval(node[2], args)
    if tag == "+":
        return _guard(lv + rv)
    if tag == "-":
        return _guard(lv - rv)
    return _guard(lv * rv)


def _guard(value: int) -> int:
    if abs(value) > _SAFE_MAGNITUDE:
        raise _Overflowy
    return value


def _gen_arg(rng: random.Random):
    roll = rng.random()
    if roll < 0.4:
        v = rng.randint(-40, 40)
        return str(v), v
    if roll < 0.7:
        x, y = rng.randint(-20, 20), rng.randint(-20, 20)
        return f"(+ {x} {y})", x + y
    x, y = rng.randint(-12, 12), rng.randint(-12, 12)
    return f"(* {x} {y})", x * y


def generate_program(rng: random.Random):
    """One corpus entry: (body_src, arg_srcs, expected_value)."""
    while True:
        body = _gen_expr(rng, 4)
        arg_pairs = [_gen_arg(rng) for _ in range(3)]
        args = [v for _, v in arg_pairs]
        try:
            expected = _expr_eval(body, args)
        except _Overflowy:
            continue
        return _expr_src(body), [s for s, _ in arg_pairs], expected


def corpus(n: int, seed: int = 20260817):
    rng = random.Random(seed)
    return [generate_program(rng) for _ in range(n)]
