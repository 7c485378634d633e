"""Lazy calling convention: thunks, dual definitions, lazy-call, lazy, delay.

A function defined with ``deflazy`` gets two faces: a strict one installed
as an ordinary global binding, and a lazy twin kept in the interpreter's
registry under the same name. ``lazy-call`` looks the twin up, passes
constants through, and wraps every other argument form as a thunk; the
body then forces a parameter only when it actually reads it.
"""

from __future__ import annotations

from .errors import EvalError
from .lambdalist import parse_lambda_list
from .reader import Form
from .values import BuiltinFunction, FunctionObject, Symbol, Thunk, print_value

_QUOTE = Symbol.intern("QUOTE")
_LAMBDA = Symbol.intern("LAMBDA")
_FUNCTION = Symbol.intern("FUNCTION")


def delay(interp, form: Form, env) -> Thunk:
    """Capture a form and its environment without evaluating anything."""
    interp.thunk_allocations += 1
    return Thunk(form, env, interp.memoize)


def force(interp, value):
    """Resolve thunk chains to a plain value; identity on non-thunks.

    Every memoizing thunk along the chain is backfilled with the final
    value, so a memo cell never holds another thunk.
    """
    pending = None
    while isinstance(value, Thunk):
        t = value
        if t.done:
            value = t.value
            break
        if t.memoizing:
            if pending is None:
                pending = []
            pending.append(t)
        value = interp.evaluate(t.expr, t.env)
    if pending is not None:
        for t in pending:
            t.done = True
            t.value = value
            t.expr = None
            t.env = None
    return value


def constant_p(form: Form) -> bool:
    """Self-evaluating atoms and (quote _) forms pass through unthunked.

    Integers, strings, keywords, t, and nil are constants; symbols and
    every unquoted compound form are not. (t and nil parse directly to
    their singleton values, so the Symbol test covers them.)
    """
    datum = form.datum
    if isinstance(datum, list):
        return len(datum) == 2 and datum[0].datum is _QUOTE
    return not isinstance(datum, Symbol)


def eval_deflazy(interp, form: Form, env):
    """(deflazy name (params...) body...) -> name

    Installs the strict half as a global binding and the lazy half in the
    registry, atomically under the same name.
    """
    items = form.datum
    if len(items) < 3:
        raise EvalError("deflazy needs a name, a lambda list, and a body",
                        form.line, form.col, kind="malformed-special-form")
    name_form = items[1]
    if not isinstance(name_form.datum, Symbol):
        raise EvalError(f"deflazy name must be a symbol, got {name_form!r}",
                        name_form.line, name_form.col,
                        kind="malformed-special-form")
    name = name_form.datum
    ll = parse_lambda_list(items[2])
    body = items[3:]
    strict_fn = FunctionObject(name, ll, body, env, lazy=False)
    lazy_fn = FunctionObject(name, ll, body, env, lazy=True)
    interp.global_env.define(name, strict_fn)
    interp.lazy_registry[name] = lazy_fn
    return name


def resolve_lazy_operator(interp, op, form: Form) -> "FunctionObject | BuiltinFunction":
    """Find the lazy function a lazy-call operator value designates.

    Order: an already-lazy function wins; otherwise a symbol, or a strict
    function's name, is looked up in the registry; otherwise there is no
    lazy version to call.
    """
    if isinstance(op, (FunctionObject, BuiltinFunction)) and op.lazy:
        return op
    if isinstance(op, Symbol):
        entry = interp.lazy_registry.get(op)
        if entry is not None:
            return entry
        raise EvalError(f"{op.name} has no lazy version (define it with deflazy)",
                        form.line, form.col, kind="no-lazy-version")
    if isinstance(op, FunctionObject):
        if op.name is not None:
            entry = interp.lazy_registry.get(op.name)
            if entry is not None:
                return entry
        label = op.name.name if op.name is not None else "anonymous function"
        raise EvalError(f"{label} is strict and has no lazy version",
                        form.line, form.col, kind="no-lazy-version")
    if isinstance(op, BuiltinFunction):
        raise EvalError(f"builtin {op.name} has no lazy version",
                        form.line, form.col, kind="no-lazy-version")
    raise EvalError(f"{print_value(op)} is not a function",
                    form.line, form.col, kind="not-a-function")


def eval_lazy_call(interp, form: Form, env):
    """(lazy-call OP ARGS...) -> apply OP's lazy version to thunked args.

    The operator expression is evaluated strictly. Constant argument
    forms (and keyword markers, which are constants) pass through as
    values; everything else becomes a thunk over the unevaluated form.
    """
    items = form.datum
    if len(items) < 2:
        raise EvalError("lazy-call needs an operator",
                        form.line, form.col, kind="malformed-special-form")
    op = interp.evaluate(items[1], env)
    fn = resolve_lazy_operator(interp, op, items[1])
    args = []
    for arg_form in items[2:]:
        if constant_p(arg_form):
            args.append(interp.evaluate(arg_form, env))
        else:
            args.append(delay(interp, arg_form, env))
    return interp.apply(fn, args)


def eval_lazify(interp, form: Form, env):
    """(lazy EXPR) -> a lazy-mode function value.

    A literal (lambda ...) or #'(lambda ...) becomes a fresh lazy closure
    over the current environment. Any other EXPR is evaluated: a lazy
    function passes through, a named strict function resolves to its
    registry twin (or a lazy re-wrap of the same lambda list and body),
    and a builtin gets a force-all-arguments wrapper.
    """
    items = form.datum
    if len(items) != 2:
        raise EvalError("lazy takes exactly one expression",
                        form.line, form.col, kind="malformed-special-form")
    target = items[1]
    lam = _extract_lambda_form(target)
    if lam is not None:
        return _lazy_closure_from_lambda(interp, lam, env)
    value = interp.evaluate(target, env)
    if isinstance(value, FunctionObject):
        if value.lazy:
            return value
        if value.name is not None:
            entry = interp.lazy_registry.get(value.name)
            if entry is not None:
                return entry
        return FunctionObject(value.name, value.lambda_list, value.body,
                              value.closure, lazy=True)
    if isinstance(value, BuiltinFunction):
        return value if value.lazy else value.lazified()
    raise EvalError(f"{print_value(value)} is not a function",
                    target.line, target.col, kind="not-a-function")


def _extract_lambda_form(form: Form):
    """Return the (lambda ...) form inside EXPR or #'EXPR, else None."""
    d = form.datum
    if not isinstance(d, list) or not d:
        return None
    head = d[0].datum
    if head is _LAMBDA:
        return form
    if head is _FUNCTION and len(d) == 2:
        inner = d[1].datum
        if isinstance(inner, list) and inner and inner[0].datum is _LAMBDA:
            return d[1]
    return None


def _lazy_closure_from_lambda(interp, lam: Form, env) -> FunctionObject:
    items = lam.datum
    if len(items) < 2:
        raise EvalError("lambda needs a lambda list",
                        lam.line, lam.col, kind="malformed-special-form")
    ll = parse_lambda_list(items[1])
    return FunctionObject(None, ll, items[2:], env, lazy=True)


def eval_delay(interp, form: Form, env) -> Thunk:
    """(delay EXPR) -> #<thunk> capturing EXPR and the current environment."""
    items = form.datum
    if len(items) != 2:
        raise EvalError("delay takes exactly one expression",
                        form.line, form.col, kind="malformed-special-form")
    return delay(interp, items[1], env)
