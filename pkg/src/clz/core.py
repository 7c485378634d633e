"""Evaluator core: environments, special forms, application, binding.

An Interpreter owns a global environment, the lazy-function registry, the
effect/thunk counters, and the step and depth budgets. Laziness shows up
here in exactly two places: symbol reads force lazy binding slots, and
bind_lambda_list has a lazy mode that creates those slots.
"""

from __future__ import annotations

import sys

from . import builtins as _builtins
from .errors import EvalError, LispError, StepLimitExceeded
from .lambdalist import LambdaList, parse_lambda_list
from .lazy import (
    eval_deflazy,
    eval_delay,
    eval_lazify,
    eval_lazy_call,
    force,
)
from .prelude import PRELUDE_SOURCE
from .reader import Form, form_to_value, read_source
from .values import (
    NIL,
    T,
    BuiltinFunction,
    FunctionObject,
    Keyword,
    Symbol,
    Thunk,
    cons_list,
    is_truthy,
    print_value,
)

# Constructing an interpreter raises the host recursion ceiling up to this
# many frames; the CLI runs evaluation on a big-stack thread and goes
# higher. Past either ceiling, RecursionError surfaces as EvalError
# recursion-limit at the top-level boundary.
_HOST_RECURSION_CAP = 12_000

_MISSING = object()


class Environment:
    """Chain of lexical frames mapping symbols to binding slots.

    A slot is either the value itself (plain) or a LazyBinding whose cell
    is forced every time the symbol is read.
    """

    __slots__ = ("vars", "parent")

    def __init__(self, parent: "Environment | None" = None):
        self.vars: dict = {}
        self.parent = parent

    def define(self, symbol: Symbol, value) -> None:
        self.vars[symbol] = value

    def define_lazy(self, symbol: Symbol, cell) -> None:
        self.vars[symbol] = LazyBinding(cell)


class LazyBinding:
    """Marks an environment slot whose cell is forced on every read."""

    __slots__ = ("cell",)

    def __init__(self, cell):
        self.cell = cell


class Interpreter:
    """One evaluation universe: bindings, registry, counters, budgets.

    Instances are independent and single-threaded; never share one across
    threads. ``memoize`` selects call-by-need thunks instead of the
    default call-by-name. ``step_limit`` bounds evaluator steps plus loop
    iterations per top-level form; ``recursion_limit`` bounds nested
    list-form evaluations.
    """

    def __init__(self, memoize: bool = False, step_limit: int = 10_000_000,
                 recursion_limit: int = 10_000, prelude: bool = True,
                 stdout=None):
        if step_limit <= 0:
            raise ValueError("step_limit must be positive")
        if recursion_limit <= 0:
            raise ValueError("recursion_limit must be positive")
        self.memoize = memoize
        self.step_limit = step_limit
        self.recursion_limit = recursion_limit
        self.stdout = stdout if stdout is not None else sys.stdout
        self.global_env = Environment()
        self.lazy_registry: dict = {}
        self.tick_count = 0
        self.thunk_allocations = 0
        self._steps = 0
        self._depth = 0
        wanted = min(recursion_limit * 8 + 2000, _HOST_RECURSION_CAP)
        if sys.getrecursionlimit() < wanted:
            sys.setrecursionlimit(wanted)
        _builtins.install(self)
        if prelude:
            self.load_prelude()

    # ---------------------------------------------------------------- API

    def run(self, text: str):
        """Evaluate every form in ``text``; return the last value."""
        result = NIL
        for form in read_source(text):
            result = self.eval_top(form)
        return result

    def run_file(self, path: str):
        with open(path, "r", encoding="utf-8") as fh:
            return self.run(fh.read())

    def eval_top(self, form: Form):
        """Evaluate one top-level form with fresh step/depth budgets."""
        self._steps = 0
        self._depth = 0
        try:
            return self.evaluate(form, self.global_env)
        except RecursionError:
            raise EvalError(
                "host recursion limit hit (deep nesting or forcing); "
                "lower the program's depth or raise the recursion limit "
                "via the command line",
                form.line, form.col, kind="recursion-limit") from None

    def load_prelude(self) -> None:
        self.run(PRELUDE_SOURCE)

    # ---------------------------------------------------------- evaluator

    def evaluate(self, form: Form, env: Environment):
        self._steps += 1
        if self._steps > self.step_limit:
            raise StepLimitExceeded(
                f"step limit of {self.step_limit} exceeded",
                form.line, form.col)
        datum = form.datum
        if type(datum) is Symbol:
            return self.lookup(datum, env, form)
        if not isinstance(datum, list):
            return datum  # integers, strings, keywords, t, nil
        self._depth += 1
        try:
            if self._depth > self.recursion_limit:
                raise EvalError(
                    f"recursion depth exceeded the limit of {self.recursion_limit}",
                    form.line, form.col, kind="recursion-limit")
            head = datum[0].datum
            if type(head) is Symbol:
                handler = _SPECIAL_FORMS.get(head)
                if handler is not None:
                    return handler(self, form, env)
            fn = self.evaluate(datum[0], env)
            args = [self.evaluate(arg, env) for arg in datum[1:]]
            return self.apply_strict(fn, args, form)
        except LispError as err:
            if err.line is None:
                err.line, err.col = form.line, form.col
            raise
        finally:
            self._depth -= 1

    def lookup(self, symbol: Symbol, env: Environment, form: Form | None = None):
        frame = env
        while frame is not None:
            slot = frame.vars.get(symbol, _MISSING)
            if slot is not _MISSING:
                if type(slot) is LazyBinding:
                    return force(self, slot.cell)
                return slot
            frame = frame.parent
        line = form.line if form is not None else None
        col = form.col if form is not None else None
        raise EvalError(f"unbound symbol {symbol.name}", line, col,
                        kind="unbound-symbol")

    def eval_body(self, body: list, env: Environment):
        result = NIL
        for form in body:
            result = self.evaluate(form, env)
        return result

    # -------------------------------------------------------- application

    def apply_strict(self, fn, args: list, form: Form | None = None):
        """Apply a function to already-evaluated argument values."""
        line = form.line if form is not None else None
        col = form.col if form is not None else None
        if isinstance(fn, (FunctionObject, BuiltinFunction)) and fn.lazy:
            raise EvalError(
                f"{print_value(fn)} has the lazy calling convention; "
                "call it with lazy-call",
                line, col, kind="lazy-through-strict")
        if isinstance(fn, BuiltinFunction):
            self._check_builtin_arity(fn, len(args), line, col)
            return fn.fn(self, args)
        if isinstance(fn, FunctionObject):
            frame = self.bind_lambda_list(fn.lambda_list, args, lazy=False,
                                          parent=fn.closure, fn=fn)
            return self.eval_body(fn.body, frame)
        raise EvalError(f"{print_value(fn)} is not a function", line, col,
                        kind="not-a-function")

    def apply(self, fn, args: list):
        """Apply a lazy-mode function to lazy-call's values and thunks."""
        if isinstance(fn, BuiltinFunction):
            forced = [force(self, a) for a in args]
            self._check_builtin_arity(fn, len(forced), None, None)
            return fn.fn(self, forced)
        frame = self.bind_lambda_list(fn.lambda_list, args, lazy=True,
                                      parent=fn.closure, fn=fn)
        return self.eval_body(fn.body, frame)

    def _check_builtin_arity(self, fn: BuiltinFunction, n: int, line, col):
        if n < fn.min_args or (fn.max_args is not None and n > fn.max_args):
            if fn.max_args is None:
                shape = f"at least {fn.min_args}"
            elif fn.min_args == fn.max_args:
                shape = str(fn.min_args)
            else:
                shape = f"{fn.min_args} to {fn.max_args}"
            raise EvalError(
                f"{fn.name.name} takes {shape} argument(s), got {n}",
                line, col, kind="arity-mismatch")

    # ------------------------------------------------------------ binding

    def bind_lambda_list(self, ll: LambdaList, args: list, lazy: bool,
                         parent: Environment, fn=None) -> Environment:
        """Build the call frame for ``args`` against ``ll``.

        Strict mode: every slot plain; missing defaults evaluated eagerly,
        left to right, with earlier parameters visible. Lazy mode:
        parameter slots are lazy (values may be raw thunks); a missing
        optional/keyword parameter gets a thunk over its default
        expression closed over the frame built so far; supplied-p slots
        are plain t/nil; the rest slot is a plain list of raw arguments.
        """
        frame = Environment(parent)
        label = fn.name.name if fn is not None and fn.name is not None else "anonymous function"
        n = len(args)
        nreq = len(ll.required)
        if n < nreq:
            raise EvalError(
                f"{label} expected at least {nreq} argument(s), got {n}",
                None, None, kind="arity-mismatch")
        i = 0
        for name in ll.required:
            self._bind_param(frame, name, args[i], lazy)
            i += 1
        for opt in ll.optional:
            if i < n:
                self._bind_param(frame, opt.name, args[i], lazy)
                i += 1
                if opt.supplied is not None:
                    frame.define(opt.supplied, T)
            else:
                self._bind_default(frame, opt.name, opt.default, lazy)
                if opt.supplied is not None:
                    frame.define(opt.supplied, NIL)
        tail = args[i:]
        if ll.rest is not None:
            frame.define(ll.rest, cons_list(tail))
        if ll.keys:
            pairs = self._keyword_pairs(tail, ll, label)
            for key in ll.keys:
                if key.keyword in pairs:
                    self._bind_param(frame, key.name, pairs[key.keyword], lazy)
                    if key.supplied is not None:
                        frame.define(key.supplied, T)
                else:
                    self._bind_default(frame, key.name, key.default, lazy)
                    if key.supplied is not None:
                        frame.define(key.supplied, NIL)
        elif tail and ll.rest is None:
            raise EvalError(
                f"{label} expected at most {len(ll.required) + len(ll.optional)} "
                f"argument(s), got {n}",
                None, None, kind="arity-mismatch")
        return frame

    def _keyword_pairs(self, tail: list, ll: LambdaList, label: str) -> dict:
        if len(tail) % 2 != 0:
            raise EvalError(
                f"{label} received an odd number of keyword arguments",
                None, None, kind="odd-keyword-arguments")
        known = {key.keyword for key in ll.keys}
        pairs: dict = {}
        for marker, value in zip(tail[0::2], tail[1::2]):
            if not isinstance(marker, Keyword):
                raise EvalError(
                    f"{label} expected a keyword marker, got {print_value(marker)}",
                    None, None, kind="type-error")
            if marker not in known:
                raise EvalError(
                    f"{label} does not accept the keyword :{marker.name}",
                    None, None, kind="unknown-keyword-argument")
            if marker not in pairs:  # first occurrence wins
                pairs[marker] = value
        return pairs

    def _bind_param(self, frame: Environment, name: Symbol, value, lazy: bool):
        if lazy:
            frame.define_lazy(name, value)
        else:
            frame.define(name, value)

    def _bind_default(self, frame: Environment, name: Symbol,
                      default: Form | None, lazy: bool):
        if default is None:
            if lazy:
                frame.define_lazy(name, NIL)
            else:
                frame.define(name, NIL)
        elif lazy:
            self.thunk_allocations += 1
            frame.define_lazy(name, Thunk(default, frame, self.memoize))
        else:
            frame.define(name, self.evaluate(default, frame))


# ------------------------------------------------------------ special forms

def _malformed(message: str, form: Form) -> EvalError:
    return EvalError(message, form.line, form.col, kind="malformed-special-form")


def _sf_quote(interp, form, env):
    items = form.datum
    if len(items) != 2:
        raise _malformed("quote takes exactly one form", form)
    return form_to_value(items[1])


def _sf_if(interp, form, env):
    items = form.datum
    if len(items) not in (3, 4):
        raise _malformed("if takes a condition, a then-form, and an optional else-form", form)
    if is_truthy(interp.evaluate(items[1], env)):
        return interp.evaluate(items[2], env)
    if len(items) == 4:
        return interp.evaluate(items[3], env)
    return NIL


def _sf_progn(interp, form, env):
    return interp.eval_body(form.datum[1:], env)


def _sf_let(interp, form, env):
    items = form.datum
    if len(items) < 2:
        raise _malformed("let needs a binding list", form)
    bindings_form = items[1]
    if bindings_form.datum is NIL:
        bindings = []
    elif isinstance(bindings_form.datum, list):
        bindings = bindings_form.datum
    else:
        raise _malformed("let bindings must be a list", bindings_form)
    frame = Environment(env)
    # parallel let: initializers see the outer environment only
    for binding in bindings:
        d = binding.datum
        if isinstance(d, Symbol):
            frame.define(d, NIL)
            continue
        if isinstance(d, list) and 1 <= len(d) <= 2 and isinstance(d[0].datum, Symbol):
            value = interp.evaluate(d[1], env) if len(d) == 2 else NIL
            frame.define(d[0].datum, value)
            continue
        raise _malformed(f"malformed let binding {binding!r}", binding)
    return interp.eval_body(items[2:], frame)


def _sf_lambda(interp, form, env):
    items = form.datum
    if len(items) < 2:
        raise _malformed("lambda needs a lambda list", form)
    return FunctionObject(None, parse_lambda_list(items[1]), items[2:], env,
                          lazy=False)


def _sf_function(interp, form, env):
    items = form.datum
    if len(items) != 2:
        raise _malformed("function takes exactly one name or lambda form", form)
    target = items[1]
    d = target.datum
    if isinstance(d, Symbol):
        value = interp.lookup(d, env, target)
        if isinstance(value, (FunctionObject, BuiltinFunction)):
            return value
        raise EvalError(f"{d.name} does not name a function",
                        target.line, target.col, kind="not-a-function")
    if isinstance(d, list) and d and d[0].datum is _LAMBDA:
        return _sf_lambda(interp, target, env)
    raise _malformed("function expects a symbol or a lambda form", target)


def _sf_defun(interp, form, env):
    items = form.datum
    if len(items) < 3:
        raise _malformed("defun needs a name, a lambda list, and a body", form)
    name_form = items[1]
    if not isinstance(name_form.datum, Symbol):
        raise _malformed("defun name must be a symbol", name_form)
    name = name_form.datum
    fn = FunctionObject(name, parse_lambda_list(items[2]), items[3:], env,
                        lazy=False)
    interp.global_env.define(name, fn)
    # a plain strict redefinition razes any lazy twin the name had
    interp.lazy_registry.pop(name, None)
    return name


def _sf_defparameter(interp, form, env):
    items = form.datum
    if len(items) != 3:
        raise _malformed("defparameter takes a name and one value form", form)
    name_form = items[1]
    if not isinstance(name_form.datum, Symbol):
        raise _malformed("defparameter name must be a symbol", name_form)
    value = interp.evaluate(items[2], env)
    interp.global_env.define(name_form.datum, value)
    return name_form.datum


def _sf_ecase(interp, form, env):
    items = form.datum
    if len(items) < 2:
        raise _malformed("ecase needs a key form", form)
    key = interp.evaluate(items[1], env)
    for clause in items[2:]:
        d = clause.datum
        if not isinstance(d, list) or not d:
            raise _malformed(f"malformed ecase clause {clause!r}", clause)
        clause_key = d[0].datum
        if not (isinstance(clause_key, Symbol) or clause_key is T or clause_key is NIL):
            raise _malformed("ecase clause keys must be unevaluated symbols", d[0])
        if clause_key is key:
            return interp.eval_body(d[1:], env)
    raise EvalError(f"{print_value(key)} matched no ecase clause",
                    form.line, form.col, kind="ecase-no-match")


def _sf_loop(interp, form, env):
    items = form.datum
    if len(items) != 1:
        raise _malformed("only the empty (loop) form is supported", form)
    while True:
        interp._steps += 1
        if interp._steps > interp.step_limit:
            raise StepLimitExceeded(
                f"step limit of {interp.step_limit} exceeded",
                form.line, form.col)


_LAMBDA = Symbol.intern("LAMBDA")

_SPECIAL_FORMS = {
    Symbol.intern("QUOTE"): _sf_quote,
    Symbol.intern("IF"): _sf_if,
    Symbol.intern("PROGN"): _sf_progn,
    Symbol.intern("LET"): _sf_let,
    Symbol.intern("LAMBDA"): _sf_lambda,
    Symbol.intern("FUNCTION"): _sf_function,
    Symbol.intern("DEFUN"): _sf_defun,
    Symbol.intern("DEFPARAMETER"): _sf_defparameter,
    Symbol.intern("ECASE"): _sf_ecase,
    Symbol.intern("LOOP"): _sf_loop,
    Symbol.intern("DEFLAZY"): eval_deflazy,
    Symbol.intern("LAZY-CALL"): eval_lazy_call,
    Symbol.intern("LAZY"): eval_lazify,
    Symbol.intern("DELAY"): eval_delay,
}
