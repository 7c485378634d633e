"""clz — a small Lisp with a lazy calling convention.

Functions defined with ``deflazy`` exist in two modes at once: a strict
version for ordinary calls and a lazy twin invoked through ``lazy-call``,
which passes constants through and wraps every other argument as a thunk
forced only when the body reads the parameter.
"""

from .core import Environment, Interpreter
from .errors import (
    DivergenceError,
    EvalError,
    LispError,
    ReadError,
    StepLimitExceeded,
)
from .values import (
    NIL,
    T,
    BuiltinFunction,
    Cons,
    FunctionObject,
    Keyword,
    Symbol,
    Thunk,
    print_value,
)

__version__ = "0.1.0"

__all__ = [
    "Interpreter",
    "Environment",
    "LispError",
    "ReadError",
    "EvalError",
    "DivergenceError",
    "StepLimitExceeded",
    "NIL",
    "T",
    "Symbol",
    "Keyword",
    "Cons",
    "Thunk",
    "FunctionObject",
    "BuiltinFunction",
    "print_value",
    "__version__",
]
