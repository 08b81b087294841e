"""Closed-form scalar expressions of the axial coordinate.

The grammar is deliberately small: numbers, ``chi`` (or ``χ``), ``pi``,
the binary operators ``+ - * / ** ^``, unary signs and calls to
``sin cos sinh cosh exp log pow``.  Anything else is rejected at parse
time, so evaluating a scenario file never executes arbitrary code.

Each expression can be evaluated with numpy (vectorised, float64) or with
mpmath at extended precision, which the curvature oracle uses to keep
finite-difference errors well above the rounding floor.
"""

import ast
import operator

import mpmath
import numpy as np

from .errors import ExpressionError

__all__ = ["Expr"]

_FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "log", "pow")
_VARIABLES = ("chi", "χ")
_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def _compile(node):
    """Turn a whitelisted AST node into a closure ``f(x, lib)``."""
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExpressionError(f"unsupported literal {node.value!r}")
        text = repr(node.value)

        def const(x, lib):
            return mpmath.mpf(text) if lib is mpmath else float(text)

        return const
    if isinstance(node, ast.Name):
        if node.id in _VARIABLES:
            return lambda x, lib: x
        if node.id == "pi":
            return lambda x, lib: +mpmath.pi if lib is mpmath else np.pi
        raise ExpressionError(f"unknown name {node.id!r}")
    if isinstance(node, ast.BinOp):
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ExpressionError(f"unsupported operator {type(node.op).__name__}")
        left, right = _compile(node.left), _compile(node.right)
        return lambda x, lib: op(left(x, lib), right(x, lib))
    if isinstance(node, ast.UnaryOp):
        inner = _compile(node.operand)
        if isinstance(node.op, ast.USub):
            return lambda x, lib: -inner(x, lib)
        if isinstance(node.op, ast.UAdd):
            return inner
        raise ExpressionError(f"unsupported unary operator {type(node.op).__name__}")
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            raise ExpressionError("only sin, cos, sinh, cosh, exp, log and pow may be called")
        if node.keywords:
            raise ExpressionError("keyword arguments are not allowed")
        name = node.func.id
        args = [_compile(a) for a in node.args]
        want = 2 if name == "pow" else 1
        if len(args) != want:
            raise ExpressionError(f"{name} takes {want} argument(s)")
        if name == "pow":
            return lambda x, lib: operator.pow(args[0](x, lib), args[1](x, lib))
        arg = args[0]
        return lambda x, lib: getattr(lib, name)(arg(x, lib))
    raise ExpressionError(f"unsupported syntax {type(node).__name__}")


class Expr:
    """A parsed closed-form function of ``chi``.

    Parameters
    ----------
    source : str
        Expression text, e.g. ``"2*cos(chi)/sin(chi)"``.  ``^`` is read as
        exponentiation.

    Examples
    --------
    >>> Expr("chi^2 + 1")(np.array([0.0, 2.0]))
    array([1., 5.])
    """

    __slots__ = ("source", "_fn")

    def __init__(self, source):
        if isinstance(source, Expr):
            source = source.source
        if not isinstance(source, str) or not source.strip():
            raise ExpressionError("expression must be a non-empty string")
        self.source = source.strip()
        try:
            tree = ast.parse(self.source.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {source!r}: {exc.msg}") from None
        self._fn = _compile(tree.body)

    def __call__(self, chi):
        """Evaluate on a float array (numpy backend)."""
        chi = np.asarray(chi, dtype=float)
        with np.errstate(all="ignore"):
            out = self._fn(chi, np)
        return np.broadcast_to(np.asarray(out, dtype=float), chi.shape).copy()

    def mp(self, x):
        """Evaluate at one mpmath number using the active working precision."""
        return mpmath.mpf(self._fn(x, mpmath))

    def __eq__(self, other):
        return isinstance(other, Expr) and other.source == self.source

    def __hash__(self):
        return hash(self.source)

    def __repr__(self):
        return f"Expr({self.source!r})"
