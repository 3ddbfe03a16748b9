"""Parsing and whitelist checking for MiniLang programs.

Source text is parsed with the host grammar, then every node is checked
against an explicit whitelist. Anything outside the whitelist is rejected
before execution, so the interpreter only ever sees constructs it fully
controls; isolation follows from there being no I/O construct at all.
"""

import ast
from dataclasses import dataclass

from ..errors import CodequizError

LIST_METHODS = frozenset(
    ["append", "pop", "remove", "insert", "index", "count", "sort", "reverse", "extend"]
)
STR_METHODS = frozenset(
    ["upper", "lower", "split", "join", "replace", "strip", "find"]
)
METHOD_NAMES = LIST_METHODS | STR_METHODS

BUILTIN_NAMES = frozenset(
    [
        "print", "len", "range", "int", "float", "str", "bool", "list",
        "abs", "min", "max", "sum", "sorted", "enumerate",
    ]
)


class SandboxError(CodequizError):
    """Base class for parse failures."""


class InvalidSyntax(SandboxError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


class UnsupportedConstruct(SandboxError):
    def __init__(self, line: int, construct: str):
        super().__init__(f"line {line}: unsupported construct: {construct}")
        self.line = line
        self.construct = construct


@dataclass(frozen=True)
class Program:
    source: str
    tree: ast.Module


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.FloorDiv, ast.Mod, ast.Pow)
_ALLOWED_UNARY = (ast.USub, ast.UAdd, ast.Not)
_ALLOWED_CMPOPS = (ast.Lt, ast.LtE, ast.Gt, ast.GtE, ast.Eq, ast.NotEq, ast.In, ast.NotIn)

_FRIENDLY = {
    ast.Import: "import",
    ast.ImportFrom: "import",
    ast.ClassDef: "class",
    ast.AsyncFunctionDef: "async function",
    ast.AsyncFor: "async for",
    ast.AsyncWith: "with",
    ast.With: "with",
    ast.Try: "try/except",
    ast.Raise: "raise",
    ast.Assert: "assert",
    ast.Delete: "del",
    ast.Global: "global",
    ast.Nonlocal: "nonlocal",
    ast.AnnAssign: "annotated assignment",
    ast.Match: "match",
    ast.Dict: "dict literal",
    ast.Set: "set literal",
    ast.ListComp: "comprehension",
    ast.SetComp: "comprehension",
    ast.DictComp: "comprehension",
    ast.GeneratorExp: "comprehension",
    ast.Lambda: "lambda",
    ast.IfExp: "conditional expression",
    ast.JoinedStr: "f-string",
    ast.FormattedValue: "f-string",
    ast.Await: "await",
    ast.Yield: "yield",
    ast.YieldFrom: "yield",
    ast.NamedExpr: "walrus assignment",
    ast.Starred: "star expression",
}

_FRIENDLY_OPS = {
    ast.BitOr: "bitwise operator",
    ast.BitAnd: "bitwise operator",
    ast.BitXor: "bitwise operator",
    ast.LShift: "bitwise operator",
    ast.RShift: "bitwise operator",
    ast.MatMult: "@ operator",
    ast.Invert: "~ operator",
    ast.Is: "is comparison",
    ast.IsNot: "is comparison",
}

# keyword arguments are only meaningful at these call sites
_KEYWORD_RULES = {
    ("name", "print"): {"sep", "end"},
    ("name", "sorted"): {"reverse"},
    ("method", "sort"): {"reverse"},
}


def _line(node: ast.AST) -> int:
    return getattr(node, "lineno", 0)


class _Checker:
    """Walks the tree rejecting everything outside the MiniLang subset."""

    def check_module(self, tree: ast.Module) -> None:
        for stmt in tree.body:
            self._stmt(stmt, in_loop=False, in_func=False)

    def _reject(self, node: ast.AST, construct: str | None = None):
        if construct is None:
            construct = _FRIENDLY.get(type(node), type(node).__name__)
        raise UnsupportedConstruct(_line(node), construct)

    # --- statements --------------------------------------------------

    def _stmt(self, node: ast.stmt, in_loop: bool, in_func: bool) -> None:
        if isinstance(node, ast.Expr):
            self._expr(node.value)
        elif isinstance(node, ast.Assign):
            if len(node.targets) != 1:
                self._reject(node, "chained assignment")
            self._target(node.targets[0])
            self._expr(node.value)
        elif isinstance(node, ast.AugAssign):
            if not isinstance(node.op, _ALLOWED_BINOPS):
                self._reject(node, _FRIENDLY_OPS.get(type(node.op), "augmented operator"))
            if isinstance(node.target, ast.Name):
                pass
            elif isinstance(node.target, ast.Subscript):
                self._subscript_target(node.target)
            else:
                self._reject(node, "augmented assignment target")
            self._expr(node.value)
        elif isinstance(node, ast.If):
            self._expr(node.test)
            self._block(node.body, in_loop, in_func)
            self._block(node.orelse, in_loop, in_func)
        elif isinstance(node, ast.While):
            if node.orelse:
                self._reject(node, "loop else")
            self._expr(node.test)
            self._block(node.body, True, in_func)
        elif isinstance(node, ast.For):
            if node.orelse:
                self._reject(node, "loop else")
            self._for_target(node.target)
            self._expr(node.iter)
            self._block(node.body, True, in_func)
        elif isinstance(node, ast.Break):
            if not in_loop:
                raise InvalidSyntax(_line(node), "'break' outside loop")
        elif isinstance(node, ast.Continue):
            if not in_loop:
                raise InvalidSyntax(_line(node), "'continue' not properly in loop")
        elif isinstance(node, ast.FunctionDef):
            self._funcdef(node, in_func)
        elif isinstance(node, ast.Return):
            if not in_func:
                raise InvalidSyntax(_line(node), "'return' outside function")
            if node.value is not None:
                self._expr(node.value)
        elif isinstance(node, ast.Pass):
            pass
        else:
            self._reject(node)

    def _block(self, stmts: list[ast.stmt], in_loop: bool, in_func: bool) -> None:
        for stmt in stmts:
            self._stmt(stmt, in_loop, in_func)

    def _funcdef(self, node: ast.FunctionDef, in_func: bool) -> None:
        if in_func:
            self._reject(node, "nested function")
        if node.decorator_list:
            self._reject(node, "decorator")
        args = node.args
        if args.posonlyargs or args.kwonlyargs:
            self._reject(node, "special parameter list")
        if args.vararg or args.kwarg:
            self._reject(node, "star parameter")
        if args.defaults or args.kw_defaults:
            self._reject(node, "parameter default")
        if node.returns or any(a.annotation for a in args.args):
            self._reject(node, "annotation")
        self._block(node.body, in_loop=False, in_func=True)

    def _target(self, node: ast.expr) -> None:
        if isinstance(node, ast.Name):
            return
        if isinstance(node, ast.Subscript):
            self._subscript_target(node)
            return
        if isinstance(node, ast.Tuple):
            for elt in node.elts:
                if not isinstance(elt, ast.Name):
                    self._reject(elt, "nested unpacking")
            return
        if isinstance(node, ast.Attribute):
            self._reject(node, "attribute assignment")
        if isinstance(node, (ast.List, ast.Starred)):
            self._reject(node, "unpacking target")
        self._reject(node, "assignment target")

    def _subscript_target(self, node: ast.Subscript) -> None:
        if isinstance(node.slice, ast.Slice):
            self._reject(node, "slice assignment")
        self._expr(node.value)
        self._expr(node.slice)

    def _for_target(self, node: ast.expr) -> None:
        if isinstance(node, ast.Name):
            return
        if isinstance(node, ast.Tuple):
            for elt in node.elts:
                if not isinstance(elt, ast.Name):
                    self._reject(elt, "nested unpacking")
            return
        self._reject(node, "loop target")

    # --- expressions -------------------------------------------------

    def _expr(self, node: ast.expr) -> None:
        if isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float, str, bool, type(None))):
                kind = type(node.value).__name__
                self._reject(node, f"{kind} literal")
        elif isinstance(node, ast.Name):
            pass
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, _ALLOWED_UNARY):
                self._reject(node, _FRIENDLY_OPS.get(type(node.op), "unary operator"))
            self._expr(node.operand)
        elif isinstance(node, ast.BinOp):
            if not isinstance(node.op, _ALLOWED_BINOPS):
                self._reject(node, _FRIENDLY_OPS.get(type(node.op), "binary operator"))
            self._expr(node.left)
            self._expr(node.right)
        elif isinstance(node, ast.BoolOp):
            for value in node.values:
                self._expr(value)
        elif isinstance(node, ast.Compare):
            for op in node.ops:
                if not isinstance(op, _ALLOWED_CMPOPS):
                    self._reject(node, _FRIENDLY_OPS.get(type(op), "comparison"))
            self._expr(node.left)
            for comp in node.comparators:
                self._expr(comp)
        elif isinstance(node, ast.Call):
            self._call(node)
        elif isinstance(node, ast.Attribute):
            # attributes are only reachable as the callee of a method call
            self._reject(node, "attribute access")
        elif isinstance(node, ast.Subscript):
            self._expr(node.value)
            self._expr(node.slice)
        elif isinstance(node, ast.Slice):
            for part in (node.lower, node.upper, node.step):
                if part is not None:
                    self._expr(part)
        elif isinstance(node, (ast.List, ast.Tuple)):
            for elt in node.elts:
                self._expr(elt)
        else:
            self._reject(node)

    def _call(self, node: ast.Call) -> None:
        func = node.func
        if isinstance(func, ast.Name):
            site = ("name", func.id)
        elif isinstance(func, ast.Attribute):
            if func.attr not in METHOD_NAMES:
                self._reject(func, f"method '{func.attr}'")
            self._expr(func.value)
            site = ("method", func.attr)
        else:
            self._reject(func, "computed call")
            return
        for arg in node.args:
            if isinstance(arg, ast.Starred):
                self._reject(arg, "argument unpacking")
            self._expr(arg)
        allowed = _KEYWORD_RULES.get(site, frozenset())
        for kw in node.keywords:
            if kw.arg is None:
                self._reject(node, "argument unpacking")
            if kw.arg not in allowed:
                self._reject(node, "keyword argument")
            self._expr(kw.value)


def parse_program(source: str) -> Program:
    """Parse source into a whitelisted Program.

    Raises InvalidSyntax for malformed source (including break/continue
    and return used outside their contexts) and UnsupportedConstruct for
    syntax outside the MiniLang subset.
    """
    try:
        tree = ast.parse(source, mode="exec")
    except SyntaxError as exc:
        raise InvalidSyntax(exc.lineno or 0, exc.msg or "invalid syntax") from None
    except (RecursionError, MemoryError):
        raise InvalidSyntax(0, "program nesting too deep") from None
    _Checker().check_module(tree)
    return Program(source=source, tree=tree)
