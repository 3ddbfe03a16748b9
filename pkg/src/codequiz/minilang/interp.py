"""Tree-walking interpreter for MiniLang with resource accounting.

Values are host objects (int/float/str/bool/list/tuple/range/None), so
str()/repr() rendering is byte-identical to the reference teaching
language on the supported subset. Every AST node evaluation counts as
one step; collections and integers are size-capped so execution always
halts within O(max_steps) work.
"""

import ast
import operator
from dataclasses import dataclass, field

from .parse import LIST_METHODS, STR_METHODS, Program

# ints beyond this bit length abort with a value limit; the bound keeps
# decimal rendering within the host's int-to-str conversion limit
MAX_INT_BITS = 14_000

_HOST_ERRORS = (TypeError, ValueError, IndexError, KeyError, ZeroDivisionError)

_BIN_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}

# in-place variants keep list aliasing semantics (lst += x extends lst)
_AUG_OPS = {
    ast.Add: operator.iadd,
    ast.Sub: operator.isub,
    ast.Mult: operator.imul,
    ast.Div: operator.itruediv,
    ast.FloorDiv: operator.ifloordiv,
    ast.Mod: operator.imod,
    ast.Pow: operator.ipow,
}

_CMP_OPS = {
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
}


@dataclass(frozen=True)
class ResourceLimits:
    max_steps: int = 100_000
    max_output_bytes: int = 65_536
    max_collection_len: int = 10_000

    def __post_init__(self):
        for name in ("max_steps", "max_output_bytes", "max_collection_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class ExecutionError:
    kind: str
    message: str
    line: int


@dataclass
class ExecutionResult:
    status: str  # ok | runtime_error | limit_exceeded
    stdout: str
    bindings: dict[str, str]
    error: ExecutionError | None = None

    def as_payload(self) -> dict:
        """Shape handed to the validator as the run_code tool result."""
        error = None
        if self.error is not None:
            error = {
                "kind": self.error.kind,
                "message": self.error.message,
                "line": self.error.line,
            }
        return {
            "status": self.status,
            "stdout": self.stdout,
            "bindings": dict(self.bindings),
            "error": error,
        }


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class _Fail(Exception):
    def __init__(self, kind: str, message: str, line: int):
        self.kind = kind
        self.message = message
        self.line = line


class _LimitHit(Exception):
    def __init__(self, kind: str, message: str, line: int):
        self.kind = kind
        self.message = message
        self.line = line


@dataclass
class _UserFunction:
    name: str
    params: list[str]
    body: list[ast.stmt]
    local_names: frozenset[str]


@dataclass
class _Frame:
    locals: dict = field(default_factory=dict)
    local_names: frozenset[str] = frozenset()


def _typename(value) -> str:
    return type(value).__name__


def _collect_assigned(stmts: list[ast.stmt]) -> set[str]:
    """Names bound anywhere in a function body; used to emulate the
    reference language's local-vs-global resolution."""
    names: set[str] = set()
    for stmt in stmts:
        if isinstance(stmt, ast.Assign):
            target = stmt.targets[0]
            if isinstance(target, ast.Name):
                names.add(target.id)
            elif isinstance(target, ast.Tuple):
                names.update(e.id for e in target.elts if isinstance(e, ast.Name))
        elif isinstance(stmt, ast.AugAssign) and isinstance(stmt.target, ast.Name):
            names.add(stmt.target.id)
        elif isinstance(stmt, ast.For):
            if isinstance(stmt.target, ast.Name):
                names.add(stmt.target.id)
            elif isinstance(stmt.target, ast.Tuple):
                names.update(e.id for e in stmt.target.elts if isinstance(e, ast.Name))
            names.update(_collect_assigned(stmt.body))
        elif isinstance(stmt, ast.While):
            names.update(_collect_assigned(stmt.body))
        elif isinstance(stmt, ast.If):
            names.update(_collect_assigned(stmt.body))
            names.update(_collect_assigned(stmt.orelse))
    return names


_MISSING = object()


class _Interpreter:
    def __init__(self, limits: ResourceLimits):
        self.limits = limits
        self.steps = 0
        self.out_parts: list[str] = []
        self.out_bytes = 0
        self.globals: dict[str, object] = {}
        self.frames: list[_Frame] = []
        self.line = 0

    # --- accounting --------------------------------------------------

    def _tick(self, node: ast.AST) -> None:
        line = getattr(node, "lineno", None)
        if line is not None:
            self.line = line
        self.steps += 1
        if self.steps > self.limits.max_steps:
            raise _LimitHit(
                "StepLimit", f"step limit of {self.limits.max_steps} exceeded", self.line
            )

    def _limit(self, kind: str, message: str):
        raise _LimitHit(kind, message, self.line)

    def _fail(self, kind: str, message: str):
        raise _Fail(kind, message, self.line)

    def _check_int(self, value):
        if (
            isinstance(value, int)
            and not isinstance(value, bool)
            and value.bit_length() > MAX_INT_BITS
        ):
            self._limit("ValueLimit", f"integer exceeds {MAX_INT_BITS} bits")
        return value

    def _host(self, fn, *args, **kwargs):
        """Run a host operation, translating its exceptions to sandbox ones."""
        try:
            return self._check_int(fn(*args, **kwargs))
        except _HOST_ERRORS as exc:
            self._fail(type(exc).__name__, str(exc))
        except OverflowError:
            self._limit("ValueLimit", "numeric overflow")

    def _write(self, text: str) -> None:
        data = text.encode("utf-8")
        budget = self.limits.max_output_bytes - self.out_bytes
        if len(data) > budget:
            self.out_parts.append(data[:budget].decode("utf-8", errors="ignore"))
            self.out_bytes = self.limits.max_output_bytes
            self._limit(
                "OutputLimit",
                f"stdout limit of {self.limits.max_output_bytes} bytes exceeded",
            )
        self.out_parts.append(text)
        self.out_bytes += len(data)

    def _guard_iterable(self, value):
        """Bound any value a builtin will fully consume."""
        if isinstance(value, (list, tuple, str, range)):
            try:
                size = len(value)
            except OverflowError:
                size = self.limits.max_collection_len + 1
            if size > self.limits.max_collection_len:
                self._limit("ValueLimit", "collection length limit exceeded")
            return value
        self._fail("TypeError", f"'{_typename(value)}' object is not iterable")

    def _guard_growth(self, extra: int, current: int = 0) -> None:
        if current + extra > self.limits.max_collection_len:
            self._limit("ValueLimit", "collection length limit exceeded")

    # --- entry point -------------------------------------------------

    def run(self, program: Program) -> ExecutionResult:
        status, error = "ok", None
        try:
            self._exec_block(program.tree.body)
        except _Fail as exc:
            status = "runtime_error"
            error = ExecutionError(exc.kind, exc.message, exc.line)
        except _LimitHit as exc:
            status = "limit_exceeded"
            error = ExecutionError(exc.kind, exc.message, exc.line)
        except RecursionError:
            status = "limit_exceeded"
            error = ExecutionError("RecursionLimit", "expression nesting too deep", self.line)
        bindings = {
            name: repr(value)
            for name, value in self.globals.items()
            if not isinstance(value, _UserFunction)
        }
        return ExecutionResult(
            status=status,
            stdout="".join(self.out_parts),
            bindings=bindings,
            error=error,
        )

    # --- statements --------------------------------------------------

    def _exec_block(self, stmts: list[ast.stmt]) -> None:
        for stmt in stmts:
            self._exec(stmt)

    def _exec(self, node: ast.stmt) -> None:
        self._tick(node)
        if isinstance(node, ast.Expr):
            self._eval(node.value)
        elif isinstance(node, ast.Assign):
            self._assign_to(node.targets[0], self._eval(node.value))
        elif isinstance(node, ast.AugAssign):
            self._exec_augassign(node)
        elif isinstance(node, ast.If):
            if self._truth(self._eval(node.test)):
                self._exec_block(node.body)
            else:
                self._exec_block(node.orelse)
        elif isinstance(node, ast.While):
            self._exec_while(node)
        elif isinstance(node, ast.For):
            self._exec_for(node)
        elif isinstance(node, ast.Break):
            raise _Break()
        elif isinstance(node, ast.Continue):
            raise _Continue()
        elif isinstance(node, ast.FunctionDef):
            params = [a.arg for a in node.args.args]
            local_names = frozenset(set(params) | _collect_assigned(node.body))
            self.globals[node.name] = _UserFunction(node.name, params, node.body, local_names)
        elif isinstance(node, ast.Return):
            value = None if node.value is None else self._eval(node.value)
            raise _Return(value)
        elif isinstance(node, ast.Pass):
            pass
        else:  # unreachable after whitelist checking
            self._fail("TypeError", f"unsupported statement {_typename(node)}")

    def _exec_while(self, node: ast.While) -> None:
        while self._truth(self._eval(node.test)):
            try:
                self._exec_block(node.body)
            except _Break:
                break
            except _Continue:
                continue

    def _exec_for(self, node: ast.For) -> None:
        iterable = self._eval(node.iter)
        if not isinstance(iterable, (list, tuple, str, range)):
            self._fail("TypeError", f"'{_typename(iterable)}' object is not iterable")
        # host iterator preserves live-mutation semantics for lists
        for value in iterable:
            self._tick(node.target)
            self._assign_to(node.target, value)
            try:
                self._exec_block(node.body)
            except _Break:
                break
            except _Continue:
                continue

    def _exec_augassign(self, node: ast.AugAssign) -> None:
        rhs = self._eval(node.value)
        op_type = type(node.op)
        if isinstance(node.target, ast.Name):
            current = self._load_name(node.target.id)
            self._store_name(node.target.id, self._arith(op_type, current, rhs, inplace=True))
        else:
            container = self._eval(node.target.value)
            index = self._eval(node.target.slice)
            current = self._host(operator.getitem, container, index)
            updated = self._arith(op_type, current, rhs, inplace=True)
            self._host(operator.setitem, container, index, updated)

    def _assign_to(self, target: ast.expr, value) -> None:
        if isinstance(target, ast.Name):
            self._store_name(target.id, value)
        elif isinstance(target, ast.Subscript):
            container = self._eval(target.value)
            index = self._eval(target.slice)
            self._host(operator.setitem, container, index, value)
        else:  # tuple of names, per the whitelist
            items = self._unpack(value, len(target.elts))
            for elt, item in zip(target.elts, items):
                self._store_name(elt.id, item)

    def _unpack(self, value, count: int) -> list:
        if not isinstance(value, (list, tuple, str, range)):
            self._fail("TypeError", f"cannot unpack non-iterable {_typename(value)} object")
        items = list(value)
        if len(items) > count:
            self._fail("ValueError", f"too many values to unpack (expected {count})")
        if len(items) < count:
            self._fail(
                "ValueError",
                f"not enough values to unpack (expected {count}, got {len(items)})",
            )
        return items

    # --- name resolution ---------------------------------------------

    def _store_name(self, name: str, value) -> None:
        if self.frames:
            self.frames[-1].locals[name] = value
        else:
            self.globals[name] = value

    def _lookup(self, name: str):
        if self.frames:
            frame = self.frames[-1]
            if name in frame.locals:
                return frame.locals[name]
            if name in frame.local_names:
                self._fail(
                    "UnboundLocalError",
                    f"local variable '{name}' referenced before assignment",
                )
        return self.globals.get(name, _MISSING)

    def _load_name(self, name: str):
        value = self._lookup(name)
        if value is _MISSING:
            self._fail("NameError", f"name '{name}' is not defined")
        return value

    # --- expressions -------------------------------------------------

    def _eval(self, node: ast.expr):
        self._tick(node)
        if isinstance(node, ast.Constant):
            return self._check_int(node.value)
        if isinstance(node, ast.Name):
            return self._load_name(node.id)
        if isinstance(node, ast.UnaryOp):
            operand = self._eval(node.operand)
            if isinstance(node.op, ast.Not):
                return not self._truth(operand)
            fn = operator.neg if isinstance(node.op, ast.USub) else operator.pos
            return self._host(fn, operand)
        if isinstance(node, ast.BinOp):
            left = self._eval(node.left)
            right = self._eval(node.right)
            return self._arith(type(node.op), left, right, inplace=False)
        if isinstance(node, ast.BoolOp):
            is_and = isinstance(node.op, ast.And)
            value = None
            for part in node.values:
                value = self._eval(part)
                if self._truth(value) != is_and:
                    return value
            return value
        if isinstance(node, ast.Compare):
            return self._eval_compare(node)
        if isinstance(node, ast.Call):
            return self._eval_call(node)
        if isinstance(node, ast.Subscript):
            container = self._eval(node.value)
            index = self._eval(node.slice)
            return self._host(operator.getitem, container, index)
        if isinstance(node, ast.Slice):
            parts = [
                None if part is None else self._eval(part)
                for part in (node.lower, node.upper, node.step)
            ]
            return slice(*parts)
        if isinstance(node, ast.List):
            return [self._eval(elt) for elt in node.elts]
        if isinstance(node, ast.Tuple):
            return tuple(self._eval(elt) for elt in node.elts)
        self._fail("TypeError", f"unsupported expression {_typename(node)}")

    def _truth(self, value) -> bool:
        return self._host(bool, value)

    def _eval_compare(self, node: ast.Compare):
        current = self._eval(node.left)
        for op, comparator in zip(node.ops, node.comparators):
            rhs = self._eval(comparator)
            if isinstance(op, (ast.In, ast.NotIn)):
                ok = self._host(operator.contains, rhs, current)
                if isinstance(op, ast.NotIn):
                    ok = not ok
            else:
                ok = self._host(_CMP_OPS[type(op)], current, rhs)
            if not ok:
                return False
            current = rhs
        return True

    def _arith(self, op_type, left, right, inplace: bool):
        self._guard_arith(op_type, left, right)
        table = _AUG_OPS if inplace else _BIN_OPS
        return self._host(table[op_type], left, right)

    def _guard_arith(self, op_type, left, right) -> None:
        """Pre-checks so the host never builds an oversized value."""
        cap = self.limits.max_collection_len
        if op_type is ast.Add:
            if isinstance(left, (list, tuple, str)) and isinstance(right, (list, tuple, str)):
                self._guard_growth(len(left), len(right))
        elif op_type is ast.Mult:
            seq = count = None
            if isinstance(left, (list, tuple, str)) and isinstance(right, int):
                seq, count = left, right
            elif isinstance(right, (list, tuple, str)) and isinstance(left, int):
                seq, count = right, left
            if seq is not None and count > 0 and len(seq) * count > cap:
                self._limit("ValueLimit", "collection length limit exceeded")
        elif op_type is ast.Pow:
            if (
                isinstance(left, int)
                and isinstance(right, int)
                and abs(left) > 1
                and right > 0
                and left.bit_length() * right > MAX_INT_BITS
            ):
                self._limit("ValueLimit", f"integer exceeds {MAX_INT_BITS} bits")

    # --- calls -------------------------------------------------------

    def _eval_call(self, node: ast.Call):
        # the callee resolves before arguments, as in the reference language
        func = node.func
        if isinstance(func, ast.Attribute):
            receiver = self._eval(func.value)
            args = [self._eval(a) for a in node.args]
            kwargs = {kw.arg: self._eval(kw.value) for kw in node.keywords}
            return self._call_method(receiver, func.attr, args, kwargs)
        name = func.id
        value = self._lookup(name)
        builtin = None
        if value is _MISSING:
            builtin = getattr(self, f"_builtin_{name}", None)
            if builtin is None:
                self._fail("NameError", f"name '{name}' is not defined")
        args = [self._eval(a) for a in node.args]
        kwargs = {kw.arg: self._eval(kw.value) for kw in node.keywords}
        if builtin is not None:
            return builtin(args, kwargs)
        if isinstance(value, _UserFunction):
            if kwargs:
                key = next(iter(kwargs))
                self._fail(
                    "TypeError", f"{name}() got an unexpected keyword argument '{key}'"
                )
            return self._call_function(value, args)
        self._fail("TypeError", f"'{_typename(value)}' object is not callable")

    def _call_function(self, fn: _UserFunction, args: list):
        if len(self.frames) >= 32:
            self._limit("RecursionLimit", "call depth limit of 32 exceeded")
        if len(args) != len(fn.params):
            noun = "argument" if len(fn.params) == 1 else "arguments"
            verb = "was" if len(args) == 1 else "were"
            self._fail(
                "TypeError",
                f"{fn.name}() takes {len(fn.params)} positional {noun}"
                f" but {len(args)} {verb} given",
            )
        frame = _Frame(locals=dict(zip(fn.params, args)), local_names=fn.local_names)
        self.frames.append(frame)
        try:
            self._exec_block(fn.body)
            return None
        except _Return as ret:
            return ret.value
        finally:
            self.frames.pop()

    def _call_method(self, receiver, name: str, args: list, kwargs: dict):
        if isinstance(receiver, list) and name in LIST_METHODS:
            if name in ("append", "insert"):
                self._guard_growth(1, len(receiver))
            elif name == "extend" and args:
                extension = self._guard_iterable(args[0])
                self._guard_growth(len(extension), len(receiver))
            if name == "sort":
                return self._host(
                    receiver.sort, *args, reverse=bool(kwargs.get("reverse", False))
                )
            return self._host(getattr(receiver, name), *args)
        if isinstance(receiver, str) and name in STR_METHODS:
            if name == "join" and args:
                self._guard_iterable(args[0])
            return self._host(getattr(receiver, name), *args)
        self._fail("TypeError", f"'{_typename(receiver)}' object has no method '{name}'")

    # --- builtins ----------------------------------------------------

    def _builtin_print(self, args, kwargs):
        sep = kwargs.get("sep", " ")
        end = kwargs.get("end", "\n")
        if sep is None:
            sep = " "
        if end is None:
            end = "\n"
        if not isinstance(sep, str):
            self._fail("TypeError", f"sep must be None or a string, not {_typename(sep)}")
        if not isinstance(end, str):
            self._fail("TypeError", f"end must be None or a string, not {_typename(end)}")
        rendered = [self._host(str, a) for a in args]
        self._write(sep.join(rendered) + end)
        return None

    def _builtin_len(self, args, kwargs):
        return self._host(len, *args)

    def _builtin_range(self, args, kwargs):
        return self._host(range, *args)

    def _builtin_int(self, args, kwargs):
        return self._host(int, *args)

    def _builtin_float(self, args, kwargs):
        return self._host(float, *args)

    def _builtin_str(self, args, kwargs):
        return self._host(str, *args)

    def _builtin_bool(self, args, kwargs):
        return self._host(bool, *args)

    def _builtin_abs(self, args, kwargs):
        return self._host(abs, *args)

    def _builtin_list(self, args, kwargs):
        if not args:
            return []
        return self._host(list, self._guard_iterable(args[0]), *args[1:])

    def _builtin_min(self, args, kwargs):
        if len(args) == 1:
            self._guard_iterable(args[0])
        return self._host(min, *args)

    def _builtin_max(self, args, kwargs):
        if len(args) == 1:
            self._guard_iterable(args[0])
        return self._host(max, *args)

    def _builtin_sum(self, args, kwargs):
        if args:
            self._guard_iterable(args[0])
        return self._host(sum, *args)

    def _builtin_sorted(self, args, kwargs):
        if args:
            self._guard_iterable(args[0])
        reverse = bool(kwargs.get("reverse", False))
        return self._host(sorted, *args, reverse=reverse)

    def _builtin_enumerate(self, args, kwargs):
        if not args:
            return self._host(enumerate)  # raises the host arity error
        self._guard_iterable(args[0])
        # materialized so iteration and rendering stay deterministic
        return self._host(lambda: list(enumerate(*args)))


def execute(program: Program, limits: ResourceLimits | None = None) -> ExecutionResult:
    """Run a parsed program under resource limits; never raises for
    program behavior, reporting it in the result instead."""
    return _Interpreter(limits or ResourceLimits()).run(program)
