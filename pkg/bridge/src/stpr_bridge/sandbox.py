"""Extraction and sandboxed compilation of generated constraint functions.

The sandbox admits a small arithmetic subset of Python: one function with
the canonical `is_in_constraints_*(x, y, z)` signature, math-module calls,
and a handful of numeric builtins. No imports beyond `math`, no I/O, no
attribute access outside `math`, no dunder names, no `while` loops.
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ExtractionFailed, SandboxRejected, SignatureMismatch

FUNCTION_NAME_RE = re.compile(r"is_in_constraints_\w+$")

SAFE_BUILTINS = {
    "abs": abs, "min": min, "max": max, "bool": bool, "float": float,
    "int": int, "round": round, "range": range, "len": len, "sum": sum,
    "any": any, "all": all,
}

_ALLOWED_NODES = (
    ast.Module, ast.FunctionDef, ast.arguments, ast.arg, ast.Return,
    ast.Assign, ast.AugAssign, ast.Expr, ast.If, ast.IfExp, ast.For,
    ast.BoolOp, ast.And, ast.Or,
    ast.UnaryOp, ast.USub, ast.UAdd, ast.Not,
    ast.BinOp, ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.Mod,
    ast.FloorDiv,
    ast.Compare, ast.Lt, ast.LtE, ast.Gt, ast.GtE, ast.Eq, ast.NotEq,
    ast.Call, ast.keyword, ast.Name, ast.Load, ast.Store, ast.Constant,
    ast.Tuple, ast.List, ast.Attribute, ast.Import, ast.alias,
)


@dataclass
class GeneratedConstraint:
    source_code: str
    function_name: str
    fn: Callable[[float, float, float], bool] = field(repr=False)
    bbox: Optional[dict] = None  # {"min": [x,y,z], "max": [x,y,z]}
    provenance: Optional[dict] = None


def extract_function(completion: str) -> str:
    """First function block from a model completion (fenced or bare)."""
    fenced = re.search(r"```(?:python)?\s*\n(.*?)```", completion, re.S)
    text = fenced.group(1) if fenced else completion
    lines = text.splitlines()
    for i, line in enumerate(lines):
        if line.startswith("def is_in_constraints_"):
            block = [line]
            for rest in lines[i + 1:]:
                if rest.strip() == "" or rest[:1] in (" ", "\t"):
                    block.append(rest)
                else:
                    break
            return "\n".join(block).rstrip() + "\n"
    raise ExtractionFailed("completion contains no is_in_constraints_* function")


def _check_signature(fn: ast.FunctionDef) -> None:
    if not FUNCTION_NAME_RE.match(fn.name):
        raise SignatureMismatch(f"function name {fn.name!r} does not match "
                                "is_in_constraints_*")
    args = fn.args
    names = [a.arg for a in args.args]
    if (names != ["x", "y", "z"] or args.vararg or args.kwarg
            or args.kwonlyargs or args.defaults or args.posonlyargs):
        raise SignatureMismatch("signature must be exactly (x, y, z)")


def _check_nodes(tree: ast.AST) -> None:
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise SandboxRejected(f"disallowed construct: {type(node).__name__}")
        if isinstance(node, ast.Import):
            if any(a.name != "math" for a in node.names):
                raise SandboxRejected("only `import math` is permitted")
        if isinstance(node, ast.Attribute):
            if not (isinstance(node.value, ast.Name) and node.value.id == "math"):
                raise SandboxRejected("attribute access is limited to the math module")
            if node.attr.startswith("_"):
                raise SandboxRejected("underscored math attributes are not permitted")
        if isinstance(node, ast.Name) and node.id.startswith("__"):
            raise SandboxRejected("dunder names are not permitted")
        if isinstance(node, ast.Call):
            func = node.func
            ok = (isinstance(func, ast.Attribute)
                  or (isinstance(func, ast.Name)
                      and (func.id in SAFE_BUILTINS or func.id == "math")))
            if not ok:
                raise SandboxRejected("calls are limited to math functions and "
                                      "numeric builtins")


def compile_constraint(source: str) -> tuple[str, Callable]:
    """Validate and compile one constraint function in a bare namespace."""
    try:
        tree = ast.parse(source)
    except SyntaxError as exc:
        raise ExtractionFailed(f"extracted block is not valid Python: {exc}") from exc
    defs = [n for n in tree.body if isinstance(n, ast.FunctionDef)]
    if len(defs) != 1 or any(
        not isinstance(n, (ast.FunctionDef, ast.Import)) for n in tree.body
    ):
        raise SignatureMismatch("source must define exactly one function")
    _check_signature(defs[0])
    _check_nodes(tree)
    # math is injected directly; drop the (already vetted) import statements
    # so the empty __builtins__ never needs an __import__ hook
    tree.body = [n for n in tree.body if not isinstance(n, ast.Import)]
    namespace = {"math": math, **SAFE_BUILTINS, "__builtins__": {}}
    exec(compile(tree, "<constraint>", "exec"), namespace)  # noqa: S102 - AST-vetted
    return defs[0].name, namespace[defs[0].name]


def build_constraint(completion: str, bbox: Optional[dict] = None,
                     provenance: Optional[dict] = None) -> GeneratedConstraint:
    source = extract_function(completion)
    name, fn = compile_constraint(source)
    return GeneratedConstraint(source_code=source, function_name=name, fn=fn,
                               bbox=bbox, provenance=provenance)
