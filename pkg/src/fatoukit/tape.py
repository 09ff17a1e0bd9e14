"""Flat postfix programs compiled from expression trees.

A tape is the unit the evaluation kernels execute: parallel int64 arrays of
opcodes and immediate arguments plus a complex constant pool.  Integer
powers keep their exponent as an immediate and are evaluated by binary
exponentiation in every backend, so the operation order is identical across
the scalar, numpy and numba paths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as ex

__all__ = ["Tape", "compile_expr", "compile_member",
           "OP_CONST", "OP_Z", "OP_NEG", "OP_ADD", "OP_SUB", "OP_MUL",
           "OP_DIV", "OP_POWI", "OP_POW", "OP_EXP", "OP_SIN", "OP_COS",
           "OP_LOG"]

OP_CONST = 0
OP_Z = 1
OP_NEG = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_POWI = 7
OP_POW = 8
OP_EXP = 9
OP_SIN = 10
OP_COS = 11
OP_LOG = 12

_CALL_OPS = {"exp": OP_EXP, "sin": OP_SIN, "cos": OP_COS, "log": OP_LOG}


@dataclass(frozen=True)
class Tape:
    code: np.ndarray    # int64
    arg: np.ndarray     # int64
    consts: np.ndarray  # complex128
    stack_need: int


def compile_expr(expr: ex.Expr) -> Tape:
    """Compile an n-free expression to a tape."""
    code: list[int] = []
    arg: list[int] = []
    consts: list[complex] = []

    def emit(op: int, a: int = 0):
        code.append(op)
        arg.append(a)

    def push_const(v: complex):
        consts.append(complex(v))
        emit(OP_CONST, len(consts) - 1)

    def go(e: ex.Expr):
        if isinstance(e, ex.Const):
            push_const(e.value)
        elif isinstance(e, ex.Z):
            emit(OP_Z)
        elif isinstance(e, ex.N):
            raise ValueError("cannot compile an unbound index symbol")
        elif isinstance(e, ex.Neg):
            go(e.a)
            emit(OP_NEG)
        elif isinstance(e, (ex.Add, ex.Sub, ex.Mul, ex.Div)):
            go(e.a)
            go(e.b)
            emit({ex.Add: OP_ADD, ex.Sub: OP_SUB,
                  ex.Mul: OP_MUL, ex.Div: OP_DIV}[type(e)])
        elif isinstance(e, ex.Pow):
            k = ex.int_const(e.exponent)
            if k is not None and abs(k) < 2**31:
                go(e.base)
                emit(OP_POWI, k)
            else:
                go(e.base)
                go(e.exponent)
                emit(OP_POW)
        elif isinstance(e, ex.Call):
            go(e.arg)
            emit(_CALL_OPS[e.fn])
        else:
            raise TypeError(f"unknown node {e!r}")

    go(expr)

    depth = 0
    max_depth = 0
    for op in code:
        if op in (OP_CONST, OP_Z):
            depth += 1
        elif op in (OP_ADD, OP_SUB, OP_MUL, OP_DIV, OP_POW):
            depth -= 1
        max_depth = max(max_depth, depth)

    return Tape(np.asarray(code, dtype=np.int64),
                np.asarray(arg, dtype=np.int64),
                np.asarray(consts if consts else [0j], dtype=np.complex128),
                max_depth)


def compile_member(member) -> tuple[Tape, Tape]:
    """(value tape, derivative tape) for a family member."""
    return compile_expr(member.expr), compile_expr(member.derivative)
