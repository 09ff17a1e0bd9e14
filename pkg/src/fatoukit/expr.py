"""Expression trees for members of holomorphic function families.

An expression is a small immutable AST over the complex variable ``z`` and
the positive-integer index symbol ``n``.  Node kinds: complex constants,
``z``, ``n``, unary negation, the binary operators ``+ - * / ^`` and the
functions ``exp``, ``sin``, ``cos``.  Differentiation of a general power
``b^e`` introduces an internal ``log`` node; such trees never come from the
surface grammar and are never printed back into it.

Powers with non-integer exponents use the principal branch throughout.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

__all__ = [
    "Expr", "Const", "Z", "N", "Neg", "Add", "Sub", "Mul", "Div", "Pow",
    "Call", "PoleError", "NotPolynomial",
    "OK", "ESCAPED", "POLE",
    "const", "neg", "add", "sub", "mul", "div", "powe", "call",
    "evaluate", "evaluate_ex", "differentiate", "bind_n", "subst_z",
    "has_n", "has_z", "to_text", "poly_coeffs", "int_const",
]

# evaluation flags
OK = 0
ESCAPED = 1
POLE = 2

FUNCTIONS = ("exp", "sin", "cos", "log")

# |value| above this is reported as an escaped (overflowed) evaluation
OVERFLOW_THRESHOLD = 1e300


class PoleError(ArithmeticError):
    """Division by zero (or log/negative power of zero) inside a tree."""


class NotPolynomial(ValueError):
    """Raised by poly_coeffs; .reason is NOT_POLYNOMIAL or DEGREE_EXCEEDED."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Z(Expr):
    pass


@dataclass(frozen=True)
class N(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    a: Expr


@dataclass(frozen=True)
class Add(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Sub(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Mul(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Div(Expr):
    a: Expr
    b: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


_ZERO = Const(0j)
_ONE = Const(1 + 0j)


def int_const(e: Expr):
    """Return the Python int if e is an integer constant, else None."""
    if isinstance(e, Const):
        v = e.value
        if v.imag == 0.0 and v.real == int(v.real) and abs(v.real) < 2**53:
            return int(v.real)
    return None


# ---------------------------------------------------------------------------
# smart constructors (fold constants, drop neutral elements)
# ---------------------------------------------------------------------------

def const(v) -> Const:
    return Const(complex(v))


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.a
    return Neg(a)


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if a == _ZERO:
        return b
    if b == _ZERO:
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if b == _ZERO:
        return a
    if a == _ZERO:
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if a == _ZERO or b == _ZERO:
        return _ZERO
    if a == _ONE:
        return b
    if b == _ONE:
        return a
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const) and b.value != 0:
        if isinstance(a, Const):
            return Const(a.value / b.value)
        if b == _ONE:
            return a
    if a == _ZERO and not (isinstance(b, Const) and b.value == 0):
        return _ZERO
    return Div(a, b)


def powe(base: Expr, exponent: Expr) -> Expr:
    if exponent == _ONE:
        return base
    if isinstance(exponent, Const) and exponent.value == 0:
        return _ONE
    k = int_const(exponent)
    if isinstance(base, Const) and k is not None:
        try:
            return Const(_powi_scalar(base.value, k))
        except (PoleError, OverflowError, ZeroDivisionError):
            pass
    return Pow(base, exponent)


def call(fn: str, arg: Expr) -> Expr:
    if fn not in FUNCTIONS:
        raise ValueError(f"unknown function {fn!r}")
    if isinstance(arg, Const):
        try:
            return Const(_FN_SCALAR[fn](arg.value))
        except (OverflowError, ValueError):
            pass
    return Call(fn, arg)


_FN_SCALAR = {"exp": cmath.exp, "sin": cmath.sin, "cos": cmath.cos,
              "log": cmath.log}


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _powi_scalar(b: complex, k: int) -> complex:
    """Integer power by binary exponentiation (same op order as the kernels)."""
    if k == 0:
        return 1 + 0j
    kk = -k if k < 0 else k
    result = 1 + 0j
    basep = b
    while kk:
        if kk & 1:
            result = result * basep
        kk >>= 1
        if kk:
            basep = basep * basep
    if k < 0:
        if result == 0:
            raise PoleError("zero raised to a negative power")
        result = 1 / result
    return result


_INF = complex(float("inf"), float("inf"))


def evaluate_ex(expr: Expr, z: complex, n: int | None = None):
    """Evaluate at z; returns (value, flag) with flag in {OK, ESCAPED, POLE}.

    Poles dominate escapes.  Overflow saturates to an infinite value.
    """
    flag = [OK]

    def mark(f):
        if f == POLE or flag[0] != POLE:
            flag[0] = max(flag[0], f)

    def ev(e: Expr) -> complex:
        if isinstance(e, Const):
            return e.value
        if isinstance(e, Z):
            return complex(z)
        if isinstance(e, N):
            if n is None:
                raise ValueError("unbound index symbol n")
            return complex(n)
        if isinstance(e, Neg):
            return -ev(e.a)
        if isinstance(e, Add):
            return ev(e.a) + ev(e.b)
        if isinstance(e, Sub):
            return ev(e.a) - ev(e.b)
        if isinstance(e, Mul):
            return ev(e.a) * ev(e.b)
        if isinstance(e, Div):
            num, den = ev(e.a), ev(e.b)
            if den == 0:
                mark(POLE)
                return _INF
            return num / den
        if isinstance(e, Pow):
            b = ev(e.base)
            k = int_const(e.exponent) if not isinstance(e.exponent, N) else n
            if isinstance(e.exponent, N) and n is None:
                raise ValueError("unbound index symbol n")
            if k is not None:
                try:
                    if b == 0 and k < 0:
                        mark(POLE)
                        return _INF
                    return _powi_scalar(b, k)
                except (OverflowError, ZeroDivisionError, PoleError):
                    # nonzero base that under/overflowed along the way
                    mark(ESCAPED)
                    return _INF
            ex = ev(e.exponent)
            if b == 0:
                if ex == 0:
                    return 1 + 0j
                if ex.real > 0:
                    return 0j
                mark(POLE)
                return _INF
            try:
                return cmath.exp(ex * cmath.log(b))
            except OverflowError:
                mark(ESCAPED)
                return _INF
        if isinstance(e, Call):
            a = ev(e.arg)
            if e.fn == "log" and a == 0:
                mark(POLE)
                return _INF
            try:
                return _FN_SCALAR[e.fn](a)
            except (OverflowError, ValueError):
                mark(ESCAPED)
                return _INF
        raise TypeError(f"unknown node {e!r}")

    val = ev(expr)
    if flag[0] == OK and not (cmath.isfinite(val)):
        flag[0] = ESCAPED
    return val, flag[0]


def evaluate(expr: Expr, z: complex, n: int | None = None) -> complex:
    """Evaluate; raises PoleError on division by zero, saturates on overflow."""
    val, flag = evaluate_ex(expr, z, n)
    if flag == POLE:
        raise PoleError("pole encountered during evaluation")
    return val


# ---------------------------------------------------------------------------
# structure operations
# ---------------------------------------------------------------------------

def differentiate(expr: Expr) -> Expr:
    """Symbolic d/dz; the index symbol n is treated as a constant."""
    if isinstance(expr, (Const, N)):
        return _ZERO
    if isinstance(expr, Z):
        return _ONE
    if isinstance(expr, Neg):
        return neg(differentiate(expr.a))
    if isinstance(expr, Add):
        return add(differentiate(expr.a), differentiate(expr.b))
    if isinstance(expr, Sub):
        return sub(differentiate(expr.a), differentiate(expr.b))
    if isinstance(expr, Mul):
        return add(mul(differentiate(expr.a), expr.b),
                   mul(expr.a, differentiate(expr.b)))
    if isinstance(expr, Div):
        return div(sub(mul(differentiate(expr.a), expr.b),
                       mul(expr.a, differentiate(expr.b))),
                   powe(expr.b, const(2)))
    if isinstance(expr, Pow):
        b, e = expr.base, expr.exponent
        db = differentiate(b)
        if isinstance(e, (Const, N)):
            # e is constant in z: d/dz b^e = e * b^(e-1) * b'
            em1 = sub(e, _ONE) if isinstance(e, N) else const(e.value - 1)
            return mul(mul(e, powe(b, em1)), db)
        de = differentiate(e)
        # general power: b^e * (e' log b + e b'/b)
        return mul(expr, add(mul(de, call("log", b)), mul(e, div(db, b))))
    if isinstance(expr, Call):
        da = differentiate(expr.arg)
        if expr.fn == "exp":
            return mul(expr, da)
        if expr.fn == "sin":
            return mul(call("cos", expr.arg), da)
        if expr.fn == "cos":
            return neg(mul(call("sin", expr.arg), da))
        if expr.fn == "log":
            return div(da, expr.arg)
    raise TypeError(f"unknown node {expr!r}")


def _transform(expr: Expr, leaf):
    """Rebuild the tree through the smart constructors, mapping leaves."""
    if isinstance(expr, (Const, Z, N)):
        return leaf(expr)
    if isinstance(expr, Neg):
        return neg(_transform(expr.a, leaf))
    if isinstance(expr, Add):
        return add(_transform(expr.a, leaf), _transform(expr.b, leaf))
    if isinstance(expr, Sub):
        return sub(_transform(expr.a, leaf), _transform(expr.b, leaf))
    if isinstance(expr, Mul):
        return mul(_transform(expr.a, leaf), _transform(expr.b, leaf))
    if isinstance(expr, Div):
        return div(_transform(expr.a, leaf), _transform(expr.b, leaf))
    if isinstance(expr, Pow):
        return powe(_transform(expr.base, leaf), _transform(expr.exponent, leaf))
    if isinstance(expr, Call):
        return call(expr.fn, _transform(expr.arg, leaf))
    raise TypeError(f"unknown node {expr!r}")


def bind_n(expr: Expr, n: int) -> Expr:
    """Substitute the integer n for the index symbol (folding constants)."""
    return _transform(expr, lambda e: const(n) if isinstance(e, N) else e)


def subst_z(expr: Expr, inner: Expr) -> Expr:
    """Substitute a subtree for z (function composition)."""
    return _transform(expr, lambda e: inner if isinstance(e, Z) else e)


def has_n(expr: Expr) -> bool:
    if isinstance(expr, N):
        return True
    if isinstance(expr, (Const, Z)):
        return False
    if isinstance(expr, Neg):
        return has_n(expr.a)
    if isinstance(expr, (Add, Sub, Mul, Div)):
        return has_n(expr.a) or has_n(expr.b)
    if isinstance(expr, Pow):
        return has_n(expr.base) or has_n(expr.exponent)
    if isinstance(expr, Call):
        return has_n(expr.arg)
    raise TypeError(f"unknown node {expr!r}")


def has_z(expr: Expr) -> bool:
    if isinstance(expr, Z):
        return True
    if isinstance(expr, (Const, N)):
        return False
    if isinstance(expr, Neg):
        return has_z(expr.a)
    if isinstance(expr, (Add, Sub, Mul, Div)):
        return has_z(expr.a) or has_z(expr.b)
    if isinstance(expr, Pow):
        return has_z(expr.base) or has_z(expr.exponent)
    if isinstance(expr, Call):
        return has_z(expr.arg)
    raise TypeError(f"unknown node {expr!r}")


# ---------------------------------------------------------------------------
# canonical printer
# ---------------------------------------------------------------------------

def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _fmt_const(v: complex) -> str:
    if v.imag == 0.0:
        return _fmt_real(v.real)
    if v.real == 0.0:
        return _fmt_real(v.imag) + "i"
    im = _fmt_real(abs(v.imag)) + "i"
    s = "-" if v.imag < 0 else "+"
    return f"({_fmt_real(v.real)}{s}{im})"


# precedence: + - (1), * / (2), unary - (3), ^ (4), atoms (5)
def _print(expr: Expr, prec: int) -> str:
    if isinstance(expr, Const):
        s = _fmt_const(expr.value)
        if s.startswith("-") and prec > 1:
            return f"({s})"
        return s
    if isinstance(expr, Z):
        return "z"
    if isinstance(expr, N):
        return "n"
    if isinstance(expr, Neg):
        s = "-" + _print(expr.a, 3)
        return f"({s})" if prec > 3 else s
    if isinstance(expr, (Add, Sub)):
        op = "+" if isinstance(expr, Add) else "-"
        s = f"{_print(expr.a, 1)}{op}{_print(expr.b, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(expr, (Mul, Div)):
        op = "*" if isinstance(expr, Mul) else "/"
        s = f"{_print(expr.a, 2)}{op}{_print(expr.b, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(expr, Pow):
        s = f"{_print(expr.base, 5)}^{_print(expr.exponent, 4)}"
        return f"({s})" if prec > 4 else s
    if isinstance(expr, Call):
        return f"{expr.fn}({_print(expr.arg, 0)})"
    raise TypeError(f"unknown node {expr!r}")


def to_text(expr: Expr) -> str:
    """Canonical text form; parses back to a structurally equal tree."""
    return _print(expr, 0)


# ---------------------------------------------------------------------------
# polynomial expansion
# ---------------------------------------------------------------------------

MAX_POLY_DEGREE = 64


def _poly_trim(a: list) -> list:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: list, b: list, cap: int) -> list:
    a = _poly_trim(a)
    b = _poly_trim(b)
    if len(a) - 1 + len(b) - 1 > cap:
        raise NotPolynomial("DEGREE_EXCEEDED")
    out = [0j] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def poly_coeffs(expr: Expr, cap: int = MAX_POLY_DEGREE) -> list:
    """Ascending complex coefficients of the expression as a polynomial in z.

    Raises NotPolynomial("NOT_POLYNOMIAL") for non-polynomial trees and
    NotPolynomial("DEGREE_EXCEEDED") when expansion passes the degree cap.
    The index symbol must already be bound.
    """
    def go(e: Expr) -> list:
        if isinstance(e, Const):
            return [e.value]
        if isinstance(e, Z):
            return [0j, 1 + 0j]
        if isinstance(e, N):
            raise NotPolynomial("NOT_POLYNOMIAL")
        if isinstance(e, Neg):
            return [-c for c in go(e.a)]
        if isinstance(e, (Add, Sub)):
            pa, pb = go(e.a), go(e.b)
            sign = 1 if isinstance(e, Add) else -1
            out = [0j] * max(len(pa), len(pb))
            for i, c in enumerate(pa):
                out[i] += c
            for i, c in enumerate(pb):
                out[i] += sign * c
            return out
        if isinstance(e, Mul):
            return _poly_mul(go(e.a), go(e.b), cap)
        if isinstance(e, Div):
            pa, pb = go(e.a), go(e.b)
            if len(pb) != 1:
                raise NotPolynomial("NOT_POLYNOMIAL")
            if pb[0] == 0:
                raise NotPolynomial("NOT_POLYNOMIAL")
            return [c / pb[0] for c in pa]
        if isinstance(e, Pow):
            k = int_const(e.exponent)
            if k is None or k < 0:
                raise NotPolynomial("NOT_POLYNOMIAL")
            base = _poly_trim(go(e.base))
            if (len(base) - 1) * k > cap:
                raise NotPolynomial("DEGREE_EXCEEDED")
            result = [1 + 0j]
            b = base
            kk = k
            while kk:
                if kk & 1:
                    result = _poly_mul(result, b, cap)
                kk >>= 1
                if kk:
                    b = _poly_mul(b, b, cap)
            return result
        if isinstance(e, Call):
            raise NotPolynomial("NOT_POLYNOMIAL")
        raise TypeError(f"unknown node {e!r}")

    coeffs = go(expr)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) - 1 > cap:
        raise NotPolynomial("DEGREE_EXCEEDED")
    return coeffs
