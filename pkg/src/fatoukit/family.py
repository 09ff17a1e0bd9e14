"""Family specifications, concrete members, enumeration and fingerprints.

A family is one of: a parametric sequence over the index n, a finite set of
expressions, a union of families, or a finitely generated composition
semigroup truncated by word length.  Enumeration always deduplicates by
numeric fingerprint so truncations contain pairwise distinct functions.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import cached_property

from . import expr as ex

__all__ = [
    "Parametric", "FiniteSet", "UnionSpec", "Semigroup", "FamilySpec",
    "Member", "enumerate_members", "fingerprint", "intersect_families",
    "print_family", "flatten_parts", "is_infinite_part", "eval_member",
    "eval_member_ex", "differentiate_member", "polynomial_form",
]


@dataclass(frozen=True)
class Parametric:
    """{ expr(n, z) : n = n_from, n_from+1, ... } (n_to=None means unbounded)."""
    expr: ex.Expr
    n_from: int = 1
    n_to: int | None = None

    def __post_init__(self):
        if self.n_from < 1:
            raise ValueError("n_from must be >= 1")
        if self.n_to is not None and self.n_to < self.n_from:
            raise ValueError("n_to must be >= n_from")


@dataclass(frozen=True)
class FiniteSet:
    """A finite set of expressions; may be empty (e.g. an empty intersection)."""
    members: tuple[ex.Expr, ...]

    def __post_init__(self):
        for m in self.members:
            if ex.has_n(m):
                raise ValueError("index symbol 'n' is not allowed in a finite set")


@dataclass(frozen=True)
class UnionSpec:
    parts: tuple["FamilySpec", ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("union needs at least one part")


@dataclass(frozen=True)
class Semigroup:
    """Composition semigroup over generators, words up to max_word_len."""
    generators: tuple[ex.Expr, ...]
    max_word_len: int

    def __post_init__(self):
        if not self.generators:
            raise ValueError("semigroup needs at least one generator")
        if self.max_word_len < 1:
            raise ValueError("max_word_len must be >= 1")
        for g in self.generators:
            if ex.has_n(g):
                raise ValueError("index symbol 'n' is not allowed in generators")


FamilySpec = Parametric | FiniteSet | UnionSpec | Semigroup


class Member:
    """One concrete function of a family: a bound index or a composition word.

    The composed, n-free expression is available as .expr; the symbolic
    derivative is computed lazily and cached (idempotent, safe under races).
    """

    __slots__ = ("expr", "n", "word", "label", "__dict__")

    def __init__(self, expr: ex.Expr, n: int | None = None,
                 word: tuple[int, ...] | None = None, label: str = ""):
        self.expr = expr
        self.n = n
        self.word = word
        self.label = label or ex.to_text(expr)

    @classmethod
    def from_parametric(cls, body: ex.Expr, n: int) -> "Member":
        return cls(ex.bind_n(body, n), n=n, label=f"n={n}")

    @classmethod
    def from_expr(cls, body: ex.Expr) -> "Member":
        return cls(body)

    @classmethod
    def from_word(cls, generators: tuple[ex.Expr, ...],
                  indices: tuple[int, ...]) -> "Member":
        # leftmost generator is applied first
        composed = generators[indices[0]]
        for i in indices[1:]:
            composed = ex.subst_z(generators[i], composed)
        return cls(composed, word=indices,
                   label="word[" + ",".join(str(i + 1) for i in indices) + "]")

    @cached_property
    def derivative(self) -> ex.Expr:
        return ex.differentiate(self.expr)

    def __repr__(self):
        return f"Member({self.label})"


def eval_member(m: Member, z: complex) -> complex:
    """Value at z; raises PoleError on division by zero, saturates overflow."""
    return ex.evaluate(m.expr, z)


def eval_member_ex(m: Member, z: complex):
    """Value at z plus a flag in {OK, ESCAPED, POLE}; never raises."""
    return ex.evaluate_ex(m.expr, z)


def differentiate_member(m: Member) -> Member:
    """Symbolic d/dz of a member, as a member."""
    return Member(m.derivative, n=m.n, label=f"d/dz {m.label}")


def polynomial_form(m: Member, cap: int = ex.MAX_POLY_DEGREE):
    """Ascending coefficients if the member is a polynomial of degree <= cap.

    Returns (coeffs, None) on success, (None, reason) otherwise where reason
    is "NOT_POLYNOMIAL" or "DEGREE_EXCEEDED".
    """
    try:
        return ex.poly_coeffs(m.expr, cap), None
    except ex.NotPolynomial as e:
        return None, e.reason


# ---------------------------------------------------------------------------
# fingerprints
# ---------------------------------------------------------------------------

# Probe points drawn once from a fixed generator (seed 0x5EED, uniform on
# [-1.5, 1.5]^2); the first 8 are primary probes, the rest are fallbacks
# used in order when a probe hits a pole.
PROBE_POINTS = (
    -0.6271739670300281 + 0.6956916943476750j,
    -0.3543977713590203 + 0.5754811477675812j,
    -1.1292215203390699 - 0.2465521665038120j,
    -0.9768820043182539 + 0.6078518684863035j,
    -1.3088207361910236 - 0.3255347267099051j,
    +0.6854309257141682 + 0.7571842069046348j,
    -0.7285890000640632 + 1.0678266913216756j,
    -0.3742923081491760 + 0.6861701461069609j,
    +1.0037011241357328 - 1.3691660173846174j,
    -1.4013096101126887 - 0.9403840856429625j,
    -1.2723359475415792 + 1.3783767444301658j,
    +1.4459135720340872 + 1.3184269445946830j,
    +1.1511300873175356 + 0.3616307042837710j,
    +0.3420489542814462 - 0.1939290965022638j,
    +0.6835590268350020 - 1.4542033796556240j,
    +1.1307156874333653 - 0.6066007463592439j,
)

_FP_REL = 1e-9  # relative quantization of probe values


def _quantize(x: float):
    """Sign/exponent/mantissa token at ~1e-9 relative precision."""
    if x == 0.0:
        return (0, 0, 0)
    m, e = math.frexp(abs(x))  # m in [0.5, 1)
    return (1 if x > 0 else -1, e, round(m / _FP_REL))


def fingerprint(m: Member) -> str:
    """Opaque hash of quantized probe evaluations; function identity.

    Equal functions evaluated along the same floating-point path collide by
    construction; a probe that hits a pole is replaced by the next fallback
    probe point.
    """
    tokens = []
    fallback = len(PROBE_POINTS) // 2
    for slot in range(fallback):
        tok = ("P",)
        for probe in (PROBE_POINTS[slot], PROBE_POINTS[fallback + slot]):
            val, flag = ex.evaluate_ex(m.expr, probe)
            if flag == ex.POLE:
                continue
            if flag == ex.ESCAPED:
                tok = ("E",)
            else:
                tok = _quantize(val.real) + _quantize(val.imag)
            break
        tokens.append(tok)
    blob = repr(tokens).encode()
    return hashlib.blake2b(blob, digest_size=16).hexdigest()


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

# scan limit safeguard: parametric families whose expression collapses to
# few distinct functions stop after this many consecutive duplicate indices
_MAX_DUP_RUN = 512


def _enum_parametric(spec: Parametric, limit: int):
    out, seen = [], set()
    n = spec.n_from
    dup_run = 0
    if not ex.has_n(spec.expr):
        m = Member.from_parametric(spec.expr, spec.n_from)
        return [m]
    while len(out) < limit:
        if spec.n_to is not None and n > spec.n_to:
            break
        m = Member.from_parametric(spec.expr, n)
        fp = fingerprint(m)
        if fp in seen:
            dup_run += 1
            if dup_run >= _MAX_DUP_RUN:
                break
        else:
            dup_run = 0
            seen.add(fp)
            out.append(m)
        n += 1
    return out


def _enum_finite(spec: FiniteSet, limit: int):
    out, seen = [], set()
    for body in spec.members:
        if len(out) >= limit:
            break
        m = Member.from_expr(body)
        fp = fingerprint(m)
        if fp not in seen:
            seen.add(fp)
            out.append(m)
    return out


def _enum_semigroup(spec: Semigroup, limit: int):
    out, seen = [], set()
    gens = spec.generators
    words = [(i,) for i in range(len(gens))]
    while words and len(out) < limit:
        next_words = []
        for w in words:
            if len(out) >= limit:
                break
            m = Member.from_word(gens, w)
            fp = fingerprint(m)
            if fp not in seen:
                seen.add(fp)
                out.append(m)
            if len(w) < spec.max_word_len:
                next_words.extend(w + (i,) for i in range(len(gens)))
        words = next_words
    return out


def enumerate_members(spec: FamilySpec, limit: int):
    """First `limit` distinct members in canonical order.

    Parametric: ascending n.  Union: round-robin over parts.  Semigroup:
    breadth-first over words of increasing length (lexicographic within a
    length).  Fewer than `limit` members come back iff the family is finite
    at the stated truncation.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if isinstance(spec, Parametric):
        return _enum_parametric(spec, limit)
    if isinstance(spec, FiniteSet):
        return _enum_finite(spec, limit)
    if isinstance(spec, Semigroup):
        return _enum_semigroup(spec, limit)
    if isinstance(spec, UnionSpec):
        streams = [iter(enumerate_members(p, limit)) for p in spec.parts]
        out, seen = [], set()
        active = list(range(len(streams)))
        while active and len(out) < limit:
            still = []
            for si in active:
                if len(out) >= limit:
                    break
                try:
                    m = next(streams[si])
                except StopIteration:
                    continue
                still.append(si)
                fp = fingerprint(m)
                if fp not in seen:
                    seen.add(fp)
                    out.append(m)
            active = [si for si in active if si in still]
        return out
    raise TypeError(f"unknown family spec {spec!r}")


def is_infinite_part(spec: FamilySpec) -> bool:
    """Whether a (non-union) part stands for an infinite family.

    Semigroup truncations count as infinite: they are finite windows into
    an infinite composition semigroup.
    """
    if isinstance(spec, Parametric):
        return spec.n_to is None and ex.has_n(spec.expr)
    if isinstance(spec, FiniteSet):
        return False
    if isinstance(spec, Semigroup):
        return True
    raise TypeError(f"not a simple part: {spec!r}")


def flatten_parts(spec: FamilySpec):
    """Flatten nested unions into a list of simple parts."""
    if isinstance(spec, UnionSpec):
        out = []
        for p in spec.parts:
            out.extend(flatten_parts(p))
        return out
    return [spec]


def intersect_families(a: FamilySpec, b: FamilySpec, limit: int) -> FiniteSet:
    """Members of a (first `limit`) whose fingerprint occurs in b's first `limit`.

    An empty intersection comes back as an empty finite set.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    fps_b = {fingerprint(m) for m in enumerate_members(b, limit)}
    shared = tuple(m.expr for m in enumerate_members(a, limit)
                   if fingerprint(m) in fps_b)
    return FiniteSet(shared)


# ---------------------------------------------------------------------------
# canonical printer (round-trips through the parser)
# ---------------------------------------------------------------------------

def print_family(spec: FamilySpec) -> str:
    if isinstance(spec, Parametric):
        prefix = "family n"
        if spec.n_from != 1:
            prefix += f" from {spec.n_from}"
        return f"{prefix}: {ex.to_text(spec.expr)}"
    if isinstance(spec, FiniteSet):
        return "set: " + "; ".join(ex.to_text(m) for m in spec.members)
    if isinstance(spec, Semigroup):
        gens = "; ".join(ex.to_text(g) for g in spec.generators)
        return f"semigroup L={spec.max_word_len}: {gens}"
    if isinstance(spec, UnionSpec):
        return " | ".join(print_family(p) for p in spec.parts)
    raise TypeError(f"unknown family spec {spec!r}")
