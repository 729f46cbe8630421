"""Triples (A, v, w), elementary operations on them, and exact replay.

A triple holds a nonnegative unimodular integer matrix ``A``, its integer
inverse ``B``, a positive valuation vector ``v`` and ``w = B v``, also
positive. Four elementary operations act on triples; all indices in public
interfaces are 1-based.

``ColAdd(target, source)``
    column ``target`` of A gains column ``source``; permissible when
    ``w[source] > w[target]``. ``w[source]`` drops by ``w[target]``.
``RowSub(target, source)``
    row ``target`` of A loses row ``source``; permissible when row ``target``
    dominates row ``source`` entrywise. ``v[target]`` drops by ``v[source]``.
``RowSwap(i, j)``
    rows i and j of A and entries i and j of v are exchanged.
``ColSub(target, source)``
    column ``target`` of A loses column ``source``; permissible when the
    result stays nonnegative. ``w[source]`` grows by ``w[target]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Literal, Sequence, Union

from .errors import (
    DetNotUnit,
    IndependenceViolation,
    IntegrityError,
    NegativeEntry,
    NonPositiveValuation,
    NotDominated,
    NotPermissible,
    PhaseViolation,
)
from .exactreal import Scalar, combine

Matrix = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# integer matrices
# ---------------------------------------------------------------------------

def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free elimination; exact for integer matrices."""
    m = [list(row) for row in a]
    n = len(m)
    if n == 0:
        return 1
    sgn, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sgn = -sgn
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sgn * m[n - 1][n - 1]


def unimodular_inverse(a: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of an integer matrix with determinant +-1 (Gauss-Jordan over Q)."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise DetNotUnit("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    inv = []
    for row in m:
        out = []
        for x in row[n:]:
            if x.denominator != 1:
                raise DetNotUnit("inverse is not integral")
            out.append(x.numerator)
        inv.append(tuple(out))
    return tuple(inv)


def mat_vec(a: Sequence[Sequence[int]], x: Sequence[Scalar]) -> tuple[Scalar, ...]:
    return tuple(combine(list(row), list(x)) for row in a)


# ---------------------------------------------------------------------------
# elementary operations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _TargetSource:
    target: int
    source: int

    def __post_init__(self):
        if self.target < 1 or self.source < 1 or self.target == self.source:
            raise ValueError(f"bad indices for {type(self).__name__}: {self.target}, {self.source}")

    @property
    def indices(self) -> tuple[int, int]:
        return self.target, self.source

    def __str__(self):
        return f"{type(self).__name__}({self.target},{self.source})"


@dataclass(frozen=True)
class ColAdd(_TargetSource):
    """Column ``target`` += column ``source``."""


@dataclass(frozen=True)
class RowSub(_TargetSource):
    """Row ``target`` -= row ``source``."""


@dataclass(frozen=True)
class ColSub(_TargetSource):
    """Column ``target`` -= column ``source``."""


@dataclass(frozen=True)
class RowSwap:
    i: int
    j: int

    def __post_init__(self):
        if self.i < 1 or self.j < 1 or self.i == self.j:
            raise ValueError(f"bad indices for RowSwap: {self.i}, {self.j}")

    @property
    def indices(self) -> tuple[int, int]:
        return self.i, self.j

    def __str__(self):
        return f"RowSwap({self.i},{self.j})"


ElementaryOp = Union[ColAdd, RowSub, RowSwap, ColSub]
OP_KINDS = {"ColAdd": ColAdd, "RowSub": RowSub, "RowSwap": RowSwap, "ColSub": ColSub}

PHASE1_KINDS = (ColAdd, RowSwap)
Phase2Kind = Literal["RowSub", "ColSub"]


@dataclass(frozen=True)
class OpScript:
    """Two-phase operation list: phase 1 of ColAdd/RowSwap, phase 2 of one subtraction kind."""

    phase1: tuple = ()
    phase2: tuple = ()
    phase2_kind: Phase2Kind = "RowSub"
    diagnostics: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "phase1", tuple(self.phase1))
        object.__setattr__(self, "phase2", tuple(self.phase2))
        if self.phase2_kind not in ("RowSub", "ColSub"):
            raise ValueError(f"unknown phase 2 kind {self.phase2_kind!r}")

    def ops(self) -> Iterator[ElementaryOp]:
        yield from self.phase1
        yield from self.phase2

    def __len__(self):
        return len(self.phase1) + len(self.phase2)

    def __str__(self):
        p1 = ", ".join(map(str, self.phase1))
        p2 = ", ".join(map(str, self.phase2))
        return f"phase1=[{p1}] phase2[{self.phase2_kind}]=[{p2}]"


# ---------------------------------------------------------------------------
# triples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Triple:
    A: Matrix
    B: Matrix
    v: tuple
    w: tuple

    @property
    def n(self) -> int:
        return len(self.A)

    def column(self, c: int) -> tuple[int, ...]:
        return tuple(row[c - 1] for row in self.A)

    def row(self, r: int) -> tuple[int, ...]:
        return self.A[r - 1]

    def pivot_column(self, r: int = 1) -> tuple[int, ...]:
        """Column ``r`` of B: the coefficients with sum_k b_kr * C_k = e_r."""
        return tuple(row[r - 1] for row in self.B)

    def is_identity(self) -> bool:
        return self.A == identity(self.n)


def build_triple(A: Sequence[Sequence[int]], v: Sequence[Scalar]) -> Triple:
    """Validate ``A`` and ``v`` and compute ``B = A^-1`` and ``w = B v``."""
    a = as_matrix(A)
    n = len(a)
    if len(v) != n:
        raise ValueError(f"valuation has {len(v)} entries, matrix is {n}x{n}")
    for r, row in enumerate(a, 1):
        for c, x in enumerate(row, 1):
            if x < 0:
                raise NegativeEntry(f"a[{r}][{c}] = {x} is negative")
    d = determinant(a)
    if d not in (1, -1):
        raise DetNotUnit(f"determinant is {d}, not +-1")
    for i, x in enumerate(v, 1):
        if x.sign() <= 0:
            raise NonPositiveValuation(f"v[{i}] = {x} is not positive")
    b = unimodular_inverse(a)
    w = mat_vec(b, v)
    for i, x in enumerate(w, 1):
        if x.sign() <= 0:
            raise NotDominated(f"w[{i}] = {x} is not positive")
    return Triple(a, b, tuple(v), w)


def _check_indices(t: Triple, op: ElementaryOp) -> None:
    if max(op.indices) > t.n:
        raise ValueError(f"{op} out of range for n={t.n}")


def is_permissible(t: Triple, op: ElementaryOp) -> bool:
    _check_indices(t, op)
    if isinstance(op, ColAdd):
        s = (t.w[op.source - 1] - t.w[op.target - 1]).sign()
        if s == 0:
            raise IndependenceViolation(f"w[{op.source}] == w[{op.target}]: tie in {op}")
        return s > 0
    if isinstance(op, RowSub):
        return all(x >= y for x, y in zip(t.A[op.target - 1], t.A[op.source - 1]))
    if isinstance(op, RowSwap):
        return True
    if isinstance(op, ColSub):
        i, j = op.target - 1, op.source - 1
        return all(row[i] >= row[j] for row in t.A)
    raise TypeError(f"not an elementary op: {op!r}")


def apply_op(t: Triple, op: ElementaryOp) -> Triple:
    """Apply a permissible operation; raises NotPermissible otherwise."""
    if not is_permissible(t, op):
        raise NotPermissible(op)
    return apply_unchecked(t, op)


def apply_unchecked(t: Triple, op: ElementaryOp) -> Triple:
    """apply_op without the permissibility test, for callers that have just made it."""
    A = [list(row) for row in t.A]
    B = [list(row) for row in t.B]
    v, w = list(t.v), list(t.w)
    if isinstance(op, ColAdd):
        i, j = op.target - 1, op.source - 1
        for row in A:
            row[i] += row[j]
        B[j] = [x - y for x, y in zip(B[j], B[i])]
        w[j] = w[j] - w[i]
    elif isinstance(op, RowSub):
        j, i = op.target - 1, op.source - 1
        A[j] = [x - y for x, y in zip(A[j], A[i])]
        for row in B:
            row[i] += row[j]
        v[j] = v[j] - v[i]
    elif isinstance(op, RowSwap):
        i, j = op.i - 1, op.j - 1
        A[i], A[j] = A[j], A[i]
        for row in B:
            row[i], row[j] = row[j], row[i]
        v[i], v[j] = v[j], v[i]
    else:
        # A' = A E with E = I - e_j e_i^T, so B' = E^-1 B: row j of B gains row i
        i, j = op.target - 1, op.source - 1
        for row in A:
            row[i] -= row[j]
        B[j] = [x + y for x, y in zip(B[j], B[i])]
        w = list(mat_vec(B, v))
    return Triple(tuple(map(tuple, A)), tuple(map(tuple, B)), tuple(v), tuple(w))


def beta_of(B: Sequence[Sequence[int]], r: int = 1) -> int:
    return max(abs(row[r - 1]) for row in B)


def beta(A: Sequence[Sequence[int]]) -> int:
    """``max_k |b_k1|`` for ``B = A^-1``."""
    a = as_matrix(A)
    if determinant(a) not in (1, -1):
        raise DetNotUnit("beta is defined for unimodular matrices only")
    return beta_of(unimodular_inverse(a))


def is_star_allowable(t: Triple, op: ColAdd, r: int = 1) -> bool:
    """Permissible, and the two pivot-column entries are either same-signed or include a zero."""
    if not is_permissible(t, op):
        return False
    bi, bj = t.B[op.target - 1][r - 1], t.B[op.source - 1][r - 1]
    return bi * bj >= 0


def is_allowable(t: Triple, op: ColAdd, r: int = 1) -> bool:
    if not is_permissible(t, op):
        return False
    bi, bj = t.B[op.target - 1][r - 1], t.B[op.source - 1][r - 1]
    return bi * bj > 0


def check_phases(s: OpScript) -> None:
    for k, op in enumerate(s.phase1):
        if not isinstance(op, PHASE1_KINDS):
            raise PhaseViolation(op, k)
    kind = OP_KINDS[s.phase2_kind]
    for k, op in enumerate(s.phase2, len(s.phase1)):
        if type(op) is not kind:
            raise PhaseViolation(op, k)


def replay_trace(t0: Triple, s: OpScript) -> tuple[list[tuple[Triple, ElementaryOp]], Triple]:
    """Replay ``s`` on ``t0`` step by step; returns the (state, op) trace and the final state."""
    check_phases(s)
    trace = []
    t = t0
    for k, op in enumerate(s.ops()):
        _check_indices(t, op)
        if not is_permissible(t, op):
            raise NotPermissible(op, k)
        trace.append((t, op))
        t = apply_op(t, op)
    return trace, t


def replay(t0: Triple, s: OpScript) -> Triple:
    return replay_trace(t0, s)[1]


def audit_triple(t: Triple) -> list[str]:
    """Recompute every triple invariant from scratch; returns the failures."""
    problems = []
    n = t.n
    if any(x < 0 for row in t.A for x in row):
        problems.append("A has a negative entry")
    if determinant(t.A) not in (1, -1):
        problems.append("det A is not +-1")
    if matmul(t.A, t.B) != identity(n):
        problems.append("A*B != I")
    if mat_vec(t.A, t.w) != tuple(t.v):
        problems.append("A*w != v")
    if any(x.sign() <= 0 for x in t.v):
        problems.append("v not positive")
    if any(x.sign() <= 0 for x in t.w):
        problems.append("w not positive")
    return problems


def assert_valid(t: Triple) -> None:
    problems = audit_triple(t)
    if problems:
        raise IntegrityError("; ".join(problems))
