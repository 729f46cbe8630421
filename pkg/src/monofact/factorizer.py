"""Constructive factorization of triples into two-phase operation scripts.

The driver :func:`factorize` follows the induction on dimension:

1. drive the pivot column of ``B`` to the pattern ``{+1, -1, 0, ...}`` with
   *-allowable column additions (:func:`make_unit_pair`), which makes column
   ``p`` equal to column ``k`` plus the unit vector ``e_r``;
2. delete row ``r`` and column ``p`` to get a smaller triple
   (:func:`project_quadruple`) and factorize it recursively;
3. lift the smaller script back op by op (:func:`lift_sub_op`), finish with
   row subtractions (:func:`cleanup_rows`), and turn the resulting
   permutation matrix into the identity by row swaps appended to phase 1.

Column relabelings are never performed physically; index translation is
carried by :class:`ActiveIndexFrame`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .core import (
    ColAdd,
    ColSub,
    ElementaryOp,
    OpScript,
    RowSub,
    RowSwap,
    Triple,
    apply_op,
    apply_unchecked,
    beta_of,
    determinant,
    identity,
    is_permissible,
    mat_vec,
    replay_trace,
    unimodular_inverse,
)
from .errors import (
    BudgetExceeded,
    ConversionCheckFailed,
    IndependenceViolation,
    IntegrityError,
    MonofactError,
    PreconditionViolation,
)
from .exactreal import floor_quotient

# Upper bound on single ops in one collapse; only reached if the loop misbehaves.
COLLAPSE_GUARD = 10_000_000
# Default work budget of factorize: elementary ops applied anywhere in the
# recursion, pivot-row trials included. The construction is finite but its
# matrix entries can grow doubly exponentially with depth, and every unit of
# an entry costs one row subtraction at cleanup.
DEFAULT_MAX_OPS = 2_000_000
# First op budget when comparing pivot rows; it grows fourfold until a row finishes.
PIVOT_TRIAL_BUDGET = 64


class _OverBudget(BudgetExceeded):
    """A sub-step ran past its own op budget; factorize turns this into a charge."""


class _Meter:
    """Work counter shared by every level of one factorization."""

    def __init__(self, limit: int | None):
        self.limit = limit
        self.used = 0

    def remaining(self) -> int | None:
        return None if self.limit is None else self.limit - self.used

    def charge(self, k: int) -> None:
        self.used += k
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"factorization needs more than {self.limit} elementary ops")


def _spend(ops: list, budget: int | None) -> None:
    if budget is not None and len(ops) > budget:
        raise _OverBudget(f"sub-step needs more than {budget} elementary ops")


@dataclass(frozen=True)
class ActiveIndexFrame:
    """Live column and row labels; position ``x`` of the frame is label ``columns[x]``."""

    columns: tuple[int, ...]
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.columns) != len(self.rows):
            raise ValueError("frame needs as many live rows as live columns")
        if len(set(self.columns)) != len(self.columns) or len(set(self.rows)) != len(self.rows):
            raise ValueError("frame labels must be distinct")

    @classmethod
    def full(cls, n: int) -> "ActiveIndexFrame":
        labels = tuple(range(1, n + 1))
        return cls(labels, labels)

    @property
    def pivot_row(self) -> int:
        return self.rows[0]

    def __len__(self):
        return len(self.columns)


@dataclass
class FactorizationLog:
    """Records every sub-step invocation so their endpoints can be audited afterwards."""

    collapses: list = field(default_factory=list)
    reductions: list = field(default_factory=list)
    unit_pairs: list = field(default_factory=list)
    projections: list = field(default_factory=list)


@dataclass(frozen=True)
class StepRecord:
    before: Triple
    after: Triple
    frame: ActiveIndexFrame
    ops: tuple
    extra: dict = field(default_factory=dict)


def _pivot_entries(t: Triple, frame: ActiveIndexFrame) -> dict[int, int]:
    r = frame.pivot_row
    return {c: t.B[c - 1][r - 1] for c in frame.columns}


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def _permissible_direction(t: Triple, i: int, j: int) -> ColAdd:
    """Whichever of ColAdd(i, j), ColAdd(j, i) is permissible.

    Exactly one is: the sign test is exact and a tie raises.
    """
    op = ColAdd(i, j)
    return op if is_permissible(t, op) else ColAdd(j, i)


def _same_sign_pair(b: dict[int, int], labels: Sequence[int]):
    for x, i in enumerate(labels):
        if b[i] == 0:
            continue
        for j in labels[x + 1:]:
            if b[i] * b[j] > 0:
                return i, j
    return None


def collapse_first_column(t: Triple, frame: ActiveIndexFrame | None = None, log: FactorizationLog | None = None,
                          budget: int | None = None):
    """Allowable column additions until the pivot column of B has at most one entry of each sign.

    Each same-signed pair is run to exhaustion; for a fixed pair the absolute
    values strictly decrease in lex order, so each run is finite.
    Returns ``(ops, triple)``.
    """
    frame = frame or ActiveIndexFrame.full(t.n)
    r = frame.pivot_row
    ops: list[ElementaryOp] = []
    cur = t
    while True:
        pair = _same_sign_pair(_pivot_entries(cur, frame), frame.columns)
        if pair is None:
            break
        i, j = pair
        while cur.B[i - 1][r - 1] * cur.B[j - 1][r - 1] > 0:
            op = _permissible_direction(cur, i, j)
            cur = apply_unchecked(cur, op)
            ops.append(op)
            _spend(ops, budget)
            if len(ops) > COLLAPSE_GUARD:
                raise IntegrityError("collapse loop exceeded its guard")
    b = _pivot_entries(cur, frame)
    if sum(x > 0 for x in b.values()) > 1 or sum(x < 0 for x in b.values()) > 1:
        raise IntegrityError("collapse endpoint has two entries of one sign")
    if log is not None:
        log.collapses.append(StepRecord(t, cur, frame, tuple(ops)))
    return ops, cur


def reduce_beta_once(t: Triple, frame: ActiveIndexFrame | None, i0: int, j0: int,
                     log: FactorizationLog | None = None, budget: int | None = None):
    """Lower beta with *-allowable additions among the two nonzero labels and one zero label.

    ``i0`` and ``j0`` carry the positive and negative pivot entries. Let ``a``
    be the one of largest magnitude, ``c`` the other and ``m`` the smallest
    live label with a zero entry. Every ``ColAdd(a, x)`` lowers
    ``w_c + w_m`` by ``w_a``, so at most ``floor((w_c + w_m) / w_a)`` of them
    occur before some ``ColAdd(x, a)`` pulls ``|b_a|`` below beta.
    Returns ``(ops, triple)``.
    """
    frame = frame or ActiveIndexFrame.full(t.n)
    r = frame.pivot_row
    b = _pivot_entries(t, frame)
    if len(frame) < 3:
        raise PreconditionViolation("beta reduction needs at least three live columns")
    if not (b.get(i0, 0) > 0 and b.get(j0, 0) < 0):
        raise PreconditionViolation(f"need a positive entry at {i0} and a negative entry at {j0}")
    if any(b[c] != 0 for c in frame.columns if c not in (i0, j0)):
        raise PreconditionViolation("pivot column must have exactly two nonzero entries")
    beta0 = max(abs(x) for x in b.values())
    if beta0 <= 1:
        raise PreconditionViolation("beta is already 1")
    if abs(b[i0]) == abs(b[j0]):
        raise IntegrityError("two pivot entries of equal magnitude > 1 contradict unimodularity")
    a, c = (i0, j0) if abs(b[i0]) > abs(b[j0]) else (j0, i0)
    m = next(x for x in frame.columns if x not in (a, c))
    s = _sign(b[a])
    bound = floor_quotient(t.w[c - 1] + t.w[m - 1], t.w[a - 1])

    def entry(state, x):
        return state.B[x - 1][r - 1]

    cur = t
    ops: list[ElementaryOp] = []
    count = 0
    while True:
        same = [x for x in (c, m) if s * entry(cur, x) > 0]
        finishing = next((x for x in same if is_permissible(cur, ColAdd(x, a))), None)
        if finishing is not None:
            op = ColAdd(finishing, a)
            cur = apply_unchecked(cur, op)
            ops.append(op)
            break
        if same:
            op = ColAdd(a, same[0])
            count += 1
        else:
            bc, bm = entry(cur, c), entry(cur, m)
            if bc != 0 and bm != 0:
                op = _permissible_direction(cur, c, m)
            elif bc == 0 and bm == 0:
                raise IntegrityError("beta reduction lost both companion entries")
            else:
                y, z = (c, m) if bc != 0 else (m, c)
                op = ColAdd(z, y)
                if not is_permissible(cur, op):
                    op = ColAdd(y, z)
        cur = apply_op(cur, op)
        ops.append(op)
        _spend(ops, budget)
        if count > bound:
            raise IntegrityError(f"beta reduction exceeded its bound {bound}")
    beta1 = beta_of(cur.B, r)
    if beta1 >= beta0:
        raise IntegrityError(f"beta did not decrease ({beta0} -> {beta1})")
    if log is not None:
        log.reductions.append(StepRecord(t, cur, frame, tuple(ops),
                                         {"beta_before": beta0, "beta_after": beta1,
                                          "bound": bound, "count": count, "labels": (a, c, m)}))
    return ops, cur


def make_unit_pair(t: Triple, frame: ActiveIndexFrame | None = None, log: FactorizationLog | None = None,
                   budget: int | None = None):
    """*-allowable column additions until the pivot column of B is ``+1`` at i, ``-1`` at j, 0 elsewhere.

    Returns ``(ops, triple, i, j)``. With ``budget`` set, gives up with a
    private exception once more than that many ops have been spent.
    """
    frame = frame or ActiveIndexFrame.full(t.n)
    if len(frame) < 2:
        raise PreconditionViolation("a unit pair needs at least two live columns")
    ops: list[ElementaryOp] = []
    cur = t
    while True:
        left = None if budget is None else budget - len(ops)
        frag, cur = collapse_first_column(cur, frame, log, left)
        ops += frag
        b = _pivot_entries(cur, frame)
        nonzero = [x for x in frame.columns if b[x] != 0]
        if len(nonzero) == 1:
            i = nonzero[0]
            if b[i] != 1:
                raise IntegrityError(f"lone pivot entry is {b[i]}, expected 1")
            j = next(x for x in frame.columns if x != i)
            while is_permissible(cur, ColAdd(j, i)):
                cur = apply_unchecked(cur, ColAdd(j, i))
                ops.append(ColAdd(j, i))
                _spend(ops, budget)
            cur = apply_op(cur, ColAdd(i, j))
            ops.append(ColAdd(i, j))
            break
        pos = next(x for x in nonzero if b[x] > 0)
        neg = next(x for x in nonzero if b[x] < 0)
        if max(abs(b[pos]), abs(b[neg])) == 1:
            i, j = pos, neg
            break
        left = None if budget is None else budget - len(ops)
        frag, cur = reduce_beta_once(cur, frame, pos, neg, log, left)
        ops += frag
    b = _pivot_entries(cur, frame)
    if b[i] != 1 or b[j] != -1 or any(b[x] for x in frame.columns if x not in (i, j)):
        raise IntegrityError(f"unit pair pattern missing: {b}")
    if log is not None:
        log.unit_pairs.append(StepRecord(t, cur, frame, tuple(ops), {"i": i, "j": j}))
    return ops, cur, i, j


@dataclass(frozen=True)
class Quadruple:
    """A triple with column ``unit_col`` equal to column ``pivot_col`` minus ``e_{pivot_row}``."""

    triple: Triple
    pivot_col: int
    pivot_row: int
    unit_col: int

    def __post_init__(self):
        t, p, r, k = self.triple, self.pivot_col, self.pivot_row, self.unit_col
        if k == p:
            raise PreconditionViolation("unit column must differ from the pivot column")
        expected = tuple(x - (idx == r) for idx, x in enumerate(t.column(p), 1))
        if t.column(k) != expected:
            raise PreconditionViolation(f"column {k} is not column {p} minus e_{r}")

    @property
    def frame(self) -> ActiveIndexFrame:
        """Labels of the projected triple, in order."""
        n = self.triple.n
        return ActiveIndexFrame(
            tuple(c for c in range(1, n + 1) if c != self.pivot_col),
            tuple(x for x in range(1, n + 1) if x != self.pivot_row),
        )

    def advance(self, ops: Sequence[ElementaryOp]) -> "Quadruple":
        """Apply lifted ops and relocate the unit column."""
        t = self.triple
        try:
            for op in ops:
                t = apply_op(t, op)
        except MonofactError as exc:
            if isinstance(exc, IndependenceViolation):
                raise
            raise IntegrityError(f"lifted op failed: {exc}") from exc
        p, r = self.pivot_col, self.pivot_row
        target = tuple(x - (idx == r) for idx, x in enumerate(t.column(p), 1))
        for k in range(1, t.n + 1):
            if k != p and t.column(k) == target:
                return Quadruple(t, p, r, k)
        raise IntegrityError("quadruple relation lost after lifting")


def restrict(t: Triple, frame: ActiveIndexFrame):
    return tuple(tuple(t.A[x - 1][c - 1] for c in frame.columns) for x in frame.rows)


def _check_projection(q: Quadruple, sub: Triple) -> None:
    t, p, k = q.triple, q.pivot_col, q.unit_col
    for pos, c in enumerate(q.frame.columns):
        expected = t.w[p - 1] + t.w[k - 1] if c == k else t.w[c - 1]
        if sub.w[pos] != expected:
            raise IntegrityError(f"projected w at column {c} is {sub.w[pos]}, expected {expected}")


def project_quadruple(q: Quadruple, log: FactorizationLog | None = None):
    """The (n-1)-triple on the labels other than the pivot row and column.

    Returns ``(sub_triple, frame)`` where ``frame`` maps sub-indices to labels.
    The determinant is compared in the frame that lists the pivot first,
    which is the sign ``(-1)**(p + r)`` relative to the stored order.
    """
    t = q.triple
    frame = q.frame
    sub_a = restrict(t, frame)
    det_full = determinant(t.A)
    det_sub = determinant(sub_a)
    if det_sub != (-1) ** (q.pivot_col + q.pivot_row) * det_full:
        raise IntegrityError(f"det of projection is {det_sub}, full det is {det_full}")
    sub_b = unimodular_inverse(sub_a)
    sub_v = tuple(t.v[x - 1] for x in frame.rows)
    sub = Triple(sub_a, sub_b, sub_v, mat_vec(sub_b, sub_v))
    _check_projection(q, sub)
    if any(x.sign() <= 0 for x in sub.w):
        raise IntegrityError("projected triple is not dominated")
    if log is not None:
        log.projections.append((q, sub, frame))
    return sub, frame


def lift_sub_op(q: Quadruple, sub_op: ElementaryOp) -> list[ElementaryOp]:
    """Ops on the full triple realizing ``sub_op`` on the projection."""
    cols, rows = q.frame.columns, q.frame.rows
    if isinstance(sub_op, RowSwap):
        return [RowSwap(rows[sub_op.i - 1], rows[sub_op.j - 1])]
    if isinstance(sub_op, RowSub):
        return [RowSub(rows[sub_op.target - 1], rows[sub_op.source - 1])]
    if not isinstance(sub_op, ColAdd):
        raise PreconditionViolation(f"cannot lift {sub_op}")
    i, j = cols[sub_op.target - 1], cols[sub_op.source - 1]
    p, k = q.pivot_col, q.unit_col
    if i != k and j != k:
        return [ColAdd(i, j)]
    if i == k:
        return [ColAdd(k, j), ColAdd(p, j)]
    w = q.triple.w
    s = (w[p - 1] - w[i - 1]).sign()
    if s == 0:
        raise IndependenceViolation(f"w[{p}] == w[{i}]")
    if s > 0:
        return [ColAdd(i, p)]
    # the unit column moves to i
    return [ColAdd(p, i), ColAdd(i, k)]


def _row_sub_in_place(a: list[list[int]], op: RowSub) -> None:
    target, source = a[op.target - 1], a[op.source - 1]
    if any(x < y for x, y in zip(target, source)):
        raise IntegrityError(f"{op} is not permissible: row {op.target} does not dominate row {op.source}")
    a[op.target - 1] = [x - y for x, y in zip(target, source)]


def _cleanup_plan(a, k: int, p: int, r: int, meter: _Meter | None = None) -> list[RowSub]:
    n = len(a)
    frame = ActiveIndexFrame(tuple(c for c in range(1, n + 1) if c != p),
                             tuple(x for x in range(1, n + 1) if x != r))
    col = lambda c: tuple(row[c - 1] for row in a)
    if tuple(tuple(a[x - 1][c - 1] for c in frame.columns) for x in frame.rows) != identity(n - 1):
        raise PreconditionViolation("matrix off the pivot row and column is not the identity")
    if col(p) != tuple(x + (idx == r) for idx, x in enumerate(col(k), 1)):
        raise PreconditionViolation(f"column {p} is not column {k} plus e_{r}")
    pivot = a[r - 1]
    total = pivot[p - 1] + sum(pivot[c - 1] for c in frame.columns if c != k)
    (meter or _Meter(DEFAULT_MAX_OPS)).charge(total)
    partner = dict(zip(frame.columns, frame.rows))
    plan: list[RowSub] = [RowSub(r, partner[k])] * (pivot[p - 1] - 1)
    for c in frame.columns:
        if c != k:
            plan += [RowSub(r, partner[c])] * pivot[c - 1]
    plan.append(RowSub(partner[k], r))
    return plan


def cleanup_rows(t: Triple, k: int, p: int, r: int, max_ops: int | None = DEFAULT_MAX_OPS) -> list[RowSub]:
    """Row subtractions taking a finished quadruple to a permutation matrix.

    Expects the identity on rows other than ``r`` and columns other than
    ``p`` (in label order), and column ``p`` equal to column ``k`` plus
    ``e_r``. Afterwards row ``r`` is ``e_p``; on a full frame with ``p == r``
    the result is the identity. Row dominance depends on A alone, so each
    step is checked on the integer matrix.
    """
    plan = _cleanup_plan(t.A, k, p, r, _Meter(max_ops))
    a = [list(row) for row in t.A]
    for op in plan:
        _row_sub_in_place(a, op)
    return plan


def _is_permutation(a) -> bool:
    return all(sorted(row) == [0] * (len(row) - 1) + [1] for row in a) and \
        all(sum(col) == 1 for col in zip(*a))


def permutation_repair(a) -> tuple[list[RowSwap], dict[int, int]]:
    """Row swaps sending row x of permutation matrix ``a`` to position sigma[x], and sigma."""
    if not _is_permutation(a):
        raise IntegrityError("expected a permutation matrix")
    n = len(a)
    sigma = {x: a[x - 1].index(1) + 1 for x in range(1, n + 1)}
    owner = {c: x for x, c in sigma.items()}
    at = list(range(1, n + 1))
    swaps = []
    for c in range(1, n + 1):
        where = at.index(owner[c]) + 1
        if where != c:
            at[c - 1], at[where - 1] = at[where - 1], at[c - 1]
            swaps.append(RowSwap(c, where))
    return swaps, sigma


def _replay_matrix(a, ops) -> list[list[int]]:
    """Integer replay of A alone, checking row dominance for every RowSub."""
    a = [list(row) for row in a]
    for op in ops:
        if isinstance(op, RowSub):
            _row_sub_in_place(a, op)
        elif isinstance(op, RowSwap):
            a[op.i - 1], a[op.j - 1] = a[op.j - 1], a[op.i - 1]
        elif isinstance(op, ColAdd):
            for row in a:
                row[op.target - 1] += row[op.source - 1]
        else:
            raise IntegrityError(f"unexpected {op} in an assembled script")
    return a


def _finish(t: Triple, phase1: list, phase2: list, final) -> OpScript:
    # phase 1 ops were applied with full permissibility checks while being built
    swaps, sigma = permutation_repair(final)
    phase2 = [RowSub(sigma[op.target], sigma[op.source]) for op in phase2]
    script = OpScript(tuple(phase1) + tuple(swaps), tuple(phase2))
    if _replay_matrix(t.A, script.ops()) != [list(row) for row in identity(t.n)]:
        raise IntegrityError("assembled script does not end at the identity")
    return script


def base_case_2x2(t: Triple, max_ops: int | None = DEFAULT_MAX_OPS) -> OpScript:
    """Subtractive Euclid on the rows of a 2x2 triple, plus one swap if it ends anti-diagonal."""
    return _base_case(t, _Meter(max_ops))


def _base_case(t: Triple, meter: _Meter) -> OpScript:
    if t.n != 2:
        raise PreconditionViolation("base case needs a 2x2 triple")
    rows = [list(t.A[0]), list(t.A[1])]
    subs = []
    while not _is_permutation(rows):
        meter.charge(1)
        if all(x >= y for x, y in zip(rows[0], rows[1])):
            subs.append(RowSub(1, 2))
            rows[0] = [x - y for x, y in zip(rows[0], rows[1])]
        elif all(x >= y for x, y in zip(rows[1], rows[0])):
            subs.append(RowSub(2, 1))
            rows[1] = [x - y for x, y in zip(rows[1], rows[0])]
        else:
            raise IntegrityError(f"2x2 rows {rows} are incomparable; matrix cannot be unimodular")
    return _finish(t, [], subs, rows)


def _pivot_frame(n: int, r: int) -> ActiveIndexFrame:
    return ActiveIndexFrame(tuple(range(1, n + 1)), (r,) + tuple(x for x in range(1, n + 1) if x != r))


def choose_pivot_row(t: Triple, max_ops: int | None = DEFAULT_MAX_OPS) -> int:
    """Row whose unit pair is reached with the smallest matrix entries.

    The choice of pivot row changes the growth of A by orders of magnitude,
    and the row subtractions needed later scale with the entries. Every row
    is tried under a shared op budget that grows until at least one finishes;
    ties go to the lower row.
    """
    return _choose_pivot_row(t, _Meter(max_ops))


def _choose_pivot_row(t: Triple, meter: _Meter) -> int:
    n = t.n
    budget = PIVOT_TRIAL_BUDGET
    while True:
        left = meter.remaining()
        if left is not None:
            budget = min(budget, left)
        best = None
        for r in range(1, n + 1):
            try:
                ops, end, _, _ = make_unit_pair(t, _pivot_frame(n, r), budget=budget)
            except _OverBudget:
                continue
            meter.charge(len(ops))
            size = max(max(row) for row in end.A)
            if best is None or size < best[0]:
                best = (size, r)
        if best is not None:
            return best[1]
        meter.charge(n * budget)
        budget *= 4


def factorize(t: Triple, log: FactorizationLog | None = None,
              max_ops: int | None = DEFAULT_MAX_OPS) -> OpScript:
    """Two-phase script whose replay on ``t`` ends at the identity matrix.

    ``max_ops`` bounds the total work (elementary ops applied at every level
    of the recursion, pivot-row trials included); ``None`` removes the bound.
    Raises BudgetExceeded when the bound is hit.
    """
    return _factorize(t, log, _Meter(max_ops))


def _factorize(t: Triple, log: FactorizationLog | None, meter: _Meter) -> OpScript:
    n = t.n
    if n == 1 or t.is_identity():
        return OpScript()
    if n == 2:
        return _base_case(t, meter)
    r = _choose_pivot_row(t, meter)
    frame = _pivot_frame(n, r)
    try:
        phase1, t1, i, j = make_unit_pair(t, frame, log, budget=meter.remaining())
    except _OverBudget:
        meter.charge(meter.remaining() + 1)
    meter.charge(len(phase1))
    q = Quadruple(t1, pivot_col=i, pivot_row=r, unit_col=j)
    sub, sub_frame = project_quadruple(q, log)
    sub_script = _factorize(sub, log, meter)

    sub_t = sub
    for op in sub_script.phase1:
        lifted = lift_sub_op(q, op)
        meter.charge(len(lifted))
        q = q.advance(lifted)
        sub_t = apply_op(sub_t, op)
        if restrict(q.triple, sub_frame) != sub_t.A:
            raise IntegrityError(f"lifting {op} broke the projection")
        _check_projection(q, sub_t)
        phase1 += lifted

    # phase 2 only needs A: row dominance is a property of the integer matrix
    meter.charge(len(sub_script.phase2))
    a = [list(row) for row in q.triple.A]
    phase2: list[RowSub] = []
    for op in sub_script.phase2:
        (lifted,) = lift_sub_op(q, op)
        _row_sub_in_place(a, lifted)
        phase2.append(lifted)
    for op in _cleanup_plan(a, q.unit_col, q.pivot_col, q.pivot_row, meter):
        _row_sub_in_place(a, op)
        phase2.append(op)
    return _finish(t, phase1, phase2, a)


def beta_trace(t: Triple, script: OpScript) -> list[int]:
    """beta of pivot row 1 before the first op and after each op."""
    trace, end = replay_trace(t, script)
    return [beta_of(state.B) for state, _ in trace] + [beta_of(end.B)]


def to_column_subtraction_script(t: Triple, s: OpScript) -> OpScript:
    """Replace the row-subtraction phase by column subtractions reaching the identity.

    If ``E_m ... E_1 A_s = I`` then ``A_s E_m ... E_1 = I``; right
    multiplication by the factor of ``RowSub(target, source)`` subtracts
    column ``target`` from column ``source``.
    """
    if s.phase2_kind != "RowSub":
        raise PreconditionViolation("script already uses column subtractions")
    phase2 = tuple(ColSub(op.source, op.target) for op in reversed(s.phase2))
    out = OpScript(s.phase1, phase2, "ColSub", s.diagnostics)
    try:
        trace, end = replay_trace(t, out)
    except MonofactError as exc:
        raise ConversionCheckFailed(f"converted script does not replay: {exc}") from exc
    if not end.is_identity():
        raise ConversionCheckFailed("converted script does not end at the identity")
    if any(x < 0 for state, _ in trace for row in state.A for x in row):
        raise ConversionCheckFailed("intermediate matrix has a negative entry")
    return out
