"""Random instances, an exhaustive search oracle, and a trace auditor."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (
    ColAdd,
    ElementaryOp,
    OpScript,
    RowSub,
    RowSwap,
    Triple,
    apply_op,
    audit_triple,
    beta_of,
    identity,
    is_permissible,
    is_star_allowable,
)
from .errors import MonofactError
from .exactreal import radical

RNG_ALGORITHM = "numpy.PCG64"

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    steps: int
    seed: int
    entry_cap: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.n > len(PRIMES):
            raise ValueError(f"n must be at most {len(PRIMES)}")
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _row_add(t: Triple, target: int, source: int) -> Triple:
    """Inverse of RowSub(target, source): row target += row source, v[target] += v[source]."""
    A = [list(row) for row in t.A]
    B = [list(row) for row in t.B]
    v = list(t.v)
    i, j = source - 1, target - 1
    A[j] = [x + y for x, y in zip(A[j], A[i])]
    for row in B:
        row[i] -= row[j]
    v[j] = v[j] + v[i]
    return Triple(tuple(map(tuple, A)), tuple(map(tuple, B)), tuple(v), t.w)


def identity_triple(v) -> Triple:
    n = len(v)
    return Triple(identity(n), identity(n), tuple(v), tuple(v))


def gen_random_triple(cfg: GeneratorConfig) -> Triple:
    """Scramble the identity triple by random permissible column additions and row additions.

    ``v_i = q_i * sqrt(p_i)`` for the first n primes and random rationals
    ``q_i`` in [1, 4] with denominators up to 4. Both scrambling moves are
    undone by operations of the factorization alphabet.
    """
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    n = cfg.n
    v = []
    for p in PRIMES[:n]:
        den = int(rng.integers(1, 5))
        num = int(rng.integers(den, 4 * den + 1))
        v.append(radical(Fraction(num, den), p))
    t = identity_triple(v)
    if n == 1:
        return t
    done = attempts = 0
    while done < cfg.steps and attempts < 20 * cfg.steps + 20:
        attempts += 1
        i, j = (int(x) + 1 for x in rng.choice(n, size=2, replace=False))
        if rng.random() < 0.5:
            op = ColAdd(i, j)
            cand = apply_op(t, op if is_permissible(t, op) else ColAdd(j, i))
        else:
            cand = _row_add(t, i, j)
        if cfg.entry_cap is not None and max(max(row) for row in cand.A) > cfg.entry_cap:
            continue
        t = cand
        done += 1
    return t


def _phase1_moves(t: Triple):
    n = t.n
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            op = ColAdd(i, j)
            yield op if is_permissible(t, op) else ColAdd(j, i)
            yield RowSwap(i, j)


def _phase2_moves(t: Triple):
    n = t.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                op = RowSub(i, j)
                if is_permissible(t, op):
                    yield op


def bfs_factor(t: Triple, max_depth: int) -> OpScript | None:
    """Shortest two-phase script reaching the identity, by breadth-first search.

    Search states are ``(A, v, phase)``; ``w`` follows from them. Phase 1
    expands ColAdd/RowSwap moves, and every state may also switch to phase 2,
    which expands RowSub moves only. The switch costs nothing.
    """
    if t.is_identity():
        return OpScript()
    start = (t.A, t.v, 1)
    parent: dict = {start: None}
    states = {start: t}
    frontier = deque([start])
    for depth in range(max_depth):
        nxt = deque()
        while frontier:
            key = frontier.popleft()
            state = states[key]
            phase = key[2]
            moves = []
            if phase == 1:
                moves += [(op, 1) for op in _phase1_moves(state)]
            moves += [(op, 2) for op in _phase2_moves(state)]
            for op, new_phase in moves:
                child = apply_op(state, op)
                ck = (child.A, child.v, new_phase)
                if ck in parent:
                    continue
                parent[ck] = (key, op)
                states[ck] = child
                if child.is_identity():
                    return _unwind(parent, ck)
                nxt.append(ck)
        frontier = nxt
    return None


def _unwind(parent, key) -> OpScript:
    ops = []
    while parent[key] is not None:
        key, op = parent[key]
        ops.append(op)
    ops.reverse()
    phase1 = [op for op in ops if not isinstance(op, RowSub)]
    phase2 = [op for op in ops if isinstance(op, RowSub)]
    return OpScript(phase1, phase2)


@dataclass
class AuditReport:
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None

    def fail(self, step: int, message: str) -> None:
        self.failures.append((step, message))


def invariant_audit(trace: list[tuple[Triple, ElementaryOp]]) -> AuditReport:
    """Check permissibility and every triple invariant at each step of a trace.

    Also checks that consecutive states are linked by the recorded op and that
    beta does not grow across a *-allowable column addition.
    """
    report = AuditReport()
    for k, (state, op) in enumerate(trace):
        report.checks += 1
        for problem in audit_triple(state):
            report.fail(k, f"state: {problem}")
        try:
            ok = is_permissible(state, op)
        except MonofactError as exc:
            report.fail(k, f"{op}: {exc}")
            continue
        if not ok:
            report.fail(k, f"{op} is not permissible")
            continue
        after = apply_op(state, op)
        for problem in audit_triple(after):
            report.fail(k, f"after {op}: {problem}")
        if isinstance(op, ColAdd) and is_star_allowable(state, op):
            if beta_of(after.B) > beta_of(state.B):
                report.fail(k, f"beta grew across *-allowable {op}")
        if k + 1 < len(trace) and trace[k + 1][0] != after:
            report.fail(k, f"next recorded state does not follow from {op}")
    return report
