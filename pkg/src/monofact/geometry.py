"""Blowup towers realizing a two-phase script.

Regular parameters are tracked as monomials over the base parameters
``y_1(0), ..., y_n(0)`` of the S-side ring, with ``nu(y_j(0)) = w_j`` for the
starting triple. The R-side parameters start as ``x_i = prod_j y_j^{a_ij}``.

* ``ColAdd(i, j)`` blows up ``(y_i, y_j)`` on the S-side: ``y_j <- y_j / y_i``.
* ``RowSub(j, i)`` blows up ``(x_i, x_j)`` on the R-side: ``x_j <- x_j / x_i``.
* ``RowSwap(i, j)`` exchanges ``x_i`` and ``x_j`` (a relabeling, no blowup).
* ``ColSub(i, j)`` undoes an S-side blowup: ``y_j <- y_j * y_i``.

After every step ``x(l) = A(l) . y(l)`` holds exactly on exponent vectors,
where ``A(l)`` is the matrix of the replayed triple. When the script ends at
the identity the two frames coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

from .core import (
    ColAdd,
    ColSub,
    ElementaryOp,
    Matrix,
    OpScript,
    RowSub,
    RowSwap,
    Triple,
    as_matrix,
    identity,
    mat_vec,
    replay_trace,
    unimodular_inverse,
)
from .errors import MonofactError, ScriptNotTerminal, ValuationOrderViolation
from .exactreal import Scalar, combine

Side = Literal["R", "S"]
Direction = Literal["blowup", "inverse", "interchange"]


@dataclass(frozen=True)
class MonomialExpr:
    """Laurent monomial over the base S-side parameters, as an exponent vector."""

    exponents: tuple[int, ...]

    def __mul__(self, other: "MonomialExpr") -> "MonomialExpr":
        return MonomialExpr(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __truediv__(self, other: "MonomialExpr") -> "MonomialExpr":
        return MonomialExpr(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    @classmethod
    def base(cls, n: int, j: int) -> "MonomialExpr":
        return cls(tuple(int(c == j) for c in range(1, n + 1)))

    def is_polynomial(self) -> bool:
        return all(e >= 0 for e in self.exponents)

    def valuation(self, w0: Sequence[Scalar]) -> Scalar:
        return combine(list(self.exponents), list(w0))

    def render(self, base_names: Sequence[str]) -> str:
        parts = []
        for name, e in zip(base_names, self.exponents):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class ParameterFrame:
    side: Side
    names: tuple[str, ...]
    exprs: tuple[MonomialExpr, ...]

    def exponent_matrix(self) -> Matrix:
        return tuple(e.exponents for e in self.exprs)


@dataclass(frozen=True)
class BlowupStep:
    """One monoidal transform (or its inverse, or a relabeling) in a tower.

    ``center`` names the divisor parameter and the target parameter before
    the step. For a blowup the target becomes ``target / divisor``; for an
    inverse step ``target * divisor``; an interchange swaps the two.
    ``result`` is the new target monomial, kept for auditing.
    """

    side: Side
    center: tuple[str, str]
    divisor: int
    target: int
    new_name: str
    result: MonomialExpr
    op_ref: int
    direction: Direction = "blowup"

    @property
    def substitution(self) -> str:
        d, t = self.center
        if self.direction == "interchange":
            return f"{d} <-> {t}"
        sym = "*" if self.direction == "inverse" else "/"
        return f"{self.new_name} = {t}{sym}{d}"


@dataclass(frozen=True)
class FactorizationDiagram:
    base_matrix: Matrix
    base_names: tuple[str, ...]
    x_names: tuple[str, ...]
    s_chain: tuple[BlowupStep, ...]
    r_chain: tuple[BlowupStep, ...]
    final_frame_s: ParameterFrame
    final_frame_r: ParameterFrame

    @property
    def n(self) -> int:
        return len(self.base_matrix)

    def steps(self) -> list[BlowupStep]:
        """Both chains merged in script order."""
        return sorted(self.s_chain + self.r_chain, key=lambda st: st.op_ref)


def _named(base: str, gen: int) -> str:
    return f"{base}({gen})"


def default_names(n: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    return tuple(f"y{j}" for j in range(1, n + 1)), tuple(f"x{i}" for i in range(1, n + 1))


class _Tower:
    """Mutable frames on both sides while a diagram is built or rechecked."""

    def __init__(self, a0: Matrix, y_names: Sequence[str], x_names: Sequence[str]):
        n = len(a0)
        self.y_base, self.x_base = list(y_names), list(x_names)
        self.y_gen, self.x_gen = [0] * n, [0] * n
        self.y = [MonomialExpr.base(n, j) for j in range(1, n + 1)]
        self.x = [MonomialExpr(tuple(row)) for row in a0]
        self.a = [list(row) for row in a0]

    def y_name(self, j: int) -> str:
        return _named(self.y_base[j - 1], self.y_gen[j - 1])

    def x_name(self, i: int) -> str:
        return _named(self.x_base[i - 1], self.x_gen[i - 1])

    def step(self, op: ElementaryOp, ref: int) -> BlowupStep:
        if isinstance(op, ColAdd):
            d, t = op.target, op.source
            center = (self.y_name(d), self.y_name(t))
            self.y[t - 1] = self.y[t - 1] / self.y[d - 1]
            self.y_gen[t - 1] += 1
            for row in self.a:
                row[d - 1] += row[t - 1]
            return BlowupStep("S", center, d, t, self.y_name(t), self.y[t - 1], ref)
        if isinstance(op, ColSub):
            d, t = op.target, op.source
            center = (self.y_name(d), self.y_name(t))
            self.y[t - 1] = self.y[t - 1] * self.y[d - 1]
            self.y_gen[t - 1] += 1
            for row in self.a:
                row[d - 1] -= row[t - 1]
            return BlowupStep("S", center, d, t, self.y_name(t), self.y[t - 1], ref, "inverse")
        if isinstance(op, RowSub):
            t, d = op.target, op.source
            center = (self.x_name(d), self.x_name(t))
            self.x[t - 1] = self.x[t - 1] / self.x[d - 1]
            self.x_gen[t - 1] += 1
            self.a[t - 1] = [p - q for p, q in zip(self.a[t - 1], self.a[d - 1])]
            return BlowupStep("R", center, d, t, self.x_name(t), self.x[t - 1], ref)
        if isinstance(op, RowSwap):
            i, j = op.i, op.j
            center = (self.x_name(i), self.x_name(j))
            for seq in (self.x, self.x_base, self.x_gen, self.a):
                seq[i - 1], seq[j - 1] = seq[j - 1], seq[i - 1]
            return BlowupStep("R", center, i, j, self.x_name(j), self.x[j - 1], ref, "interchange")
        raise TypeError(f"not an elementary op: {op!r}")

    def frame_identity_holds(self) -> bool:
        """``x_i = prod_j y_j^{a_ij}`` on exponent vectors, with ``a >= 0``."""
        if any(e < 0 for row in self.a for e in row):
            return False
        ys = [e.exponents for e in self.y]
        for row, x in zip(self.a, self.x):
            expected = tuple(sum(c * y[m] for c, y in zip(row, ys)) for m in range(len(ys)))
            if expected != x.exponents:
                return False
        return True

    def frames(self) -> tuple[ParameterFrame, ParameterFrame]:
        n = len(self.y)
        return (ParameterFrame("S", tuple(self.y_name(j) for j in range(1, n + 1)), tuple(self.y)),
                ParameterFrame("R", tuple(self.x_name(i) for i in range(1, n + 1)), tuple(self.x)))


def _op_of(step: BlowupStep) -> ElementaryOp:
    if step.direction == "interchange":
        return RowSwap(step.divisor, step.target)
    if step.side == "S":
        return (ColSub if step.direction == "inverse" else ColAdd)(step.divisor, step.target)
    return RowSub(step.target, step.divisor)


def _divisor_target_values(step: BlowupStep, before: ParameterFrame, w0) -> tuple[Scalar, Scalar]:
    return (before.exprs[step.divisor - 1].valuation(w0), before.exprs[step.target - 1].valuation(w0))


def translate(t0: Triple, s: OpScript, names: Sequence[str] | None = None,
              x_names: Sequence[str] | None = None) -> FactorizationDiagram:
    """Build the S-side and R-side towers for a script that ends at the identity.

    Every blowup is checked against the exact valuation: the divisor must
    have strictly smaller value than the target, so the new parameter has
    positive value.
    """
    n = t0.n
    dy, dx = default_names(n)
    names = tuple(names) if names is not None else dy
    x_names = tuple(x_names) if x_names is not None else dx
    if len(names) != n or len(x_names) != n:
        raise ValueError(f"need {n} parameter names per side")
    try:
        trace, end = replay_trace(t0, s)
    except MonofactError as exc:
        raise ScriptNotTerminal(f"script does not replay: {exc}") from exc
    if not end.is_identity():
        raise ScriptNotTerminal("script does not end at the identity matrix")

    tower = _Tower(t0.A, names, x_names)
    w0 = t0.w
    s_chain, r_chain = [], []
    for ref, (state, op) in enumerate(trace):
        if isinstance(op, (ColAdd, RowSub)):
            side_values = state.w if isinstance(op, ColAdd) else state.v
            d, t = (op.target, op.source) if isinstance(op, ColAdd) else (op.source, op.target)
            if (side_values[t - 1] - side_values[d - 1]).sign() <= 0:
                raise ValuationOrderViolation(f"{op}: divisor value is not below target value")
        st = tower.step(op, ref)
        if st.direction == "blowup" and st.result.valuation(w0).sign() <= 0:
            raise ValuationOrderViolation(f"{op}: new parameter {st.new_name} has nonpositive value")
        (s_chain if st.side == "S" else r_chain).append(st)
    fs, fr = tower.frames()
    if fs.exprs != fr.exprs:
        raise ValuationOrderViolation("final frames do not coincide")
    return FactorizationDiagram(t0.A, names, x_names, tuple(s_chain), tuple(r_chain), fs, fr)


@dataclass
class DiagramReport:
    checks: list = field(default_factory=list)

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, ok, detail))

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c[1]]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_diagram(d: FactorizationDiagram, t0: Triple) -> DiagramReport:
    """Recompute every frame from the base data and check the whole diagram.

    Per step: the recorded result matches the recomputed monomial, the frame
    identity holds with a nonnegative matrix, and valuations order correctly.
    At the end: recorded final frames match, and the two frames coincide.
    Consecutive steps of one kind share a single summary check so the report
    stays readable; any failure is itemized.
    """
    report = DiagramReport()
    n = t0.n
    report.record("base matrix matches instance", as_matrix(d.base_matrix) == t0.A)
    tower = _Tower(t0.A, d.base_names, d.x_names)
    w0 = t0.w
    counts = {"result": 0, "frame identity": 0, "valuation order": 0}
    refs = [st.op_ref for st in d.steps()]
    report.record("op references are distinct and ordered", refs == list(range(len(refs))))
    for st in d.steps():
        before_s, before_r = tower.frames()
        try:
            op = _op_of(st)
            new = tower.step(op, st.op_ref)
        except (TypeError, ValueError, IndexError) as exc:
            report.record(f"step {st.op_ref} is well formed", False, str(exc))
            return report
        if new.result != st.result or new.center != st.center:
            report.record(f"step {st.op_ref} result", False,
                          f"recorded {st.result.exponents}, recomputed {new.result.exponents}")
        else:
            counts["result"] += 1
        if not tower.frame_identity_holds():
            report.record(f"step {st.op_ref} frame identity", False, "x != A y or A has a negative entry")
        else:
            counts["frame identity"] += 1
        if st.direction != "interchange":
            before = before_s if st.side == "S" else before_r
            nu_d, nu_t = _divisor_target_values(st, before, w0)
            after = new.result.valuation(w0)
            if st.direction == "blowup":
                ok = (nu_t - nu_d).sign() > 0 and after.sign() > 0
            else:
                ok = (after - nu_d).sign() > 0
            if ok:
                counts["valuation order"] += 1
            else:
                report.record(f"step {st.op_ref} valuation order", False, f"divisor {nu_d}, target {nu_t}")
    for name, c in counts.items():
        report.record(f"{name} at every step ({c})", True)
    fs, fr = tower.frames()
    report.record("final S frame matches record", fs == d.final_frame_s)
    report.record("final R frame matches record", fr == d.final_frame_r)
    report.record("final frames coincide", fs.exprs == fr.exprs)
    report.record("final matrix is the identity", tower.a == [list(r) for r in identity(n)])
    return report


def base_valuation(a0: Matrix, v: Sequence[Scalar]) -> tuple[Scalar, ...]:
    """``w0 = A0^-1 v``: the values of the base S-side parameters."""
    return mat_vec(unimodular_inverse(a0), v)


def valuation_trace(d: FactorizationDiagram, v: Sequence[Scalar]) -> list[tuple[int, str, Scalar]]:
    """Exact value of every parameter on both sides, before any step and after each.

    Entries are ``(step, name, value)`` with step 0 for the base frames and
    step ``l`` for the frames after the op with index ``l - 1``.
    """
    w0 = base_valuation(d.base_matrix, v)
    tower = _Tower(d.base_matrix, d.base_names, d.x_names)
    out = []

    def snapshot(step: int) -> None:
        fs, fr = tower.frames()
        for frame in (fs, fr):
            for name, e in zip(frame.names, frame.exprs):
                out.append((step, name, e.valuation(w0)))

    snapshot(0)
    for st in d.steps():
        tower.step(_op_of(st), st.op_ref)
        snapshot(st.op_ref + 1)
    return out
