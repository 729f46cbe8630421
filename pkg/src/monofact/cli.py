"""Command line interface and file formats.

Instance, script and diagram files are JSON documents with a ``format``
tag. Every number on disk is a decimal string (rationals as ``p/q``), so
files round-trip exactly; output is canonical (sorted keys, fixed
indentation) and re-parses to the identical bytes.

Exit codes: 0 success, 2 invalid input, 3 verification failure,
4 internal integrity error, 5 work budget exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .core import (
    OP_KINDS,
    ElementaryOp,
    OpScript,
    Triple,
    beta_of,
    build_triple,
    replay_trace,
)
from .errors import (
    BudgetExceeded,
    DomainError,
    IndependenceRisk,
    IndependenceViolation,
    IntegrityError,
    InvalidInput,
    MonofactError,
    ParseError,
    PreconditionViolation,
    VerificationFailure,
)
from .exactreal import DecimalScalar, RadicalScalar, Scalar
from .factorizer import DEFAULT_MAX_OPS, FactorizationLog, factorize, to_column_subtraction_script
from .geometry import (
    BlowupStep,
    FactorizationDiagram,
    MonomialExpr,
    ParameterFrame,
    translate,
    verify_diagram,
)
from .testkit import RNG_ALGORITHM, GeneratorConfig, gen_random_triple

INSTANCE_FORMAT = "monofact-instance/1"
SCRIPT_FORMAT = "monofact-script/1"
DIAGRAM_FORMAT = "monofact-diagram/1"

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_INTEGRITY, EXIT_BUDGET = 0, 2, 3, 4, 5

_OP_RE = re.compile(r"^(ColAdd|RowSub|RowSwap|ColSub)\((\d+),(\d+)\)$")
_DECIMAL_RE = re.compile(r"^[+-]?\d+(\.\d+)?$")


# ---------------------------------------------------------------------------
# canonical text
# ---------------------------------------------------------------------------

def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def _digest(doc: dict) -> str:
    compact = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(compact.encode("utf-8")).hexdigest()


def _reject_float(text: str):
    raise ParseError(f"binary floating-point number {text} is not allowed; use a decimal string")


def _load(text: str) -> Any:
    try:
        return json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None


def _fields(obj, path: str, required: Sequence[str], optional: Sequence[str] = ()) -> dict:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", path)
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise ParseError(f"unknown field(s) {', '.join(unknown)}", path)
    missing = [k for k in required if k not in obj]
    if missing:
        raise ParseError(f"missing field(s) {', '.join(missing)}", path)
    return obj


def _list(obj, path: str) -> list:
    if not isinstance(obj, list):
        raise ParseError("expected a list", path)
    return obj


def _int(obj, path: str) -> int:
    if isinstance(obj, bool):
        raise ParseError("expected an integer", path)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str) and re.fullmatch(r"[+-]?\d+", obj):
        return int(obj)
    raise ParseError(f"expected an integer, got {obj!r}", path)


def _rational(obj, path: str) -> Fraction:
    if isinstance(obj, int) and not isinstance(obj, bool):
        return Fraction(obj)
    if isinstance(obj, str) and re.fullmatch(r"[+-]?\d+(/\d+)?", obj):
        try:
            return Fraction(obj)
        except ZeroDivisionError:
            pass
    raise ParseError(f"expected a rational string like '3/4', got {obj!r}", path)


def _decimal(obj, path: str) -> Fraction:
    if isinstance(obj, str) and _DECIMAL_RE.fullmatch(obj):
        try:
            return Fraction(Decimal(obj))
        except InvalidOperation:
            pass
    raise ParseError(f"expected a decimal string like '1.25', got {obj!r}", path)


def _fraction_text(q: Fraction) -> str:
    return str(q)


def _decimal_text(q: Fraction) -> str:
    """Exact decimal form when one exists, else ``p/q``."""
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return str(q)
    places = max(twos, fives)
    digits = abs(q.numerator) * 10 ** places // q.denominator
    sign = "-" if q < 0 else ""
    whole, frac = divmod(digits, 10 ** places) if places else (digits, 0)
    return f"{sign}{whole}" + (f".{frac:0{places}d}".rstrip("0") if places else "")


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InstanceFile:
    n: int
    matrix: tuple[tuple[int, ...], ...]
    mode: str
    valuation: tuple[Scalar, ...]
    triple: Triple
    generator: dict | None = None

    def document(self) -> dict:
        if self.mode == "radical":
            coords = [[{"coefficient": _fraction_text(c), "radicand": str(d)} for d, c in x.terms]
                      for x in self.valuation]
        else:
            coords = []
            for x in self.valuation:
                ((value, radius), coeff), = x.terms
                if coeff != 1:
                    raise IntegrityError("decimal coordinates must be plain measurements")
                coords.append({"value": _decimal_text(value), "tolerance": _decimal_text(radius)})
        doc = {
            "format": INSTANCE_FORMAT,
            "n": str(self.n),
            "matrix": [[str(x) for x in row] for row in self.matrix],
            "valuation": {"mode": self.mode, "coordinates": coords},
        }
        if self.generator is not None:
            doc["generator"] = self.generator
        return doc

    @property
    def digest(self) -> str:
        return _digest(self.document())


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        pivot = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def check_independence(values: Sequence[RadicalScalar]) -> None:
    """Raise IndependenceRisk unless the coordinates are rationally independent.

    Square roots of distinct squarefree integers are independent over Q, so
    this is an exact rank test on coefficient vectors. The simplest failure
    is two single-term coordinates over the same radicand.
    """
    basis = sorted({d for x in values for d in x.radicands})
    rows = [[x.as_dict().get(d, Fraction(0)) for d in basis] for x in values]
    if _rank(rows) < len(values):
        shared = sorted(d for d in basis if sum(1 for x in values if d in x.radicands) > 1)
        hint = f" (radicands shared between coordinates: {shared})" if shared else ""
        raise IndependenceRisk(
            f"valuation coordinates are rationally dependent{hint}; "
            "comparisons may tie. Pass --override-independence to accept")


def _parse_generator(obj, path: str) -> dict:
    g = _fields(obj, path, ("n", "steps", "seed", "rng"), ("entry_cap",))
    out = {k: str(_int(g[k], f"{path}.{k}")) for k in ("n", "steps", "seed")}
    if "entry_cap" in g:
        out["entry_cap"] = str(_int(g["entry_cap"], f"{path}.entry_cap"))
    if not isinstance(g["rng"], str):
        raise ParseError("expected a string", f"{path}.rng")
    out["rng"] = g["rng"]
    return out


def parse_instance(text: str, override_independence: bool = False) -> InstanceFile:
    """Strict parse of an instance document; the triple is built and validated here."""
    doc = _fields(_load(text), "$", ("format", "n", "matrix", "valuation"), ("generator",))
    if doc["format"] != INSTANCE_FORMAT:
        raise ParseError(f"expected {INSTANCE_FORMAT!r}", "format")
    n = _int(doc["n"], "n")
    if n < 1:
        raise ParseError("must be at least 1", "n")
    rows = _list(doc["matrix"], "matrix")
    if len(rows) != n:
        raise ParseError(f"expected {n} rows", "matrix")
    matrix = []
    for r, row in enumerate(rows):
        row = _list(row, f"matrix[{r}]")
        if len(row) != n:
            raise ParseError(f"expected {n} entries", f"matrix[{r}]")
        matrix.append(tuple(_int(x, f"matrix[{r}][{c}]") for c, x in enumerate(row)))
    val = _fields(doc["valuation"], "valuation", ("mode", "coordinates"))
    coords = _list(val["coordinates"], "valuation.coordinates")
    if len(coords) != n:
        raise ParseError(f"expected {n} coordinates", "valuation.coordinates")
    values: list[Scalar] = []
    if val["mode"] == "radical":
        for i, terms in enumerate(coords):
            path = f"valuation.coordinates[{i}]"
            table: dict[int, Fraction] = {}
            for k, term in enumerate(_list(terms, path)):
                tpath = f"{path}[{k}]"
                term = _fields(term, tpath, ("coefficient", "radicand"))
                d = _int(term["radicand"], f"{tpath}.radicand")
                if d < 1:
                    raise ParseError("radicand must be positive", f"{tpath}.radicand")
                table[d] = table.get(d, Fraction(0)) + _rational(term["coefficient"], f"{tpath}.coefficient")
            values.append(RadicalScalar.from_terms(table))
        # canonical form merges like radicands, so re-serialization is stable
        if not override_independence:
            check_independence(values)
    elif val["mode"] == "decimal":
        for i, c in enumerate(coords):
            path = f"valuation.coordinates[{i}]"
            c = _fields(c, path, ("value", "tolerance"))
            value = _decimal(c["value"], f"{path}.value")
            tol = _decimal(c["tolerance"], f"{path}.tolerance")
            if tol < 0:
                raise ParseError("tolerance must be nonnegative", f"{path}.tolerance")
            if value == 0 and tol == 0:
                raise ParseError("coordinate is zero", f"{path}.value")
            values.append(DecimalScalar.measured(value, tol))
    else:
        raise ParseError("mode must be 'radical' or 'decimal'", "valuation.mode")
    generator = _parse_generator(doc["generator"], "generator") if "generator" in doc else None
    triple = build_triple(matrix, values)
    return InstanceFile(n, tuple(matrix), val["mode"], tuple(values), triple, generator)


def instance_from_triple(t: Triple, generator: dict | None = None) -> InstanceFile:
    return InstanceFile(t.n, t.A, "radical", tuple(t.v), t, generator)


# ---------------------------------------------------------------------------
# scripts and diagrams
# ---------------------------------------------------------------------------

def _op_text(op: ElementaryOp) -> str:
    return str(op)


def _parse_op(obj, path: str) -> ElementaryOp:
    m = _OP_RE.fullmatch(obj) if isinstance(obj, str) else None
    if m is None:
        raise ParseError(f"expected an op like 'ColAdd(1,2)', got {obj!r}", path)
    kind, a, b = m.group(1), int(m.group(2)), int(m.group(3))
    if a < 1 or b < 1 or a == b:
        raise ParseError("indices must be distinct and at least 1", path)
    return OP_KINDS[kind](a, b)


def script_document(s: OpScript, digest: str) -> dict:
    doc = {
        "format": SCRIPT_FORMAT,
        "instance_sha256": digest,
        "phase1": [_op_text(op) for op in s.phase1],
        "phase2": [_op_text(op) for op in s.phase2],
        "phase2_kind": s.phase2_kind,
    }
    if s.diagnostics:
        doc["diagnostics"] = s.diagnostics
    return doc


def parse_script(text: str) -> tuple[OpScript, str]:
    return script_from_document(_load(text))


def script_from_document(doc) -> tuple[OpScript, str]:
    doc = _fields(doc, "$", ("format", "instance_sha256", "phase1", "phase2", "phase2_kind"), ("diagnostics",))
    if doc["format"] != SCRIPT_FORMAT:
        raise ParseError(f"expected {SCRIPT_FORMAT!r}", "format")
    if doc["phase2_kind"] not in ("RowSub", "ColSub"):
        raise ParseError("must be 'RowSub' or 'ColSub'", "phase2_kind")
    p1 = [_parse_op(x, f"phase1[{k}]") for k, x in enumerate(_list(doc["phase1"], "phase1"))]
    p2 = [_parse_op(x, f"phase2[{k}]") for k, x in enumerate(_list(doc["phase2"], "phase2"))]
    return OpScript(p1, p2, doc["phase2_kind"], doc.get("diagnostics")), str(doc["instance_sha256"])


def _frame_doc(f: ParameterFrame) -> dict:
    return {"side": f.side, "names": list(f.names),
            "exprs": [[str(e) for e in x.exponents] for x in f.exprs]}


def _step_doc(st: BlowupStep) -> dict:
    return {"side": st.side, "center": list(st.center), "divisor": str(st.divisor),
            "target": str(st.target), "new_name": st.new_name,
            "result": [str(e) for e in st.result.exponents], "op_ref": str(st.op_ref),
            "direction": st.direction, "substitution": st.substitution}


def diagram_document(d: FactorizationDiagram, digest: str) -> dict:
    return {
        "format": DIAGRAM_FORMAT,
        "instance_sha256": digest,
        "base_names": list(d.base_names),
        "x_names": list(d.x_names),
        "s_chain": [_step_doc(st) for st in d.s_chain],
        "r_chain": [_step_doc(st) for st in d.r_chain],
        "final_frame_s": _frame_doc(d.final_frame_s),
        "final_frame_r": _frame_doc(d.final_frame_r),
    }


def _str_list(obj, path: str) -> tuple[str, ...]:
    items = _list(obj, path)
    if not all(isinstance(x, str) for x in items):
        raise ParseError("expected a list of strings", path)
    return tuple(items)


def _parse_frame(obj, path: str) -> ParameterFrame:
    f = _fields(obj, path, ("side", "names", "exprs"))
    exprs = tuple(MonomialExpr(tuple(_int(e, f"{path}.exprs[{k}]") for e in _list(x, f"{path}.exprs[{k}]")))
                  for k, x in enumerate(_list(f["exprs"], f"{path}.exprs")))
    return ParameterFrame(f["side"], _str_list(f["names"], f"{path}.names"), exprs)


def _parse_step(obj, path: str) -> BlowupStep:
    s = _fields(obj, path, ("side", "center", "divisor", "target", "new_name", "result",
                            "op_ref", "direction"), ("substitution",))
    center = _str_list(s["center"], f"{path}.center")
    if len(center) != 2:
        raise ParseError("center must name two parameters", f"{path}.center")
    if s["side"] not in ("R", "S") or s["direction"] not in ("blowup", "inverse", "interchange"):
        raise ParseError("bad side or direction", path)
    result = MonomialExpr(tuple(_int(e, f"{path}.result") for e in _list(s["result"], f"{path}.result")))
    return BlowupStep(s["side"], center, _int(s["divisor"], f"{path}.divisor"),
                      _int(s["target"], f"{path}.target"), str(s["new_name"]), result,
                      _int(s["op_ref"], f"{path}.op_ref"), s["direction"])


def diagram_from_document(doc, base_matrix) -> tuple[FactorizationDiagram, str]:
    doc = _fields(doc, "$", ("format", "instance_sha256", "base_names", "x_names", "s_chain",
                             "r_chain", "final_frame_s", "final_frame_r"))
    if doc["format"] != DIAGRAM_FORMAT:
        raise ParseError(f"expected {DIAGRAM_FORMAT!r}", "format")
    d = FactorizationDiagram(
        tuple(base_matrix),
        _str_list(doc["base_names"], "base_names"),
        _str_list(doc["x_names"], "x_names"),
        tuple(_parse_step(x, f"s_chain[{k}]") for k, x in enumerate(_list(doc["s_chain"], "s_chain"))),
        tuple(_parse_step(x, f"r_chain[{k}]") for k, x in enumerate(_list(doc["r_chain"], "r_chain"))),
        _parse_frame(doc["final_frame_s"], "final_frame_s"),
        _parse_frame(doc["final_frame_r"], "final_frame_r"),
    )
    return d, str(doc["instance_sha256"])


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _diagnostics(t: Triple, s: OpScript, log: FactorizationLog) -> dict:
    trace, end = replay_trace(t, s)
    betas = [beta_of(state.B) for state, _ in trace] + [beta_of(end.B)]
    return {
        "beta_trace": [str(b) for b in betas],
        "collapse_calls": str(len(log.collapses)),
        "beta_reductions": [{"before": str(r.extra["beta_before"]), "after": str(r.extra["beta_after"])}
                            for r in log.reductions],
        "levels": [{"pivot_row": str(q.pivot_row), "pivot_col": str(q.pivot_col), "unit_col": str(q.unit_col),
                    "rows": [str(x) for x in frame.rows], "columns": [str(x) for x in frame.columns]}
                   for q, _, frame in log.projections],
    }


def factor_text(instance_text: str, colsub: bool = False, trace: bool = False,
                override_independence: bool = False, max_ops: int | None = DEFAULT_MAX_OPS) -> str:
    inst = parse_instance(instance_text, override_independence)
    log = FactorizationLog() if trace else None
    s = factorize(inst.triple, log, max_ops=max_ops)
    if trace:
        s = OpScript(s.phase1, s.phase2, s.phase2_kind, _diagnostics(inst.triple, s, log))
    if colsub:
        s = to_column_subtraction_script(inst.triple, s)
    return dumps(script_document(s, inst.digest))


def _factor_job(args) -> tuple[str, int, str]:
    path, out, colsub, trace, override, max_ops = args
    try:
        text = factor_text(_read(path), colsub, trace, override, max_ops)
        Path(out).write_text(text, encoding="utf-8")
        return path, EXIT_OK, out
    except Exception as exc:  # reported per file; the batch keeps going
        return path, _exit_code(exc), str(exc)


def _max_ops(ns) -> int | None:
    return None if ns.max_ops == 0 else ns.max_ops


def _cmd_factor(ns) -> int:
    if len(ns.instances) == 1 and (ns.output is None or not Path(ns.output).is_dir()):
        _write(factor_text(_read(ns.instances[0]), ns.colsub, ns.trace, ns.override_independence,
                           _max_ops(ns)), ns.output)
        return EXIT_OK
    outdir = Path(ns.output) if ns.output else None
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)
    jobs = []
    for path in ns.instances:
        p = Path(path)
        target = (outdir or p.parent) / (p.name.removesuffix(".json") + ".script.json")
        jobs.append((path, str(target), ns.colsub, ns.trace, ns.override_independence, _max_ops(ns)))
    if ns.jobs > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            results = list(pool.map(_factor_job, jobs))
    else:
        results = [_factor_job(j) for j in jobs]
    worst = EXIT_OK
    for path, code, msg in results:
        if code:
            print(f"{path}: {msg}", file=sys.stderr)
        worst = max(worst, code)
    return worst


def _check_digest(inst: InstanceFile, digest: str) -> None:
    if digest != inst.digest:
        raise InvalidInput("file was produced from a different instance (instance_sha256 mismatch)")


def _cmd_translate(ns) -> int:
    inst = parse_instance(_read(ns.instance), ns.override_independence)
    s, digest = parse_script(_read(ns.script))
    _check_digest(inst, digest)
    d = translate(inst.triple, s)
    _write(dumps(diagram_document(d, inst.digest)), ns.output)
    return EXIT_OK


def verify_text(instance_text: str, artifact_text: str, override_independence: bool = False) -> list[str]:
    """Check a script or diagram against its instance; returns failure messages."""
    inst = parse_instance(instance_text, override_independence)
    doc = _load(artifact_text)
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if fmt == DIAGRAM_FORMAT:
        d, digest = diagram_from_document(doc, inst.matrix)
        _check_digest(inst, digest)
        report = verify_diagram(d, inst.triple)
        return [f"{name}: {detail}" if detail else name for name, _, detail in report.failures]
    s, digest = script_from_document(doc)
    _check_digest(inst, digest)
    _, end = replay_trace(inst.triple, s)
    if not end.is_identity():
        return ["script does not end at the identity matrix"]
    return []


def _cmd_verify(ns) -> int:
    failures = verify_text(_read(ns.instance), _read(ns.artifact), ns.override_independence)
    for f in failures:
        print(f"FAIL {f}", file=sys.stderr)
    if failures:
        return EXIT_VERIFY
    print("ok")
    return EXIT_OK


def gen_text(n: int, steps: int, seed: int, entry_cap: int | None = None) -> str:
    cfg = GeneratorConfig(n, steps, seed, entry_cap)
    generator = {"n": str(n), "steps": str(steps), "seed": str(seed), "rng": RNG_ALGORITHM}
    if entry_cap is not None:
        generator["entry_cap"] = str(entry_cap)
    inst = instance_from_triple(gen_random_triple(cfg), generator)
    return dumps(inst.document())


def _cmd_gen(ns) -> int:
    try:
        text = gen_text(ns.n, ns.steps, ns.seed, ns.entry_cap)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    _write(text, ns.output)
    return EXIT_OK


ORACLE_MAX_N = 3


def _cmd_oracle(ns) -> int:
    from .core import replay
    from .testkit import bfs_factor

    inst = parse_instance(_read(ns.instance), ns.override_independence)
    if inst.n > ORACLE_MAX_N:
        raise InvalidInput(f"the search oracle is limited to n <= {ORACLE_MAX_N}")
    t = inst.triple
    found = bfs_factor(t, ns.max_depth)
    ours = factorize(t)
    ours_ok = replay(t, ours).is_identity()
    found_ok = found is not None and replay(t, found).is_identity()
    print(f"search: {'script of length ' + str(len(found)) if found is not None else 'none within depth'}")
    print(f"factorize: script of length {len(ours)}, {'replays to identity' if ours_ok else 'FAILS replay'}")
    return EXIT_OK if ours_ok and found_ok else EXIT_VERIFY


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (InvalidInput, DomainError, IndependenceViolation)):
        return EXIT_INPUT
    if isinstance(exc, VerificationFailure):
        return EXIT_VERIFY
    if isinstance(exc, BudgetExceeded):
        return EXIT_BUDGET
    if isinstance(exc, (IntegrityError, PreconditionViolation, MonofactError)):
        return EXIT_INTEGRITY
    raise exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--override-independence", action="store_true",
                        help="accept radical valuations whose coordinates are rationally dependent")
    parser = argparse.ArgumentParser(prog="monofact", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factor", parents=[common], help="emit a two-phase script")
    p.add_argument("instances", nargs="+")
    p.add_argument("-o", "--output", help="output file, or directory for several instances")
    p.add_argument("--colsub", action="store_true", help="use column subtractions in phase 2")
    p.add_argument("--trace", action="store_true", help="attach beta trace and recursion diagnostics")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for several instances")
    p.add_argument("--max-ops", type=int, default=DEFAULT_MAX_OPS,
                   help="work budget in elementary ops (0 for unlimited); exit 5 when exhausted")
    p.set_defaults(func=_cmd_factor)

    p = sub.add_parser("translate", parents=[common], help="emit the blowup diagram of a script")
    p.add_argument("instance")
    p.add_argument("script")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("verify", parents=[common], help="replay a script or recheck a diagram")
    p.add_argument("instance")
    p.add_argument("artifact")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="emit a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--entry-cap", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("oracle", parents=[common], help="cross-check against exhaustive search (n <= 3)")
    p.add_argument("instance")
    p.add_argument("--max-depth", type=int, default=8)
    p.set_defaults(func=_cmd_oracle)
    return parser


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return ns.func(ns)
    except MonofactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
