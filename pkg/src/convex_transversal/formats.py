"""File formats and random instance generation.

Instance files are line-oriented text; a JSON body (same data, one object) is
accepted as an alternative on parse.  Rational coordinates are always exact
"num/den" strings, never decimals.
"""

from __future__ import annotations

import json
import random
from typing import Optional

from gmpy2 import mpq

from .geom import Instance, VSegment, instance_issues, rat, validate_instance

INSTANCE_HEADER = "convex-transversal-instance v1"


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f" at line {line}" if line else ""
        where += f", column {column}" if column else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


def _format_rat(value: mpq) -> str:
    return f"{value.numerator}/{value.denominator}"


def _parse_rat(token: str, line: int, column: int) -> mpq:
    parts = token.split("/")
    try:
        if len(parts) == 1:
            return mpq(int(parts[0]))
        if len(parts) == 2:
            num, den = int(parts[0]), int(parts[1])
            if den <= 0:
                raise FormatError(f"non-positive denominator in {token!r}", line, column)
            return mpq(num, den)
    except ValueError:
        pass
    raise FormatError(f"malformed rational {token!r}", line, column)


def serialize_instance(instance: Instance) -> str:
    lines = [INSTANCE_HEADER]
    for s in instance.segments:
        lines.append(
            f"segment {_format_rat(s.x)} {_format_rat(s.y_lo)} {_format_rat(s.y_hi)}"
        )
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_instance_json(stripped)
    segments = []
    saw_header = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not saw_header:
            if line != INSTANCE_HEADER:
                raise FormatError(
                    f"expected header {INSTANCE_HEADER!r}, got {line!r}", line_no
                )
            saw_header = True
            continue
        fields = line.split()
        if fields[0] != "segment" or len(fields) != 4:
            raise FormatError(
                "expected 'segment <x> <y_lo> <y_hi>'", line_no
            )
        col = raw.index(fields[1]) + 1
        x = _parse_rat(fields[1], line_no, col)
        y_lo = _parse_rat(fields[2], line_no, raw.index(fields[2]) + 1)
        y_hi = _parse_rat(fields[3], line_no, raw.index(fields[3]) + 1)
        segments.append(VSegment(x, y_lo, y_hi))
    if not saw_header:
        raise FormatError(f"missing header {INSTANCE_HEADER!r}", 1)
    if not segments:
        raise FormatError("instance has no segments", 1)
    return validate_instance(segments)


def _parse_instance_json(text: str) -> Instance:
    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON body: {exc.msg}", exc.lineno, exc.colno)
    try:
        rows = body["segments"]
        segments = [
            VSegment(_parse_rat(str(x), 0, 0), _parse_rat(str(lo), 0, 0), _parse_rat(str(hi), 0, 0))
            for x, lo, hi in rows
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"invalid JSON instance body: {exc}")
    if not segments:
        raise FormatError("instance has no segments")
    return validate_instance(segments)


def gen_random(
    n: int,
    seed: int,
    x_span: Optional[int] = None,
    y_span: Optional[int] = None,
) -> Instance:
    """Random validated instance: integer coordinates, general position.

    Deterministic in (n, seed, spans).  Violations of general position are
    repaired by resampling only the offending segments, so generation
    terminates even at sizes where random collinear triples are expected.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    # Larger instances get a sparser grid so that random collinear triples
    # (and hence repair rounds) stay rare.
    default_span = max(10 * n, 40) if n <= 64 else 100 * n
    x_span = x_span if x_span is not None else default_span
    y_span = y_span if y_span is not None else default_span
    rng = random.Random(seed)
    xs = rng.sample(range(x_span + 1), n)

    def sample_segment(x: int) -> VSegment:
        lo = rng.randint(-y_span, y_span - 1)
        hi = rng.randint(lo + 1, y_span)
        return VSegment.of(x, lo, hi)

    segments = [sample_segment(x) for x in xs]
    for _ in range(200):
        issues = instance_issues(segments)
        if not issues:
            return Instance(segments, _validated=True)
        bad = sorted({sid for issue in issues for sid in issue.segments})
        for sid in bad:
            segments[sid] = sample_segment(int(segments[sid].x))
    raise RuntimeError("random instance generation failed to reach general position")


def parse_sat(text: str):
    """Parse the two-literal clause format: 'p wcnf2 <n> <m>' plus one
    clause per line as two signed 1-based variable numbers."""
    from .hardness import SatInstance

    n_vars = None
    n_clauses = None
    clauses = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "wcnf2":
                raise FormatError("expected header 'p wcnf2 <vars> <clauses>'", line_no)
            try:
                n_vars, n_clauses = int(fields[2]), int(fields[3])
            except ValueError:
                raise FormatError("non-integer counts in header", line_no)
            continue
        if n_vars is None:
            raise FormatError("clause before 'p wcnf2' header", line_no)
        fields = line.split()
        if fields and fields[-1] == "0":
            fields = fields[:-1]
        if len(fields) != 2:
            raise FormatError("expected exactly two literals per clause", line_no)
        lits = []
        for tok in fields:
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"malformed literal {tok!r}", line_no)
            if lit == 0 or abs(lit) > n_vars:
                raise FormatError(f"literal {lit} out of range", line_no)
            lits.append((abs(lit) - 1, lit < 0))
        if lits[0][0] == lits[1][0] and lits[0][1] != lits[1][1]:
            raise FormatError("a clause cannot oppose a variable to itself", line_no)
        clauses.append((lits[0], lits[1]))
    if n_vars is None:
        raise FormatError("missing 'p wcnf2' header", 1)
    if n_clauses is not None and len(clauses) != n_clauses:
        raise FormatError(
            f"header declares {n_clauses} clauses, found {len(clauses)}"
        )
    return SatInstance(n_vars, clauses)


def serialize_sat(sat) -> str:
    lines = [f"p wcnf2 {sat.n} {len(sat.clauses)}"]
    for (v1, neg1), (v2, neg2) in sat.clauses:
        l1 = -(v1 + 1) if neg1 else v1 + 1
        l2 = -(v2 + 1) if neg2 else v2 + 1
        lines.append(f"{l1} {l2}")
    return "\n".join(lines) + "\n"


def serialize_scene(scene) -> str:
    """Scene files are JSON: oriented segments with provenance plus the
    crate/banana/fly metadata needed to re-validate the construction."""
    return json.dumps(scene.to_json(), indent=None, separators=(",", ":")) + "\n"


def parse_scene(text: str):
    from .hardness import GadgetScene

    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON scene: {exc.msg}", exc.lineno, exc.colno)
    return GadgetScene.from_json(body)
