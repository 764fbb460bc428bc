"""
Exact JSON file formats and tabular output.

Rationals are written as reduced "p/q" strings everywhere; canonical files are JSON with sorted
keys and 2-space indentation, so serialize(parse(text)) == text for canonical input.
"""

import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Optional, TypeVar

import pandas as pd

from .errors import EulerCalcError, ParseError
from .models import (
    ConstructibleFunction,
    DirectionProbe,
    GeometricComplex,
    QuadricProbe,
    SymMatrix,
)
from .rational import format_rational, to_point, to_rational
from .step_function import StepFunction

logger = logging.getLogger(__name__)

T = TypeVar("T")

_WHITESPACE = re.compile(r"[ \t\n\r]*")
_PATH_STEP = re.compile(r"([A-Za-z_]+)|\[(\d+)\]")


def dumps_canonical(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    """json.loads with ParseError carrying the line and column of the failure."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e.msg}", line=e.lineno, column=e.colno)


def read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e.strerror}")


def _skip(text: str, pos: int) -> int:
    return _WHITESPACE.match(text, pos).end()


def _member_offset(text: str, start: int, step) -> Optional[int]:
    """Offset of member `step` (a key or a list index) of the container opening at start."""
    opening = text[start]
    if opening not in "{[" or isinstance(step, str) != (opening == "{"):
        return None
    decoder = json.JSONDecoder()
    pos = _skip(text, start + 1)
    position = 0
    while text[pos] not in "}]":
        if opening == "{":
            key, pos = decoder.raw_decode(text, pos)
            pos = _skip(text, _skip(text, pos) + 1)
            if key == step:
                return pos
        elif position == step:
            return pos
        _, pos = decoder.raw_decode(text, pos)
        pos = _skip(text, pos)
        if text[pos] == ",":
            pos = _skip(text, pos + 1)
        position += 1
    return None


def locate(text: str, where: str) -> tuple[int, int]:
    """
    (line, column) of the value at a path like "simplices[2].weight" in well-formed JSON text.

    Steps that do not resolve (a missing key, a label such as "function") leave the location at
    the innermost container reached.
    """
    pos = _skip(text, 0)
    for key, index in _PATH_STEP.findall(where):
        child = _member_offset(text, pos, key or int(index))
        if child is None:
            break
        pos = child
    line = text.count("\n", 0, pos) + 1
    return line, pos - text.rfind("\n", 0, pos)


def _located(text: str, parse: Callable[[Any], T]) -> T:
    """Run a payload parser on text, pinning semantic errors to the offending value."""
    payload = loads(text)
    try:
        return parse(payload)
    except ParseError as e:
        if e.line is not None or e.where is None:
            raise
        line, column = locate(text, e.where)
        raise ParseError(e.detail, line=line, column=column, where=e.where) from e


def _field(payload: dict, key: str, where: str) -> Any:
    if not isinstance(payload, dict) or key not in payload:
        raise ParseError(f"{where}: missing field {key!r}", where=where)
    return payload[key]


def _rational(value: Any, where: str) -> Fraction:
    try:
        return to_rational(value)
    except ValueError as e:
        raise ParseError(f"{where}: {e}", where=where)


def _point(values: Any, where: str) -> tuple[Fraction, ...]:
    if not isinstance(values, list):
        raise ParseError(f"{where}: expected a list of rationals", where=where)
    return tuple(_rational(v, f"{where}[{k}]") for k, v in enumerate(values))


def _integer(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer, got {value!r}", where=where)
    return value


def _rationals(values: Iterable[Fraction]) -> list[str]:
    return [format_rational(v) for v in values]


# Constructible functions

def function_to_payload(f: ConstructibleFunction) -> dict:
    return {
        "ambient_coeff": f.ambient_coeff,
        "ambient_dim": f.ambient_dim,
        "simplices": [
            {"vertices": list(simplex), "weight": f.weights.get(index, 0)}
            for index, simplex in enumerate(f.complex.simplices)
        ],
        "vertices": [_rationals(v) for v in f.complex.vertices],
    }


def function_from_payload(payload: dict) -> ConstructibleFunction:
    n = _integer(_field(payload, "ambient_dim", "function"), "ambient_dim")
    vertices = [
        _point(v, f"vertices[{i}]") for i, v in enumerate(_field(payload, "vertices", "function"))
    ]
    simplices = []
    weights = {}
    for i, entry in enumerate(_field(payload, "simplices", "function")):
        where = f"simplices[{i}]"
        indices = _field(entry, "vertices", where)
        if not isinstance(indices, list) or not indices:
            raise ParseError(f"{where}: expected a nonempty list of vertex indices", where=where)
        simplices.append(tuple(_integer(j, f"{where}.vertices[{k}]") for k, j in enumerate(indices)))
        weights[i] = _integer(entry.get("weight", 1), f"{where}.weight")
    coeff = _integer(payload.get("ambient_coeff", 0), "ambient_coeff")
    try:
        complex = GeometricComplex(n, tuple(vertices), tuple(simplices))
    except EulerCalcError as e:
        raise ParseError(e.message, where="simplices")
    logger.debug(f"Parsed function on R^{n} with {len(simplices)} simplices")
    return ConstructibleFunction(complex, weights, coeff)


def parse_function(text: str) -> ConstructibleFunction:
    return _located(text, function_from_payload)


def serialize_function(f: ConstructibleFunction) -> str:
    return dumps_canonical(function_to_payload(f))


# Step functions

def step_function_to_payload(curve: StepFunction) -> dict:
    return {
        "breakpoints": _rationals(curve.breakpoints),
        "value_at_minus_inf": curve.values[0],
        "values": list(curve.values[1:]),
    }


def step_function_from_payload(payload: dict) -> StepFunction:
    breakpoints = _point(_field(payload, "breakpoints", "step function"), "breakpoints")
    first = _integer(_field(payload, "value_at_minus_inf", "step function"), "value_at_minus_inf")
    rest = [
        _integer(v, f"values[{k}]") for k, v in enumerate(_field(payload, "values", "step function"))
    ]
    try:
        return StepFunction(breakpoints, (first, *rest))
    except EulerCalcError as e:
        raise ParseError(e.message, where="breakpoints")


def parse_step_function(text: str) -> StepFunction:
    return _located(text, step_function_from_payload)


def serialize_step_function(curve: StepFunction) -> str:
    return dumps_canonical(step_function_to_payload(curve))


# Batch inputs

def directions_from_payload(payload: dict) -> list[DirectionProbe]:
    directions = []
    for i, entry in enumerate(_field(payload, "directions", "directions file")):
        where = f"directions[{i}]"
        try:
            directions.append(DirectionProbe(_point(entry, where)))
        except ParseError:
            raise
        except EulerCalcError as e:
            raise ParseError(f"{where}: {e.message}", where=where)
    return directions


def parse_directions(text: str) -> list[DirectionProbe]:
    return _located(text, directions_from_payload)


def serialize_directions(directions: Iterable[DirectionProbe]) -> str:
    return dumps_canonical({"directions": [_rationals(d.nu) for d in directions]})


def probe_from_payload(payload: dict, where: str = "probe") -> QuadricProbe:
    rows = _field(payload, "A", where)
    if not isinstance(rows, list):
        raise ParseError(f"{where}.A: expected a list of rows", where=f"{where}.A")
    try:
        A = SymMatrix(tuple(_point(row, f"{where}.A[{r}]") for r, row in enumerate(rows)))
        return QuadricProbe(A, _point(_field(payload, "v", where), f"{where}.v"),
                            _rational(_field(payload, "t", where), f"{where}.t"))
    except ParseError:
        raise
    except EulerCalcError as e:
        raise ParseError(f"{where}: {e.message}", where=where)


def probes_from_payload(payload: dict) -> list[QuadricProbe]:
    entries = _field(payload, "probes", "probes file")
    return [probe_from_payload(entry, f"probes[{i}]") for i, entry in enumerate(entries)]


def parse_probes(text: str) -> list[QuadricProbe]:
    return _located(text, probes_from_payload)


def serialize_probes(probes: Iterable[QuadricProbe]) -> str:
    return dumps_canonical({"probes": [
        {"A": [_rationals(row) for row in p.A.entries], "t": format_rational(p.t), "v": _rationals(p.v)}
        for p in probes
    ]})


def pairs_from_payload(payload: dict) -> list[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]:
    entries = _field(payload, "pairs", "pairs file")
    return [
        (_point(_field(e, "x", f"pairs[{i}]"), f"pairs[{i}].x"),
         _point(_field(e, "x_prime", f"pairs[{i}]"), f"pairs[{i}].x_prime"))
        for i, e in enumerate(entries)
    ]


def parse_pairs(text: str) -> list[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]:
    return _located(text, pairs_from_payload)


def serialize_pairs(pairs) -> str:
    return dumps_canonical({"pairs": [{"x": _rationals(x), "x_prime": _rationals(y)} for x, y in pairs]})


def parse_queries(text: str) -> list[Fraction]:
    return _located(
        text, lambda payload: list(_point(_field(payload, "queries", "queries file"), "queries"))
    )


def serialize_queries(queries: Iterable[Fraction]) -> str:
    return dumps_canonical({"queries": _rationals(queries)})


def matrix_from_payload(rows: Any) -> SymMatrix:
    if not isinstance(rows, list):
        raise ParseError("matrix: expected a list of rows", where="matrix")
    try:
        return SymMatrix(tuple(_point(row, f"[{r}]") for r, row in enumerate(rows)))
    except ParseError:
        raise
    except EulerCalcError as e:
        raise ParseError(e.message, where="matrix")


def parse_matrix(text: str) -> SymMatrix:
    """A bare JSON matrix [[r, ...], ...], as given to --kernel quadric_fixedA."""
    return _located(text, matrix_from_payload)


# Output

def records_to_lines(records: Iterable[dict]) -> str:
    """One compact JSON object per line, keys sorted."""
    return "".join(json.dumps(r, sort_keys=True, ensure_ascii=False) + "\n" for r in records)


def curve_rows(label: str, curve: StepFunction) -> list[dict]:
    """Tabular form of a curve: one row for (-inf) and one per breakpoint."""
    rows = [{"record": label, "breakpoint": "-inf", "value": curve.values[0]}]
    for t, value in zip(curve.breakpoints, curve.values[1:]):
        rows.append({"record": label, "breakpoint": format_rational(t), "value": value})
    return rows


def rows_to_csv(rows: list[dict], plot: bool = False, columns: Optional[list[str]] = None) -> str:
    """pandas CSV of exact rows; plot=True adds an approximate float column `t_approx`."""
    df = pd.DataFrame(rows, columns=columns)
    if plot and "breakpoint" in df.columns:
        df["t_approx"] = [
            float("-inf") if b == "-inf" else float(to_rational(b)) for b in df["breakpoint"]
        ]
        df["approximate"] = True
    return df.to_csv(index=False, lineterminator="\n")


def load_function(path) -> ConstructibleFunction:
    return parse_function(read_text(path))


def point_payload(point) -> list[str]:
    return _rationals(to_point(point))
