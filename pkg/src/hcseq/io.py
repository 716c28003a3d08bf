"""JSON encodings of lattices, sequences, truncated tables and classifications."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Union

from .errors import FormatError, LatticeMismatch
from .lattice import Lattice, SplittingPair, lattice_from_json, lattice_to_json
from .sequences import SequencePresentation, TruncatedTable, table_from_values
from .upsets import UpwardClosedSet

LatticeRef = Union[str, dict]


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)


def lattice_ref(lattice: Lattice, name: Optional[str] = None) -> LatticeRef:
    return name if name is not None else lattice_to_json(lattice)


def _resolve_lattice(data: dict, lattice: Optional[Lattice]) -> Lattice:
    if "lattice" in data and data["lattice"] is not None:
        own = lattice_from_json(data["lattice"])
        if lattice is not None and own != lattice:
            raise LatticeMismatch("file refers to a different lattice than the one given")
        return lattice if lattice is not None else own
    if lattice is None:
        raise FormatError("no lattice given and the file does not name one")
    return lattice


def sequence_to_json(p: SequencePresentation, ref: Optional[LatticeRef] = None, with_lattice: bool = True) -> dict:
    out: dict = {}
    if with_lattice:
        out["lattice"] = ref if ref is not None else lattice_to_json(p.lattice)
    out["levels"] = {p.lattice.elements[x]: lv.to_json() for x, lv in enumerate(p.levels)}
    return out


def sequence_from_json(data: Any, lattice: Optional[Lattice] = None) -> SequencePresentation:
    if not isinstance(data, dict) or "levels" not in data:
        raise FormatError("sequence JSON needs a 'levels' object")
    l = _resolve_lattice(data, lattice)
    levels = data["levels"]
    if not isinstance(levels, dict):
        raise FormatError("'levels' must map element ids to upward closed sets")
    unknown = set(levels) - set(l.elements)
    if unknown:
        raise FormatError(f"levels mention unknown elements {sorted(unknown)}")
    missing = [e for e in l.elements if e not in levels]
    if missing:
        raise FormatError(f"levels missing for elements {missing}")
    return SequencePresentation(l, [UpwardClosedSet.from_json(levels[e]) for e in l.elements])


def table_to_json(t: TruncatedTable, ref: Optional[LatticeRef] = None) -> dict:
    return {
        "lattice": ref if ref is not None else lattice_to_json(t.lattice),
        "T": t.T,
        "values": [
            {"vector": list(a), "value": t.lattice.elements[x]}
            for a, x in sorted(t.values.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        ],
    }


def table_from_json(data: Any, lattice: Optional[Lattice] = None) -> TruncatedTable:
    if not isinstance(data, dict) or "T" not in data or "values" not in data:
        raise FormatError("truncated-table JSON needs 'T' and 'values'")
    l = _resolve_lattice(data, lattice)
    try:
        rows = [(row["vector"], row["value"]) for row in data["values"]]
        T = int(data["T"])
    except (TypeError, KeyError, ValueError):
        raise FormatError("table rows must be objects with 'vector' and 'value'") from None
    return table_from_values(l, T, rows)


def load_sequence_like(data: Any, lattice: Optional[Lattice] = None) -> Union[SequencePresentation, TruncatedTable]:
    """A sequence file holds either a level family or a truncated table."""
    if isinstance(data, dict) and "T" in data:
        return table_from_json(data, lattice)
    return sequence_from_json(data, lattice)


def pair_to_json(l: Lattice, pair: SplittingPair) -> list[str]:
    return list(pair.labels(l))


def classification_to_json(c, ref: Optional[LatticeRef] = None) -> dict:
    out: dict = {
        "lattice": ref if ref is not None else lattice_to_json(c.lattice),
        "verdict": c.verdict,
        "method": c.method,
    }
    if c.cap is not None:
        out["cap"] = c.cap
    if c.pair is not None:
        out["pair"] = pair_to_json(c.lattice, c.pair)
    if c.sequences is not None:
        out["count"] = len(c.sequences)
        out["sequences"] = [sequence_to_json(p, with_lattice=False) for p in c.sequences]
    return out


def classification_sequences(data: dict, lattice: Optional[Lattice] = None) -> list[SequencePresentation]:
    """Re-read the sequences of a classification object."""
    l = _resolve_lattice(data, lattice)
    return [sequence_from_json(s, l) for s in data.get("sequences", [])]
