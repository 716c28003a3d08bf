import json

import pytest

from hcseq import io
from hcseq.enumeration import classify
from hcseq.errors import FormatError, LatticeMismatch, UnknownName
from hcseq.lattice import catalog
from hcseq.sequences import b2_sequences, table_from_values


def reparse(data):
    return json.loads(io.dumps(data))


@pytest.mark.parametrize("name", ["B2", "M2", "M3"])
def test_classification_round_trip(name):
    l = catalog(name)
    c = classify(l)
    data = io.classification_to_json(c, name)
    again = reparse(data)
    assert again == data
    assert again["verdict"] == "finite" and again["count"] == len(c.sequences)
    assert io.classification_sequences(again) == c.sequences


def test_infinite_classification_json():
    data = io.classification_to_json(classify(catalog("C3")), "C3")
    assert data["verdict"] == "infinite" and data["pair"] == ["θ", "θ"]
    assert "sequences" not in data and "count" not in data


def test_sequence_round_trip_with_inline_lattice():
    for p in b2_sequences().values():
        data = io.sequence_to_json(p)
        assert io.sequence_from_json(reparse(data)) == p
        assert io.sequence_to_json(io.sequence_from_json(data)) == data


def test_table_round_trip_and_detection():
    b2 = catalog("B2")
    t = table_from_values(b2, 2, [((1, 0), "0"), ((0, 1), "1"), ((2, 0), "0"), ((1, 1), "0"), ((0, 2), "0")])
    data = io.table_to_json(t, "B2")
    back = io.load_sequence_like(reparse(data))
    assert back.T == 2 and back.values == t.values
    assert io.table_to_json(back, "B2") == data


def test_format_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(FormatError):
        io.read_json(bad)
    with pytest.raises(FormatError):
        io.read_json(tmp_path / "missing.json")
    with pytest.raises(FormatError):
        io.sequence_from_json({"lattice": "B2", "levels": {"0": {"m": 2, "generators": [[1, 0]]}}})
    with pytest.raises(FormatError):
        io.sequence_from_json({"levels": {}})
    with pytest.raises(UnknownName):
        io.sequence_from_json({"lattice": "Q9", "levels": {}})
    with pytest.raises(LatticeMismatch):
        io.sequence_from_json(io.sequence_to_json(b2_sequences()["h"], "B2"), catalog("C3"))
