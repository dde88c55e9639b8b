import json

import pytest

from ou_kit.decomp import ElementaryWord, decompose_elementary
from ou_kit.io import (
    FileFormatError,
    MalformedLiteral,
    RingMismatch,
    VersionMismatch,
    form_from_text,
    form_to_text,
    matrix_from_text,
    matrix_to_text,
    parse_form_file,
    parse_matrix_file,
    parse_word_file,
    word_from_text,
    word_to_text,
    write_form_file,
    write_matrix_file,
    write_word_file,
)
from ou_kit.matrix import Mat
from ou_kit.rings import ring_from_descriptor
from ou_kit.vaserstein import assemble, psi_tilde


def test_matrix_round_trip(tmp_path, Z):
    path = tmp_path / "psi.json"
    M = psi_tilde(Z, 2)
    write_matrix_file(path, M)
    first = path.read_bytes()
    back = parse_matrix_file(path, Z)
    assert back == M
    write_matrix_file(path, back)
    assert path.read_bytes() == first


def test_round_trip_every_ring(tmp_path, ring):
    M = Mat.identity(ring, 3).with_entry(1, 3, ring.parse(ring.format(ring.lam)))
    text = matrix_to_text(M)
    assert matrix_to_text(matrix_from_text(text)) == text


def test_ring_mismatch(tmp_path, Z):
    path = tmp_path / "m.json"
    write_matrix_file(path, Mat.identity(ring_from_descriptor("mod:7"), 2))
    with pytest.raises(RingMismatch):
        parse_matrix_file(path, Z)


def test_gaussian_literal_in_file(Zi):
    text = json.dumps({"format_version": 1, "kind": "matrix", "ring": "quad:-1", "rows": 1, "cols": 1, "entries": [["2+3w"]]})
    assert matrix_from_text(text).entry(1, 1) == (2, 3)


def test_malformed_literal_location(Z):
    text = '{\n  "format_version": 1,\n  "kind": "matrix",\n  "ring": "int",\n  "rows": 1,\n  "cols": 2,\n  "entries": [\n    ["1", "x7"]\n  ]\n}\n'
    with pytest.raises(MalformedLiteral) as info:
        matrix_from_text(text)
    assert (info.value.line, info.value.column) == (8, 11)
    assert info.value.literal == "x7"


def test_numbers_are_not_literals():
    text = json.dumps({"format_version": 1, "kind": "matrix", "ring": "int", "rows": 1, "cols": 1, "entries": [[1]]})
    with pytest.raises(MalformedLiteral):
        matrix_from_text(text)


def test_version_mismatch():
    text = json.dumps({"format_version": 2, "kind": "matrix", "ring": "int", "rows": 0, "cols": 0, "entries": []})
    with pytest.raises(VersionMismatch):
        matrix_from_text(text)


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        "[]",
        '{"format_version": 1, "kind": "matrix", "ring": "int", "rows": 2, "cols": 1, "entries": [["1"]]}',
        '{"format_version": 1, "kind": "word", "ring": "int", "rows": 1, "cols": 1, "entries": [["1"]]}',
        '{"format_version": 1, "kind": "matrix", "ring": "ints", "rows": 1, "cols": 1, "entries": [["1"]]}',
        '{"format_version": 1, "kind": "matrix", "ring": "int", "cols": 1, "entries": [["1"]]}',
    ],
)
def test_bad_documents(doc):
    with pytest.raises(FileFormatError):
        matrix_from_text(doc)


def test_missing_file(tmp_path):
    with pytest.raises(FileFormatError):
        parse_matrix_file(tmp_path / "absent.json")


def test_form_round_trip(tmp_path, twisted):
    phi = Mat(twisted, [[twisted.one, (0, 1)], [twisted.zero, twisted.one]])
    data = assemble(twisted, 2, 2, phi)
    path = tmp_path / "form.json"
    write_form_file(path, data)
    back = parse_form_file(path)
    assert back.Psi == data.Psi and back.phi_inv == data.phi_inv
    assert form_to_text(back) == path.read_text()


def test_form_with_tampered_psi(data_211):
    doc = json.loads(form_to_text(data_211))
    doc["Psi"][0][1] = "2"
    with pytest.raises(FileFormatError, match="Psi"):
        form_from_text(json.dumps(doc))


def test_word_round_trips(tmp_path, Z, data_211):
    word = ElementaryWord(Z, 4, ((1, 2, 3), (4, 1, -2)))
    path = tmp_path / "w.json"
    write_word_file(path, word)
    assert parse_word_file(path).letters == word.letters

    gw = decompose_elementary(data_211, 2, 3, 5)
    text = word_to_text(gw)
    back = word_from_text(text, data=data_211)
    assert back.letters == gw.letters
    assert word_to_text(back) == text
    with pytest.raises(FileFormatError, match="form"):
        word_from_text(text)


def test_mixed_word_rejected():
    text = json.dumps(
        {"format_version": 1, "kind": "word", "ring": "int", "size": 2, "letters": [["E", 1, 2, "1"], ["THETA", ["0", "1"]]]}
    )
    with pytest.raises(FileFormatError, match="mixes"):
        word_from_text(text)
