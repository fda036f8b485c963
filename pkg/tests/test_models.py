import json

import pytest

from dolbeault_deform.model import ModelError, validate_model
from dolbeault_deform.models import (ModelValidationError, builtin, builtin_names, load_model,
                                     model_from_dict, model_to_dict, resolve_model, save_model)

NAMES = ["torus:1", "torus:2", "torus", "iwasawa", "nakamura_iii_3b"]


@pytest.mark.parametrize("name", NAMES)
def test_builtins_validate(name):
    m = builtin(name)
    assert validate_model(m) == []


def test_builtin_names_and_unknown():
    assert "iwasawa" in builtin_names()
    assert builtin("torus").n == 3
    for bad in ("torus:x", "nope"):
        with pytest.raises(ModelError):
            builtin(bad)


@pytest.mark.parametrize("name", NAMES)
def test_roundtrip(name, tmp_path):
    m = builtin(name)
    assert model_from_dict(json.loads(json.dumps(model_to_dict(m)))) == m
    p = tmp_path / "m.json"
    save_model(m, str(p))
    m2 = load_model(str(p))
    assert m2 == m
    assert model_to_dict(m2) == model_to_dict(m)
    if m.beltrami is not None:
        assert m2.beltrami == m.beltrami


def test_nakamura_flags():
    m = builtin("nakamura_iii_3b")
    assert m.fb_mode == "explicit" and m.asserted_mc
    assert len(m.params) == 9


def write(tmp_path, text):
    p = tmp_path / "model.json"
    p.write_text(text)
    return str(p)


def test_json_syntax_error_has_position(tmp_path):
    with pytest.raises(ModelError, match="line 2 column"):
        load_model(write(tmp_path, '{"name": "x",\n "dim": }'))


def test_missing_file():
    with pytest.raises(ModelError, match="cannot read"):
        load_model("/nonexistent/model.json")


@pytest.mark.parametrize("data,field", [
    ({"dim": 2}, "field name"),
    ({"name": "x", "dim": "2"}, "field dim"),
    ({"name": "x", "dim": 0}, "field dim"),
    ({"name": "x", "dim": 2, "d": {"f9": []}}, "field d.f9"),
    ({"name": "x", "dim": 2, "d": {"f2": [{"coeff": "1", "wedge": ["f1"]}]}},
     "field d.f2[0].wedge"),
    ({"name": "x", "dim": 2, "d": {"f2": [{"coeff": "zz", "wedge": ["f1", "f2"]}]}},
     "field d.f2[0].coeff"),
    ({"name": "x", "dim": 2, "beltrami": [{"coeff": "1", "form": ["fb1"], "vector": "w1"}]},
     "field beltrami[0].vector"),
    ({"name": "x", "dim": 2, "asserted_mc": "yes"}, "field asserted_mc"),
])
def test_bad_fields_are_named(data, field):
    with pytest.raises(ModelError, match=field.replace("[", "\\[").replace("]", "\\]")):
        model_from_dict(data)


def test_validation_failure_lists_diagnostics(tmp_path):
    data = {"name": "bad", "dim": 3, "d": {
        "f1": [{"coeff": "1", "wedge": ["f2", "f3"]}],
        "f2": [{"coeff": "1", "wedge": ["f1", "f2"]}]}}
    path = write(tmp_path, json.dumps(data))
    with pytest.raises(ModelValidationError) as info:
        load_model(path)
    assert any("d^2" in d for d in info.value.diagnostics)
    assert load_model(path, validate=False).name == "bad"


def test_resolve_model(tmp_path):
    p = tmp_path / "iw.json"
    save_model(builtin("iwasawa"), str(p))
    assert resolve_model(str(p)) == builtin("iwasawa")
    assert resolve_model("torus:2").n == 2
