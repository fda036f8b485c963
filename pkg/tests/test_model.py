import pytest

from dolbeault_deform.model import (ModelError, ModelSpec, derive_brackets, merge_words,
                                    parse_gen, sort_word, validate_model)


def iw():
    return ModelSpec("iwasawa", 3, [{}, {}, {(0, 1): -1}])


def test_sort_word_signs():
    assert sort_word([2, 0, 1]) == (1, (0, 1, 2))
    assert sort_word([1, 0]) == (-1, (0, 1))
    assert sort_word([1, 1])[0] == 0
    assert merge_words((1,), (0,)) == (-1, (0, 1))


def test_generator_names():
    assert parse_gen("f2", 3) == 1
    assert parse_gen("fb1", 3) == 3
    with pytest.raises(ModelError):
        parse_gen("f4", 3)
    with pytest.raises(ModelError):
        parse_gen("g1", 3)


def test_conjugate_mode_derives_fb():
    m = iw()
    # d fb3 = -fb1 ^ fb2
    assert m.d01[2] == {(3, 4): -1}
    assert m.conjugation_closed


def test_conjugate_mismatch_rejected():
    with pytest.raises(ModelError):
        ModelSpec("x", 3, [{}, {}, {(0, 1): -1}], d01=[{}, {}, {(3, 4): 1}])


def test_iwasawa_brackets_from_cartan_formula():
    # d xi(X, Y) = -xi([X, Y]): d f3 = -f1^f2 gives [v1, v2] = v3
    b = derive_brackets(iw())
    assert b.bracket(0, 1) == {2: 1}
    assert b.bracket(1, 0) == {2: -1}
    assert b.bracket(3, 4) == {5: 1}
    assert b.bracket(0, 3) == {}
    assert not b.is_abelian()


def test_validate_clean_models():
    assert validate_model(iw()) == []
    assert validate_model(ModelSpec("t", 2, [{}, {}])) == []


def test_validate_reports_d_squared():
    m = ModelSpec("bad", 3, [{(1, 2): 1}, {(0, 1): 1}, {}])
    diags = validate_model(m)
    assert any("f1" in d and "d^2" in d for d in diags)


def test_validate_reports_holomorphic_frame_violation():
    # d f2 = f1 ^ fb1 has a (1,1)-part
    m = ModelSpec("bad", 2, [{}, {(0, 2): 1}])
    assert any("holomorphic" in d for d in validate_model(m))


def test_jacobi_failure_raises():
    m = ModelSpec("bad", 3, [{(1, 2): 1}, {(0, 1): 1}, {}])
    with pytest.raises(ModelError):
        derive_brackets(m)


def test_equality_and_hash():
    assert iw() == iw()
    assert hash(iw()) == hash(iw())
    assert iw() != ModelSpec("iwasawa", 3, [{}, {}, {(0, 1): 1}])


def test_d_word_leibniz():
    m = iw()
    # d(f3 ^ fb3) = -f1^f2^fb3 + f3^fb1^fb2
    assert m.d_word((2, 5)) == {(0, 1, 5): -1, (2, 3, 4): 1}
