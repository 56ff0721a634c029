import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from groupoid_cipher import SymbolError
from groupoid_cipher.demo import example_key
from groupoid_cipher.estimator import MarkovskiTransformer, check_symbols
from groupoid_cipher.keyforge import serialize_key


def test_worked_example_row():
    est = MarkovskiTransformer(key=example_key()).fit()
    assert est.transform([2, 0, 1, 1, 2, 1]).tolist() == [0, 2, 1, 0, 2, 1]
    assert est.inverse_transform([0, 2, 1, 0, 2, 1]).tolist() == [2, 0, 1, 1, 2, 1]


def test_rows_are_independent_messages():
    est = MarkovskiTransformer(key=example_key()).fit()
    X = np.array([[2, 0, 1, 1, 2, 1], [2, 0, 1, 1, 2, 1], [0, 0, 0, 0, 0, 0]])
    out = est.transform(X)
    assert out.shape == X.shape
    assert out[0].tolist() == out[1].tolist() == [0, 2, 1, 0, 2, 1]
    assert np.array_equal(est.inverse_transform(out), X)


def test_generated_key_from_params():
    est = MarkovskiTransformer(n=2, q=5, schedule_length=3, random_state=0).fit()
    assert (est.key_.n, est.key_.q, len(est.key_.exponents)) == (2, 5, 3)
    again = MarkovskiTransformer(n=2, q=5, schedule_length=3, random_state=0).fit()
    assert serialize_key(est.key_) == serialize_key(again.key_)


def test_key_file_bytes():
    est = MarkovskiTransformer(key=serialize_key(example_key())).fit()
    assert est.key_ == example_key()


def test_get_params_and_clone():
    est = MarkovskiTransformer(n=4, q=7, random_state=3)
    params = est.get_params()
    assert params == {"key": None, "n": 4, "q": 7, "schedule_length": 2, "random_state": 3}
    twin = clone(est).set_params(q=9)
    assert twin.q == 9 and est.q == 7


def test_not_fitted():
    with pytest.raises(NotFittedError):
        MarkovskiTransformer().transform([0, 1])


def test_bytes_in_bytes_out():
    est = MarkovskiTransformer(n=2, q=256, random_state=1).fit()
    data = bytes(range(256)) * 4
    enc = est.transform(data)
    assert isinstance(enc, bytes) and len(enc) == len(data)
    assert est.inverse_transform(enc) == data


def test_pipeline_round_trip():
    enc = MarkovskiTransformer(n=3, q=4, random_state=2).fit()
    X = np.random.default_rng(0).integers(0, 4, size=(10, 30))
    pipe = make_pipeline(enc)
    assert np.array_equal(pipe.inverse_transform(pipe.fit_transform(X)), X)


def test_bad_key_type():
    with pytest.raises(TypeError):
        MarkovskiTransformer(key="not a key").fit()


class TestCheckSymbols:
    def test_out_of_range_position(self):
        with pytest.raises(SymbolError) as info:
            check_symbols([[0, 1], [2, 3]], 3)
        assert info.value.position == 3

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            check_symbols([0.5, 1.0], 3)

    def test_rejects_3d(self):
        with pytest.raises(ValueError):
            check_symbols(np.zeros((2, 2, 2), dtype=int), 3)

    def test_empty(self):
        assert check_symbols([], 3).size == 0
