"""scikit-learn style wrapper around the cipher.

Each row of a 2-D integer array is treated as an independent message, so the
transformer drops into pipelines and ``FunctionTransformer``-style code.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted, check_random_state

from .cipher import CipherKey, SymbolError, decrypt, encrypt
from .keyforge import generate_key, parse_key


def check_symbols(X, q):
    """Validate messages over ``0..q-1``.

    Returns an integer ndarray, 1-D for a single message and 2-D for a batch.
    Raises :class:`SymbolError` naming the first offending (flat) position.
    """
    if isinstance(X, (bytes, bytearray, memoryview)):
        X = np.frombuffer(bytes(X), dtype=np.uint8)
    arr = np.asarray(X)
    if arr.ndim not in (1, 2):
        raise ValueError(f"expected a 1-D message or a 2-D batch, got shape {arr.shape}")
    if arr.size == 0:
        return arr.astype(np.int64)
    if not np.issubdtype(arr.dtype, np.integer):
        raise TypeError(f"symbols must be integers, got dtype {arr.dtype}")
    bad = np.flatnonzero((arr < 0) | (arr >= q))
    if bad.size:
        raise SymbolError(int(bad[0]), int(arr.reshape(-1)[bad[0]]), q)
    return arr.astype(np.int64)


class MarkovskiTransformer(TransformerMixin, BaseEstimator):
    """Encrypt rows of symbols with ``transform``, decrypt with ``inverse_transform``.

    Parameters
    ----------
    key : CipherKey, bytes or None
        A ready key, or the bytes of a key file. When None, ``fit`` draws a
        fresh key from ``n``, ``q``, ``schedule_length`` and ``random_state``.
    n, q : int
        Arity and alphabet size of a generated key.
    schedule_length : int
        Length of a generated exponent schedule.
    random_state : int, RandomState or None
        Seeds key generation.

    Attributes
    ----------
    key_ : CipherKey
        The key in use after ``fit``.
    """

    def __init__(self, key=None, n=3, q=256, schedule_length=2, random_state=None):
        self.key = key
        self.n = n
        self.q = q
        self.schedule_length = schedule_length
        self.random_state = random_state

    def fit(self, X=None, y=None):
        if self.key is None:
            seed = check_random_state(self.random_state).randint(2**31 - 1)
            self.key_ = generate_key(self.n, self.q, int(seed), self.schedule_length)
        elif isinstance(self.key, CipherKey):
            self.key_ = self.key
        elif isinstance(self.key, (bytes, bytearray)):
            self.key_ = parse_key(self.key)
        else:
            raise TypeError(f"key must be a CipherKey, key-file bytes or None, got {type(self.key).__name__}")
        if X is not None:
            check_symbols(X, self.key_.q)
        return self

    def _apply(self, X, func):
        check_is_fitted(self, "key_")
        arr = check_symbols(X, self.key_.q)
        if arr.ndim == 1:
            out = np.asarray(func(self.key_, arr.tolist()), dtype=np.int64)
        else:
            out = np.array([func(self.key_, row.tolist()) for row in arr], dtype=np.int64).reshape(arr.shape)
        if isinstance(X, (bytes, bytearray, memoryview)):
            return out.astype(np.uint8).tobytes()
        return out

    def transform(self, X):
        return self._apply(X, encrypt)

    def inverse_transform(self, X):
        return self._apply(X, decrypt)
