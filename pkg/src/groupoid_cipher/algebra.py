"""Finite n-ary groupoids stored as flat operation tables.

A groupoid of arity ``n`` over the alphabet ``{0, ..., q-1}`` is a flat array of
``q**n`` symbols. The argument tuple ``(a_1, ..., a_n)`` maps to the row-major
mixed-radix index with ``a_1`` most significant. Places are 1-based.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

MAX_CELLS = 2**24


class NotInvertible(ValueError):
    """Raised when a table is not invertible at the requested place.

    ``witness`` is the full argument tuple (with the free place set to 0)
    whose translation collides, and ``collision`` is a pair of distinct
    inputs mapping to the same output.
    """

    def __init__(self, place, witness, collision):
        self.place = place
        self.witness = tuple(witness)
        self.collision = tuple(collision)
        fixed = ", ".join("-" if k == place - 1 else str(a) for k, a in enumerate(witness))
        x, y = collision
        super().__init__(
            f"not invertible at place {place}: T({fixed}) sends {x} and {y} to the same symbol"
        )


def _dtype_for(order):
    if order <= 2**8:
        return np.uint8
    if order <= 2**16:
        return np.uint16
    return np.uint32


class GroupoidTable:
    """Immutable operation table of an n-ary groupoid.

    >>> f = GroupoidTable(2, 2, [0, 1, 1, 0])
    >>> f(1, 1)
    0
    """

    __slots__ = ("_arity", "_entries", "_lookup", "_order")

    def __init__(self, arity: int, order: int, entries):
        arity = int(arity)
        order = int(order)
        if arity < 2:
            raise ValueError(f"arity must be >= 2, got {arity}")
        if order < 1:
            raise ValueError(f"order must be >= 1, got {order}")
        cells = order**arity
        if cells > MAX_CELLS:
            raise ValueError(f"table of {cells} cells exceeds the cap of {MAX_CELLS}")
        arr = np.asarray(entries)
        if arr.ndim != 1 and arr.size == cells:
            arr = arr.reshape(-1)
        if arr.shape != (cells,):
            raise ValueError(f"expected {cells} entries (q^n = {order}^{arity}), got {arr.size}")
        if cells and not np.issubdtype(arr.dtype, np.integer):
            raise TypeError(f"entries must be integers, got dtype {arr.dtype}")
        if cells and (arr.min() < 0 or arr.max() >= order):
            bad = int(np.flatnonzero((arr < 0) | (arr >= order))[0])
            raise ValueError(f"entry {bad} = {int(arr[bad])} is outside 0..{order - 1}")
        arr = arr.astype(_dtype_for(order), copy=True)
        arr.flags.writeable = False
        self._arity = arity
        self._order = order
        self._entries = arr
        self._lookup = None

    @classmethod
    def from_function(cls, arity, order, func):
        """Tabulate ``func(*args)`` over every argument tuple."""
        grids = np.indices((order,) * arity).reshape(arity, -1)
        values = [func(*(int(g) for g in col)) for col in grids.T]
        return cls(arity, order, values)

    @property
    def arity(self) -> int:
        return self._arity

    @property
    def order(self) -> int:
        return self._order

    @property
    def entries(self) -> np.ndarray:
        """Read-only flat view of the table."""
        return self._entries

    @property
    def lookup(self):
        """Sequence with fast scalar indexing, used by the cipher's inner loop."""
        if self._lookup is None:
            if self._order <= 256:
                self._lookup = self._entries.tobytes()
            else:
                self._lookup = self._entries.tolist()
        return self._lookup

    def cube(self) -> np.ndarray:
        """The table reshaped to ``(q,) * n``."""
        return self._entries.reshape((self._order,) * self._arity)

    def index(self, args: Sequence[int]) -> int:
        """Row-major index of an argument tuple, ``a_1`` most significant."""
        if len(args) != self._arity:
            raise ValueError(f"expected {self._arity} arguments, got {len(args)}")
        idx = 0
        for pos, a in enumerate(args, 1):
            _check_symbol(a, self._order, f"argument {pos}")
            idx = idx * self._order + int(a)
        return idx

    def __call__(self, *args: int) -> int:
        return int(self._entries[self.index(args)])

    def __eq__(self, other):
        if not isinstance(other, GroupoidTable):
            return NotImplemented
        return (
            self._arity == other._arity
            and self._order == other._order
            and np.array_equal(self._entries, other._entries)
        )

    def __hash__(self):
        return hash((self._arity, self._order, self._entries.tobytes()))

    def __repr__(self):
        return f"GroupoidTable(arity={self._arity}, order={self._order})"


def _check_symbol(x, order, what="symbol"):
    if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
        raise TypeError(f"{what} must be an integer, got {x!r}")
    if not 0 <= x < order:
        raise ValueError(f"{what} = {x} is outside 0..{order - 1}")


def _check_place(table, place):
    if isinstance(place, bool) or not isinstance(place, (int, np.integer)):
        raise TypeError(f"place must be an integer, got {place!r}")
    if not 1 <= place <= table.arity:
        raise ValueError(f"place {place} is outside 1..{table.arity}")
    return int(place)


def _split_at(table, place):
    """View the table as ``(before, q, after)`` with the free place in the middle."""
    q = table.order
    return table.entries.reshape(q ** (place - 1), q, q ** (table.arity - place))


def evaluate(table: GroupoidTable, args: Sequence[int]) -> int:
    """Look up ``f(a_1, ..., a_n)``."""
    return table(*args)


def _first_collision(table, place):
    """Return ``(witness, (x, y))`` for the first non-bijective translation, or None."""
    q = table.order
    blocks = _split_at(table, place)
    ordered = np.sort(blocks, axis=1)
    dup = ordered[:, 1:, :] == ordered[:, :-1, :]
    if not dup.any():
        return None
    _, _, post = blocks.shape
    flat = int(np.flatnonzero(dup.any(axis=1).reshape(-1))[0])
    pre_i, post_i = divmod(flat, post)
    column = blocks[pre_i, :, post_i]
    seen = {}
    for x, v in enumerate(column.tolist()):
        if v in seen:
            collision = (seen[v], x)
            break
        seen[v] = x
    before = np.unravel_index(pre_i, (q,) * (place - 1)) if place > 1 else ()
    after = np.unravel_index(post_i, (q,) * (table.arity - place)) if place < table.arity else ()
    witness = [int(a) for a in before] + [0] + [int(a) for a in after]
    return witness, collision


def is_invertible_at(table: GroupoidTable, place: int) -> bool:
    """True iff every translation at ``place`` is a permutation of the alphabet."""
    place = _check_place(table, place)
    return _first_collision(table, place) is None


def check_invertible_at(table: GroupoidTable, place: int) -> None:
    """Raise :class:`NotInvertible` with a collision witness if the check fails."""
    place = _check_place(table, place)
    found = _first_collision(table, place)
    if found is not None:
        raise NotInvertible(place, *found)


def derive_inverse(table: GroupoidTable, place: int) -> GroupoidTable:
    """Build the table solving ``f(..., x, ...) = b`` for ``x`` at ``place``.

    The result takes ``b`` in the slot where ``x`` used to be.
    """
    place = _check_place(table, place)
    blocks = _split_at(table, place)
    before, q, after = blocks.shape
    pre = np.arange(before)[:, None, None]
    post = np.arange(after)[None, None, :]
    xs = np.broadcast_to(np.arange(q, dtype=blocks.dtype)[None, :, None], blocks.shape)
    inv = np.empty_like(blocks)
    inv[pre, blocks, post] = xs
    # Scatter then gather back: a round trip to the identity means every column is a bijection.
    if not np.array_equal(blocks[pre, inv, post], xs):
        raise NotInvertible(place, *_first_collision(table, place))
    return GroupoidTable(table.arity, table.order, inv.reshape(-1))


def affine_groupoid(unary_maps: Sequence[Sequence[int]], modulus: int) -> GroupoidTable:
    """Tabulate ``g_1(x_1) + ... + g_{n-1}(x_{n-1}) + x_n  (mod q)``.

    Each ``g_j`` is given pointwise as a list of ``q`` values and need not be
    a bijection; the result is invertible at the last place regardless.
    """
    q = int(modulus)
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    maps = [np.asarray(g) for g in unary_maps]
    for j, g in enumerate(maps, 1):
        if g.shape != (q,):
            raise ValueError(f"map {j} must list {q} values, got shape {g.shape}")
        if q and (g.min() < 0 or g.max() >= q):
            raise ValueError(f"map {j} has a value outside 0..{q - 1}")
    n = len(maps) + 1
    total = np.zeros((q,) * n, dtype=np.int64)
    for axis, g in enumerate(maps + [np.arange(q)]):
        shape = [1] * n
        shape[axis] = q
        total = total + g.astype(np.int64).reshape(shape)
    return GroupoidTable(n, q, (total % q).reshape(-1))


def projection_groupoid(arity: int, order: int, place: int = 0) -> GroupoidTable:
    """``f(a_1, ..., a_n) = a_place``; defaults to the last place."""
    place = place or arity
    cube = np.indices((order,) * arity)[place - 1]
    return GroupoidTable(arity, order, cube.reshape(-1))


@dataclass(frozen=True)
class Translation:
    """The unary map ``x -> f(a_1, ..., x, ..., a_n)`` with ``x`` at ``place``.

    ``fixed`` holds the other ``n - 1`` arguments in order.
    """

    table: GroupoidTable
    place: int
    fixed: tuple

    def __post_init__(self):
        _check_place(self.table, self.place)
        fixed = tuple(int(a) for a in self.fixed)
        if len(fixed) != self.table.arity - 1:
            raise ValueError(f"expected {self.table.arity - 1} fixed arguments, got {len(fixed)}")
        for a in fixed:
            _check_symbol(a, self.table.order, "fixed argument")
        object.__setattr__(self, "fixed", fixed)

    def args(self, x):
        k = self.place - 1
        return self.fixed[:k] + (x,) + self.fixed[k:]

    def __call__(self, x: int) -> int:
        return self.table(*self.args(x))

    def power(self, e: int, x: int) -> int:
        return translation_power(self, e, x)

    def permutation(self) -> tuple:
        """Images of ``0, ..., q-1`` in order."""
        return tuple(self(x) for x in range(self.table.order))

    def is_bijection(self) -> bool:
        return len(set(self.permutation())) == self.table.order


def translation_apply(t: Translation, x: int) -> int:
    return t(x)


def translation_power(t: Translation, e: int, x: int) -> int:
    """Apply ``t`` to ``x`` exactly ``e`` times (``e >= 1``)."""
    if isinstance(e, bool) or not isinstance(e, (int, np.integer)):
        raise TypeError(f"exponent must be an integer, got {e!r}")
    if e < 1:
        raise ValueError(f"exponent must be >= 1, got {e}")
    for _ in range(e):
        x = t(x)
    return x


def inverse_translation(t: Translation, inverse_table: GroupoidTable) -> Translation:
    """The translation over ``inverse_table`` with the same place and fixed arguments."""
    if (inverse_table.arity, inverse_table.order) != (t.table.arity, t.table.order):
        raise ValueError(
            f"inverse table has shape (n={inverse_table.arity}, q={inverse_table.order}), "
            f"expected (n={t.table.arity}, q={t.table.order})"
        )
    return Translation(inverse_table, t.place, t.fixed)
