"""Leader-seeded Markovski stream cipher over groupoids invertible at the last place.

Step ``j`` computes ``v_j = T^{e_j}(fixed_j, -)(u_j)`` where ``T`` is a
translation of the key groupoid with the free argument in the last slot.
For ``j < n`` the fixed arguments are the next ``n - j`` unused leaders
followed by ``v_1 .. v_{j-1}``; afterwards they are the last ``n - 1``
ciphertext symbols. Exponents cycle through the key's schedule.

Decryption walks the same windows (the receiver knows every ``v``) and
applies the translation of the derived inverse table ``e_j`` times. Both
directions precompute each translation's ``e``-th power once per distinct
exponent, so a step is a single table lookup.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    GroupoidTable,
    Translation,
    derive_inverse,
    translation_power,
)

MAX_EXPONENT = 2**16
# Cells of precomputed translation powers kept per key and direction.
POWER_CACHE_CELLS = 2**26


class SymbolError(ValueError):
    """A message symbol outside the key alphabet; ``position`` is 0-based."""

    def __init__(self, position, symbol, order):
        self.position = position
        self.symbol = symbol
        super().__init__(f"symbol {symbol!r} at position {position} is outside 0..{order - 1}")


def leader_count(n: int) -> int:
    return (n * n - n) // 2


@dataclass(frozen=True)
class CipherKey:
    """Forward groupoid, its inverse at place ``n``, leaders and exponent schedule."""

    forward: GroupoidTable
    leaders: tuple
    exponents: tuple
    comment: str | None = field(default=None, compare=False)
    inverse: GroupoidTable = field(init=False, compare=False, repr=False)
    _powers: dict = field(init=False, compare=False, repr=False, default_factory=dict)

    def __post_init__(self):
        f = self.forward
        if not isinstance(f, GroupoidTable):
            raise TypeError(f"forward must be a GroupoidTable, got {type(f).__name__}")
        n, q = f.arity, f.order
        leaders = tuple(int(x) for x in self.leaders)
        if len(leaders) != leader_count(n):
            raise ValueError(f"arity {n} needs {leader_count(n)} leaders, got {len(leaders)}")
        for k, x in enumerate(leaders, 1):
            if not 0 <= x < q:
                raise ValueError(f"leader {k} = {x} is outside 0..{q - 1}")
        exponents = tuple(int(e) for e in self.exponents)
        if not exponents:
            raise ValueError("exponent schedule must be nonempty")
        for k, e in enumerate(exponents, 1):
            if not 1 <= e <= MAX_EXPONENT:
                raise ValueError(f"exponent {k} = {e} is outside 1..{MAX_EXPONENT}")
        object.__setattr__(self, "leaders", leaders)
        object.__setattr__(self, "exponents", exponents)
        # Raises NotInvertible with a witness unless f is invertible at place n.
        object.__setattr__(self, "inverse", derive_inverse(f, n))

    @property
    def n(self) -> int:
        return self.forward.arity

    @property
    def q(self) -> int:
        return self.forward.order


class StreamState:
    """Position, unused leaders and the window of recent ciphertext symbols.

    ``position`` is the 1-based index of the next step.
    """

    def __init__(self, n: int, leaders: Sequence[int]):
        if len(leaders) != leader_count(n):
            raise ValueError(f"arity {n} needs {leader_count(n)} leaders, got {len(leaders)}")
        self.n = n
        self.position = 1
        self.leader_queue = deque(leaders)
        self.window = deque(maxlen=n - 1)

    @classmethod
    def for_key(cls, key: CipherKey) -> StreamState:
        return cls(key.n, key.leaders)

    def push(self, v: int) -> None:
        """Record ciphertext symbol ``v_j`` and advance to step ``j + 1``."""
        self.window.append(v)
        self.position += 1


def step_fixed_args(state: StreamState) -> tuple:
    """Fixed arguments for the current step; consumes leaders during the first ``n - 1`` steps."""
    need = state.n - state.position
    if need > len(state.leader_queue):
        raise RuntimeError(f"leader queue underflow at step {state.position}")
    taken = tuple(state.leader_queue.popleft() for _ in range(max(need, 0)))
    return taken + tuple(state.window)


def exponent_at(key: CipherKey, j: int) -> int:
    """Exponent for 1-based step ``j``; the schedule repeats."""
    if j < 1:
        raise ValueError(f"step index must be >= 1, got {j}")
    return key.exponents[(j - 1) % len(key.exponents)]


def _symbols(data, q):
    if isinstance(data, (bytes, bytearray, memoryview)):
        data = bytes(data)
        if q < 256 and data and max(data) >= q:
            bad = next(k for k, b in enumerate(data) if b >= q)
            raise SymbolError(bad, data[bad], q)
        return data
    if isinstance(data, np.ndarray):
        if data.ndim != 1:
            raise ValueError(f"message must be one-dimensional, got shape {data.shape}")
        if data.size and not np.issubdtype(data.dtype, np.integer):
            raise TypeError(f"message symbols must be integers, got dtype {data.dtype}")
        out = ((data < 0) | (data >= q)).nonzero()[0]
        if out.size:
            raise SymbolError(int(out[0]), int(data[out[0]]), q)
        return data.tolist()
    symbols = list(data)
    for k, x in enumerate(symbols):
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)) or not 0 <= x < q:
            raise SymbolError(k, x, q)
    return [int(x) for x in symbols]


def power_rows(table: GroupoidTable, e: int) -> np.ndarray:
    """Every last-place translation raised to the ``e``-th power, one row per fixing."""
    rows = table.entries.reshape(-1, table.order)
    result = None
    while e:
        if e & 1:
            result = rows if result is None else np.take_along_axis(rows, result, axis=1)
        e >>= 1
        if e:
            rows = np.take_along_axis(rows, rows, axis=1)
    return result


def _lookups(key, encrypting):
    """Per-schedule-slot ``(lookup, repeats)`` pairs for the inner loop."""
    table = key.forward if encrypting else key.inverse
    distinct = sorted(set(key.exponents))
    if len(distinct) * key.q**key.n > POWER_CACHE_CELLS:
        return [(table.lookup, e) for e in key.exponents]
    cache = key._powers.setdefault(encrypting, {})
    for e in distinct:
        if e not in cache:
            cache[e] = GroupoidTable(key.n, key.q, power_rows(table, e).reshape(-1)).lookup
    return [(cache[e], 1) for e in key.exponents]


def _run(key, symbols, encrypting):
    n, q = key.n, key.q
    slots = _lookups(key, encrypting)
    m = len(slots)
    k = len(symbols)
    out = [0] * k

    state = StreamState.for_key(key)
    for j in range(min(k, n - 1)):
        base = 0
        for a in step_fixed_args(state):
            base = base * q + a
        base *= q
        tab, reps = slots[j % m]
        x = symbols[j]
        for _ in range(reps):
            x = tab[base + x]
        out[j] = x
        state.push(x if encrypting else symbols[j])

    if k >= n:
        prefix = 0
        for a in state.window:
            prefix = prefix * q + a
        keep = q ** (n - 2)
        if all(reps == 1 for _, reps in slots):
            tabs = [tab for tab, _ in slots]
            for j in range(n - 1, k):
                x = tabs[j % m][prefix * q + symbols[j]]
                out[j] = x
                prefix = (prefix % keep) * q + (x if encrypting else symbols[j])
        else:
            for j in range(n - 1, k):
                tab, reps = slots[j % m]
                base = prefix * q
                x = symbols[j]
                for _ in range(reps):
                    x = tab[base + x]
                out[j] = x
                prefix = (prefix % keep) * q + (x if encrypting else symbols[j])
    return out


def _like(data, out):
    if isinstance(data, (bytes, bytearray, memoryview)):
        return bytes(out)
    if isinstance(data, np.ndarray):
        return np.asarray(out, dtype=data.dtype)
    return out


def encrypt(key: CipherKey, plaintext):
    """Encrypt a sequence of symbols; ``bytes`` in gives ``bytes`` out."""
    symbols = _symbols(plaintext, key.q)
    return _like(plaintext, _run(key, symbols, True))


def decrypt(key: CipherKey, ciphertext):
    """Invert :func:`encrypt` using the derived inverse table."""
    symbols = _symbols(ciphertext, key.q)
    return _like(ciphertext, _run(key, symbols, False))


def trace(key: CipherKey, message, decrypting=False):
    """Step-by-step record of one pass, as ``(j, fixed, exponent, input, output)`` tuples.

    Uses the plain translation path, not the table-index fast path, so it
    doubles as an independent check of :func:`encrypt` and :func:`decrypt`.
    """
    table = key.inverse if decrypting else key.forward
    state = StreamState.for_key(key)
    rows = []
    for x in _symbols(message, key.q):
        j = state.position
        fixed = step_fixed_args(state)
        e = exponent_at(key, j)
        y = translation_power(Translation(table, key.n, fixed), e, x)
        rows.append((j, fixed, e, x, y))
        state.push(x if decrypting else y)
    return rows
