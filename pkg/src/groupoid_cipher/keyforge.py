"""Key generation, the ``GCK1`` key file format, and key-space census.

Key file layout (ASCII, ``\\n`` after every line, single spaces)::

    GCK1
    n <int> q <int> i <int>
    table <q^n ints, row-major, a_1 most significant>
    leaders <(n^2-n)/2 ints>
    exponents <m >= 1 ints>
    # optional free-form comment
"""

from __future__ import annotations

import hashlib
import itertools
import math
import re
import warnings
from dataclasses import dataclass

import numpy as np

from .algebra import MAX_CELLS, GroupoidTable, is_invertible_at
from .cipher import MAX_EXPONENT, CipherKey, leader_count

MAGIC = "GCK1"
MAX_EXHAUSTIVE_CELLS = 9
MAX_CLOSED_FORM_DIGITS = 100_000

_HEADER = re.compile(r"n (0|[1-9][0-9]*) q (0|[1-9][0-9]*) i (0|[1-9][0-9]*)")
_COMMENT = re.compile(r"# [\x20-\x7e]*")


class KeyFileError(ValueError):
    """Malformed key file; ``line`` is 1-based."""

    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


def generate_key(n: int, q: int, seed: int, schedule_length: int = 2) -> CipherKey:
    """Random key whose table is invertible at place ``n`` by construction.

    Every fixing of the first ``n - 1`` arguments gets an independent uniform
    permutation of the alphabet as its column, so the result is uniform over
    all tables invertible at the last place. Draws come from a Philox
    generator seeded with ``seed``.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    if q**n > MAX_CELLS:
        raise ValueError(f"q^n = {q}^{n} exceeds the cap of {MAX_CELLS} cells")
    if schedule_length < 1:
        raise ValueError(f"schedule length must be >= 1, got {schedule_length}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    rng = np.random.Generator(np.random.Philox(seed))
    columns = np.tile(np.arange(q, dtype=np.int64), (q ** (n - 1), 1))
    table = GroupoidTable(n, q, rng.permuted(columns, axis=1).reshape(-1))
    leaders = rng.integers(0, q, size=leader_count(n))
    exponents = rng.integers(1, q + 1, size=schedule_length)
    return CipherKey(table, tuple(leaders), tuple(exponents), comment=f"philox seed={seed}")


def is_quasigroup(table: GroupoidTable) -> bool:
    """True iff the table is invertible at every place."""
    return all(is_invertible_at(table, i) for i in range(1, table.arity + 1))


_TOKENS = [str(v) for v in range(256)]


def _join(values):
    values = list(values)
    if values and max(values) < 256:
        return " ".join(map(_TOKENS.__getitem__, values))
    return " ".join(map(str, values))


def serialize_key(key: CipherKey) -> bytes:
    f = key.forward
    lines = [
        MAGIC,
        f"n {f.arity} q {f.order} i {f.arity}",
        "table " + _join(f.entries.tolist()),
        "leaders " + _join(key.leaders),
        "exponents " + _join(key.exponents),
    ]
    if key.comment is not None:
        lines.append("# " + key.comment)
    return ("\n".join(lines) + "\n").encode("ascii")


def fingerprint(key: CipherKey) -> str:
    """SHA-256 of the canonical key bytes, hex encoded."""
    return hashlib.sha256(serialize_key(key)).hexdigest()


def _int_list(lineno, line, label):
    if line == label:
        return np.zeros(0, dtype=np.int64)
    prefix = label + " "
    if not line.startswith(prefix):
        raise KeyFileError(lineno, f"expected a line starting with {label!r}")
    payload = line[len(prefix):]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        values = np.fromstring(payload, dtype=np.int64, sep=" ")
    # Re-rendering rejects signs, leading zeros, stray characters and odd spacing.
    if values.size == 0 or values.min() < 0 or _join(values.tolist()) != payload:
        raise KeyFileError(lineno, f"{label} must be single-space separated decimal integers")
    return values


def parse_key(data: bytes) -> CipherKey:
    """Parse and fully validate a key file."""
    try:
        text = bytes(data).decode("ascii")
    except UnicodeDecodeError as exc:
        raise KeyFileError(1, f"non-ASCII byte at offset {exc.start}") from None
    lines = text.split("\n")
    if lines[-1] != "":
        raise KeyFileError(len(lines), "missing final newline")
    lines.pop()
    if not lines or lines[0] != MAGIC:
        raise KeyFileError(1, f"bad magic, expected {MAGIC!r}")
    if len(lines) < 5:
        raise KeyFileError(len(lines) + 1, "unexpected end of file")

    header = _HEADER.fullmatch(lines[1])
    if not header:
        raise KeyFileError(2, "expected 'n <int> q <int> i <int>'")
    n, q, i = (int(g) for g in header.groups())
    if n < 2:
        raise KeyFileError(2, f"arity n = {n} must be >= 2")
    if q < 1:
        raise KeyFileError(2, f"order q = {q} must be >= 1")
    if q**n > MAX_CELLS:
        raise KeyFileError(2, f"q^n = {q}^{n} exceeds the cap of {MAX_CELLS} cells")
    if not 1 <= i <= n:
        raise KeyFileError(2, f"place i = {i} is outside 1..{n}")
    if i != n:
        raise KeyFileError(2, f"cipher keys must be invertible at the last place (i = {n}), got i = {i}")

    table = _int_list(3, lines[2], "table")
    if table.size != q**n:
        raise KeyFileError(3, f"table has {table.size} entries, expected q^n = {q**n}")
    if table.size and table.max() >= q:
        bad = int(np.flatnonzero(table >= q)[0])
        raise KeyFileError(3, f"table entry {bad} = {int(table[bad])} is outside 0..{q - 1}")

    leaders = _int_list(4, lines[3], "leaders")
    if leaders.size != leader_count(n):
        raise KeyFileError(4, f"expected {leader_count(n)} leaders, got {leaders.size}")
    if leaders.size and leaders.max() >= q:
        raise KeyFileError(4, f"leader outside 0..{q - 1}")

    exponents = _int_list(5, lines[4], "exponents")
    if exponents.size == 0:
        raise KeyFileError(5, "exponent schedule must be nonempty")
    if exponents.min() == 0:
        raise KeyFileError(5, "exponents must be >= 1")
    if exponents.max() > MAX_EXPONENT:
        raise KeyFileError(5, f"exponents must be <= {MAX_EXPONENT}")

    comment = None
    if len(lines) > 5:
        if not _COMMENT.fullmatch(lines[5]):
            raise KeyFileError(6, "expected '# <comment>'")
        comment = lines[5][2:]
    if len(lines) > 6:
        raise KeyFileError(7, "trailing garbage after key")

    forward = GroupoidTable(n, q, table)
    # NotInvertible (with witness) propagates from CipherKey validation.
    return CipherKey(forward, tuple(leaders.tolist()), tuple(exponents.tolist()), comment=comment)


# Latin squares (n = 2) and Latin cubes (n = 3) by order q.
_KNOWN_QUASIGROUPS = {
    2: {1: 1, 2: 2, 3: 12, 4: 576, 5: 161280, 6: 812851200, 7: 61479419904000},
    3: {1: 1, 2: 2, 3: 24, 4: 55296, 5: 2781803520},
}


def known_quasigroup_count(n: int, q: int) -> int | None:
    """Number of n-ary quasigroups of order q where it is known, else None."""
    if q == 1:
        return 1
    if q == 2:
        return 2
    if q == 3:
        return 3 * 2**n
    return _KNOWN_QUASIGROUPS.get(n, {}).get(q)


def invertible_count(n: int, q: int) -> int:
    """Number of n-ary tables over q symbols invertible at any one fixed place."""
    return math.factorial(q) ** (q ** (n - 1))


@dataclass(frozen=True)
class CensusReport:
    n: int
    q: int
    place: int
    invertible_count: int
    quasigroup_count: int | None
    method: str

    def line(self) -> str:
        quasi = "unknown" if self.quasigroup_count is None else self.quasigroup_count
        return (
            f"n={self.n} q={self.q} place={self.place} invertible={self.invertible_count} "
            f"quasigroups={quasi} method={self.method}"
        )


def exhaustive_feasible(n: int, q: int) -> bool:
    return q**n <= MAX_EXHAUSTIVE_CELLS


def _all_tables(n, q):
    cells = q**n
    return np.array(list(itertools.product(range(q), repeat=cells)), dtype=np.int8).reshape(-1, cells)


def _invertible_mask(tables, n, q, place):
    blocks = tables.reshape(len(tables), q ** (place - 1), q, q ** (n - place))
    return (np.sort(blocks, axis=2) == np.arange(q).reshape(1, 1, q, 1)).all(axis=(1, 2, 3))


def census(n: int, q: int, place: int, method: str = "auto") -> CensusReport:
    """Count tables invertible at ``place`` and n-ary quasigroups.

    ``method`` is ``"exhaustive"`` (every one of ``q^(q^n)`` tables, only when
    ``q^n <= 9``), ``"closed-form"``, or ``"auto"`` (exhaustive when feasible).
    Exhaustive counts are checked against ``(q!)^(q^(n-1))``.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if not 1 <= place <= n:
        raise ValueError(f"place {place} is outside 1..{n}")
    if method == "auto":
        method = "exhaustive" if exhaustive_feasible(n, q) else "closed-form"

    if method == "exhaustive":
        if not exhaustive_feasible(n, q):
            raise ValueError(
                f"exhaustive census needs q^n <= {MAX_EXHAUSTIVE_CELLS}, got {q}^{n} = {q**n}; "
                "use --mode closed-form"
            )
        tables = _all_tables(n, q)
        masks = [_invertible_mask(tables, n, q, i) for i in range(1, n + 1)]
        invertible = int(masks[place - 1].sum())
        quasigroups = int(np.logical_and.reduce(masks).sum())
        expected = invertible_count(n, q)
        if invertible != expected:
            raise RuntimeError(f"exhaustive count {invertible} disagrees with closed form {expected}")
        return CensusReport(n, q, place, invertible, quasigroups, "exhaustive")

    if method == "closed-form":
        digits = q ** (n - 1) * math.lgamma(q + 1) / math.log(10)
        if digits > MAX_CLOSED_FORM_DIGITS:
            raise ValueError(
                f"(q!)^(q^(n-1)) has about {digits:.3g} decimal digits, "
                f"over the limit of {MAX_CLOSED_FORM_DIGITS}"
            )
        return CensusReport(
            n, q, place, invertible_count(n, q), known_quasigroup_count(n, q), "closed-form"
        )

    raise ValueError(f"unknown census method {method!r}")
