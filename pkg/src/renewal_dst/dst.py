"""Digital search trees over bit strings.

Keys are routed by successive bits, 0 left and 1 right, and stored at the
first empty node on the path; the tree never compares key values, only bits.
A probe walks the same path without mutating, which is how the depth process
along a fixed direction is read off one built tree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pmf import IntPmf
from .rng import stream_rng

# The classic ten-key corpus: first four bits of the fractional parts of
# sqrt 2, sqrt 3, sqrt 5, sqrt 10, cbrt 2, cbrt 3, 2^(1/4), ln 2, ln 3, ln 10.
_KNUTH_BITS = ("0110", "1011", "0011", "0010", "0100",
               "0111", "0011", "1011", "0001", "0100")


class InsufficientBitsError(ValueError):
    """A key ran out of bits before an empty node was found."""

    def __init__(self, label, needed: int):
        super().__init__(f"key {label!r} needs more than {needed} bits")
        self.label = label
        self.needed = needed
        self.index = None  # set by build()


class CorpusFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class InsertReport:
    """Where a key landed: depth equals the number of bits consumed."""

    label: str | None
    depth: int
    path: str
    parent: str | None
    side: str  # "root", "left" or "right"


class _Node:
    __slots__ = ("label", "left", "right")

    def __init__(self, label):
        self.label = label
        self.left = None
        self.right = None


def _check_bits(bits: str) -> None:
    if any(c not in "01" for c in bits):
        raise ValueError(f"bit string may contain only 0 and 1: {bits!r}")


class Dst:
    """A digital search tree; single writer, probe reads are safe after build."""

    def __init__(self):
        self.root = None
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def insert(self, label, bits: str) -> InsertReport:
        """Place a key at the first empty node along its bit path.

        Raises InsufficientBitsError (tree unchanged) if every prefix of
        ``bits`` leads to an occupied node.
        """
        _check_bits(bits)
        if self.root is None:
            self.root = _Node(label)
            self._size += 1
            return InsertReport(label, 0, "", None, "root")
        node = self.root
        for i, c in enumerate(bits):
            child = node.left if c == "0" else node.right
            if child is None:
                if c == "0":
                    node.left = _Node(label)
                else:
                    node.right = _Node(label)
                self._size += 1
                return InsertReport(label, i + 1, bits[: i + 1], node.label,
                                    "left" if c == "0" else "right")
            node = child
        raise InsufficientBitsError(label, len(bits))

    def probe(self, bits: str, label=None) -> InsertReport:
        """Report where a key with these bits would land, without inserting."""
        _check_bits(bits)
        if self.root is None:
            return InsertReport(label, 0, "", None, "root")
        node = self.root
        for i, c in enumerate(bits):
            child = node.left if c == "0" else node.right
            if child is None:
                return InsertReport(label, i + 1, bits[: i + 1], node.label,
                                    "left" if c == "0" else "right")
            node = child
        raise InsufficientBitsError(label, len(bits))


def build(corpus) -> tuple[Dst, list[InsertReport]]:
    """Insert (label, bits) pairs left to right; reports come back in order."""
    tree = Dst()
    reports = []
    for idx, (label, bits) in enumerate(corpus):
        try:
            reports.append(tree.insert(label, bits))
        except InsufficientBitsError as err:
            err.index = idx
            raise
    return tree, reports


def knuth_corpus() -> tuple[tuple[str, str], ...]:
    """The embedded ten-entry corpus, labels x_1 .. x_10."""
    return tuple((f"x_{i}", bits) for i, bits in enumerate(_KNUTH_BITS, 1))


def bits_from_unit_interval(x: float, length: int) -> str:
    """First ``length`` binary digits of x in [0, 1), by repeated doubling."""
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must lie in [0, 1), got {x!r}")
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    out = []
    for _ in range(length):
        x *= 2.0
        if x >= 1.0:
            out.append("1")
            x -= 1.0
        else:
            out.append("0")
    return "".join(out)


def parse_corpus(text: str) -> list[tuple[str, str]]:
    """Parse `label whitespace bitstring` records, one per line.

    Blank lines and lines starting with # are skipped. Errors carry the
    1-based line number.
    """
    records = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CorpusFormatError(
                lineno, f"expected 'label bits', got {len(parts)} fields")
        label, bits = parts
        if any(c not in "01" for c in bits):
            raise CorpusFormatError(lineno, f"invalid bit string {bits!r}")
        records.append((label, bits))
    return records


def load_corpus(path) -> list[tuple[str, str]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_corpus(fh.read())


def _walk_depth(occupied: set, key: int, width: int, limit: int,
                place: bool) -> int:
    """Depth of the first free node along ``key``'s bit path, claiming it
    when ``place`` is set; -1 if the bit budget runs out first."""
    node = 1
    level = 0
    while node in occupied:
        if level >= limit:
            return -1
        node = (node << 1) | ((key >> (width - 1 - level)) & 1)
        level += 1
    if place:
        occupied.add(node)
    return level


def simulate_insertion_depth(n: int, replicates: int, bit_budget: int = 64,
                             rng: np.random.Generator | None = None,
                             probe_bits: str | None = None) -> IntPmf:
    """Empirical law of the insertion depth of key n+1 under uniform keys.

    Each replicate builds a fresh tree from n random keys (each key is
    ``bit_budget`` independent fair coins) and records the depth at which one
    more key would be inserted. With ``probe_bits`` the extra key is a fixed
    direction probed without inserting; the law is the same either way.
    Replicates where any key exhausts its bit budget are dropped and counted
    in the returned pmf's ``truncation``.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    if bit_budget < 1:
        raise ValueError(f"bit_budget must be >= 1, got {bit_budget}")
    if probe_bits is not None:
        _check_bits(probe_bits)
        if not probe_bits:
            raise ValueError("probe_bits must be nonempty")
    if rng is None:
        rng = stream_rng()

    words = (bit_budget + 63) // 64
    width = 64 * words
    n_keys = n if probe_bits is not None else n + 1
    probe_key = int(probe_bits, 2) if probe_bits else None
    probe_width = len(probe_bits) if probe_bits else width
    probe_limit = len(probe_bits) if probe_bits else bit_budget

    depths = np.empty(replicates, dtype=np.int64)
    kept = 0
    exceeded = 0
    for _ in range(replicates):
        if n_keys:
            rows = rng.integers(0, 2 ** 64, size=(n_keys, words),
                                dtype=np.uint64).tolist()
            if words == 1:
                keys = [row[0] for row in rows]
            else:
                keys = []
                for row in rows:
                    k = 0
                    for w in row:
                        k = (k << 64) | w
                    keys.append(k)
        else:
            keys = []
        occupied = set()
        bad = False
        for key in keys[:n]:
            if _walk_depth(occupied, key, width, bit_budget, True) < 0:
                bad = True
                break
        if bad:
            exceeded += 1
            continue
        if probe_bits is not None:
            d = _walk_depth(occupied, probe_key, probe_width, probe_limit,
                            False)
        else:
            d = _walk_depth(occupied, keys[n], width, bit_budget, False)
        if d < 0:
            exceeded += 1
            continue
        depths[kept] = d
        kept += 1
    if kept == 0:
        raise InsufficientBitsError("probe", bit_budget)
    return IntPmf.from_samples(depths[:kept], truncation=exceeded / replicates)
