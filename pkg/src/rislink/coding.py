"""Traditional source-coding baselines (Huffman, fixed 6-bit), digital
modulation, power normalization, and the symbol-matrix file interface for
externally produced semantic symbols.

Bits are numpy uint8 arrays of 0/1. The 64-character 6-bit alphabet is
frozen below; uppercase folds to lowercase and anything outside the table
maps to '?'. Huffman decoding is deliberately fragile: a bit error may
desynchronize all following characters, which is the behavior the fixed-
length baseline is compared against.
"""

import heapq
import json
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

_ROW_POWER_TOL = 1e-9


@dataclass(frozen=True)
class SymbolMatrix:
    """N_e x n complex symbols; `normalized` records that every row has
    mean |s|^2 equal to 1."""

    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.values, dtype=complex))
        if v.ndim != 2:
            raise ValueError("symbol matrix must be 2D")
        if not np.all(np.isfinite(v)):
            raise ValueError("symbols must be finite")
        if self.normalized:
            power = np.mean(np.abs(v) ** 2, axis=1)
            if np.any(np.abs(power - 1.0) > _ROW_POWER_TOL):
                raise ValueError("row power differs from 1 beyond tolerance")
        object.__setattr__(self, "values", v)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def normalize_rows(m: SymbolMatrix) -> SymbolMatrix:
    """Scale each row so its mean |s|^2 is exactly 1."""
    power = np.mean(np.abs(m.values) ** 2, axis=1)
    if np.any(power == 0.0):
        raise ValueError("cannot normalize an all-zero row")
    return SymbolMatrix(m.values / np.sqrt(power)[:, None], normalized=True)


def store_symbol_matrix(m: SymbolMatrix, path) -> None:
    n_rows, n_cols = m.shape
    flat = m.values.ravel()
    payload = {
        "n_rows": int(n_rows),
        "n_cols": int(n_cols),
        "data": [x for z in flat for x in (z.real, z.imag)],
    }
    with open(path, "w") as f:
        json.dump(payload, f)


def load_symbol_matrix(path) -> SymbolMatrix:
    with open(path) as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: malformed symbol-matrix file: {exc}") from exc
    try:
        n_rows, n_cols = int(payload["n_rows"]), int(payload["n_cols"])
        raw = np.asarray(payload["data"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: missing symbol-matrix fields: {exc}") from exc
    if raw.size != 2 * n_rows * n_cols:
        raise ValueError(
            f"{path}: expected {2 * n_rows * n_cols} reals for a "
            f"{n_rows}x{n_cols} matrix, got {raw.size}"
        )
    return SymbolMatrix((raw[0::2] + 1j * raw[1::2]).reshape(n_rows, n_cols))


# --------------------------------------------------------------------------
# Huffman coding


@dataclass(frozen=True)
class HuffmanCode:
    table: dict  # symbol -> codeword string of '0'/'1'
    frequencies: dict = field(default_factory=dict)

    def expected_length(self) -> float:
        total = sum(self.frequencies.values())
        return sum(
            count * len(self.table[sym]) for sym, count in self.frequencies.items()
        ) / total


def huffman_build(freqs: dict) -> HuffmanCode:
    """Optimal prefix code. Deterministic: initial nodes are ordered by
    symbol, merges break count ties on insertion order, and the
    lower-weight child gets bit 0."""
    items = [(sym, count) for sym, count in sorted(freqs.items()) if count > 0]
    if len(items) < 2:
        raise ValueError("huffman_build needs at least 2 symbols with positive counts")
    # heap entries: (count, insertion order, node); node = symbol or (left, right)
    heap = [(count, order, sym) for order, (sym, count) in enumerate(items)]
    heapq.heapify(heap)
    order = len(heap)
    while len(heap) > 1:
        c1, _, left = heapq.heappop(heap)
        c2, _, right = heapq.heappop(heap)
        heapq.heappush(heap, (c1 + c2, order, (left, right)))
        order += 1
    table = {}

    def assign(node, prefix):
        if isinstance(node, tuple):
            assign(node[0], prefix + "0")
            assign(node[1], prefix + "1")
        else:
            table[node] = prefix

    assign(heap[0][2], "")
    return HuffmanCode(table, dict(items))


def huffman_encode(text: str, code: HuffmanCode) -> np.ndarray:
    try:
        bits = "".join(code.table[ch] for ch in text)
    except KeyError as exc:
        raise ValueError(f"character not in Huffman table: {exc}") from exc
    return np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")


def huffman_decode(bits: np.ndarray, code: HuffmanCode) -> str:
    """Greedy prefix decoding; corrupted streams may desynchronize and
    trailing undecodable bits are dropped."""
    reverse = {cw: sym for sym, cw in code.table.items()}
    out = []
    current = ""
    for b in bits:
        current += "1" if b else "0"
        sym = reverse.get(current)
        if sym is not None:
            out.append(sym)
            current = ""
    return "".join(out)


def huffman_frequencies(corpus) -> Counter:
    """Character counts over an iterable of strings."""
    counts = Counter()
    for text in corpus:
        counts.update(text)
    return counts


def store_huffman(code: HuffmanCode, path) -> None:
    with open(path, "w") as f:
        json.dump({"table": code.table, "frequencies": code.frequencies}, f)


def load_huffman(path) -> HuffmanCode:
    with open(path) as f:
        payload = json.load(f)
    return HuffmanCode(dict(payload["table"]), dict(payload["frequencies"]))


# --------------------------------------------------------------------------
# Fixed 6-bit coding

SIXBIT_ALPHABET = (
    "abcdefghijklmnopqrstuvwxyz"
    "0123456789"
    " .,!?;:'\"()-_/\\@#$%&*+=<>[]~"
)
assert len(SIXBIT_ALPHABET) == 64 and len(set(SIXBIT_ALPHABET)) == 64

_SIXBIT_INDEX = {ch: i for i, ch in enumerate(SIXBIT_ALPHABET)}
SIXBIT_REPLACEMENT = "?"


def sixbit_fold(text: str) -> str:
    """Fold text into the 6-bit alphabet (lowercase, '?' for unknowns)."""
    return "".join(
        ch if ch in _SIXBIT_INDEX else SIXBIT_REPLACEMENT for ch in text.lower()
    )


def sixbit_encode(text: str) -> np.ndarray:
    codes = np.array(
        [_SIXBIT_INDEX.get(ch.lower(), _SIXBIT_INDEX[SIXBIT_REPLACEMENT]) for ch in text],
        dtype=np.uint8,
    )
    if codes.size == 0:
        return np.zeros(0, dtype=np.uint8)
    shifts = np.arange(5, -1, -1)
    return ((codes[:, None] >> shifts) & 1).astype(np.uint8).ravel()


def sixbit_decode(bits: np.ndarray) -> str:
    """Each 6-bit group decodes independently (bit errors stay local to one
    character); a trailing partial group is dropped."""
    n = bits.size - bits.size % 6
    if n == 0:
        return ""
    groups = np.asarray(bits[:n], dtype=np.uint8).reshape(-1, 6)
    codes = groups @ (1 << np.arange(5, -1, -1))
    return "".join(SIXBIT_ALPHABET[c] for c in codes)


# --------------------------------------------------------------------------
# Modulation


def qpsk_modulate(bits: np.ndarray) -> tuple[np.ndarray, int]:
    """Gray-mapped QPSK, constellation {(+-1 +-1j)/sqrt(2)} (00 -> (1+1j)/sqrt(2)),
    unit average power. Returns (symbols, pad) where pad is the number of
    zero bits appended to reach an even length."""
    bits = np.asarray(bits, dtype=np.uint8)
    pad = (-bits.size) % 2
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    pairs = bits.reshape(-1, 2).astype(float)
    symbols = ((1.0 - 2.0 * pairs[:, 0]) + 1j * (1.0 - 2.0 * pairs[:, 1])) / math.sqrt(2.0)
    return symbols, pad


def qpsk_demodulate(symbols: np.ndarray, n_bits: int | None = None) -> np.ndarray:
    """Per-component sign decisions; trims to n_bits when given."""
    symbols = np.asarray(symbols).ravel()
    bits = np.empty((symbols.size, 2), dtype=np.uint8)
    bits[:, 0] = symbols.real < 0
    bits[:, 1] = symbols.imag < 0
    flat = bits.ravel()
    return flat[:n_bits] if n_bits is not None else flat


# per-axis Gray map (2 bits -> level): 00 -> -3, 01 -> -1, 10 -> +3, 11 -> +1
_QAM16_GRAY_LEVELS = np.array([-3.0, -1.0, 3.0, 1.0]) / math.sqrt(10.0)


def qam16_modulate(bits: np.ndarray) -> tuple[np.ndarray, int]:
    """Gray-mapped 16-QAM behind the same interface as QPSK; pads to a
    multiple of 4 bits."""
    bits = np.asarray(bits, dtype=np.uint8)
    pad = (-bits.size) % 4
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    quads = bits.reshape(-1, 4)
    i_idx = 2 * quads[:, 0] + quads[:, 1]
    q_idx = 2 * quads[:, 2] + quads[:, 3]
    return _QAM16_GRAY_LEVELS[i_idx] + 1j * _QAM16_GRAY_LEVELS[q_idx], pad


def _qam16_slice(values: np.ndarray) -> np.ndarray:
    dist = np.abs(values[:, None] - _QAM16_GRAY_LEVELS[None, :])
    return np.argmin(dist, axis=1)


def qam16_demodulate(symbols: np.ndarray, n_bits: int | None = None) -> np.ndarray:
    symbols = np.asarray(symbols).ravel()
    i_idx = _qam16_slice(symbols.real)
    q_idx = _qam16_slice(symbols.imag)
    bits = np.empty((symbols.size, 4), dtype=np.uint8)
    bits[:, 0] = i_idx >> 1
    bits[:, 1] = i_idx & 1
    bits[:, 2] = q_idx >> 1
    bits[:, 3] = q_idx & 1
    flat = bits.ravel()
    return flat[:n_bits] if n_bits is not None else flat


MODULATIONS = {
    "qpsk": (qpsk_modulate, qpsk_demodulate),
    "16qam": (qam16_modulate, qam16_demodulate),
}
