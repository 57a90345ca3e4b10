import itertools
import json
import math

import numpy as np
import pytest

from conftest import make_corpus
from rislink.coding import (
    SIXBIT_ALPHABET,
    SymbolMatrix,
    huffman_build,
    huffman_decode,
    huffman_encode,
    huffman_frequencies,
    load_huffman,
    load_symbol_matrix,
    normalize_rows,
    qam16_demodulate,
    qam16_modulate,
    qpsk_demodulate,
    qpsk_modulate,
    sixbit_decode,
    sixbit_encode,
    sixbit_fold,
    store_huffman,
    store_symbol_matrix,
)

# --- Huffman ----------------------------------------------------------------


def all_prefix_code_length_profiles(n):
    """Length profiles (sorted) of every full binary tree with n leaves."""
    if n == 1:
        return {(0,)}
    profiles = set()
    for k in range(1, n):
        for left in all_prefix_code_length_profiles(k):
            for right in all_prefix_code_length_profiles(n - k):
                profile = tuple(sorted([d + 1 for d in left] + [d + 1 for d in right]))
                profiles.add(profile)
    return profiles


def brute_force_optimal_length(counts):
    """Minimum expected codeword length over all prefix codes."""
    total = sum(counts)
    ordered = sorted(counts, reverse=True)
    best = math.inf
    for profile in all_prefix_code_length_profiles(len(counts)):
        # optimal assignment pairs largest counts with shortest codewords
        cost = sum(c * l for c, l in zip(ordered, sorted(profile))) / total
        best = min(best, cost)
    return best


def test_huffman_lengths_and_expected_length():
    code = huffman_build({"a": 4, "b": 2, "c": 1, "d": 1})
    lengths = {sym: len(cw) for sym, cw in code.table.items()}
    assert lengths == {"a": 1, "b": 2, "c": 3, "d": 3}
    assert code.expected_length() == pytest.approx(1.75)
    assert code.expected_length() == pytest.approx(
        brute_force_optimal_length([4, 2, 1, 1])
    )


def test_huffman_uniform_and_two_symbol():
    code4 = huffman_build({s: 1 for s in "abcd"})
    assert all(len(cw) == 2 for cw in code4.table.values())
    code2 = huffman_build({"a": 1, "b": 1})
    assert sorted(len(cw) for cw in code2.table.values()) == [1, 1]


def test_huffman_needs_two_symbols():
    with pytest.raises(ValueError):
        huffman_build({"a": 3})
    with pytest.raises(ValueError):
        huffman_build({"a": 3, "b": 0})


def test_huffman_optimal_on_random_small_alphabets():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = rng.integers(2, 5)
        counts = rng.integers(1, 50, size=n).tolist()
        freqs = dict(zip("abcd", counts))
        code = huffman_build(freqs)
        assert code.expected_length() == pytest.approx(
            brute_force_optimal_length(counts), abs=1e-12
        )


def test_huffman_entropy_bound_size26():
    rng = np.random.default_rng(1)
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    for _ in range(50):
        counts = rng.integers(1, 1000, size=26)
        freqs = dict(zip(alphabet, counts.tolist()))
        code = huffman_build(freqs)
        p = counts / counts.sum()
        entropy = -np.sum(p * np.log2(p))
        assert entropy - 1e-9 <= code.expected_length() < entropy + 1.0


def test_huffman_prefix_free():
    corpus = make_corpus()
    code = huffman_build(huffman_frequencies(corpus))
    words = sorted(code.table.values())
    for a, b in itertools.combinations(words, 2):
        assert not b.startswith(a), f"{a} is a prefix of {b}"


def test_huffman_round_trip_and_errors():
    code = huffman_build({"h": 1, "e": 1, "l": 3, "o": 2, "w": 1, "r": 1, "d": 1, " ": 1})
    text = "hello world"
    bits = huffman_encode(text, code)
    assert huffman_decode(bits, code) == text
    assert huffman_decode(np.zeros(0, dtype=np.uint8), code) == ""
    assert huffman_encode("", code).size == 0
    with pytest.raises(ValueError):
        huffman_encode("hello!", code)


def test_huffman_desynchronization_permitted():
    corpus = make_corpus()
    code = huffman_build(huffman_frequencies(corpus))
    text = corpus[0]
    bits = huffman_encode(text, code)
    corrupted = bits.copy()
    corrupted[1] ^= 1
    decoded = huffman_decode(corrupted, code)
    assert decoded != text  # a single early flip is allowed to cascade


def test_huffman_table_serialization(tmp_path):
    code = huffman_build({"a": 4, "b": 2, "c": 1, "d": 1})
    path = tmp_path / "code.json"
    store_huffman(code, path)
    back = load_huffman(path)
    assert back.table == code.table
    assert back.frequencies == code.frequencies


def test_huffman_deterministic():
    freqs = {"a": 2, "b": 2, "c": 2, "d": 2, "e": 1}
    assert huffman_build(freqs).table == huffman_build(freqs).table


# --- 6-bit coding -----------------------------------------------------------


def test_sixbit_alphabet_frozen():
    assert len(SIXBIT_ALPHABET) == 64
    assert len(set(SIXBIT_ALPHABET)) == 64
    assert "?" in SIXBIT_ALPHABET


def test_sixbit_round_trip():
    text = "hello world 123!"
    assert sixbit_decode(sixbit_encode(text)) == text
    assert sixbit_decode(sixbit_encode("")) == ""


def test_sixbit_folds_unknown_and_uppercase():
    assert sixbit_fold("Hello`~") == "hello?~"
    assert sixbit_decode(sixbit_encode("ABC")) == "abc"
    assert sixbit_decode(sixbit_encode("é")) == "?"


def test_sixbit_single_flip_changes_one_character():
    text = "the quick brown fox"
    bits = sixbit_encode(text)
    for pos in (0, 7, bits.size - 1):
        corrupted = bits.copy()
        corrupted[pos] ^= 1
        decoded = sixbit_decode(corrupted)
        assert len(decoded) == len(text)
        assert sum(a != b for a, b in zip(decoded, text)) == 1


def test_sixbit_locality_k_flips():
    rng = np.random.default_rng(4)
    text = "signal processing baseline"
    bits = sixbit_encode(text)
    for k in (2, 5, 9):
        corrupted = bits.copy()
        idx = rng.choice(bits.size, size=k, replace=False)
        corrupted[idx] ^= 1
        decoded = sixbit_decode(corrupted)
        assert sum(a != b for a, b in zip(decoded, text)) <= k


def test_sixbit_partial_group_dropped():
    bits = np.array([0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0], dtype=np.uint8)
    assert sixbit_decode(bits) == "ab"  # 13 bits -> 2 chars, 1 bit dropped


# --- modulation -------------------------------------------------------------


def test_qpsk_anchor_and_round_trip():
    symbols, pad = qpsk_modulate(np.array([0, 0], dtype=np.uint8))
    assert pad == 0
    assert symbols[0] == pytest.approx((1 + 1j) / np.sqrt(2))

    rng = np.random.default_rng(2)
    bits = rng.integers(0, 2, size=999).astype(np.uint8)
    symbols, pad = qpsk_modulate(bits)
    assert pad == 1
    np.testing.assert_array_equal(qpsk_demodulate(symbols, n_bits=bits.size), bits)


def test_qpsk_unit_average_power():
    rng = np.random.default_rng(3)
    bits = rng.integers(0, 2, size=10_000).astype(np.uint8)
    symbols, _ = qpsk_modulate(bits)
    assert np.mean(np.abs(symbols) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_qpsk_gray_mapping_adjacent_symbols_differ_one_bit():
    points = {}
    for b0 in (0, 1):
        for b1 in (0, 1):
            s, _ = qpsk_modulate(np.array([b0, b1], dtype=np.uint8))
            points[(b0, b1)] = s[0]
    for (a, pa), (b, pb) in itertools.combinations(points.items(), 2):
        hamming = sum(x != y for x, y in zip(a, b))
        if abs(pa - pb) == pytest.approx(np.sqrt(2), rel=1e-9):  # nearest neighbors
            assert hamming == 1


def test_qam16_round_trip_and_power():
    rng = np.random.default_rng(6)
    bits = rng.integers(0, 2, size=4002).astype(np.uint8)
    symbols, pad = qam16_modulate(bits)
    assert pad == 2
    np.testing.assert_array_equal(qam16_demodulate(symbols, n_bits=bits.size), bits)
    assert np.mean(np.abs(symbols) ** 2) == pytest.approx(1.0, abs=0.02)


def test_qpsk_ber_matches_q_function():
    # per-symbol SNR gamma: per-bit error rate Q(sqrt(gamma))
    rng = np.random.default_rng(10)
    gamma = 10.0
    n_bits = 2_000_000
    bits = rng.integers(0, 2, size=n_bits).astype(np.uint8)
    symbols, _ = qpsk_modulate(bits)
    sigma2 = 1.0 / gamma
    noise = np.sqrt(sigma2 / 2) * (
        rng.standard_normal(symbols.size) + 1j * rng.standard_normal(symbols.size)
    )
    recovered = qpsk_demodulate(symbols + noise, n_bits=n_bits)
    ber = np.mean(recovered != bits)
    expected = 0.5 * math.erfc(math.sqrt(gamma / 2.0))
    assert ber == pytest.approx(expected, rel=0.05)


# --- symbol matrices ---------------------------------------------------------


def test_normalize_rows():
    m = SymbolMatrix(np.array([[2.0, 0.0, 0.0]], dtype=complex))
    out = normalize_rows(m)
    assert out.normalized
    np.testing.assert_allclose(np.mean(np.abs(out.values) ** 2, axis=1), 1.0, rtol=1e-12)
    np.testing.assert_allclose(out.values[0, 0], np.sqrt(3.0), rtol=1e-12)


def test_normalize_rows_rejects_zero_row():
    with pytest.raises(ValueError):
        normalize_rows(SymbolMatrix(np.zeros((2, 3), dtype=complex)))


def test_qpsk_row_already_normalized():
    bits = np.array([0, 0, 0, 1, 1, 0, 1, 1], dtype=np.uint8)
    symbols, _ = qpsk_modulate(bits)
    m = normalize_rows(SymbolMatrix(symbols.reshape(1, -1)))
    np.testing.assert_allclose(m.values, symbols.reshape(1, -1), rtol=1e-12)


def test_symbol_matrix_normalized_flag_checked():
    with pytest.raises(ValueError):
        SymbolMatrix(np.full((1, 3), 2.0 + 0j), normalized=True)


def test_symbol_matrix_file_round_trip(tmp_path):
    rng = np.random.default_rng(12)
    m = SymbolMatrix(rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3)))
    path = tmp_path / "s.json"
    store_symbol_matrix(m, path)
    back = load_symbol_matrix(path)
    assert back.shape == (5, 3)
    np.testing.assert_array_equal(back.values, m.values)


def test_symbol_matrix_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValueError):
        load_symbol_matrix(bad)
    mismatch = tmp_path / "mismatch.json"
    mismatch.write_text(json.dumps({"n_rows": 2, "n_cols": 2, "data": [1.0, 2.0]}))
    with pytest.raises(ValueError):
        load_symbol_matrix(mismatch)
