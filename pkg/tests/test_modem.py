import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rscodes.errors import Ambiguous, BadParameters, DecodingStopped
from rscodes.galois import GaloisField
from rscodes.modem import (
    LISTED,
    AwgnChannel,
    BlockRsSpc,
    RsSpcSymbol,
    apply_disturbance,
    awgn,
    ber_sim,
    bits_to_symbols,
    coding_gain,
    detected_sets,
    hard,
    mfsk_detect,
    mfsk_envelopes,
    modulate,
    p_bsc,
    perm_bound,
    perm_code,
    perm_decode,
    perm_scores,
    perm_search,
    spc_soft_decode,
    symbols_to_bits,
    tone_matrix,
    uncoded_ber,
    union_bound,
)
from rscodes.rng import stream
from rscodes.rs import rs_new

F32 = GaloisField.binary(5)
RS31 = rs_new(F32, 31, 21)


# AWGN
def test_noiseless_channel_is_identity():
    bits = stream(0).integers(0, 2, 1000)
    assert np.array_equal(hard(awgn(AwgnChannel(sigma2=1e-12), bits)), bits)


def test_p_bsc_q1():
    ch = AwgnChannel(sigma2=1.0, amplitude=1.0)
    assert p_bsc(ch) == pytest.approx(0.5 * math.erfc(1 / math.sqrt(2)), rel=1e-12)
    assert p_bsc(ch) == pytest.approx(0.15866, abs=1e-5)


def test_empirical_bsc_error_rate():
    ch = AwgnChannel(sigma2=0.5, seed=5)
    bits = ch.rng.integers(0, 2, 10**6)
    ber = np.mean(hard(awgn(ch, bits)) != bits)
    p = p_bsc(ch)
    assert abs(ber - p) <= 3 * math.sqrt(p * (1 - p) / 10**6)


def test_ebn0_bookkeeping():
    ch = AwgnChannel.from_ebn0_db(3.0, rate=0.5)
    assert ch.Es == pytest.approx(0.5 * ch.Eb)
    assert ch.Eb / (2 * ch.sigma2) == pytest.approx(10**0.3)
    with pytest.raises(BadParameters):
        AwgnChannel(sigma2=0)


# SPC soft decoding
def test_spc_worked_example():
    assert spc_soft_decode([4, 3, -4, -1, -3, 5]).tolist() == [1, 1, 0, 1, 0, 1]


def test_spc_even_parity_unchanged():
    r = np.array([2.0, -0.1, 0.3, -3.0])
    assert np.array_equal(spc_soft_decode(r), hard(r))


@pytest.mark.parametrize("n", range(2, 11))
def test_spc_soft_decode_is_ml(n):
    book = np.array([w for w in itertools.product((0, 1), repeat=n) if sum(w) % 2 == 0])
    r = stream(n).normal(0, 1.5, (1200, n)) + modulate(book[stream(n + 100).integers(0, len(book), 1200)])
    dist = ((r[:, None, :] - modulate(book)[None]) ** 2).sum(axis=2)
    assert np.array_equal(spc_soft_decode(r), book[dist.argmin(axis=1)])


def test_spc_target_parity():
    r = np.array([[0.5, 1.0], [-0.2, 2.0], [1.0, -3.0]])
    out = spc_soft_decode(r, axis=0, parity=np.array([1, 0]))
    assert (out.sum(axis=0) % 2).tolist() == [1, 0]
    assert out[:, 0].tolist() == [1, 1, 1]  # parity 0 against target 1: weakest bit flipped
    assert out[:, 1].tolist() == [1, 1, 0]  # parity already 0


# structure A
def test_structure_a_noiseless_and_rate():
    a = RsSpcSymbol(RS31)
    info = stream(1).integers(0, 32, 21).tolist()
    tx = a.encode(info)
    assert tx.shape == (31, 6) and np.all(tx.sum(axis=1) % 2 == 0)
    res = a.decode(modulate(tx))
    assert res.ok and res.codeword[:21] == info
    assert a.rate == pytest.approx(21 / 31 * 5 / 6)


def test_structure_a_single_weak_bit_per_symbol_corrected():
    a = RsSpcSymbol(RS31)
    rng = stream(2)
    info = rng.integers(0, 32, 21).tolist()
    tx = a.encode(info)
    soft = modulate(tx) * rng.uniform(0.5, 1.5, tx.shape)
    weakest = np.abs(soft).argmin(axis=1)
    soft[np.arange(31), weakest] *= -1  # every symbol has its least reliable bit inverted
    assert np.array_equal(a.symbols(soft), np.array(a.code.encode_systematic(info)))


def test_structure_a_symbol_error_shape():
    """Per-symbol SPC symbol errors follow C(m+1, 2) Q(sqrt(2 E_s / sigma^2))."""
    a = RsSpcSymbol(RS31)
    rng = stream(3)
    ratios = []
    for snr in (8.0, 10.0):
        s = rng.integers(0, 32, 400_000)
        b = a.bits(s)
        r = modulate(b) + rng.normal(0, math.sqrt(1 / snr), b.shape)
        ser = np.mean(a.symbols(r) != s)
        ratios.append(ser / (math.comb(6, 2) * 0.5 * math.erfc(math.sqrt(snr))))
    assert all(0.75 < x < 1.25 for x in ratios)


# structure B
BLK = BlockRsSpc(RS31, 9)


def _block(seed):
    info = stream(seed).integers(0, 32, (8, 21))
    return info, BLK.encode(info)


def test_structure_b_encode_column_parity():
    _, tx = _block(0)
    assert tx.shape == (9, 31, 5) and not np.any(tx.sum(axis=0) % 2)


def test_structure_b_clean_block():
    info, tx = _block(1)
    res = BLK.decode(modulate(tx))
    assert res.actions == [("clean",)] and np.array_equal(res.info, info) and res.passes == 1


def test_structure_b_single_flagged_row_xor_repaired():
    info, tx = _block(2)
    soft = modulate(tx)
    others = [r for r in range(9) if r != 3]
    for j in range(20):
        # paired errors keep column parity even, so the column SPC leaves them;
        # row 3 gets 20 symbol errors, every other row at most 3
        soft[3, j, 0] *= -1
        soft[others[j % 8], j, 0] *= -1
    res = BLK.decode(soft)
    assert ("xor", 3) in res.actions and np.array_equal(res.info, info)


def test_structure_b_likelihood_row_selection():
    """One row miscorrected by a codeword E: the likelihood rule finds it."""
    g = RS31.generator_poly
    rng = stream(4)
    hits, trials = 0, 10**4
    sigma = math.sqrt(1 / (2 * 10 ** 0.3))
    blocks = [_block(100 + b)[1] for b in range(20)]
    for t in range(trials):
        tx = blocks[t % 20]
        rows = bits_to_symbols(tx)
        shift = int(rng.integers(0, 31))
        scale = int(rng.integers(1, 32))
        E = np.roll(np.array([F32.mul(scale, c) for c in g] + [0] * (31 - len(g))), shift)
        i = int(rng.integers(0, 9))
        wrong = rows.copy()
        wrong[i] ^= E
        soft = modulate(tx) + rng.normal(0, sigma, tx.shape)
        hits += BLK.select_row(soft, wrong, E) == i
    assert hits / trials >= 0.99


def test_structure_b_noisy_recovery_and_guard():
    rng = stream(6)
    info, tx = _block(7)
    soft = modulate(tx) + rng.normal(0, 0.6, tx.shape)
    assert np.array_equal(BLK.decode(soft).info, info)
    garbage = rng.normal(0, 1, tx.shape)
    res = BLK.decode(garbage)
    assert res.stopped and len(res.flagged) > 1 and res.passes <= 3
    with pytest.raises(DecodingStopped):
        BLK.decode(garbage, strict=True)


def test_symbol_bit_roundtrip():
    s = np.arange(32)
    assert np.array_equal(bits_to_symbols(symbols_to_bits(s, 5)), s)
    assert symbols_to_bits(6, 3).tolist() == [0, 1, 1]


# MFSK detection
def test_detection_threshold():
    env = np.array([[1.0, 0.49], [0.51, 0.0]])
    assert mfsk_detect(env, 1.0).tolist() == [[1, 0], [1, 0]]
    assert mfsk_detect(env, 1.0, offset=0.2).tolist() == [[1, 0], [0, 0]]
    tx = tone_matrix([1, 2, 3, 4], 4, offset=1)
    assert np.array_equal(mfsk_detect(mfsk_envelopes([1, 2, 3, 4], 4, 4.0, 1e-12, stream(0), 1), 4.0), tx)


def test_disturbance_panels():
    clean = tone_matrix([1, 2, 3, 4], 4, offset=1)
    assert clean.tolist() == np.eye(4, dtype=int).tolist()
    assert apply_disturbance(clean, "background-insert", [(0, 2)]).tolist() == [
        [1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert apply_disturbance(clean, "background-delete", [(1, 1)]).tolist() == [
        [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert apply_disturbance(clean, "narrowband", 0).tolist() == [
        [1, 1, 1, 1], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert apply_disturbance(clean, "impulse", 3).tolist() == [
        [1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]]
    assert apply_disturbance(clean, "fade", 1).tolist() == [
        [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    with pytest.raises(BadParameters):
        apply_disturbance(clean, "hail", 0)


# permutation codes
@pytest.mark.parametrize("M,d,size", [(2, 2, 2), (3, 2, 6), (3, 3, 3), (4, 2, 24), (4, 3, 12), (4, 4, 4),
                                      (5, 2, 120), (5, 3, 60), (5, 4, 20), (5, 5, 5)])
def test_maximum_permutation_code_sizes(M, d, size):
    code = perm_search(M, d)
    assert len(code) == size and code.d_min >= d
    assert len(code) == perm_bound(M, d)  # meeting the bound certifies maximality


def test_listed_codebooks():
    for (M, d), words in LISTED.items():
        c = perm_code(M, "table", d)
        assert c.d_min == d and len(c) == len(words)


@pytest.mark.parametrize("M", [4, 8, 16])
def test_rs_derived(M):
    c = perm_code(M)
    assert len(c) == M * (M - 1) == perm_bound(M, M - 1)
    assert c.d_min == M - 1
    assert all(sorted(w) == list(range(M)) for w in c.codewords)


def test_perm_errors():
    with pytest.raises(BadParameters):
        perm_code(6)
    with pytest.raises(BadParameters):
        perm_code(4, "table", 2)
    with pytest.raises(BadParameters):
        perm_bound(3, 4)


def test_narrowband_decode_example():
    code = perm_code(4, "table", 4)
    rx = apply_disturbance(tone_matrix((3, 4, 1, 2), 4, 1), "narrowband", 3)
    assert detected_sets(rx) == [(3, 4), (4,), (1, 4), (2, 4)]
    assert code.codewords[perm_decode(code, rx)] == (3, 4, 1, 2)


def test_impulse_decode_example():
    code = perm_code(4, "table", 4)
    rx = apply_disturbance(tone_matrix((3, 4, 1, 2), 4, 1), "impulse", [0, 1])
    assert detected_sets(rx)[:2] == [(1, 2, 3, 4)] * 2 and detected_sets(rx)[3] == (2,)
    assert code.codewords[perm_decode(code, rx)] == (3, 4, 1, 2)


def test_ambiguous_tie():
    code = perm_code(4, "table", 4)
    with pytest.raises(Ambiguous):
        perm_decode(code, np.zeros((4, 4), dtype=int))


def _tolerates(code, d):
    """Every single-type disturbance of size <= d - 1 decodes correctly."""
    M = code.M
    for ci, w in enumerate(code.codewords):
        tx = tone_matrix(w, M, code.offset)
        for e in range(1, d):
            for sel in itertools.combinations(range(M), e):
                for kind in ("narrowband", "impulse", "fade"):
                    if perm_decode(code, apply_disturbance(tx, kind, list(sel))) != ci:
                        return False
                cells = [(w[t] - code.offset, t) for t in sel]
                if perm_decode(code, apply_disturbance(tx, "background-delete", cells)) != ci:
                    return False
    return True


def _tolerates_insertions(code, d, exhaustive):
    M = code.M
    arr = code.array()
    for ci, w in enumerate(arr):
        tx = tone_matrix(w, M)
        free = [(f, t) for t in range(M) for f in range(M) if f != w[t]]
        if exhaustive:
            sets = itertools.combinations(free, d - 1)
        else:
            # the strongest insertions favour one competitor: d - 1 of its cells
            sets = (sel for cj, v in enumerate(arr) if cj != ci
                    for sel in itertools.combinations([(v[t], t) for t in range(M) if v[t] != w[t]], d - 1))
        for sel in sets:
            if perm_decode(code, apply_disturbance(tx, "background-insert", list(sel))) != ci:
                return False
    return True


def test_disturbance_tolerance_m4():
    for code in (perm_code(4), perm_code(4, "table", 3), perm_code(4, "table", 4)):
        d = code.d_min
        assert _tolerates(code, d) and _tolerates_insertions(code, d, exhaustive=True)


def test_disturbance_tolerance_m8_rs_derived():
    code = perm_code(8)
    assert _tolerates(code, 7) and _tolerates_insertions(code, 7, exhaustive=False)


def test_d_min_disturbances_can_fail():
    code = perm_code(4, "table", 4)
    rx = apply_disturbance(tone_matrix((1, 2, 3, 4), 4, 1), "impulse", [0, 1, 2, 3])
    with pytest.raises(Ambiguous):
        perm_decode(code, rx)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 11), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=6))
def test_scores_count_agreements(ci, cells):
    code = perm_code(4)
    rx = apply_disturbance(np.zeros((4, 4), int), "background-insert", cells)
    w = code.codewords[ci]
    assert perm_scores(code, rx)[ci] == sum(rx[w[t], t] for t in range(4))


# gains and BER
def test_coding_gain():
    assert coding_gain(2, 10**6 - 1, 10**6) == pytest.approx(10 * math.log10(2), abs=1e-4)
    assert coding_gain(3, 1, 3) == 0
    assert coding_gain(2, 5, 6) == pytest.approx(2.218, abs=1e-3)


def test_union_bound():
    assert union_bound(4, 3, 4 / 7, 5.0) == pytest.approx(16 * 0.5 * math.erfc(math.sqrt(3 * 4 / 7 * 5) / math.sqrt(2)))


def test_ber_sim_uncoded_and_deterministic():
    r = ber_sim("uncoded", 4.0, 10**6, seed=9)
    p = uncoded_ber(4.0)
    assert abs(r["ber"] - p) <= 3 * math.sqrt(p * (1 - p) / 10**6)
    assert ber_sim("spc", 5.0, 50_000, 3).to_json() == ber_sim("spc", 5.0, 50_000, 3).to_json()
    with pytest.raises(BadParameters):
        ber_sim("turbo", 1.0, 10, 0)
