import math

import pytest

import grandlab


def test_code_info():
    info = grandlab.code_info("ebch_16_11")
    assert info == {"n": 16, "k": 11, "d": 4, "even": True}
    assert grandlab.code_info("bch_15_11")["even"] is False
    # Unknown names are treated as code-file paths.
    with pytest.raises(RuntimeError, match="cannot open code file"):
        grandlab.code_info("no_such_code")


def test_encode_round_trip_noiseless():
    info_bits = [1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0]
    word = grandlab.encode("ebch_16_11", info_bits)
    assert len(word) == 16 and set(word) <= {0, 1}
    # Strong LLRs pointing at the transmitted word decode back to it with
    # near-certain soft output.
    llr = [20.0 if b else -20.0 for b in word]
    out = grandlab.decode("ebch_16_11", llr, decoder="grand", so_method="so_grand", list_size=2)
    assert out["bits"] == word
    assert out["s"] > 0.999999
    assert out["queries"] >= 1


def test_decode_argument_validation():
    llr = [0.5] * 16
    with pytest.raises(ValueError):
        grandlab.decode("ebch_16_11", llr, decoder="nope")
    with pytest.raises(ValueError):
        grandlab.decode("ebch_16_11", llr, so_method="forney", list_size=1)
    with pytest.raises(ValueError):
        grandlab.decode("ebch_16_11", llr[:5])
    with pytest.raises(ValueError):
        grandlab.decode("ebch_16_11", llr, decoder="gcd", so_method="so_grand")


def test_decoders_agree_on_clean_input():
    word = grandlab.encode("ehamming_8_4", [0, 1, 1, 0])
    llr = [8.0 if b else -8.0 for b in word]
    for decoder, method in [("grand", "so_grand"), ("gcd", "so_gcd"), ("ml", "map")]:
        out = grandlab.decode("ehamming_8_4", llr, decoder=decoder, so_method=method, list_size=2)
        assert out["bits"] == word, decoder


def test_brier_scoring():
    records = [(1.0, 1), (0.5, 0), (0.25, 1)]
    expected = (0.0 + 0.25 + 0.5625) / 3.0
    assert grandlab.brier_score(records) == pytest.approx(expected, abs=1e-15)
    parts = grandlab.brier_decomposition(records, bins=100)
    assert parts["calibration"] >= 0.0 and parts["refinement"] >= 0.0


def test_run_config_summary():
    rows = grandlab.run_config(
        """
        code = ebch_16_11
        decoders = grand
        so_methods = naive, so_grand
        list_size = 2
        eb_n0_grid = 2.0
        trials = 300
        master_seed = 11
        """
    )
    assert len(rows) == 2
    naive = next(r for r in rows if r["so_method"] == "naive")
    soft = next(r for r in rows if r["so_method"] == "so_grand")
    assert naive["bs"] == pytest.approx(naive["bler"], abs=1e-15)
    assert soft["bs"] <= naive["bs"]
    assert naive["trials"] == 300 and naive["decoder"] == "grand"
    # Same text, same rows: the run is a pure function of the config.
    again = grandlab.run_config(
        """
        code = ebch_16_11
        decoders = grand
        so_methods = naive, so_grand
        list_size = 2
        eb_n0_grid = 2.0
        trials = 300
        master_seed = 11
        """,
        workers=3,
    )
    assert again == rows


def test_run_config_rejects_bad_text():
    with pytest.raises(ValueError, match="forney requires list_size >= 2"):
        grandlab.run_config("so_methods = forney\nlist_size = 1\n")
