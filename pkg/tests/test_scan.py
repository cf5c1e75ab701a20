import json
import random

import numpy as np
import pytest

from collatzkit.accel import build_window_table
from collatzkit.orbit import stopping_time, total_stopping_time
from collatzkit.scan import (
    UNRESOLVED,
    Checkpoint,
    CheckpointError,
    ScanStats,
    scan_block,
    sigma_range,
    verify_range,
)


@pytest.mark.parametrize("w", [1, 3, 8, 12])
def test_scan_block_matches_direct(w):
    stop, sigma = scan_block(1, 3000, build_window_table(w))
    for n in range(1, 3000):
        assert sigma[n - 1] == total_stopping_time(n)
        if n >= 2:
            assert stop[n - 1] == stopping_time(n)


def test_scan_block_overflow_fallback():
    # a tiny limit forces most seeds through the Python-int path
    stop, sigma = scan_block(2, 500, limit=50)
    for n in range(2, 500):
        assert sigma[n - 2] == total_stopping_time(n)
        assert stop[n - 2] == stopping_time(n)


def test_scan_block_seeds_beyond_int64_guard():
    lo = 2**61
    stop, sigma = scan_block(lo, lo + 20)
    assert [int(s) for s in sigma] == [total_stopping_time(n) for n in range(lo, lo + 20)]


def test_scan_block_cap():
    stop, sigma = scan_block(27, 28, cap=50)
    assert sigma[0] == UNRESOLVED and stop[0] == UNRESOLVED
    stop, sigma = scan_block(27, 28, cap=60)
    assert stop[0] == stopping_time(27) == 59
    assert sigma[0] == UNRESOLVED


def test_sigma_range_spans_blocks():
    sig = sigma_range(65530, 65545)
    assert sig.tolist() == [total_stopping_time(n) for n in range(65530, 65546)]


def test_verify_small_range():
    report, ckpt = verify_range(2, 8)
    assert report.all_descend
    assert report.stats.max_sigma == (11, 7)
    assert ckpt.done
    assert "max_total_stopping_time=11 seed=7" in report.render()


def test_verify_single_even_seed():
    report, _ = verify_range(2**10, 2**10)
    assert report.stats.max_stop == (1, 1024)


def test_verify_rejects_bad_range():
    with pytest.raises(ValueError):
        verify_range(1, 5)
    with pytest.raises(ValueError):
        verify_range(9, 5)


def test_stats_merge_associative_and_order_free():
    parts = []
    for a in range(2, 20002, 2500):
        stop, sigma = scan_block(a, a + 2500)
        parts.append(ScanStats.from_block(a, stop, sigma))
    left = parts[0]
    for p in parts[1:]:
        left = left.merge(p)
    shuffled = parts[:]
    random.Random(7).shuffle(shuffled)
    other = shuffled[0]
    for p in shuffled[1:]:
        other = p.merge(other)
    assert left == other
    whole = ScanStats.from_block(2, *scan_block(2, 20002))
    assert left == whole


def test_resume_is_byte_identical(tmp_path):
    lo, hi = 2, 200_000
    full, _ = verify_range(lo, hi, checkpoint_every=10_000)
    rng = random.Random(1)
    stops = sorted(rng.sample(range(lo + 1, hi), 3))
    ckpt = None
    path = tmp_path / "ck.json"
    for s in stops + [None]:
        if ckpt is not None:
            ckpt = Checkpoint.load(path)
        report, ckpt = verify_range(lo, hi, checkpoint=ckpt, stop_at=s, checkpoint_every=10_000)
        ckpt.save(path)
    assert report.render() == full.render()


def test_checkpoint_text_roundtrip():
    _, ckpt = verify_range(2, 5000, stop_at=3000)
    text = ckpt.to_text()
    again = Checkpoint.from_text(text)
    assert again.to_text() == text
    doc = json.loads(text)
    assert list(doc)[:5] == [
        "format_version",
        "range_lo",
        "range_hi",
        "next_unverified",
        "window_width",
    ]
    assert doc["next_unverified"] == 3000


def test_checkpoint_errors():
    _, ckpt = verify_range(2, 5000, stop_at=3000)
    with pytest.raises(CheckpointError):
        verify_range(2, 6000, checkpoint=ckpt)
    doc = json.loads(ckpt.to_text())
    doc["format_version"] = 2
    with pytest.raises(CheckpointError):
        Checkpoint.from_text(json.dumps(doc))
    with pytest.raises(CheckpointError):
        Checkpoint.from_text("not json")
    with pytest.raises(CheckpointError):
        Checkpoint(10, 20, 30)


def test_threads_do_not_change_result():
    a, _ = verify_range(2, 300_000, threads=1)
    b, _ = verify_range(2, 300_000, threads=3)
    assert a.render() == b.render()


def test_block_arrays_are_int64():
    stop, sigma = scan_block(2, 10)
    assert stop.dtype == np.int64 and sigma.dtype == np.int64
