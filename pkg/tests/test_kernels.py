"""Backend equivalence: the compiled kernels and the numpy fallback must emit
bit-identical event streams and coefficient matrices."""

import numpy as np
import pytest

from swapcool.kernels import _fallback

try:
    from swapcool.kernels import _compiled
except ImportError:
    _compiled = None

needs_compiled = pytest.mark.skipif(_compiled is None, reason="compiled kernels not built")


def canonical(events):
    step_star, terminal, es, el, eh, et = events
    order = np.lexsort((el, es))
    return step_star, terminal, es[order], el[order], eh[order], et[order]


@needs_compiled
@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 8, 13, 16, 27, 32, 64])
def test_schedule_events_identical(m):
    a = canonical(_compiled.improved_schedule_events(m, True))
    b = canonical(_fallback.improved_schedule_events(m, True))
    assert a[0] == b[0]
    for x, y in zip(a[1:], b[1:]):
        np.testing.assert_array_equal(x, y)


@needs_compiled
@pytest.mark.parametrize("m", [1, 2, 7, 24])
def test_stats_only_matches_recorded(m):
    star_a, term_a, *_ = _compiled.improved_schedule_events(m, False)
    star_b, term_b, *rest = _compiled.improved_schedule_events(m, True)
    assert star_a == star_b
    np.testing.assert_array_equal(term_a, term_b)
    assert all(r is not None for r in rest)


@needs_compiled
@pytest.mark.parametrize("m", [1, 2, 5, 16])
def test_accumulate_identical(m):
    step_star, terminal, es, el, eh, et = canonical(
        _compiled.improved_schedule_events(m, True))
    fresh = ((et == 0) & (es != 0)).astype(np.uint8)
    ka = _compiled.accumulate_rows(2 * m, m, el, eh, et, fresh)
    kb = _fallback.accumulate_rows(2 * m, m, el, eh, et, fresh)
    np.testing.assert_array_equal(ka, kb)


def test_fallback_rejects_bad_m():
    with pytest.raises(ValueError):
        _fallback.improved_schedule_events(0)


@needs_compiled
def test_compiled_rejects_bad_m():
    with pytest.raises(ValueError):
        _compiled.improved_schedule_events(0)


def test_fallback_column_bounds_asserted():
    lo = np.array([0], dtype=np.int32)
    hi = np.array([1], dtype=np.int32)
    tau = np.array([9], dtype=np.int32)     # column 9 + 1 out of range for m=1
    fresh = np.zeros(1, dtype=np.uint8)
    with pytest.raises(AssertionError):
        _fallback.accumulate_rows(2, 1, lo, hi, tau, fresh)
