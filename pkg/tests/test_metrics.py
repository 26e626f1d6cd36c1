"""Recurrence table and exact bound chains."""

import pytest

from halving_lab.metrics import check_bounds, counts


def test_base_row():
    assert counts(0).rows == [(0, 1, 2, 1)]


def test_small_rows():
    table = counts(3)
    assert table.row(1) == (1, 2, 6, 5)
    assert table.row(2) == (2, 4, 30, 45)
    assert table.row(3) == (3, 8, 290, 765)


def test_product_form_of_m():
    # m_i = (1/6) * prod_{j=0..i+1} (2**j + 1), derived by unrolling the recurrence
    table = counts(6)
    for i, _a, _n, m in table.rows:
        prod = 1
        for j in range(i + 2):
            prod *= 2**j + 1
        assert m * 6 == prod


def test_bold_point_share():
    # number of bold points of level i is m_{i-1}; the recurrence encodes it
    table = counts(5)
    for i in range(1, 5):
        _, a, n_i, _ = table.row(i)
        _, _, n_prev, m_prev = table.row(i - 1)
        m_prev2 = table.row(i - 2)[3] if i >= 2 else 1
        assert n_i == a * n_prev + m_prev + m_prev2


def test_bounds_hold_to_depth_64():
    report = check_bounds(counts(64))
    assert report.passed
    assert report.checked == 4 * 65


def test_negative_depth_rejected():
    with pytest.raises(ValueError):
        counts(-1)
