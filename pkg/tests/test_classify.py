"""Region flags and parameter-family scans."""

import math

import numpy as np
import pytest

from conftest import counterexample_pair
from qnetmax.classify import (
    classify_pair,
    classify_values,
    colored_scan,
    rows_to_csv,
    werner_scan,
)
from qnetmax.errors import ValidationError
from qnetmax.qstate import random_state, werner_state


# ---------------------------------------------------------------------------
# classify_values / classify_pair
# ---------------------------------------------------------------------------


def test_thresholds_are_strict():
    assert classify_values(1.0, 1.0, 1.0).as_tuple() == (False, False, False)
    eps = 1e-15
    assert classify_values(1.0 + eps, 1.0, 1.0).as_tuple() == (True, False, False)
    assert classify_values(1.0, 1.0 + eps, 1.0).as_tuple() == (False, True, False)
    assert classify_values(1.0, 1.0, 1.0 + eps).as_tuple() == (False, False, True)


def test_counterexample_region():
    # Both links violate CHSH yet the pair maximum stays below 1.
    flags = classify_pair(*counterexample_pair())
    assert flags.as_tuple() == (True, True, False)


def test_one_perfect_one_useless_link():
    flags = classify_pair(werner_state(1.0), werner_state(0.0))
    assert flags.as_tuple() == (True, False, False)


def test_network_violation_without_second_link_violation():
    # v_bc = 0.68: the BC link alone satisfies CHSH (0.68 sqrt(2) < 1) but the
    # pair maximum sqrt(2 * 0.68) exceeds 1.
    flags = classify_pair(werner_state(1.0), werner_state(0.68))
    assert flags.as_tuple() == (True, False, True)


def test_forbidden_region_is_empty_on_random_pairs():
    # (F, F, T) cannot occur: b_max <= sqrt(s_ab * s_bc), so a non-bilocal
    # pair needs at least one CHSH-violating link.
    rng = np.random.default_rng(31)
    for _ in range(300):
        s1 = random_state(int(rng.integers(0, 2**31)))
        s2 = random_state(int(rng.integers(0, 2**31)))
        flags = classify_pair(s1, s2)
        assert flags.as_tuple() != (False, False, True)


def test_boundary_flip_at_half_product():
    below = classify_pair(werner_state(1.0), werner_state(0.5 - 1e-6))
    above = classify_pair(werner_state(1.0), werner_state(0.5 + 1e-6))
    assert not below.nonbilocal
    assert above.nonbilocal


# ---------------------------------------------------------------------------
# werner_scan
# ---------------------------------------------------------------------------


def test_werner_scan_rows():
    rows = werner_scan([(0.8, 0.8), (0.7, 0.7), (1.0, 0.51)])
    assert [r.params for r in rows] == [
        (("v_ab", 0.8), ("v_bc", 0.8)),
        (("v_ab", 0.7), ("v_bc", 0.7)),
        (("v_ab", 1.0), ("v_bc", 0.51)),
    ]

    both_high = rows[0]
    assert both_high.s_ab == pytest.approx(0.8 * math.sqrt(2.0), abs=1e-12)
    assert both_high.b_max == pytest.approx(math.sqrt(2.0 * 0.64), abs=1e-12)
    assert both_high.flags.as_tuple() == (True, True, True)

    both_low = rows[1]
    assert both_low.flags.as_tuple() == (False, False, False)

    asymmetric = rows[2]
    assert asymmetric.b_max == pytest.approx(math.sqrt(1.02), abs=1e-12)
    assert asymmetric.flags.as_tuple() == (True, False, True)


def test_werner_scan_matches_classify_pair():
    (row,) = werner_scan([(0.9, 0.6)])
    assert row.flags == classify_pair(werner_state(0.9), werner_state(0.6))
    assert row.b_max == pytest.approx(math.sqrt(2.0 * 0.9 * 0.6), abs=1e-12)


# ---------------------------------------------------------------------------
# colored_scan
# ---------------------------------------------------------------------------


def test_colored_scan_frozen_row():
    (row,) = colored_scan([(0.7, 1.0 / 3.0)])
    assert row.params == (("v", 0.7), ("lambda", 1.0 / 3.0))
    assert row.s_ab == pytest.approx(1.0630145812734648, abs=1e-12)
    assert row.s_bc == row.s_ab
    # Both links carry the same state, so the pair maximum collapses to the
    # single-link CHSH maximum.
    assert row.b_max == pytest.approx(row.s_ab, abs=1e-12)
    assert row.flags.as_tuple() == (True, True, True)


def test_colored_scan_zero_visibility_is_classical():
    (row,) = colored_scan([(0.0, 0.5)])
    assert row.flags.as_tuple() == (False, False, False)


# ---------------------------------------------------------------------------
# rows_to_csv
# ---------------------------------------------------------------------------


def test_csv_layout_and_flags():
    rows = werner_scan([(0.8, 0.8), (0.7, 0.7)])
    text = rows_to_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "v_ab,v_bc,s_ab,s_bc,b_max,ab_nl,bc_nl,nonbiloc"
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "0.8"
    assert first[5:] == ["true", "true", "true"]
    assert lines[2].split(",")[5:] == ["false", "false", "false"]
    assert float(first[2]) == pytest.approx(0.8 * math.sqrt(2.0), abs=1e-11)


def test_csv_uses_twelve_significant_digits():
    (row,) = colored_scan([(0.7, 1.0 / 3.0)])
    line = rows_to_csv([row]).strip().split("\n")[1]
    assert "1.06301458127" in line


def test_csv_rejects_empty_and_inconsistent_rows():
    with pytest.raises(ValidationError, match="empty scan"):
        rows_to_csv([])
    mixed = werner_scan([(0.8, 0.8)]) + colored_scan([(0.7, 0.5)])
    with pytest.raises(ValidationError, match="inconsistent parameter names"):
        rows_to_csv(mixed)
