from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from fieldtriage.errors import NonDigitInput
from fieldtriage.scanners import luhn_check

from oracles import luhn_oracle


def test_all_zeros_is_valid():
    assert luhn_check("0000000000000000") is True


def test_known_valid_pan():
    # frozen from the digit-doubling oracle
    assert luhn_oracle("4111111111111111") is True
    assert luhn_check("4111111111111111") is True


def test_known_invalid_pan():
    assert luhn_oracle("4111111111111112") is False
    assert luhn_check("4111111111111112") is False


def test_single_digit():
    assert luhn_check("0") is True
    assert luhn_check("5") is False


@pytest.mark.parametrize("bad", ["", "12a4", "4111 1111", "４１１１", "12-34"])
def test_non_digit_input_rejected(bad):
    with pytest.raises(NonDigitInput):
        luhn_check(bad)


def test_too_long_rejected():
    with pytest.raises(NonDigitInput):
        luhn_check("1" * 20)


@given(st.text(alphabet="0123456789", min_size=1, max_size=19))
def test_agrees_with_oracle(digits):
    assert luhn_check(digits) == luhn_oracle(digits)


def test_oracle_equivalence_sampled():
    rng = random.Random(1234)
    for _ in range(5000):
        length = rng.randint(1, 19)
        digits = "".join(rng.choice("0123456789") for _ in range(length))
        assert luhn_check(digits) == luhn_oracle(digits)
