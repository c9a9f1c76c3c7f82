import itertools
from fractions import Fraction

import pytest

from odometer_rqa.exact import DomainError
from odometer_rqa.gapseq import gap, gap_sum, rho_gap, valuation
from odometer_rqa.words import Word, rho

THIRD = Fraction(1, 3)


def test_gap_terms():
    assert gap(1, THIRD).value == 1
    assert gap(4, THIRD).value == 9
    assert gap(6, THIRD).value == 3
    assert valuation(96) == 5
    with pytest.raises(DomainError):
        gap(0, THIRD)


def test_gap_sum_examples():
    assert gap_sum(7, 0, THIRD).value == 0
    assert gap_sum(1, 3, THIRD).value == 5


@pytest.mark.parametrize("m,n", [(1, 1), (3, 17), (64, 64), (1000, 5000), (12345, 65536)])
def test_dyadic_counts_equal_direct(m, n):
    assert gap_sum(m, n, THIRD, "dyadic") == gap_sum(m, n, THIRD, "direct")


def test_dyadic_handles_huge_ranges():
    # [1, 2^40] holds 2^{39-j} indices of valuation j < 40 and one of valuation 40
    s = gap_sum(1, 2**40, THIRD, "dyadic")
    assert s.value == sum(2 ** (39 - j) * 3**j for j in range(40)) + 3**40


def test_rho_gap_examples():
    for k in range(1, 6):
        u, v = Word.zeros(k), Word.parse("0" * (k - 1) + "1")
        assert rho_gap(u, v, THIRD).value == (1 - THIRD) * THIRD ** (k - 1)
    assert rho_gap(Word.parse("000"), Word.parse("010"), THIRD).value == Fraction(6, 27)


def test_rho_gap_equals_rho_exhaustively():
    for a in (Fraction(1, 5), Fraction(1, 3), Fraction(9, 20)):
        for k in range(1, 7):
            for p, q in itertools.product(range(2**k), repeat=2):
                u, v = Word(k, p), Word(k, q)
                assert rho_gap(u, v, a).value == rho(u, v, a).value
