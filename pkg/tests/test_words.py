import pytest

from wignerfluct.words import (
    DetLetter,
    IDENTITY_LETTER,
    Monomial,
    Polynomial,
    canonicalize,
    parse_word,
    s_transform,
)


def test_parse_simple_word():
    mono = parse_word("x1 a0 x2 a1")
    assert mono.degree == 2
    assert mono.wigner_labels == ("1", "2")
    assert mono.det_letters == (DetLetter.base(0), DetLetter.base(1))


def test_parse_flags():
    mono = parse_word("x1 a0*t")
    ((j, star, transpose),) = mono.det_letters[0].factors
    assert (j, star, transpose) == (0, True, True)


def test_trailing_identity_letter():
    mono = parse_word("x1 a0 x1")
    assert mono.degree == 2
    assert mono.det_letters[1] is IDENTITY_LETTER or mono.det_letters[1].is_identity


def test_leading_det_prefix_wraps():
    # a word is read inside a trace, so a deterministic prefix rotates to the end
    mono = parse_word("a0 x1 a1")
    assert mono.degree == 1
    assert mono.det_letters[0].factors == DetLetter.base(1).fuse(DetLetter.base(0)).factors


def test_adjacent_letters_fuse():
    mono = parse_word("x1 a0 a1 x1 a0")
    assert mono.degree == 2
    assert mono.det_letters[0].factors == (
        DetLetter.base(0).fuse(DetLetter.base(1)).factors
    )


def test_wigner_star_drops():
    assert parse_word("x1* a0") == parse_word("x1 a0")


def test_pure_det_word():
    mono = parse_word("a0 a1t")
    assert mono.degree == 0
    assert mono.scalar_letter.factors == (
        DetLetter.base(0).fuse(DetLetter.base(1, transpose=True)).factors
    )


def test_letter_transpose_star():
    letter = DetLetter.base(0).fuse(DetLetter.base(1, star=True))
    t = letter.transpose()
    assert t.factors == ((1, True, True), (0, False, True))
    s = letter.star()
    assert s.factors == ((1, False, False), (0, True, False))


def test_monomial_star_is_involution():
    mono = parse_word("x1 a0 x2 a1*")
    assert mono.star().star() == mono


def test_s_transform_degree_two():
    mono = parse_word("x1 a0 x2 a1")
    s = s_transform(mono)
    # x2 a0^t x1 a1^t
    assert s.wigner_labels == ("2", "1")
    assert s.det_letters == (
        DetLetter.base(0, transpose=True),
        DetLetter.base(1, transpose=True),
    )


def test_s_transform_rejects_scalar():
    with pytest.raises(ValueError):
        s_transform(parse_word("a0"))


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_word("y1")
    with pytest.raises(ValueError):
        parse_word("x1t a0")


def test_polynomial_merging():
    p = parse_word("x1 a0")
    q = parse_word("x1 a1")
    poly = Polynomial.from_terms([(1.0, p), (2.0, q), (1.0, p)])
    assert dict((m, c) for c, m in poly.terms) == {p: 2.0, q: 2.0}
    doubled = 2.0 * poly
    assert dict((m, c) for c, m in doubled.terms) == {p: 4.0, q: 4.0}


def test_polynomial_star_conjugates_coefficients():
    p = parse_word("x1 a0")
    poly = Polynomial.from_terms([(1j, p)])
    starred = poly.star()
    ((c, mono),) = starred.terms
    assert c == -1j
    assert mono == p.star()
