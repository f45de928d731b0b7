from itertools import product
from math import comb, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from itazrp.states import (
    ConfigParseError,
    Sector,
    SectorError,
    config_from_json,
    config_to_json,
    cyclic_shift,
    enumerate_multiline,
    enumerate_sector,
    format_config,
    from_multiset,
    multiline_from_tensor,
    multiline_sector,
    orbit,
    parse_config,
    to_multiset,
)


def test_sector_sizes_examples():
    assert len(enumerate_sector(Sector(2, (1, 1)))) == 4
    assert len(enumerate_sector(Sector(3, (2,)))) == 6
    assert len(enumerate_sector(Sector(2, (1, 1, 1)))) == 8


def test_multiline_sizes_examples():
    assert len(list(enumerate_multiline(Sector(3, (1, 1))))) == 18
    assert len(list(enumerate_multiline(Sector(2, (1,))))) == 2
    s = Sector(4, (1, 2, 1, 1))
    assert s.multiline_size == 156800
    assert sum(1 for _ in enumerate_multiline(s)) == 156800


def test_enumeration_counts_on_grid():
    for n in range(1, 5):
        for L in range(1, 6):
            for m in product(range(1, 4), repeat=n):
                s = Sector(L, m)
                if s.size > 3000:
                    continue
                configs = enumerate_sector(s)
                assert len(configs) == prod(comb(L + x - 1, x) for x in m)
                assert len(set(configs)) == len(configs)
                assert configs == sorted(configs)
                assert all(s.contains(c) for c in configs)
                if s.multiline_size <= 3000:
                    ml = list(enumerate_multiline(s))
                    assert len(ml) == prod(comb(L - 1 + x, x) for x in s.ell)
                    assert all(tuple(map(sum, x)) == s.ell for x in ml)


def test_non_basic_sector_rejected():
    with pytest.raises(SectorError, match="relabel"):
        enumerate_sector(Sector(3, (1, 0, 2)))
    with pytest.raises(SectorError):
        Sector(0, (1,))


def test_ell_and_parent():
    s = Sector(4, (1, 2, 1, 1))
    assert s.ell == (1, 3, 4, 5)
    assert s.parent() == Sector(4, (1, 2, 1))


def test_cyclic_shift():
    c = parse_config("e|12", 2)
    assert format_config(cyclic_shift(c)) == "12|e"
    c = parse_config("e|2|1", 2)
    assert format_config(cyclic_shift(c)) == "1|e|2"
    c = parse_config("e|13|2|3|e|12|11", 3)
    assert cyclic_shift(c, 7) == c
    x = c
    for _ in range(7):
        x = cyclic_shift(x)
    assert x == c
    assert len(orbit(parse_config("1|1", 1))) == 1


def test_shift_preserves_sector():
    s = Sector(4, (2, 1))
    for c in enumerate_sector(s):
        assert s.contains(cyclic_shift(c))


def test_parse_examples():
    c = parse_config("e|13|2|3|e|12|11", 3)
    assert len(c) == 7 and c[1] == (1, 0, 1) and c[6] == (2, 0, 0)
    assert parse_config("0,0;1,1", 2) == ((0, 0), (1, 1))
    assert parse_config("e|e|12", 2) == ((0, 0), (0, 0), (1, 1))
    assert parse_config("∅|1", 1) == ((0,), (1,))


@pytest.mark.parametrize("text,pos", [("e||1", 2), ("e|1x", 3), ("e|14", 3), ("e|21", 3)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ConfigParseError) as info:
        parse_config(text, 3)
    assert info.value.position == pos


def test_parse_mult_errors():
    with pytest.raises(ConfigParseError):
        parse_config("0,1;1", 2)
    with pytest.raises(ConfigParseError):
        parse_config("0,a;1,1", 2)


def test_format_roundtrip_on_sector():
    for c in enumerate_sector(Sector(3, (2, 1, 1))):
        assert parse_config(format_config(c), 3) == c
        assert config_from_json(config_to_json(c)) == c


def test_large_n_uses_multiplicity_form():
    c = ((1,) + (0,) * 9, (0,) * 9 + (1,))
    text = format_config(c)
    assert ";" in text
    assert parse_config(text, 10) == c


def test_multiline_helpers():
    x = multiline_from_tensor((1, 2, 0, 2), (2, 1, 1, 0), (1, 2, 0, 0), (0, 1, 0, 0))
    assert x[0] == (0, 1, 0, 0)
    assert multiline_sector(x) == Sector(4, (1, 2, 1, 1))


@given(st.lists(st.integers(0, 4), min_size=1, max_size=6))
def test_multiset_bijection(mult):
    state = tuple(mult)
    ms = to_multiset(state)
    assert list(ms) == sorted(ms)
    assert from_multiset(ms, len(state)) == state
