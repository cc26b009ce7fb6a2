import io

import pytest

from pubpoints.errors import RegistryError
from pubpoints.registry import (
    KeyPattern,
    ParentArea,
    YearRange,
    load_registry,
    registry_from_rows,
    write_registry,
)


def test_default_counts(registry):
    assert len(registry.areas) == 27
    assert {a.parent for a in registry.areas} == set(ParentArea)
    assert len(registry.conferences) == 64
    assert len(set(registry.area_abbrevs)) == 27


def test_theory_areas(registry):
    assert registry.areas_with_parent(ParentArea.THEORY) == {"act", "crypt", "log"}


@pytest.mark.parametrize(
    "key, year, number, conf, area",
    [
        ("conf/iclr/Xyz23", 2023, None, "ICLR", "mlmining"),
        ("conf/nips/Foo19", 2019, None, "NeurIPS", "mlmining"),
        ("conf/stoc/Foo21", 2021, None, "STOC", "act"),
        ("conf/osdi/Foo20", 2020, None, "OSDI", "ops"),
        ("conf/sp/Foo20", 2020, None, "IEEE S&P", "sec"),
        ("conf/uss/Foo20", 2020, None, "USENIX Security", "sec"),
        ("journals/imwut/Def21", 2021, "2", "UbiComp / Pervasive / IMWUT", "chi"),
        ("journals/pacmpl/Foo21", 2021, "POPL", "POPL", "plan"),
        ("journals/pacmpl/Foo23", 2023, "PLDI", "PLDI", "plan"),
        ("journals/tog/Foo20", 2020, "4", "SIGGRAPH", "graph"),
        ("journals/tog/Foo20a", 2020, "6", "SIGGRAPH Asia", "graph"),
        ("journals/pvldb/Foo19", 2019, "12", "VLDB", "mod"),
    ],
)
def test_resolve_venue(registry, key, year, number, conf, area):
    c, a = registry.resolve_venue(key, year, number)
    assert (c.name, a.abbrev) == (conf, area)


@pytest.mark.parametrize(
    "key, year, number",
    [
        ("conf/colt/Abc22", 2022, None),
        ("conf/spaa/Abc22", 2022, None),  # prefix of conf/sp/ without the slash
        ("journals/pacmpl/Foo21", 2021, "OOPSLA"),
        ("journals/pacmpl/Foo21", 2021, None),
        ("journals/pacmpl/Foo17", 2017, "POPL"),  # before POPL moved to PACMPL
        ("journals/tog/Foo20", 2020, "2"),
        ("journals/pvldb/Foo07", 2007, "1"),
        ("Conf/iclr/Xyz23", 2023, None),  # case-sensitive
    ],
)
def test_resolve_venue_misses(registry, key, year, number):
    assert registry.resolve_venue(key, year, number) is None


def test_resolve_is_partial_function(registry):
    keys = [p.prefix + "X" for c in registry.conferences for p in c.key_patterns]
    for key in keys:
        for year in (1990, 2005, 2010, 2019, 2024):
            for number in (None, "1", "4", "6", "POPL", "PLDI", "FSE", "Supplement-1"):
                hits = [c for c in registry.conferences if c.matches(key, year, number)]
                assert len(hits) <= 1
                got = registry.resolve_venue(key, year, number)
                assert (got[0] if got else None) == (hits[0] if hits else None)


def test_default_round_trip(registry):
    buf = io.StringIO()
    write_registry(registry, buf)
    again = load_registry(io.StringIO(buf.getvalue()))
    assert again == registry
    buf2 = io.StringIO()
    write_registry(again, buf2)
    assert buf2.getvalue() == buf.getvalue()


def test_config_replaces_defaults(tmp_path):
    path = tmp_path / "reg.csv"
    path.write_text("parent,area,area_name,conference,pattern,years\nAI,mlmining,Machine learning,ICLR,conf/iclr/,\n")
    reg = load_registry(path)
    assert reg.area_abbrevs == ["mlmining"]
    assert [c.name for c in reg.conferences] == ["ICLR"]
    assert reg.resolve_venue("conf/stoc/X", 2020) is None


def test_unknown_area_reference():
    with pytest.raises(RegistryError, match="xyz"):
        registry_from_rows([["AI", "ai", "Artificial intelligence", "AAAI", "conf/aaai/", ""], ["", "xyz", "", "Foo", "conf/foo/", ""]])


def test_duplicate_area_abbrev():
    with pytest.raises(RegistryError, match="duplicate area abbrev 'ai'"):
        registry_from_rows([["AI", "ai", "Artificial intelligence", "AAAI", "conf/aaai/", ""],
                            ["Theory", "ai", "Another", "X", "conf/x/", ""]])


def test_overlapping_patterns():
    with pytest.raises(RegistryError, match="conf/ab/.*conf/ab/c"):
        registry_from_rows([["AI", "ai", "AI", "A", "conf/ab/", ""], ["AI", "ai", "AI", "B", "conf/ab/c", ""]])


def test_disjoint_by_years_or_number():
    reg = registry_from_rows([
        ["AI", "ai", "AI", "Old", "conf/x/", "1990-1999"],
        ["AI", "ai", "AI", "New", "conf/x/", "2000-2024"],
        ["AI", "ai", "AI", "J4", "journals/j/#4", ""],
        ["AI", "ai", "AI", "J6", "journals/j/#6", ""],
    ])
    assert reg.resolve_venue("conf/x/a", 1995)[0].name == "Old"
    assert reg.resolve_venue("conf/x/a", 2005)[0].name == "New"
    assert reg.resolve_venue("journals/j/a", 2005, "6")[0].name == "J6"
    with pytest.raises(RegistryError, match="overlapping"):
        registry_from_rows([["AI", "ai", "AI", "A", "conf/x/", "1990-2000"], ["AI", "ai", "AI", "B", "conf/x/", "2000-2024"]])


@pytest.mark.parametrize(
    "row, msg",
    [
        (["Nope", "ai", "AI", "A", "conf/a/", ""], "unknown parent"),
        (["AI", "ai", "AI", "A", "conf/a/", "2020"], "YYYY-YYYY"),
        (["AI", "ai", "AI", "", "", ""], None),
        (["AI", "ai", "AI", "A", "", ""], "both"),
        (["AI", "ai", "AI", "", "conf/a/", ""], "both"),
    ],
)
def test_row_validation(row, msg):
    if msg is None:
        assert registry_from_rows([row]).conferences == ()
    else:
        with pytest.raises(RegistryError, match=msg):
            registry_from_rows([row])


def test_bad_header():
    with pytest.raises(RegistryError, match="header"):
        load_registry(io.StringIO("a,b\n"))


def test_pattern_parse():
    p = KeyPattern.parse("journals/tog/#4", "2002-2099")
    assert (p.prefix, p.number_prefix, p.years) == ("journals/tog/", "4", YearRange(2002, 2099))
    assert p.text == "journals/tog/#4"
    assert not p.matches("journals/tog/x", 2001, "4")
