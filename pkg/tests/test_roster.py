import io

import pytest
from hypothesis import given, strategies as st

from pubpoints.errors import RosterError
from pubpoints.roster import load_roster, match_author

HEADER = "name,affiliation,homepage,scholarid\n"


def roster(text):
    return load_roster(io.StringIO(HEADER + text))


def test_two_rows():
    r = roster("Ann A,Univ X,,\nBen B,Univ Y,https://b,SID\n")
    assert len(r) == 2
    assert [m.dblp_name for m in r.members("Univ X")] == ["Ann A"]
    assert r.by_name["Ben B"].homepage == "https://b"
    assert r.by_name["Ben B"].scholar_id == "SID"
    assert r.by_name["Ann A"].homepage is None


def test_duplicate_identical_rows():
    r = roster("Ann A,Univ X,,\nAnn A,Univ X,,\n")
    assert len(r) == 1
    assert r.duplicate_rows == 1


def test_conflicting_affiliations():
    with pytest.raises(RosterError, match=r"line 2 \(Univ X\) and line 3 \(Univ Y\)"):
        roster("Ann A,Univ X,,\nAnn A,Univ Y,,\n")


def test_quoted_fields_and_whitespace(fixtures):
    r = load_roster(fixtures / "roster_sample.csv")
    assert r.by_name["Carol Gröpl"].affiliation == "Univ B, Main Campus"
    assert roster("  Yang   Liu 0001 ,Univ X,,\n").by_name["Yang Liu 0001"]


def test_unknown_school():
    with pytest.raises(RosterError, match="Nowhere"):
        roster("Ann A,Univ X,,\n").members("Nowhere")


@pytest.mark.parametrize("text", ["Ann A,,,\n", ",Univ X,,\n", "Ann A,Univ X\n"])
def test_bad_rows(text):
    with pytest.raises(RosterError):
        roster(text)


def test_bad_header():
    with pytest.raises(RosterError, match="header"):
        load_roster(io.StringIO("who,where\n"))


class TestMatchAuthor:
    r = load_roster(io.StringIO(HEADER + "Yang Liu 0001,Univ X,,\n"))

    def test_exact(self):
        assert match_author("Yang Liu 0001", self.r).affiliation == "Univ X"

    def test_suffix_significant(self):
        assert match_author("Yang Liu", self.r) is None

    def test_absent(self):
        assert match_author("Nobody", self.r) is None

    def test_no_diacritic_folding(self):
        r = roster("Gröpl,Univ X,,\n")
        assert match_author("Gropl", r) is None
        assert match_author("Gröpl", r) is not None


name = st.from_regex(r"[A-Z][a-z]{1,6}( [A-Z][a-z]{1,6})?( 000[1-9])?", fullmatch=True)
rows = st.lists(st.tuples(name, st.sampled_from(["U1", "U2", "U3"])), max_size=20, unique_by=lambda t: t[0])


@given(rows, st.randoms(use_true_random=False), st.lists(name, max_size=10))
def test_order_insensitive_and_bijective(rows, rnd, probes):
    text = "".join(f"{n},{s},,\n" for n, s in rows)
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    a = roster(text)
    b = roster("".join(f"{n},{s},,\n" for n, s in shuffled))
    assert a == b
    assert a.by_school == b.by_school
    for probe in probes + [n for n, _ in rows]:
        assert (match_author(probe, a) is not None) == (probe in a.by_name)
    assert sum(len(v) for v in a.by_school.values()) == len(a)
