import pytest

from equgen import quasiorder as qo
from equgen.partition import bottom, parse_partition

from oracles import count_quasiorders


def test_counts_match_independent_filter():
    for n in (1, 2, 3):
        assert sum(1 for _ in qo.enumerate_quasiorders(n)) == count_quasiorders(n)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 4), (3, 29), (4, 355)])
def test_known_counts(n, count):
    assert sum(1 for _ in qo.enumerate_quasiorders(n)) == count


def test_qu_and_identity():
    assert qo.qu(3, 1, 1) == qo.identity(3)
    q = qo.qu(3, 0, 2)
    assert (0, 2) in q and (2, 0) not in q
    assert q.size() == 4


def test_join_is_transitive_hull():
    j = qo.join(qo.qu(3, 0, 1), qo.qu(3, 1, 2))
    assert (0, 2) in j
    assert qo.meet(j, qo.qu(3, 0, 2)) == qo.qu(3, 0, 2)


def test_rejects_non_quasiorders():
    with pytest.raises(qo.QuasiorderError):
        qo.Quasiorder(2, (0b01, 0b00))
    with pytest.raises(qo.QuasiorderError):
        qo.Quasiorder(3, (0b011, 0b110, 0b100))


def test_inverse_and_equivalences():
    p = parse_partition("0,2|1", 3)
    e = qo.equ_to_quo(p)
    assert qo.inverse(e) == e
    assert qo.quo_is_equivalence(e) and qo.quo_to_equ(e) == p
    assert qo.equ_to_quo(bottom(4)) == qo.identity(4)
    q = qo.qu(3, 0, 1)
    assert qo.inverse(q) == qo.qu(3, 1, 0)
    assert not qo.quo_is_equivalence(q)
    with pytest.raises(qo.QuasiorderError):
        qo.quo_to_equ(q)


def test_symmetric_part():
    q = qo.join(qo.join(qo.qu(4, 0, 1), qo.qu(4, 1, 0)), qo.qu(4, 2, 3))
    assert qo.symmetric_part(q) == parse_partition("0,1|2|3", 4)


def test_text_round_trip():
    q = qo.join(qo.qu(4, 0, 1), qo.join(qo.qu(4, 1, 0), qo.qu(4, 1, 3)))
    assert qo.parse_quasiorder(q.format()) == q
    assert q.format().splitlines()[-1] == "closed"


def test_lattice_laws_exhaustive_n3():
    elems = list(qo.enumerate_quasiorders(3))
    for x in elems[::3]:
        for y in elems:
            assert x | y == y | x
            assert x & (x | y) == x and x | (x & y) == x
            assert (x <= y) == (x & y == x)
