import pytest

from equgen import script as sc
from equgen.closure import ContainsAll, generate_sublattice
from equgen.constructions import base6
from equgen.partition import atom, parse_partition

SMALL = """\
kind equ
n=4
base 1
gen a = eq(12;3;4)
gen b = eq(1;23;4)
gen c = eq(1;2;34)
gen d = eq(14;2;3)
s1 := a + b  expect eq(123;4)
s2 := s1 * (c + d)  # a comment
s3 := at(1,2) + at(2,3)  expect eq(123;4)
"""


def test_parse_small_script():
    s = sc.parse_script(SMALL)
    assert s.kind == "equ" and s.n == 4 and s.base == 1
    assert s.generator_names == ["a", "b", "c", "d"]
    assert [st.name for st in s.steps] == ["s1", "s2", "s3"]
    assert s.steps[1].expr == sc.Meet(sc.Name("s1"), sc.Join(sc.Name("c"), sc.Name("d")))
    assert s.steps[2].expr.left == sc.At(0, 1)


def test_precedence_meet_binds_tighter():
    e = sc.parse_expr("a + b * c", "equ", 3)
    assert e == sc.Join(sc.Name("a"), sc.Meet(sc.Name("b"), sc.Name("c")))
    e = sc.parse_expr("(a + b) * c", "equ", 3)
    assert e == sc.Meet(sc.Join(sc.Name("a"), sc.Name("b")), sc.Name("c"))


def test_format_round_trip_keeps_right_nesting():
    s = sc.parse_script(SMALL.replace("s2 := s1 * (c + d)", "s2 := a + (b + c)"))
    again = sc.parse_script(sc.format_script(s))
    assert again == s


def test_replay_small():
    r = sc.replay(sc.parse_script(SMALL))
    assert r.passed
    assert r.steps[2].note == ""  # both atoms are generators


@pytest.mark.parametrize("text,message,line", [
    ("kind equ\nn=3\ns := x + y\n", "undefined identifier 'x'", 3),
    ("kind equ\nn=3\ngen a = [0|1|2]\ns := a + t\nt := a\n", "forward reference to 't'", 4),
    ("kind equ\nn=3\ngen a = [0|1|2]\ns := a +\n", "unexpected", 4),
    ("kind equ\nn=3\ngen a = [0|1|2]\ngen a = [0|1|2]\n", "duplicate name", 4),
    ("kind equ\nn=3\ngen a = [0|1|3]\n", "", 3),
    ("n=3\ngen a = [0|1|2]\n", "missing 'kind", None),
    ("kind equ\nn=3\ngen a = [0|1|2]\ns := at(1,1)\n", "distinct", 4),
    ("kind equ\nn=3\ngen a = [0|1|2]\ns := at(1,7)\n", "out of range", 4),
    ("kind equ\nn=3\ngen a = [0|1|2]\ns := a  expect a\n", "constants", 4),
])
def test_parse_errors_carry_line_numbers(text, message, line):
    with pytest.raises(sc.ScriptError) as info:
        sc.parse_script(text)
    assert message in str(info.value)
    assert info.value.line == line


def test_expect_mismatch_is_reported():
    s = sc.parse_script(SMALL.replace("s1 := a + b  expect eq(123;4)", "s1 := a + b  expect eq(12;3;4)"))
    r = sc.replay(s)
    assert not r.passed
    assert r.failures[0].name == "s1"
    assert "differs" in r.failures[0].note


def test_underived_constants_fail():
    s = sc.parse_script(
        "kind equ\nn=4\ngen a = [0,1|2|3]\ngen b = [0|1,2|3]\ns := a + at(2,3)\n")
    r = sc.replay(s)
    assert not r.passed and "not been derived" in r.failures[0].note


def test_inv_requires_inverse_closed_generators():
    text = ("kind quo\nn=3\ngen a = rel(0>1)\ngen b = rel(1>2)\n"
            "s := a + b  expect rel(0>1, 1>2)\nt := inv(s)\n")
    r = sc.replay(sc.parse_script(text))
    assert not r.passed and "inverse-closed" in r.failures[0].note
    text = ("kind quo\nn=3\ngen a = rel(0>1)\ngen ai = rel(1>0)\n"
            "t := inv(a) * ai  expect qu(1,0)\n")
    assert sc.replay(sc.parse_script(text)).passed


def test_named_elements():
    text = ("kind quo\nn=3\nelements x y z\ngen a = rel(x>y)\ngen b = rel(y>z)\n"
            "s := a + b  expect rel(x>y, y>z)\nt := s * qu(x,z)\n")
    s = sc.parse_script(text)
    r = sc.replay(s)
    assert not r.passed  # qu(x,z) was never derived
    assert r.steps[0].passed
    assert sc.parse_script(sc.format_script(s)) == s


@pytest.mark.parametrize("name,steps", [("six.script", 19), ("nine.script", 59), ("quo19.script", 35)])
def test_fixtures_replay(name, steps):
    s = sc.load_fixture(name)
    r = sc.replay(s)
    assert r.passed and r.cycle_ok
    assert len(s.steps) == steps
    assert sc.parse_script(sc.format_script(s)) == s


def test_fixture_override(tmp_path, monkeypatch):
    (tmp_path / "mine.script").write_text(SMALL)
    monkeypatch.setenv(sc.FIXTURE_ENV, str(tmp_path))
    assert sc.load_fixture("mine.script").n == 4
    with pytest.raises(FileNotFoundError):
        sc.load_fixture("six.script")


def test_lowering_matches_replay_values():
    s = sc.load_fixture("quo19.script")
    steps, low = sc.lower_script(s)
    env = sc.generator_values(s)
    ops = sc._Ops(s.kind, s.n)
    for name, op, a, b in steps:
        env[name] = ops.join(env[a], env[b]) if op == "join" else ops.meet(env[a], env[b])
    report = sc.replay(s)
    values = set(env.values())
    assert all(st.computed in values for st in report.steps)


def test_cycle_hint_steps_reach_index_cycle():
    s = sc.load_fixture("six.script")
    steps = sc.cycle_hint_steps(s, s.cycle, range(6))
    env = sc.generator_values(s)
    for name, op, a, b in steps:
        env[name] = env[a] | env[b] if op == "join" else env[a] & env[b]
    values = set(env.values())
    assert all(atom(6, i, (i + 1) % 6) in values for i in range(6))


def test_emit_witness_script_replays():
    es = base6()
    wanted = tuple(atom(6, i, (i + 1) % 6) for i in range(6))
    cert = generate_sublattice(es.generators, ContainsAll(wanted), names=es.names)
    s = sc.emit_witness_script(cert)
    r = sc.replay(s)
    assert r.passed
    assert {st.expected for st in r.steps if st.expected is not None} == set(wanted)


def test_builder_route():
    s = sc.load_fixture("six.script")
    b = sc.extend_builder(s)
    ref = b.route(list(s.cycle), 0, 3)
    assert b.value(ref) == atom(6, 0, 3)
    assert sc.replay(b.build()).passed


def test_literal_kinds():
    with pytest.raises(sc.ScriptError):
        sc.parse_script("kind equ\nn=2\ngen a = rel(0>1)\n")
    s = sc.parse_script("kind quo\nn=3\ngen a = [0,1|2]\n")
    assert sc.generator_values(s)["a"].size() == 5
    assert parse_partition("0,1|2", 3) == parse_partition("eq(12;3)", 3)
