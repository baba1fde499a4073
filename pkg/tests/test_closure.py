import pytest

from equgen import closure as cl
from equgen import quasiorder as qo
from equgen.constructions import base6, base9
from equgen.partition import atom, bell, bottom, parse_partition, top


def test_base6_full_closure():
    cert = cl.verify_generates_equ(base6().generators, "full")
    assert cert.verdict and cert.generated_count == 203


def test_fixpoint_of_a_chain():
    gens = [parse_partition("0,1|2|3", 4), parse_partition("0,1,2|3", 4)]
    cert = cl.generate_sublattice(gens)
    assert cert.generated_count == 2 and not cert.verdict


def test_single_generator():
    cert = cl.verify_generates_equ([top(4)], "full")
    assert cert.generated_count == 1 and not cert.verdict


def test_cycle_atoms_generate():
    for n in range(3, 8):
        cert = cl.verify_generates_equ(cl.cycle_atoms(n), "full")
        assert cert.generated_count == bell(n)


def test_reach_count_stops_early():
    cert = cl.generate_sublattice(base9().generators, cl.ReachCount(1000), universe_size=None)
    assert cert.verdict and 1000 <= cert.generated_count < 21147


def test_contains_all_with_witnesses():
    n = 6
    wanted = (atom(n, 0, 1), atom(n, 4, 5))
    cert = cl.generate_sublattice(base6().generators, cl.ContainsAll(wanted))
    assert cert.verdict
    assert [w for w, _ in cert.witnesses] == list(wanted)
    assert all(expr for _, expr in cert.witnesses)


def test_budget_errors():
    with pytest.raises(cl.BudgetExceeded) as info:
        cl.generate_sublattice(base9().generators, max_elements=500, universe_size=None)
    assert "peak_stored" in info.value.stats
    with pytest.raises(cl.BudgetExceeded):
        cl.generate_sublattice(base9().generators, time_limit=0.0, universe_size=None)


def test_mixed_inputs_rejected():
    with pytest.raises(cl.ClosureError):
        cl.generate_sublattice([top(3), top(4)])
    with pytest.raises(cl.ClosureError):
        cl.generate_sublattice([top(3), qo.identity(3)])
    with pytest.raises(cl.ClosureError):
        cl.generate_sublattice([])


def test_certificate_mode_without_hints():
    cert = cl.verify_generates_equ(base6().generators, "certificate")
    assert cert.verdict and cert.mode == "cycle-atom-certificate"
    assert len(cert.witnesses) == 6


def test_non_generating_certificate_is_false():
    gens = [atom(5, 0, 1), atom(5, 1, 2), atom(5, 2, 3)]
    assert not cl.verify_generates_equ(gens, "certificate").verdict
    assert not cl.verify_generates_equ(gens, "full").verdict


def test_mode_validation():
    with pytest.raises(cl.ClosureError):
        cl.verify_generates_equ([bottom(2)], "certificate")
    with pytest.raises(cl.ClosureError):
        cl.verify_generates_equ(base6().generators, "magic")
    with pytest.raises(cl.ClosureError):
        cl.verify_generates_quo([qo.identity(5)], "full")


def test_hints_are_evaluated_not_trusted():
    gens = base6().generators
    hints = [("x", "join", "alpha", "beta"), ("y", "meet", "x", "gamma")]
    run = cl.ClosureRun(gens, ["alpha", "beta", "gamma", "delta"])
    where = run.seed(hints)
    assert run.element(where["x"]) == gens[0] | gens[1]
    assert run.element(where["y"]) == (gens[0] | gens[1]) & gens[2]
    with pytest.raises(cl.ClosureError):
        run.seed([("z", "join", "nope", "alpha")])


def test_derivation_replays_to_witness():
    cert = cl.generate_sublattice(base6().generators, cl.ContainsAll((atom(6, 0, 1),)))
    env = dict(zip(cert.generator_names, cert.generators))
    for name, expr in cert.derivation:
        left, op, right = expr.split()
        env[name] = env[left] | env[right] if op == "+" else env[left] & env[right]
    assert atom(6, 0, 1) in env.values()


@pytest.mark.parametrize("workers", [1, 2, 8])
def test_determinism_across_workers(workers):
    ref = cl.generate_sublattice(base9().generators, workers=1)
    cert = cl.generate_sublattice(base9().generators, workers=workers)
    assert cert.generated_count == ref.generated_count == 21147
    assert cert.run.elements() == ref.run.elements()


def test_quo_cycle_rule_and_full_mode():
    assert cl.validate_quo_cycle_rule()
    for n in (3, 4):
        cert = cl.verify_generates_quo(cl.directed_cycle_atoms(n), "full")
        assert cert.verdict and cert.generated_count == cl.quo_count(n)


def test_quo_kulin_needs_asymmetry():
    eq_atoms = [qo.equ_to_quo(a) for a in cl.cycle_atoms(5)]
    cert = cl.verify_generates_quo(eq_atoms, "kulin")
    assert not cert.verdict and not cert.stats["non_symmetric_found"]
    cert = cl.verify_generates_quo(eq_atoms + [qo.qu(5, 0, 1)], "kulin")
    assert cert.verdict


def test_certificate_json_without_timing_is_stable():
    a = cl.verify_generates_equ(base6().generators, "full").to_json(timing=False)
    b = cl.verify_generates_equ(base6().generators, "full").to_json(timing=False)
    assert a == b
