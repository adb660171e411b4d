import pytest

from lcllab.automaton import NoInputClass, build_automaton, classify_no_input
from lcllab.catalog import all_red, copy_input, maximal_independent_set, three_coloring, two_coloring
from lcllab.exceptions import BudgetExceededError, CertificateError, InstanceError, SimulationError
from lcllab.oracle import find_window_algorithm
from lcllab.problem import LabeledInstance
from lcllab.randomness import make_rng, random_ids
from lcllab.simulator import (
    budget_coefficients,
    cole_vishkin_iterations,
    constant_algorithm,
    copy_algorithm,
    log_star,
    majority_algorithm,
    probe_locality,
    round_budget,
    ruling_set,
    ruling_trace,
    run_view_algorithm,
    solve_ergodic,
    window_algorithm,
)


def _cycle(n, seed=0, letters=("u",)):
    rng = make_rng(seed, 99)
    inputs = [letters[int(i)] for i in rng.integers(len(letters), size=n)]
    return LabeledInstance.cycle(inputs, ids=random_ids(n, seed), rng_seed=seed)


@pytest.mark.parametrize("exponent, expected", [(0, 0), (1, 1), (4, 3), (16, 4), (65536, 5)])
def test_log_star(exponent, expected):
    assert log_star(2 ** exponent) == expected


def test_cole_vishkin_iteration_count():
    assert cole_vishkin_iterations(5) == 0
    assert cole_vishkin_iterations(6) == 1
    assert cole_vishkin_iterations(2**48) == 4


def test_round_budget():
    assert round_budget(1, 10**9) == 0
    assert round_budget(2, 2**48) == 13
    assert round_budget(3, 2**48) == 157


@pytest.mark.parametrize("k, coefficients", [(1, (0, 0)), (2, (1, 9)), (3, (13, 105)), (5, (121, 969))])
def test_budget_coefficients(k, coefficients):
    assert budget_coefficients(k) == coefficients
    c, c0 = coefficients
    assert round_budget(k, 2**48) == c * cole_vishkin_iterations(2**48) + c0


@pytest.mark.parametrize("k", [2, 3, 4, 5])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_ruling_set_spacing(k, seed):
    rs = ruling_set(_cycle(1000, seed), k)
    assert set(rs.gaps) <= {k, k + 1}
    assert sum(rs.gaps) == 1000
    assert rs.rounds_used <= rs.round_budget


@pytest.mark.parametrize("n", range(6, 40))
def test_ruling_set_on_small_cycles(n):
    rs = ruling_set(_cycle(n, seed=n), 3)
    assert set(rs.gaps) <= {3, 4}
    assert rs.rounds_used <= rs.round_budget


RULING_N = 2**16


def _check_ruling_runs(k, seeds):
    c, c0 = budget_coefficients(k)
    inputs = ("u",) * RULING_N
    for seed in seeds:
        ids = random_ids(RULING_N, seed)
        rs = ruling_set(LabeledInstance.cycle(inputs, ids=ids), k)
        gaps = rs.gaps
        assert set(gaps) <= {k, k + 1}, seed
        assert sum(gaps) == RULING_N
        assert rs.rounds_used <= rs.round_budget == c * cole_vishkin_iterations(max(ids)) + c0
        if k == 2:
            assert rs.rounds_used <= 4 * log_star(RULING_N) + 32


@pytest.mark.parametrize("k", [2, 3, 5])
def test_ruling_set_on_sixty_five_thousand_nodes(k):
    _check_ruling_runs(k, range(3))


@pytest.mark.slow
@pytest.mark.parametrize("k", [2, 3, 5])
def test_ruling_set_over_a_hundred_id_assignments(k):
    _check_ruling_runs(k, range(100))


def test_spacing_one_marks_everything():
    rs = ruling_set(_cycle(10), 1)
    assert all(rs.marks)
    assert rs.rounds_used == 0


def test_ruling_set_preconditions():
    with pytest.raises(SimulationError):
        ruling_set(_cycle(10), 0)
    with pytest.raises(SimulationError):
        ruling_set(LabeledInstance.path("u" * 10, ids=range(10)), 2)
    with pytest.raises(SimulationError):
        ruling_set(LabeledInstance.cycle("u" * 10), 2)
    with pytest.raises(SimulationError):
        ruling_set(_cycle(5), 4)
    with pytest.raises(SimulationError):
        ruling_set(_cycle(5), 3)
    assert set(ruling_set(_cycle(7), 3).gaps) <= {3, 4}
    with pytest.raises(InstanceError):
        ruling_set(LabeledInstance.cycle("uuu", ids=[1, 1, 2]), 2)
    with pytest.raises(InstanceError):
        ruling_set(LabeledInstance.cycle("uuu", ids=[-1, 0, 2]), 2)


def test_ruling_trace():
    trace = ruling_trace(_cycle(200), 3)
    assert trace.violations == ()
    assert set(trace.outputs) == {"0", "1"}
    data = trace.to_dict()
    assert data["k"] == 3
    assert set(data["spacing"]) <= {3, 4}
    assert data["marks"] == [i for i, out in enumerate(trace.outputs) if out == "1"]


@pytest.mark.parametrize("builder", [three_coloring, maximal_independent_set])
def test_ergodic_solver_is_valid(builder):
    p = builder()
    verdict = classify_no_input(build_automaton(p))
    inst = _cycle(500, seed=4)
    trace = solve_ergodic(p, inst, verdict)
    assert trace.violations == ()
    assert trace.rounds_used <= trace.round_budget
    assert trace.details == {"state": "1", "k0": 6}


ERGODIC_N = 10**5


def _check_ergodic_runs(builder, seeds):
    p = builder()
    verdict = classify_no_input(build_automaton(p))
    inputs = ("u",) * ERGODIC_N
    for seed in seeds:
        inst = LabeledInstance.cycle(inputs, ids=random_ids(ERGODIC_N, seed), rng_seed=seed)
        trace = solve_ergodic(p, inst, verdict)
        assert trace.violations == (), seed
        assert len(trace.outputs) == ERGODIC_N
        assert trace.rounds_used <= trace.round_budget


@pytest.mark.parametrize("builder", [three_coloring, maximal_independent_set])
def test_ergodic_solver_on_large_cycles(builder):
    _check_ergodic_runs(builder, range(2))


@pytest.mark.slow
@pytest.mark.parametrize("builder", [three_coloring, maximal_independent_set])
def test_ergodic_solver_over_twenty_seeds(builder):
    _check_ergodic_runs(builder, range(20))


def test_ergodic_solver_needs_room_for_its_ruling_set():
    p = three_coloring()
    verdict = classify_no_input(build_automaton(p))
    with pytest.raises(SimulationError, match="n >= 56"):
        solve_ergodic(p, _cycle(55), verdict)
    assert solve_ergodic(p, _cycle(56), verdict).violations == ()


def test_ergodic_solver_needs_a_logstar_verdict():
    p = two_coloring()
    verdict = classify_no_input(build_automaton(p))
    assert verdict.complexity is NoInputClass.GLOBAL
    with pytest.raises(CertificateError):
        solve_ergodic(p, _cycle(100), verdict)
    with pytest.raises(CertificateError):
        solve_ergodic(p, _cycle(100), None)


def test_constant_rule():
    trace = run_view_algorithm(constant_algorithm("R"), all_red(), _cycle(50))
    assert trace.violations == ()
    assert trace.rounds_used == 0
    bad = run_view_algorithm(constant_algorithm("W"), two_coloring(), LabeledInstance.cycle("uuuu"))
    assert bad.violations == (0, 1, 2, 3)


def test_copy_rule_solves_copy_input():
    trace = run_view_algorithm(copy_algorithm(copy_input()), copy_input(), _cycle(64, letters=("a", "b")))
    assert trace.violations == ()


def test_window_rule_runs_as_a_view_algorithm():
    rule = find_window_algorithm(copy_input(), 1)
    trace = run_view_algorithm(window_algorithm(rule), copy_input(), _cycle(64, letters=("a", "b")))
    assert trace.violations == ()
    assert trace.rounds_used == 1


def test_majority_rule_needs_ids():
    alg = majority_algorithm(two_coloring())
    with pytest.raises(SimulationError):
        run_view_algorithm(alg, two_coloring(), LabeledInstance.cycle("u" * 10))
    trace = run_view_algorithm(alg, two_coloring(), _cycle(10))
    assert len(trace.outputs) == 10


def _changed_outside(inst, i, t, swap):
    inside = {(i + d) % inst.n for d in range(-t, t + 1)}
    inputs = [x if j in inside else swap.get(x, x) for j, x in enumerate(inst.inputs)]
    ids = [x if j in inside else x + 10**12 for j, x in enumerate(inst.ids)]
    return LabeledInstance.cycle(inputs, ids=ids, rng_seed=inst.rng_seed)


@pytest.mark.parametrize(
    "alg, p, letters",
    [
        (window_algorithm(find_window_algorithm(copy_input(), 1)), copy_input(), ("a", "b")),
        (majority_algorithm(two_coloring()), two_coloring(), ("u",)),
        (copy_algorithm(copy_input()), copy_input(), ("a", "b")),
    ],
)
def test_outputs_depend_only_on_the_view(alg, p, letters):
    inst = _cycle(40, seed=5, letters=letters)
    swap = {"a": "b", "b": "a"}
    before = run_view_algorithm(alg, p, inst).outputs
    for i in range(0, inst.n, 3):
        after = run_view_algorithm(alg, p, _changed_outside(inst, i, alg.radius, swap)).outputs
        assert after[i] == before[i], i


def test_view_algorithm_preconditions():
    with pytest.raises(SimulationError):
        run_view_algorithm(window_algorithm(find_window_algorithm(copy_input(), 1)), copy_input(),
                           LabeledInstance.cycle("ab"))
    with pytest.raises(SimulationError):
        run_view_algorithm(constant_algorithm("R"), all_red(), LabeledInstance.path("uuu"))
    with pytest.raises(SimulationError):
        run_view_algorithm(constant_algorithm("Z"), all_red(), LabeledInstance.cycle("uuu"))


def test_locality_search_counts_unavoidable_violations():
    instances = [LabeledInstance.cycle("uuuu"), LabeledInstance.cycle("uuuuu")]
    rows = probe_locality(two_coloring(), instances, 1)
    assert [(r.radius, r.instance) for r in rows] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [r.best_violations for r in rows] == [4, 5, 4, 5]
    assert all(r.views == 1 for r in rows)


def test_locality_search_finds_perfect_rules():
    rows = probe_locality(copy_input(), [_cycle(30, letters=("a", "b"))], 1)
    assert all(r.best_violations == 0 for r in rows)


def test_locality_search_limit():
    with pytest.raises(BudgetExceededError):
        probe_locality(two_coloring(), [LabeledInstance.cycle("uuuu")], 0, max_assignments=1)
