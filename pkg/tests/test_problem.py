import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optbench.exceptions import ConfigError, DimensionError
from optbench.problem import (
    ObjectiveProblem,
    PenaltyConfig,
    SearchSpace,
    benchmark_suite,
    evaluate,
    fitness_function,
    get_problem,
    parse_problem_key,
    penalized_evaluate,
    problem_names,
)
from optbench.walks import RandomSource, uniform_sample

BOUNDS = {
    "sphere": (-5.12, 5.12),
    "rosenbrock": (-5.0, 10.0),
    "rastrigin": (-5.12, 5.12),
    "ackley": (-32.768, 32.768),
    "griewank": (-600.0, 600.0),
}


def zero_problem(dim, **kwargs):
    return ObjectiveProblem("zero", lambda x: 0.0, SearchSpace.cube(-5, 5, dim), **kwargs)


@pytest.mark.parametrize("name, x", [
    ("sphere", [0.0, 0.0, 0.0, 0.0]),
    ("rosenbrock", [1.0, 1.0]),
    ("rastrigin", [0.0, 0.0, 0.0]),
])
def test_evaluate_at_analytic_minimum(name, x):
    assert evaluate(get_problem(name, len(x)), np.array(x)) == 0.0


def test_evaluate_rejects_wrong_dimension():
    with pytest.raises(DimensionError):
        evaluate(get_problem("sphere", 3), np.zeros(2))
    with pytest.raises(DimensionError):
        evaluate(get_problem("sphere", 3), np.zeros((3, 1)))


def test_evaluate_maps_non_finite_to_inf():
    space = SearchSpace.cube(-1, 1, 2)
    assert evaluate(ObjectiveProblem("nan", lambda x: math.nan, space), np.zeros(2)) == math.inf
    assert evaluate(ObjectiveProblem("ninf", lambda x: -math.inf, space), np.zeros(2)) == math.inf
    assert fitness_function(ObjectiveProblem("nan", lambda x: math.nan, space))(np.zeros(2)) == math.inf


def test_evaluate_is_deterministic():
    rng = RandomSource(3)
    for problem in benchmark_suite(4):
        x = uniform_sample(problem.space, rng)
        assert evaluate(problem, x) == evaluate(problem, x.copy())


def test_penalty_without_constraints_is_exact():
    rng = RandomSource(11)
    for problem in benchmark_suite(3):
        for _ in range(20):
            x = uniform_sample(problem.space, rng)
            assert penalized_evaluate(problem, x, PenaltyConfig(7.0, 3.0)) == evaluate(problem, x)


def test_penalty_satisfied_inequality_adds_nothing():
    sphere = get_problem("sphere", 2)
    p = ObjectiveProblem("c", sphere.objective, sphere.space, inequality_constraints=[lambda x: x[0] - 1])
    x = np.array([0.5, 0.25])
    assert penalized_evaluate(p, x, PenaltyConfig(ineq_weight=10)) == evaluate(sphere, x)


def test_penalty_equality_violation():
    p = zero_problem(1, equality_constraints=[lambda x: x[0]])
    assert penalized_evaluate(p, np.array([2.0]), PenaltyConfig(eq_weight=10, ineq_weight=0)) == 40.0


def test_penalty_violated_inequality():
    p = zero_problem(2, inequality_constraints=[lambda x: x[0] - 1, lambda x: x[1]])
    # max(0, 3-1)^2 + max(0, -1)^2 = 4
    assert penalized_evaluate(p, np.array([3.0, -1.0]), PenaltyConfig(ineq_weight=2.5)) == 10.0


def test_penalty_weights_nonnegative():
    with pytest.raises(ConfigError):
        PenaltyConfig(eq_weight=-1)


def test_constrained_problem_is_optimized_on_penalized_value():
    p = zero_problem(1, equality_constraints=[lambda x: x[0] - 1])
    f = fitness_function(p, PenaltyConfig(eq_weight=2))
    assert f(np.array([3.0])) == 8.0


def test_suite_contents_dim2():
    suite = benchmark_suite(2)
    assert [p.name for p in suite] == ["sphere", "rosenbrock", "rastrigin", "ackley", "griewank"]
    for p in suite:
        assert p.known_optimum[1] == 0.0
        low, high = BOUNDS[p.name]
        assert np.all(p.space.lower == low) and np.all(p.space.upper == high)
        assert p.dim == 2


def test_suite_rejects_zero_dim():
    with pytest.raises(ConfigError):
        benchmark_suite(0)
    with pytest.raises(ConfigError):
        get_problem("sphere", 0)


def test_ackley_origin_dim10():
    assert abs(evaluate(get_problem("ackley", 10), np.zeros(10))) <= 1e-12


def test_griewank_off_grid_positive(probe_table):
    rows = [r for r in probe_table if r["problem"] == "griewank" and r["dim"] == 2 and any(r["x"])]
    assert rows
    g = get_problem("griewank", 2)
    for row in rows:
        value = evaluate(g, np.array(row["x"]))
        assert value > 0
        assert value == pytest.approx(row["value"], abs=1e-12)


@pytest.mark.parametrize("dim", [1, 2, 5, 10])
def test_known_optimum_value(dim):
    for p in benchmark_suite(dim):
        point, value = p.known_optimum
        assert abs(evaluate(p, point) - value) <= 1e-9


@pytest.mark.parametrize("dim", [2, 5])
def test_optimum_is_lower_bound(dim):
    rng = RandomSource(2024)
    for p in benchmark_suite(dim):
        xs = uniform_sample(p.space, rng, 1000)
        values = np.array([evaluate(p, x) for x in xs])
        assert values.min() >= p.known_optimum[1] - 1e-9


def test_search_space_validation():
    with pytest.raises(ConfigError):
        SearchSpace([0.0, 0.0], [1.0])
    with pytest.raises(ConfigError):
        SearchSpace([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ConfigError):
        SearchSpace([], [])
    s = SearchSpace([0, -1], [1, 1])
    assert s.dim == 2
    assert s.contains([1.0, -1.0]) and not s.contains([1.0001, 0])


def test_known_optimum_must_be_inside():
    with pytest.raises(ConfigError):
        ObjectiveProblem("bad", lambda x: 0.0, SearchSpace.cube(0, 1, 2), known_optimum=([2.0, 0.0], 0.0))


def test_registry():
    assert set(problem_names()) >= {"sphere", "rosenbrock", "rastrigin", "ackley", "griewank"}
    assert get_problem("rastrigin", 7).dim == 7
    with pytest.raises(ConfigError):
        get_problem("nope", 2)
    assert parse_problem_key("rastrigin:5") == ("rastrigin", 5)
    for bad in ("sphere", "sphere:", "sphere:x"):
        with pytest.raises(ConfigError):
            parse_problem_key(bad)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=6), st.sampled_from(list(BOUNDS)))
def test_evaluate_bit_identical_property(coords, name):
    p = get_problem(name, len(coords))
    x = p.space.clip(np.array(coords))
    assert evaluate(p, x) == evaluate(p, np.array(x))
