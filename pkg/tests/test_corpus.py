"""The bundled level sets stay honest: stored solutions really solve them."""
import pytest

from keke import (
    Outcome,
    best_first_solve,
    init_state,
    list_level_sets,
    load_bundled,
    parse_actions,
    random_solve,
    simulate,
)


def test_bundled_sets_present():
    assert list_level_sets() == ("demo", "mini")


@pytest.mark.parametrize("set_name", ["demo", "mini"])
def test_stored_solutions_win(set_name):
    level_set = load_bundled(set_name)
    assert level_set.levels
    for level in level_set.levels:
        actions = parse_actions(level.solution)
        out = simulate(init_state(level), actions)
        assert out.outcome is Outcome.WIN, level.id
        assert out.steps_used == len(actions), level.id


def test_mini_is_subset_of_demo():
    demo = load_bundled("demo")
    mini = load_bundled("mini")
    for level in mini.levels:
        assert demo.get(level.id).ascii == level.ascii


def test_demo_archetypes_are_present():
    demo = load_bundled("demo")
    ids = set(demo.ids())
    assert {"one-move", "corridor", "maze", "tunnel-hazard", "rule-break"} <= ids
    # the one-move level is exactly that
    assert len(parse_actions(demo.get("one-move").solution)) == 1
    # the maze takes real search
    assert len(parse_actions(demo.get("maze").solution)) >= 16


def test_demo_levels_solvable_by_best_first_within_default_budget():
    demo = load_bundled("demo")
    for level in demo.levels:
        result = best_first_solve(init_state(level))
        assert result.solved, level.id


def test_random_agent_deterministic_on_maze():
    level = load_bundled("demo").get("maze")
    for seed in range(3):
        a = random_solve(init_state(level), rng_seed=seed)
        b = random_solve(init_state(level), rng_seed=seed)
        assert a == b
