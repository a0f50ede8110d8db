import itertools
import random

import pytest

from keke import (
    Action,
    Budget,
    Level,
    Outcome,
    TerminatedBy,
    UnknownAgent,
    AgentContractViolation,
    agent_spec,
    available_agents,
    best_first_solve,
    bfs_solve,
    dfs_solve,
    heuristic,
    init_state,
    preprocess_agent,
    random_solve,
    register_agent,
    render_actions,
    simulate,
    solve,
    unregister_agent,
)
from keke.agents import RANDOM_SEQUENCE_LENGTH, LOSE_SCORE
from keke.engine import step

ONE_MOVE = Level(id="one-move", ascii="B1U\nB1N\nb__")
CORRIDOR = Level(id="corridor", ascii="B1UF1N___\nb_______f")
SEALED = Level(id="sealed", ascii="B1UW1T\nwbw___\nwww___")


def make_state(text):
    return init_state(Level(id="t", ascii=text))


from search_oracle import enumerate_shortest


def test_bfs_one_move_returns_first_action_in_order():
    result = bfs_solve(init_state(ONE_MOVE))
    assert result.solved
    assert result.actions == (Action.UP,)
    assert result.terminated_by is TerminatedBy.SOLVED
    assert result.nodes_expanded == 1


def test_bfs_depth_three_exact():
    level = Level(id="three", ascii="B1UF1N\nb__f__")
    result = bfs_solve(init_state(level))
    assert result.solved and len(result.actions) == 3


def test_bfs_matches_bruteforce_on_corridor():
    short = Level(id="five", ascii="B1UF1N\nb____f")
    want = enumerate_shortest(short, 6)
    assert want == 5
    result = bfs_solve(init_state(short))
    assert result.solved and len(result.actions) == 5


def test_bfs_node_cap():
    result = bfs_solve(init_state(CORRIDOR), Budget(max_nodes=3))
    assert not result.solved
    assert result.terminated_by is TerminatedBy.NODE_CAP
    assert result.nodes_expanded == 3


def test_bfs_time_cap():
    ticker = itertools.count()
    clock = lambda: next(ticker) * 100.0  # every call jumps 100s
    result = bfs_solve(init_state(CORRIDOR), Budget(max_millis=50), clock)
    assert not result.solved
    assert result.terminated_by is TerminatedBy.TIME_CAP


def test_bfs_exhausts_sealed_room():
    result = bfs_solve(init_state(SEALED))
    assert not result.solved
    assert result.terminated_by is TerminatedBy.EXHAUSTED


def test_bfs_solution_revalidates():
    result = bfs_solve(init_state(CORRIDOR))
    assert simulate(init_state(CORRIDOR), result.actions).outcome is Outcome.WIN


def test_dfs_depth_one():
    result = dfs_solve(init_state(ONE_MOVE))
    assert result.solved and len(result.actions) == 1


def test_dfs_finds_longer_path_than_bfs():
    level = Level(id="room", ascii="B1UF1N\nb_____\n______\n_____f")
    bfs = bfs_solve(init_state(level))
    dfs = dfs_solve(init_state(level))
    assert bfs.solved and dfs.solved
    assert len(dfs.actions) >= len(bfs.actions)
    assert simulate(init_state(level), dfs.actions).outcome is Outcome.WIN


def test_dfs_exhausts_cyclic_room_visiting_all_states():
    result = dfs_solve(init_state(SEALED))
    assert not result.solved
    assert result.terminated_by is TerminatedBy.EXHAUSTED
    # a sealed one-cell room still has four states: a blocked move attempt
    # turns the player to face that way
    assert result.nodes_expanded == 4


def test_dfs_respects_depth_limit():
    result = dfs_solve(init_state(CORRIDOR), Budget(max_solution_length=7))
    assert not result.solved
    result = dfs_solve(init_state(CORRIDOR), Budget(max_solution_length=8))
    assert result.solved and len(result.actions) == 8


def test_best_first_depth_one():
    result = best_first_solve(init_state(ONE_MOVE))
    assert result.solved and len(result.actions) == 1


def test_best_first_beats_or_ties_bfs_on_corridor():
    bfs = bfs_solve(init_state(CORRIDOR))
    bf = best_first_solve(init_state(CORRIDOR))
    assert bf.solved
    assert len(bf.actions) == len(bfs.actions)
    assert bf.nodes_expanded <= bfs.nodes_expanded


def test_best_first_terminates_without_win_rule():
    level = Level(id="nowin", ascii="B1UW1T\nb_____\nw_____")
    result = best_first_solve(init_state(level), Budget(max_nodes=500))
    assert not result.solved
    assert result.terminated_by in (TerminatedBy.EXHAUSTED, TerminatedBy.NODE_CAP)


def test_heuristic_zero_on_win_overlap():
    state = make_state("B1UF1N\nbf____")
    # baba shares no cell with flag yet; step onto it
    state = step(state, Action.RIGHT)
    assert state.outcome is Outcome.WIN
    assert heuristic(state) == 0.0


def test_heuristic_manhattan_distance():
    state = make_state("B1UF1N____\nb_________\n__________\n__________\n___f______")
    # you at (0,1), flag at (3,4): distance 3 + 3
    assert heuristic(state) == 6.0


def test_heuristic_example_seven():
    rows = ["b_____", "______", "______", "______", "___f__", "B1UF1N"]
    state = make_state("\n".join(rows))
    # you at (0,0), sole win object at (3,4): |0-3| + |0-4| = 7
    assert heuristic(state) == 7.0


def test_heuristic_no_win_falls_back_to_words():
    state = make_state("B1U__\nb____\n_____")
    # nearest word is IS at (1,0): distance 1; board offset 5+3=8
    assert heuristic(state) == 9.0


def test_heuristic_no_win_five_by_five():
    state = make_state("B1U__\n_____\nb____\n_____\n_____")
    # nearest word at distance 2 on a 5x5 board: 2 + (5+5) = 12
    assert heuristic(state) == 12.0


def test_heuristic_lose_is_max():
    state = make_state("b____")
    state = step(state, Action.WAIT)
    assert state.outcome is Outcome.LOSE
    assert heuristic(state) == LOSE_SCORE


def test_random_agent_seeded_determinism():
    a = random_solve(init_state(CORRIDOR), rng_seed=42)
    b = random_solve(init_state(CORRIDOR), rng_seed=42)
    assert a.actions == b.actions
    assert a.solved == b.solved
    c = random_solve(init_state(CORRIDOR), rng_seed=43)
    assert c.actions != a.actions


def test_random_agent_draws_exactly_fifty_when_unsolved():
    result = random_solve(init_state(SEALED), rng_seed=1)
    assert not result.solved
    assert len(result.actions) == RANDOM_SEQUENCE_LENGTH
    assert result.terminated_by is TerminatedBy.EXHAUSTED


def test_random_agent_wins_one_move_any_seed():
    for seed in range(10):
        result = random_solve(init_state(ONE_MOVE), rng_seed=seed)
        assert result.solved
        assert len(result.actions) == 1


def test_bfs_never_longer_than_others():
    levels = [ONE_MOVE, CORRIDOR, Level(id="l", ascii="B1UF1N\nb___f_")]
    for level in levels:
        bfs = bfs_solve(init_state(level))
        for other in (dfs_solve, best_first_solve):
            res = other(init_state(level))
            if res.solved and bfs.solved:
                assert len(bfs.actions) <= len(res.actions)


def test_bfs_oracle_equality_on_small_boards():
    rng = random.Random(77)
    checked = 0
    for _ in range(30):
        w, h = 6, rng.randint(2, 4)
        cells = [["_"] * w for _ in range(h)]
        cells[0][:6] = list("B1UF1N")
        bx, by = rng.randint(0, w - 1), rng.randint(1, h - 1)
        fx, fy = rng.randint(0, w - 1), rng.randint(1, h - 1)
        if (bx, by) == (fx, fy) or abs(bx - fx) + abs(by - fy) > 5:
            continue
        cells[by][bx] = "b"
        cells[fy][fx] = "f"
        text = "\n".join("".join(r) for r in cells)
        level = Level(id=f"gen{checked}", ascii=text)
        bfs = bfs_solve(init_state(level))
        want = enumerate_shortest(level, 5)
        assert want is not None
        assert bfs.solved and len(bfs.actions) == want
        checked += 1
    assert checked >= 10


def test_solve_dispatch_and_timing():
    ticker = itertools.count()
    clock = lambda: next(ticker) * 0.001
    result = solve("bfs", ONE_MOVE, clock=clock)
    assert result.solved
    assert result.elapsed_millis > 0


def test_solve_unknown_agent():
    with pytest.raises(UnknownAgent):
        solve("alphago", ONE_MOVE)


def test_agent_registry_and_specs():
    assert available_agents()[:4] == ("bfs", "dfs", "best_first", "random")
    assert agent_spec("bfs").kind == "bfs"
    register_agent("greedy-2", lambda state, budget: "U")
    try:
        assert agent_spec("greedy-2").kind == "external"
        assert "greedy-2" in available_agents()
    finally:
        unregister_agent("greedy-2")
    with pytest.raises(ValueError):
        register_agent("bfs", lambda s, b: "U")


def test_external_agent_contract():
    register_agent("upper", lambda state, budget: "U")
    try:
        result = solve("upper", ONE_MOVE)
        assert result.solved and result.actions == (Action.UP,)
    finally:
        unregister_agent("upper")

    register_agent("liar", lambda state, budget: "W" * 500)
    try:
        with pytest.raises(AgentContractViolation):
            solve("liar", ONE_MOVE)
    finally:
        unregister_agent("liar")

    register_agent("garbage", lambda state, budget: 17)
    try:
        with pytest.raises(AgentContractViolation):
            solve("garbage", ONE_MOVE)
    finally:
        unregister_agent("garbage")


def test_preprocess_gate():
    assert preprocess_agent("bfs") is None
    assert preprocess_agent("missing") is not None

    class NoSolve:
        pass

    register_agent("broken", NoSolve())
    try:
        message = preprocess_agent("broken")
        assert message is not None and "solve" in message
    finally:
        unregister_agent("broken")


def test_solved_results_obey_length_budget():
    result = bfs_solve(init_state(CORRIDOR), Budget(max_solution_length=200))
    assert result.solved
    assert len(result.actions) <= 200
    assert render_actions(result.actions) == "R" * 8
