"""Command-line interface: solve, evaluate, play, replay, serve."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .agents import Budget, UnknownAgent, agent_spec, available_agents, solve
from .bundled import resolve_level_set
from .engine import (
    Action,
    Outcome,
    init_state,
    parse_actions,
    render_actions,
    serialize_ascii_map,
    step,
)
from .evaluator import (
    AgentReport,
    evaluate_agent,
    rank_agents,
    read_report,
    write_report,
)
from .levels import KekeError, Level

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSOLVED = 2


def _fail(message: str) -> "click.exceptions.Exit":
    click.echo(message, err=True)
    return click.exceptions.Exit(EXIT_ERROR)


def _budget(max_nodes: int, max_millis: int, max_len: int) -> Budget:
    return Budget(
        max_nodes=max_nodes, max_millis=max_millis, max_solution_length=max_len
    )


def _load_level(levelset_ref: str, level_id: str) -> Level:
    level_set = resolve_level_set(levelset_ref)
    try:
        return level_set.get(level_id)
    except KeyError:
        raise _fail(f"unknown level {level_id!r} in set {level_set.name!r}")


budget_options = [
    click.option("--max-nodes", default=100_000, show_default=True, type=int),
    click.option("--max-millis", default=60_000, show_default=True, type=int),
    click.option("--max-len", default=200, show_default=True, type=int),
]


def with_budget(fn):
    for option in reversed(budget_options):
        fn = option(fn)
    return fn


@click.group()
def main() -> None:
    """Word-rule puzzle engine: solvers, evaluation, play and replay."""


@main.command("solve")
@click.option("--agent", "agent_name", required=True)
@click.option("--levelset", "levelset_ref", required=True)
@click.option("--level", "level_id", required=True)
@click.option("--seed", default=0, show_default=True, type=int)
@with_budget
def cmd_solve(agent_name, levelset_ref, level_id, seed, max_nodes, max_millis, max_len):
    """Run one agent on one level and print the result as JSON."""
    try:
        spec = agent_spec(agent_name)
    except UnknownAgent:
        raise _fail(f"unknown agent {agent_name!r}")
    try:
        level = _load_level(levelset_ref, level_id)
        result = solve(spec, level, _budget(max_nodes, max_millis, max_len), seed=seed)
    except KekeError as exc:
        raise _fail(str(exc))
    click.echo(
        json.dumps(
            {
                "agent": spec.name,
                "level": level.id,
                "solved": result.solved,
                "solution": render_actions(result.actions),
                "length": len(result.actions),
                "nodes_expanded": result.nodes_expanded,
                "elapsed_millis": result.elapsed_millis,
                "terminated_by": result.terminated_by.value,
            },
            indent=2,
        )
    )
    raise click.exceptions.Exit(EXIT_OK if result.solved else EXIT_UNSOLVED)


def format_leaderboard(reports: list[AgentReport]) -> str:
    board = rank_agents(reports)
    lines = [
        f"{'rank':<5} {'agent':<14} {'solved%':>8} {'avg_score':>10} {'avg_nodes':>10}"
    ]
    for rank, report in enumerate(board.entries, start=1):
        nodes = (
            sum(r.nodes_expanded for r in report.results) / len(report.results)
            if report.results
            else 0.0
        )
        tag = " [error]" if report.error else ""
        lines.append(
            f"{rank:<5} {report.agent:<14} {report.solve_rate * 100:>7.1f}% "
            f"{report.avg_score:>10.3f} {nodes:>10.1f}{tag}"
        )
    return "\n".join(lines)


@main.command("evaluate")
@click.option("--agent", "agent_name", default=None, help="One agent; default: all.")
@click.option("--levelset", "levelset_ref", required=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_dir", default="reports", show_default=True)
@click.option("--deterministic", is_flag=True, help="Zero timing fields in files.")
@with_budget
def cmd_evaluate(
    agent_name, levelset_ref, seed, out_dir, deterministic, max_nodes, max_millis, max_len
):
    """Evaluate agents over a level set, write reports, print the ranking."""
    try:
        level_set = resolve_level_set(levelset_ref)
    except KekeError as exc:
        raise _fail(str(exc))
    names = [agent_name] if agent_name else list(available_agents())
    budget = _budget(max_nodes, max_millis, max_len)
    reports = []
    for name in names:
        reports.append(evaluate_agent(name, level_set, budget, seed=seed))
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for report in reports:
            write_report(
                report,
                out / f"{report.agent}_{level_set.name}.json",
                deterministic=deterministic,
            )
    except OSError as exc:
        raise _fail(f"cannot write reports: {exc}")
    click.echo(format_leaderboard(reports))
    raise click.exceptions.Exit(EXIT_OK)


def _render_frame(state, header: str = "") -> str:
    lines = []
    if header:
        lines.append(header)
    lines.append(serialize_ascii_map(state.board))
    rules = state.rules.render()
    lines.append("rules: " + (", ".join(rules) if rules else "(none)"))
    lines.append(f"tick {state.tick} | {state.outcome.value}")
    return "\n".join(lines)


@main.command("replay")
@click.option("--levelset", "levelset_ref", required=True)
@click.option("--level", "level_id", required=True)
@click.option("--report", "report_path", default=None, help="Report with solutions.")
def cmd_replay(levelset_ref, level_id, report_path):
    """Step through a stored solution, one frame per state."""
    try:
        level = _load_level(levelset_ref, level_id)
        if report_path:
            report = read_report(report_path)
            matches = [r for r in report.results if r.level_id == level_id]
            if not matches:
                raise _fail(f"report has no entry for level {level_id!r}")
            solution = matches[0].solution
        else:
            solution = level.solution
        actions = parse_actions(solution)
    except (KekeError, ValueError) as exc:
        raise _fail(str(exc))
    state = init_state(level)
    click.echo(_render_frame(state, f"=== {level.id} (frame 0/{len(actions)})"))
    for i, action in enumerate(actions, start=1):
        if state.outcome is not Outcome.ONGOING:
            break
        state = step(state, action)
        click.echo(_render_frame(state, f"=== {level.id} (frame {i}/{len(actions)})"))
    if state.outcome is Outcome.WIN:
        click.echo("WIN")
    elif state.outcome is Outcome.LOSE:
        click.echo("LOSE")
    else:
        click.echo("attempt ended: " + state.outcome.value)
    raise click.exceptions.Exit(EXIT_OK)


_PLAY_KEYS = {
    "w": Action.UP,
    "a": Action.LEFT,
    "s": Action.DOWN,
    "d": Action.RIGHT,
    " ": Action.WAIT,
    "\x1b[A": Action.UP,
    "\x1b[B": Action.DOWN,
    "\x1b[D": Action.LEFT,
    "\x1b[C": Action.RIGHT,
}


def _read_keys(stream):
    """Yield key tokens from a stream; arrows arrive as escape sequences."""
    while True:
        ch = stream.read(1)
        if not ch:
            return
        if ch == "\x1b":
            rest = stream.read(2)
            yield ch + rest
        elif ch in ("\n", "\r"):
            continue
        else:
            yield ch


@main.command("play")
@click.option("--levelset", "levelset_ref", required=True)
@click.option("--level", "level_id", required=True)
def cmd_play(levelset_ref, level_id):
    """Play a level live: WASD or arrows move, space waits, q quits."""
    try:
        level = _load_level(levelset_ref, level_id)
    except KekeError as exc:
        raise _fail(str(exc))
    state = init_state(level)
    click.echo(_render_frame(state, f"=== {level.id}"))
    if sys.stdin.isatty():  # pragma: no cover - interactive path
        import termios
        import tty

        fd = sys.stdin.fileno()
        old = termios.tcgetattr(fd)
        try:
            tty.setcbreak(fd)
            _play_loop(state, _read_keys(sys.stdin))
        finally:
            termios.tcsetattr(fd, termios.TCSADRAIN, old)
    else:
        _play_loop(state, _read_keys(sys.stdin))
    raise click.exceptions.Exit(EXIT_OK)


def _play_loop(state, keys) -> None:
    for key in keys:
        if key.lower() == "q":
            click.echo("quit")
            return
        action = _PLAY_KEYS.get(key.lower() if len(key) == 1 else key)
        if action is None:
            continue
        state = step(state, action)
        click.echo(_render_frame(state))
        if state.outcome is Outcome.WIN:
            click.echo("WIN")
            return
        if state.outcome is Outcome.LOSE:
            click.echo("LOSE")
            return
    click.echo("input ended: " + state.outcome.value)


@main.command("serve")
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--out", "reports_dir", default="reports", show_default=True)
@click.option("--ui-dir", default=None, help="Static UI directory to mount at /.")
@click.option("--deterministic", is_flag=True)
def cmd_serve(port, host, reports_dir, ui_dir, deterministic):
    """Serve the HTTP API (and the web UI when built)."""
    import uvicorn

    from .server import create_app

    app = create_app(
        reports_dir=Path(reports_dir),
        ui_dir=Path(ui_dir) if ui_dir else None,
        deterministic=deterministic,
    )
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        raise _fail(f"cannot bind {host}:{port}: {exc}")


if __name__ == "__main__":
    main()
