import type { Api } from './api.js';
import type { AgentReport, LevelResult } from './types.js';

export type OpenReplay = (levelset: string, result: LevelResult) => void;

function statsLine(report: AgentReport): string {
  const solved = report.results.filter((r) => r.solved).length;
  const nodes =
    report.results.length > 0
      ? report.results.reduce((acc, r) => acc + r.nodes_expanded, 0) /
        report.results.length
      : 0;
  const millis =
    report.results.length > 0
      ? report.results.reduce((acc, r) => acc + r.elapsed_millis, 0) /
        report.results.length
      : 0;
  return (
    `solved ${solved}/${report.results.length} ` +
    `(${(report.solve_rate * 100).toFixed(1)}%) | ` +
    `avg score ${report.avg_score.toFixed(3)} | ` +
    `avg nodes ${nodes.toFixed(1)} | avg time ${millis.toFixed(0)}ms`
  );
}

export function renderReport(
  report: AgentReport,
  container: HTMLElement,
  onOpenReplay: OpenReplay,
): void {
  container.replaceChildren();

  if (report.error !== null) {
    const banner = document.createElement('div');
    banner.className = 'error-banner';
    banner.textContent = `agent error: ${report.error}`;
    container.appendChild(banner);
    return;
  }

  const stats = document.createElement('div');
  stats.className = 'stats';
  stats.textContent = statsLine(report);
  container.appendChild(stats);

  const table = document.createElement('table');
  table.className = 'results';
  const head = document.createElement('tr');
  for (const label of ['', 'level', 'length', 'nodes', 'time (ms)', 'score']) {
    const th = document.createElement('th');
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);

  for (const result of report.results) {
    const row = document.createElement('tr');
    row.className = result.solved ? 'level-row solved' : 'level-row unsolved';
    row.dataset.levelId = result.id;

    const light = document.createElement('td');
    light.className = `indicator ${result.solved ? 'ok' : 'fail'}`;
    light.textContent = result.solved ? '●' : '○';
    row.appendChild(light);

    const cells = [
      result.id,
      String(result.length),
      String(result.nodes_expanded),
      String(result.elapsed_millis),
      result.score.toFixed(3),
    ];
    for (const text of cells) {
      const td = document.createElement('td');
      td.textContent = text;
      row.appendChild(td);
    }
    row.addEventListener('click', () => onOpenReplay(report.levelset, result));
    table.appendChild(row);
  }
  container.appendChild(table);
}

export async function runEvaluation(
  api: Api,
  agent: string,
  levelset: string,
  container: HTMLElement,
  onOpenReplay: OpenReplay,
): Promise<AgentReport> {
  container.replaceChildren();
  const pending = document.createElement('div');
  pending.className = 'pending';
  pending.textContent = `evaluating ${agent} on ${levelset}…`;
  container.appendChild(pending);
  const report = await api.evaluate(agent, levelset);
  renderReport(report, container, onOpenReplay);
  return report;
}
