import { Api } from './api.js';
import { runEvaluation } from './evalview.js';
import { LivePlay } from './play.js';
import { ReplayStepper } from './replay.js';
import type { LevelResult } from './types.js';

// Page wiring: dropdowns for agent and level set, an evaluate button, a
// results table that opens replays, and a live-play panel.

export async function boot(root: HTMLElement, api: Api = new Api()): Promise<void> {
  root.innerHTML = `
    <header>
      <h1>keke evaluator</h1>
      <div class="controls">
        <select id="agent"></select>
        <select id="levelset"></select>
        <button id="evaluate">evaluate</button>
        <select id="level"></select>
        <button id="play">play</button>
      </div>
    </header>
    <main>
      <section id="results"></section>
      <section id="viewer"></section>
    </main>
  `;

  const agentSelect = root.querySelector('#agent') as HTMLSelectElement;
  const setSelect = root.querySelector('#levelset') as HTMLSelectElement;
  const levelSelect = root.querySelector('#level') as HTMLSelectElement;
  const results = root.querySelector('#results') as HTMLElement;
  const viewer = root.querySelector('#viewer') as HTMLElement;

  const [agents, sets] = await Promise.all([api.listAgents(), api.listLevelSets()]);
  for (const name of agents) {
    agentSelect.appendChild(new Option(name, name));
  }
  for (const name of sets) {
    setSelect.appendChild(new Option(name, name));
  }

  async function refreshLevels(): Promise<void> {
    levelSelect.replaceChildren();
    if (!setSelect.value) return;
    const doc = await api.levelSet(setSelect.value);
    for (const level of doc.levels) {
      levelSelect.appendChild(new Option(level.id, level.id));
    }
  }
  setSelect.addEventListener('change', () => void refreshLevels());
  await refreshLevels();

  let replay: ReplayStepper | null = null;
  const live = new LivePlay(api, viewer);
  live.attach(root.ownerDocument);

  const openReplay = (levelset: string, result: LevelResult): void => {
    void (async () => {
      await live.stop();
      viewer.replaceChildren();
      const pane = document.createElement('div');
      pane.className = 'replay-pane';
      viewer.appendChild(pane);
      const controls = document.createElement('div');
      controls.className = 'replay-controls';
      const backButton = document.createElement('button');
      backButton.textContent = '‹ back';
      const nextButton = document.createElement('button');
      nextButton.textContent = 'next ›';
      controls.append(backButton, nextButton);
      viewer.appendChild(controls);
      replay = new ReplayStepper(api, levelset, result.id, result.solution, pane);
      backButton.addEventListener('click', () => void replay?.back());
      nextButton.addEventListener('click', () => void replay?.next());
      await replay.open();
    })();
  };

  (root.querySelector('#evaluate') as HTMLButtonElement).addEventListener(
    'click',
    () => {
      if (!agentSelect.value || !setSelect.value) return;
      void runEvaluation(api, agentSelect.value, setSelect.value, results, openReplay);
    },
  );

  (root.querySelector('#play') as HTMLButtonElement).addEventListener(
    'click',
    () => {
      if (!setSelect.value || !levelSelect.value) return;
      replay = null;
      void live.start(setSelect.value, levelSelect.value);
    },
  );
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  void boot(document.getElementById('app') as HTMLElement);
}
