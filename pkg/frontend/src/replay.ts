import type { Api } from './api.js';
import { renderGrid } from './grid.js';
import type { Frame } from './types.js';

// Replays never simulate locally: every frame comes from a play session
// fed the stored solution one action at a time. Stepping back recreates
// the session and replays the prefix, which is cheap at these lengths.

export class ReplayStepper {
  private cursor = 0;
  private session: string | null = null;
  private frame: Frame | null = null;

  constructor(
    private readonly api: Api,
    private readonly levelset: string,
    private readonly levelId: string,
    private readonly solution: string,
    private readonly container: HTMLElement,
  ) {}

  get position(): number {
    return this.cursor;
  }

  get length(): number {
    return this.solution.length;
  }

  async open(): Promise<void> {
    await this.seek(0);
  }

  async next(): Promise<void> {
    if (this.cursor >= this.solution.length) return;
    if (this.session === null) return;
    const frame = await this.api.sendAction(
      this.session,
      this.solution[this.cursor],
    );
    this.cursor += 1;
    this.frame = frame;
    this.render();
  }

  async back(): Promise<void> {
    if (this.cursor === 0) return;
    await this.seek(this.cursor - 1);
  }

  async seek(position: number): Promise<void> {
    if (this.session !== null) {
      await this.api.endSession(this.session);
      this.session = null;
    }
    const opened = await this.api.newSession(this.levelset, this.levelId);
    this.session = opened.session;
    let frame: Frame = opened;
    for (let i = 0; i < position; i += 1) {
      frame = await this.api.sendAction(this.session, this.solution[i]);
    }
    this.cursor = position;
    this.frame = frame;
    this.render();
  }

  private render(): void {
    if (this.frame === null) return;
    this.container.replaceChildren();
    const header = document.createElement('div');
    header.className = 'replay-header';
    header.textContent =
      `${this.levelId} — frame ${this.cursor}/${this.solution.length} ` +
      `(tick ${this.frame.tick}, ${this.frame.outcome})`;
    this.container.appendChild(header);
    const view = renderGrid(this.frame.ascii, this.frame.rules);
    view.classList.add('replay-frame');
    view.dataset.outcome = this.frame.outcome;
    this.container.appendChild(view);
    if (this.frame.outcome !== 'ongoing') {
      const overlay = document.createElement('div');
      overlay.className = `outcome-overlay ${this.frame.outcome}`;
      overlay.textContent = this.frame.outcome.toUpperCase();
      this.container.appendChild(overlay);
    }
  }
}
