import type { Api } from './api.js';
import { renderGrid } from './grid.js';
import type { Frame } from './types.js';

export const KEY_ACTIONS: Record<string, string> = {
  ArrowUp: 'U',
  ArrowDown: 'D',
  ArrowLeft: 'L',
  ArrowRight: 'R',
  w: 'U',
  s: 'D',
  a: 'L',
  d: 'R',
  ' ': 'W',
};

export class LivePlay {
  private session: string | null = null;
  private frame: Frame | null = null;
  private inFlight = false;
  private readonly onKey = (event: KeyboardEvent) => {
    const action = KEY_ACTIONS[event.key];
    if (action === undefined) return;
    event.preventDefault();
    void this.act(action);
  };

  constructor(
    private readonly api: Api,
    private readonly container: HTMLElement,
  ) {}

  async start(levelset: string, levelId: string): Promise<void> {
    await this.stop();
    const opened = await this.api.newSession(levelset, levelId);
    this.session = opened.session;
    this.frame = opened;
    this.render();
  }

  async act(action: string): Promise<void> {
    // one request in flight per session; extra keypresses are dropped
    if (this.session === null || this.inFlight) return;
    if (this.frame !== null && this.frame.outcome !== 'ongoing') return;
    this.inFlight = true;
    try {
      this.frame = await this.api.sendAction(this.session, action);
    } finally {
      this.inFlight = false;
    }
    this.render();
  }

  attach(target: EventTarget): void {
    target.addEventListener('keydown', this.onKey as EventListener);
  }

  detach(target: EventTarget): void {
    target.removeEventListener('keydown', this.onKey as EventListener);
  }

  async stop(): Promise<void> {
    if (this.session !== null) {
      await this.api.endSession(this.session);
      this.session = null;
      this.frame = null;
    }
  }

  private render(): void {
    if (this.frame === null) return;
    this.container.replaceChildren();
    const header = document.createElement('div');
    header.className = 'play-header';
    header.textContent = `tick ${this.frame.tick}`;
    this.container.appendChild(header);
    const view = renderGrid(this.frame.ascii, this.frame.rules);
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
