import { afterEach, describe, expect, it, vi } from 'vitest';

import { Api } from '../src/api.js';
import { ReplayStepper } from '../src/replay.js';
import type { Frame } from '../src/types.js';
import { installMockServer } from './mockserver.js';

const FRAMES: Frame[] = [
  { ascii: 'b__f', rules: ['BABA-IS-YOU', 'FLAG-IS-WIN'], outcome: 'ongoing', tick: 0 },
  { ascii: '_b_f', rules: ['BABA-IS-YOU', 'FLAG-IS-WIN'], outcome: 'ongoing', tick: 1 },
  { ascii: '__bf', rules: ['BABA-IS-YOU', 'FLAG-IS-WIN'], outcome: 'ongoing', tick: 2 },
  { ascii: '___f', rules: ['BABA-IS-YOU', 'FLAG-IS-WIN'], outcome: 'win', tick: 3 },
];

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('ReplayStepper', () => {
  it('shows length+1 frames for a length-3 solution, ending in WIN', async () => {
    installMockServer({ frames: { lvl: FRAMES } });
    const container = document.createElement('div');
    const stepper = new ReplayStepper(new Api(), 'demo', 'lvl', 'RRR', container);
    await stepper.open();

    const seen: string[] = [];
    seen.push(container.querySelector('.replay-header')!.textContent!);
    for (let i = 0; i < 3; i += 1) {
      await stepper.next();
      seen.push(container.querySelector('.replay-header')!.textContent!);
    }
    expect(seen).toHaveLength(4);
    expect(seen[0]).toContain('frame 0/3');
    expect(seen[3]).toContain('frame 3/3');
    expect(seen[3]).toContain('win');
    expect(container.querySelector('.outcome-overlay.win')).not.toBeNull();
    // stepping past the end does nothing
    await stepper.next();
    expect(stepper.position).toBe(3);
  });

  it('an unsolved attempt ends on a non-win frame', async () => {
    const frames = FRAMES.slice(0, 3).map((f) => ({ ...f }));
    installMockServer({ frames: { lvl: frames } });
    const container = document.createElement('div');
    const stepper = new ReplayStepper(new Api(), 'demo', 'lvl', 'RR', container);
    await stepper.open();
    await stepper.next();
    await stepper.next();
    expect(container.querySelector('.replay-header')!.textContent).toContain(
      'ongoing',
    );
    expect(container.querySelector('.outcome-overlay')).toBeNull();
  });

  it('back-step recreates the session and replays the prefix', async () => {
    const server = installMockServer({ frames: { lvl: FRAMES } });
    const container = document.createElement('div');
    const stepper = new ReplayStepper(new Api(), 'demo', 'lvl', 'RRR', container);
    await stepper.open();
    expect(server.sessionsOpened).toBe(1);

    await stepper.next();
    await stepper.next();
    expect(stepper.position).toBe(2);

    await stepper.back();
    expect(stepper.position).toBe(1);
    expect(server.sessionsOpened).toBe(2); // a fresh session, prefix replayed
    expect(container.querySelector('.replay-header')!.textContent).toContain(
      'frame 1/3',
    );
    expect(container.querySelector('.replay-frame')).not.toBeNull();

    // server actions: R,R for the forward steps, then R for the prefix
    expect(server.actionLog.map((e) => e.action)).toEqual(['R', 'R', 'R']);
  });

  it('renders frames purely from server payloads', async () => {
    installMockServer({ frames: { lvl: FRAMES } });
    const container = document.createElement('div');
    const stepper = new ReplayStepper(new Api(), 'demo', 'lvl', 'RRR', container);
    await stepper.open();
    const tiles = container.querySelectorAll('.tile');
    expect(tiles).toHaveLength(4);
    expect(container.querySelectorAll('.rule')).toHaveLength(2);
  });
});
