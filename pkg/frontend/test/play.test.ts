import { afterEach, describe, expect, it, vi } from 'vitest';

import { Api } from '../src/api.js';
import { KEY_ACTIONS, LivePlay } from '../src/play.js';
import type { Frame } from '../src/types.js';
import { installMockServer } from './mockserver.js';

function frame(tick: number, outcome: Frame['outcome'] = 'ongoing'): Frame {
  return { ascii: 'B1U\nb__', rules: ['BABA-IS-YOU'], outcome, tick };
}

afterEach(() => {
  vi.unstubAllGlobals();
});

async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}

describe('LivePlay', () => {
  it('maps all five inputs to the right action posts', async () => {
    const server = installMockServer({
      frames: { lvl: [frame(0), ...Array.from({ length: 9 }, (_, i) => frame(i + 1))] },
    });
    const container = document.createElement('div');
    const play = new LivePlay(new Api(), container);
    await play.start('demo', 'lvl');
    play.attach(document);

    for (const key of ['ArrowUp', 'ArrowDown', 'ArrowLeft', 'ArrowRight', ' ']) {
      document.dispatchEvent(new KeyboardEvent('keydown', { key }));
      await flush();
    }
    expect(server.actionLog.map((e) => e.action)).toEqual(['U', 'D', 'L', 'R', 'W']);

    for (const key of ['w', 's', 'a', 'd']) {
      document.dispatchEvent(new KeyboardEvent('keydown', { key }));
      await flush();
    }
    expect(server.actionLog.map((e) => e.action)).toEqual([
      'U', 'D', 'L', 'R', 'W', 'U', 'D', 'L', 'R',
    ]);
    play.detach(document);
  });

  it('keyboard table covers exactly the five actions', () => {
    expect(new Set(Object.values(KEY_ACTIONS))).toEqual(
      new Set(['U', 'D', 'L', 'R', 'W']),
    );
  });

  it('ignores unmapped keys', async () => {
    const server = installMockServer({ frames: { lvl: [frame(0), frame(1)] } });
    const container = document.createElement('div');
    const play = new LivePlay(new Api(), container);
    await play.start('demo', 'lvl');
    play.attach(document);
    document.dispatchEvent(new KeyboardEvent('keydown', { key: 'x' }));
    await flush();
    expect(server.actionLog).toHaveLength(0);
    play.detach(document);
  });

  it('renders frames from the server and a WIN overlay on the last one', async () => {
    installMockServer({ frames: { lvl: [frame(0), frame(1, 'win')] } });
    const container = document.createElement('div');
    const play = new LivePlay(new Api(), container);
    await play.start('demo', 'lvl');
    expect(container.querySelector('.play-header')?.textContent).toBe('tick 0');
    await play.act('R');
    expect(container.querySelector('.play-header')?.textContent).toBe('tick 1');
    expect(container.querySelector('.outcome-overlay.win')?.textContent).toBe('WIN');
  });

  it('renders a LOSE overlay on a losing frame', async () => {
    installMockServer({ frames: { lvl: [frame(0), frame(1, 'lose')] } });
    const container = document.createElement('div');
    const play = new LivePlay(new Api(), container);
    await play.start('demo', 'lvl');
    await play.act('D');
    expect(container.querySelector('.outcome-overlay.lose')?.textContent).toBe('LOSE');
  });

  it('stops posting once the session is terminal', async () => {
    const server = installMockServer({ frames: { lvl: [frame(0), frame(1, 'win')] } });
    const container = document.createElement('div');
    const play = new LivePlay(new Api(), container);
    await play.start('demo', 'lvl');
    await play.act('R');
    await play.act('R');
    await play.act('R');
    expect(server.actionLog).toHaveLength(1);
  });
});
