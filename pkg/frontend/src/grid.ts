// Board rendering: one tile per map cell, straight from the cell codes.
// Pure function of the payload; no game state lives here.

const TILES: Record<string, { glyph: string; cls: string }> = {
  _: { glyph: '', cls: 'empty' },
  b: { glyph: 'b', cls: 'obj obj-baba' },
  w: { glyph: 'w', cls: 'obj obj-wall' },
  f: { glyph: 'f', cls: 'obj obj-flag' },
  r: { glyph: 'r', cls: 'obj obj-rock' },
  a: { glyph: 'a', cls: 'obj obj-water' },
  s: { glyph: 's', cls: 'obj obj-skull' },
  g: { glyph: 'g', cls: 'obj obj-grass' },
  l: { glyph: 'l', cls: 'obj obj-lava' },
  B: { glyph: 'BABA', cls: 'word word-noun' },
  W: { glyph: 'WALL', cls: 'word word-noun' },
  F: { glyph: 'FLAG', cls: 'word word-noun' },
  R: { glyph: 'ROCK', cls: 'word word-noun' },
  A: { glyph: 'WATER', cls: 'word word-noun' },
  S: { glyph: 'SKULL', cls: 'word word-noun' },
  G: { glyph: 'GRASS', cls: 'word word-noun' },
  L: { glyph: 'LAVA', cls: 'word word-noun' },
  '1': { glyph: 'IS', cls: 'word word-is' },
  U: { glyph: 'YOU', cls: 'word word-prop' },
  N: { glyph: 'WIN', cls: 'word word-prop' },
  P: { glyph: 'PUSH', cls: 'word word-prop' },
  T: { glyph: 'STOP', cls: 'word word-prop' },
  M: { glyph: 'MOVE', cls: 'word word-prop' },
  K: { glyph: 'KILL', cls: 'word word-prop' },
  V: { glyph: 'SINK', cls: 'word word-prop' },
  H: { glyph: 'HOT', cls: 'word word-prop' },
  E: { glyph: 'MELT', cls: 'word word-prop' },
};

export function renderGrid(ascii: string, rules: string[]): HTMLElement {
  const container = document.createElement('div');
  container.className = 'board-view';

  const rows = ascii.split('\n');
  const width = rows[0]?.length ?? 0;
  const malformed =
    rows.length === 0 || width === 0 || rows.some((r) => r.length !== width);
  if (malformed) {
    const banner = document.createElement('div');
    banner.className = 'render-error';
    banner.textContent = 'render error: malformed board payload';
    container.appendChild(banner);
    return container;
  }

  const grid = document.createElement('div');
  grid.className = 'grid';
  grid.style.gridTemplateColumns = `repeat(${width}, var(--tile))`;
  for (const row of rows) {
    for (const ch of row) {
      const cell = document.createElement('div');
      const tile = TILES[ch];
      if (tile) {
        cell.className = `tile ${tile.cls}`;
        cell.textContent = tile.glyph;
      } else {
        cell.className = 'tile unknown';
        cell.textContent = ch;
      }
      grid.appendChild(cell);
    }
  }
  container.appendChild(grid);

  const panel = document.createElement('ul');
  panel.className = 'rule-panel';
  for (const rule of rules) {
    const item = document.createElement('li');
    item.className = 'rule';
    item.textContent = rule;
    panel.appendChild(item);
  }
  container.appendChild(panel);
  return container;
}
