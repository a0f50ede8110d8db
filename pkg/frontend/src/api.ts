import type { AgentReport, Frame, LevelSetDoc, PlaySession } from './types.js';

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      if (body && body.detail) detail = `${body.detail}`;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new Error(detail);
  }
  return (await response.json()) as T;
}

export class Api {
  constructor(private readonly base: string = '') {}

  listAgents(): Promise<string[]> {
    return fetch(`${this.base}/api/agents`).then((r) => asJson<string[]>(r));
  }

  listLevelSets(): Promise<string[]> {
    return fetch(`${this.base}/api/levelsets`).then((r) => asJson<string[]>(r));
  }

  levelSet(name: string): Promise<LevelSetDoc> {
    return fetch(`${this.base}/api/levelsets/${encodeURIComponent(name)}`).then(
      (r) => asJson<LevelSetDoc>(r),
    );
  }

  evaluate(agent: string, levelset: string): Promise<AgentReport> {
    return fetch(`${this.base}/api/evaluate`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ agent, levelset }),
    }).then((r) => asJson<AgentReport>(r));
  }

  newSession(levelset: string, levelId: string): Promise<PlaySession> {
    return fetch(`${this.base}/api/play/new`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ levelset, level_id: levelId }),
    }).then((r) => asJson<PlaySession>(r));
  }

  sendAction(session: string, action: string): Promise<Frame> {
    return fetch(`${this.base}/api/play/${encodeURIComponent(session)}/action`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ action }),
    }).then((r) => asJson<Frame>(r));
  }

  endSession(session: string): Promise<void> {
    return fetch(`${this.base}/api/play/${encodeURIComponent(session)}`, {
      method: 'DELETE',
    }).then(() => undefined);
  }
}
