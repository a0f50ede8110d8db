// Payload shapes mirrored from the HTTP API. The UI never computes game
// logic; everything below arrives from the server as-is.

export interface Frame {
  ascii: string;
  rules: string[];
  outcome: 'ongoing' | 'win' | 'lose';
  tick: number;
}

export interface PlaySession extends Frame {
  session: string;
}

export interface LevelResult {
  id: string;
  solved: boolean;
  solution: string;
  length: number;
  elapsed_millis: number;
  nodes_expanded: number;
  score: number;
}

export interface AgentReport {
  agent: string;
  levelset: string;
  submitted_at: string;
  error: string | null;
  results: LevelResult[];
  solve_rate: number;
  avg_score: number;
}

export interface LevelInfo {
  id: string;
  name: string;
  author: string;
  ascii: string;
  solution: string;
}

export interface LevelSetDoc {
  name: string;
  levels: LevelInfo[];
}
