// Wire types of the game service (the UI computes no logic of its own).

export type FormulaJson = Record<string, unknown>;
export type TermJson = Record<string, unknown>;

export interface AttackJson {
  target: FormulaJson;
  kind: string;
  term?: TermJson;
}

export interface MoveJson {
  type: "attack" | "defend";
  attack?: AttackJson;
  formula?: FormulaJson;
  witness?: TermJson;
  index?: number;
}

export interface LegalMove {
  id: string;
  rule: string; // opening | OA | OD | OC
  description: string;
  needs_term: boolean;
  move?: MoveJson;
}

export interface HistoryEntry {
  mover: "opponent" | "engine";
  move: MoveJson;
  state: Record<string, unknown>;
}

export interface GameSnapshot {
  id: string;
  variant: "e" | "d" | "s";
  formula: string;
  status: "open" | "proponent_won";
  state: Record<string, unknown>;
  engine_pending: MoveJson | null;
  history: HistoryEntry[];
  legal_moves: LegalMove[];
}

export interface MoveResponse extends GameSnapshot {
  reply: {
    opponent: MoveJson;
    engine: MoveJson;
    state: Record<string, unknown>;
    status: string;
  };
}

export interface ApiErrorBody {
  error: { code: string; message: string; rule?: string };
}

// Display names for the attack moves, keyed by the wire kind.
export const ATTACK_NAMES: Record<string, string> = {
  impl: "AImplAdmit",
  conj_l: "ALeft",
  conj_r: "ARight",
  disj: "AOr",
  bot: "ABot",
  all: "ATerm",
  ex: "AEx",
};

export function moveRuleName(move: MoveJson): string {
  return move.type === "defend" ? "PD" : "PA";
}

export function attackName(move: MoveJson): string | null {
  if (move.type !== "attack" || !move.attack) return null;
  return ATTACK_NAMES[move.attack.kind] ?? move.attack.kind;
}
