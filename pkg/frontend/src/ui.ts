// DOM rendering for the dialogue playground. The UI is a pure view over
// server snapshots: legality, state and rule names all come from the
// service payloads.

import { GameClient, ServiceError } from "./api";
import type { GameSnapshot, HistoryEntry, LegalMove, MoveJson } from "./types";
import { attackName, moveRuleName } from "./types";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, cls?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function describeMove(move: MoveJson): string {
  const rule = moveRuleName(move);
  if (move.type === "defend") {
    return `${rule}: admit ${pretty(move.formula)}`;
  }
  const name = attackName(move);
  const target = move.attack ? pretty(move.attack.target) : "?";
  return `${rule} (${name}): attack ${target}`;
}

// formulas arrive both pretty-printed (snapshot.formula) and structural;
// panels show a compact structural rendering
export function pretty(formula: unknown): string {
  if (formula === null || formula === undefined) return "?";
  const f = formula as Record<string, unknown>;
  if ("bot" in f) return "false";
  if ("atom" in f) {
    const [name, args] = f.atom as [string, unknown[]];
    return args.length ? `${name}(${args.map(pretty).join(", ")})` : name;
  }
  if ("var" in f) return `x${f.var}`;
  if ("app" in f) {
    const [name, args] = f.app as [string, unknown[]];
    return args.length ? `${name}(${args.map(pretty).join(", ")})` : name;
  }
  for (const [key, sym] of [["impl", "->"], ["conj", "/\\"], ["disj", "\\/"]] as const) {
    if (key in f) {
      const [lhs, rhs] = f[key] as [unknown, unknown];
      return `(${pretty(lhs)} ${sym} ${pretty(rhs)})`;
    }
  }
  if ("all" in f) return `(forall. ${pretty(f.all)})`;
  if ("ex" in f) return `(exists. ${pretty(f.ex)})`;
  return JSON.stringify(f);
}

function statePanel(snapshot: GameSnapshot): HTMLElement {
  const panel = el("div", "state-panel");
  const state = snapshot.state as Record<string, unknown>;
  const variant = (state.variant as string) ?? snapshot.variant;
  if (variant === "opening") {
    panel.appendChild(el("p", "hint", "the opponent opens by attacking the claim"));
    return panel;
  }
  const list = (title: string, items: unknown[] | undefined, render: (x: unknown) => string) => {
    const box = el("div", "state-list");
    box.appendChild(el("h4", undefined, title));
    const ul = el("ul");
    (items ?? []).forEach((item) => ul.appendChild(el("li", undefined, render(item))));
    if (!items || items.length === 0) ul.appendChild(el("li", "empty", "—"));
    box.appendChild(ul);
    panel.appendChild(box);
  };
  const att = (a: unknown) => {
    const x = a as { target: unknown; kind: string };
    return `${attackName({ type: "attack", attack: x as never }) ?? x.kind} on ${pretty(x.target)}`;
  };
  if (variant === "e") {
    list("opponent admissions (A_o)", state.admissions as unknown[], pretty);
    list("standing challenge (c)", state.challenge ? [state.challenge] : [], att);
  } else if (variant === "d") {
    list("proponent admissions (A_p)", state.p_admissions as unknown[], pretty);
    list("challenges against proponent (C_p)", state.p_challenges as unknown[], att);
    list("opponent admissions (A_o)", state.o_admissions as unknown[], pretty);
    list("challenges against opponent (C_o)", state.o_challenges as unknown[], att);
  } else {
    list("proponent admissions (A_p)", state.p_admissions as unknown[], pretty);
    list("opponent admissions (A_o)", state.o_admissions as unknown[], pretty);
    list("deferral stack (D)", state.deferrals as unknown[],
      (pair) => (pair as unknown[]).map(att).join(" ⇢ "));
    list("current challenge", state.challenge ? [state.challenge] : [], att);
  }
  return panel;
}

export class GameView {
  client: GameClient;
  root: HTMLElement;
  snapshot: GameSnapshot | null = null;
  message = "";

  constructor(client: GameClient, root: HTMLElement) {
    this.client = client;
    this.root = root;
  }

  async create(variant: string, formula: string): Promise<void> {
    this.snapshot = await this.client.createGame(variant, formula);
    this.message = "";
    this.render();
  }

  async refresh(): Promise<void> {
    if (!this.snapshot) return;
    this.snapshot = await this.client.getGame(this.snapshot.id);
    this.render();
  }

  async submit(moveId: string, term?: string): Promise<void> {
    if (!this.snapshot) return;
    try {
      const out = await this.client.postMove(this.snapshot.id, moveId, term);
      this.snapshot = out;
      this.message = "";
    } catch (err) {
      if (err instanceof ServiceError) {
        // show the cited rule verbatim; state is untouched
        this.message = err.rule ? `${err.message} [rule ${err.rule}]` : err.message;
      } else {
        this.message = `network error: ${String(err)} (state unchanged)`;
      }
    }
    this.render();
  }

  exportHistory(): string {
    return JSON.stringify(this.snapshot?.history ?? []);
  }

  importHistory(blob: string): HistoryEntry[] {
    const entries = JSON.parse(blob) as HistoryEntry[];
    this.renderTimeline(entries, true);
    return entries;
  }

  render(): void {
    const snap = this.snapshot;
    this.root.textContent = "";
    if (!snap) return;
    const head = el("div", "head");
    head.appendChild(el("h2", undefined, `${snap.variant.toUpperCase()}-dialogue on ${snap.formula}`));
    const banner = el("div", `banner ${snap.status}`,
      snap.status === "proponent_won" ? "the proponent wins — you have no moves left" : "your move");
    banner.setAttribute("role", "status");
    head.appendChild(banner);
    this.root.appendChild(head);
    if (this.message) {
      this.root.appendChild(el("div", "error", this.message));
    }
    this.root.appendChild(statePanel(snap));
    if (snap.engine_pending) {
      this.root.appendChild(el("div", "engine-move",
        `engine: ${describeMove(snap.engine_pending)}`));
    }
    this.root.appendChild(this.moveList(snap.legal_moves));
    this.renderTimeline(snap.history, false);
    const exp = el("button", "export", "export history");
    exp.id = "export";
    this.root.appendChild(exp);
  }

  moveList(moves: LegalMove[]): HTMLElement {
    const box = el("div", "moves");
    box.appendChild(el("h3", undefined, "your legal moves"));
    const ul = el("ul", "move-list");
    for (const m of moves) {
      const li = el("li");
      const button = el("button", "move", `${m.rule}: ${m.description}`);
      button.id = `move-${m.id}`;
      button.dataset.moveId = m.id;
      let input: HTMLInputElement | null = null;
      if (m.needs_term) {
        input = el("input", "term-input") as HTMLInputElement;
        input.placeholder = "term, e.g. f(c)";
        input.id = `term-${m.id}`;
        li.appendChild(input);
      }
      button.addEventListener("click", () => {
        void this.submit(m.id, input?.value);
      });
      li.appendChild(button);
      ul.appendChild(li);
    }
    if (!moves.length) ul.appendChild(el("li", "empty", "none"));
    box.appendChild(ul);
    return box;
  }

  renderTimeline(entries: HistoryEntry[], imported: boolean): void {
    const old = this.root.querySelector(imported ? "#timeline-import" : "#timeline");
    if (old) old.remove();
    const box = el("div", "timeline");
    box.id = imported ? "timeline-import" : "timeline";
    box.appendChild(el("h3", undefined, imported ? "imported history" : "history"));
    const ol = el("ol");
    for (const entry of entries) {
      ol.appendChild(el("li", entry.mover,
        `${entry.mover}: ${describeMove(entry.move)}`));
    }
    box.appendChild(ol);
    this.root.appendChild(box);
  }
}
