// Thin client over the documented HTTP endpoints. Every call goes through
// request(), so tests can assert that nothing else is ever touched.

import type { GameSnapshot, MoveResponse } from "./types";

export class ServiceError extends Error {
  code: string;
  rule?: string;
  status: number;

  constructor(status: number, code: string, message: string, rule?: string) {
    super(message);
    this.status = status;
    this.code = code;
    this.rule = rule;
  }
}

export class GameClient {
  base: string;
  log: { method: string; path: string }[] = [];

  constructor(base = "") {
    this.base = base.replace(/\/$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    this.log.push({ method, path });
    const resp = await fetch(this.base + path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const data = await resp.json();
    if (!resp.ok) {
      const err = (data as { error?: { code?: string; message?: string; rule?: string } }).error ?? {};
      throw new ServiceError(resp.status, err.code ?? "error", err.message ?? "request failed", err.rule);
    }
    return data as T;
  }

  health(): Promise<{ ok: boolean }> {
    return this.request("GET", "/healthz");
  }

  createGame(variant: string, formula: string, termMenu: string[] = []): Promise<GameSnapshot> {
    return this.request("POST", "/games", { variant, formula, term_menu: termMenu });
  }

  getGame(id: string): Promise<GameSnapshot> {
    return this.request("GET", `/games/${id}`);
  }

  postMove(id: string, moveId: string, term?: string): Promise<MoveResponse> {
    const body: { move_id: string; term?: string } = { move_id: moveId };
    if (term !== undefined && term !== "") body.term = term;
    return this.request("POST", `/games/${id}/moves`, body);
  }

  parse(formula: string): Promise<{ formula: unknown; pretty: string }> {
    return this.request("POST", "/parse", { formula });
  }

  normalize(deriv: unknown): Promise<{ deriv: unknown }> {
    return this.request("POST", "/normalize", { deriv });
  }

  countermodel(formula: string, opts: { mode?: string; max_worlds?: number; max_domain?: number } = {}): Promise<Record<string, unknown>> {
    return this.request("POST", "/countermodel", { formula, ...opts });
  }
}
