// Thin-client conformance: a scripted session playing "false -> P" to
// victory issues only documented endpoints, renders the PD/PA/ABot rule
// names from server data, and an exported history re-imports to an
// identical timeline. The fixtures are genuine service responses.

import { afterEach, beforeEach, describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { GameClient, ServiceError } from "../src/api";
import { GameView, describeMove } from "../src/ui";
import { attackName, moveRuleName } from "../src/types";
import type { GameSnapshot, MoveResponse } from "../src/types";

const here = dirname(fileURLToPath(import.meta.url));
const fixtures = JSON.parse(readFileSync(join(here, "fixtures.json"), "utf8")) as {
  create: GameSnapshot;
  move: MoveResponse;
  get: GameSnapshot;
  move_id: string;
};

const DOCUMENTED = [
  /^GET \/healthz$/,
  /^POST \/parse$/,
  /^POST \/check$/,
  /^POST \/normalize$/,
  /^POST \/eval\/(tarski|kripke|heyting)$/,
  /^POST \/countermodel$/,
  /^POST \/games$/,
  /^GET \/games\/[^/]+$/,
  /^POST \/games\/[^/]+\/moves$/,
];

let requests: { method: string; path: string }[] = [];

function fakeServer(): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = typeof input === "string" ? input : input.toString();
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    requests.push({ method, path });
    const respond = (status: number, body: unknown) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "Content-Type": "application/json" },
      });
    if (method === "POST" && path === "/games") {
      return respond(200, fixtures.create);
    }
    if (method === "POST" && path === `/games/${fixtures.create.id}/moves`) {
      const body = JSON.parse(String(init?.body ?? "{}")) as { move_id: string };
      if (body.move_id !== fixtures.move_id) {
        return respond(422, {
          error: { code: "illegal-move", message: "no such move", rule: "legal-moves" },
        });
      }
      return respond(200, fixtures.move);
    }
    if (method === "GET" && path === `/games/${fixtures.create.id}`) {
      return respond(200, fixtures.move);
    }
    return respond(404, { error: { code: "no-route", message: `no route ${method} ${path}` } });
  }) as typeof fetch;
}

beforeEach(() => {
  requests = [];
  globalThis.fetch = fakeServer();
  document.body.innerHTML = '<div id="game"></div>';
});

afterEach(() => {
  document.body.innerHTML = "";
});

describe("scripted false -> P session", () => {
  it("plays to victory over documented endpoints only", async () => {
    const client = new GameClient("");
    const view = new GameView(client, document.getElementById("game")!);
    await view.create("e", "false -> P");

    // the single legal opening is rendered from server data
    const buttons = document.querySelectorAll("button.move");
    expect(buttons.length).toBe(1);
    const opening = buttons[0] as HTMLButtonElement;
    expect(opening.textContent).toContain("opening");

    await view.submit(opening.dataset.moveId!);
    expect(view.snapshot?.status).toBe("proponent_won");

    const banner = document.querySelector(".banner")!;
    expect(banner.textContent).toContain("proponent wins");

    // every issued request is a documented endpoint
    for (const req of requests) {
      const line = `${req.method} ${req.path}`;
      expect(DOCUMENTED.some((rx) => rx.test(line)), line).toBe(true);
    }
  });

  it("renders PD/PA/ABot rule names from the server payloads", async () => {
    const client = new GameClient("");
    const view = new GameView(client, document.getElementById("game")!);
    await view.create("e", "false -> P");
    await view.submit(fixtures.move_id);

    const timeline = document.getElementById("timeline")!;
    const text = timeline.textContent ?? "";
    // the engine's reply is an attack on the admitted falsity
    expect(text).toContain("PA");
    expect(text).toContain("ABot");
    // rule-name mapping is driven by the wire payload
    const engineMove = fixtures.move.reply.engine;
    expect(moveRuleName(engineMove)).toBe("PA");
    expect(attackName(engineMove)).toBe("ABot");
    expect(describeMove(engineMove)).toContain("PA (ABot)");
  });

  it("re-imports an exported history to an identical timeline", async () => {
    const client = new GameClient("");
    const view = new GameView(client, document.getElementById("game")!);
    await view.create("e", "false -> P");
    await view.submit(fixtures.move_id);

    const blob = view.exportHistory();
    const lines = Array.from(document.querySelectorAll("#timeline li"))
      .map((li) => li.textContent);
    view.importHistory(blob);
    const imported = Array.from(document.querySelectorAll("#timeline-import li"))
      .map((li) => li.textContent);
    expect(imported).toEqual(lines);
    expect(JSON.parse(blob)).toEqual(fixtures.move.history);
  });

  it("shows the cited rule on an illegal move and keeps the state", async () => {
    const client = new GameClient("");
    const view = new GameView(client, document.getElementById("game")!);
    await view.create("e", "false -> P");
    const before = JSON.stringify(view.snapshot?.state);
    await view.submit("m99");
    expect(JSON.stringify(view.snapshot?.state)).toBe(before);
    const error = document.querySelector(".error")!;
    expect(error.textContent).toContain("rule legal-moves");
  });

  it("never computes legality client-side: moves render only from legal_moves", async () => {
    const client = new GameClient("");
    const view = new GameView(client, document.getElementById("game")!);
    await view.create("e", "false -> P");
    const rendered = Array.from(document.querySelectorAll("button.move"))
      .map((b) => (b as HTMLButtonElement).dataset.moveId);
    expect(rendered).toEqual(fixtures.create.legal_moves.map((m) => m.id));
  });

  it("keeps every legal move keyboard-reachable (buttons, not divs)", async () => {
    const client = new GameClient("");
    const view = new GameView(client, document.getElementById("game")!);
    await view.create("e", "false -> P");
    for (const m of fixtures.create.legal_moves) {
      const node = document.getElementById(`move-${m.id}`);
      expect(node?.tagName).toBe("BUTTON");
    }
  });

  it("surfaces term-input slots for needs_term moves", async () => {
    // synthesize a snapshot with a needs_term move (shape from the API docs)
    const snap: GameSnapshot = {
      ...fixtures.create,
      legal_moves: [
        { id: "m0", rule: "opening", description: "attack the claim [all] (needs a term)", needs_term: true },
      ],
    };
    globalThis.fetch = (async () =>
      new Response(JSON.stringify(snap), { status: 200 })) as typeof fetch;
    const client = new GameClient("");
    const view = new GameView(client, document.getElementById("game")!);
    await view.create("e", "forall x. P(x) -> P(x)");
    const input = document.getElementById("term-m0");
    expect(input?.tagName).toBe("INPUT");
  });
});

describe("client error mapping", () => {
  it("maps error envelopes to ServiceError", async () => {
    const client = new GameClient("");
    await client.createGame("e", "false -> P");
    await expect(client.postMove(fixtures.create.id, "mX")).rejects.toThrowError(ServiceError);
  });
});
