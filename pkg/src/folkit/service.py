"""HTTP JSON API: stateless logic endpoints plus hosted game sessions.

Endpoints (all JSON):
    POST /parse          {"formula": str}            -> {"formula": ..., "pretty": str}
    POST /check          {"deriv": ...}              -> {"end": ...}
    POST /normalize      {"deriv": ...}              -> {"deriv": ...}
    POST /eval/tarski    {"model", "env"?, "formula"} -> {"value": bool}
    POST /eval/kripke    {"model", "world", "env"?, "formula"} -> {"value": bool}
    POST /eval/heyting   {"algebra", "interp", "formula"} -> {"value": int}
    POST /countermodel   {"formula", "mode"?, "max_domain"?, "max_worlds"?}
    POST /games          {"variant", "formula", "proof"?, "term_menu"?}
    GET  /games/{id}
    POST /games/{id}/moves  {"move_id", "term"?}
    GET  /healthz

Errors are {"error": {"code", "message", "rule"?}} with 400/404/409/422.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import jsonio
from .dialogues import IllegalMove, StrategyIncomplete
from .heyting import eval_formula
from .kernel import CheckError, check
from .models import (Environment, countermodel_search_kripke,
                     countermodel_search_tarski, ksat, sat)
from .nbe import NotFragment, normalize
from .sessions import (SessionError, SessionStore, engine_state, new_game,
                       opponent_move)
from .surface import ParseError, parse, parse_term, print_formula
from .syntax import MalformedSyntaxError


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, rule: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.rule = rule

    def body(self):
        err = {"code": self.code, "message": self.message}
        if self.rule:
            err["rule"] = self.rule
        return {"error": err}


def _formula_of(data, key="formula"):
    raw = data.get(key)
    if raw is None:
        raise ApiError(400, "missing", f"missing field {key!r}")
    try:
        if isinstance(raw, str):
            return parse(raw)
        return jsonio.formula_from_json(raw)
    except (ParseError, jsonio.DecodeError, MalformedSyntaxError) as err:
        raise ApiError(400, "bad-formula", str(err))


class Api:
    """Route table shared by the HTTP handler and in-process tests."""

    def __init__(self, store: SessionStore):
        self.store = store

    def handle(self, method: str, path: str, data) -> tuple[int, dict]:
        parts = [p for p in path.split("/") if p]
        try:
            if method == "GET" and parts == ["healthz"]:
                return 200, {"ok": True}
            if method == "POST" and parts == ["parse"]:
                phi = _formula_of(data)
                return 200, {"formula": jsonio.formula_to_json(phi),
                             "pretty": print_formula(phi)}
            if method == "POST" and parts == ["check"]:
                return self._check(data)
            if method == "POST" and parts == ["normalize"]:
                return self._normalize(data)
            if method == "POST" and parts[:1] == ["eval"] and len(parts) == 2:
                return self._eval(parts[1], data)
            if method == "POST" and parts == ["countermodel"]:
                return self._countermodel(data)
            if method == "POST" and parts == ["games"]:
                return self._new_game(data)
            if method == "GET" and len(parts) == 2 and parts[0] == "games":
                return 200, engine_state(self._session(parts[1]))
            if method == "POST" and len(parts) == 3 and parts[0] == "games" \
                    and parts[2] == "moves":
                return self._move(parts[1], data)
            raise ApiError(404, "no-route", f"no route {method} /{path.strip('/')}")
        except ApiError as err:
            return err.status, err.body()

    def _session(self, sid: str):
        try:
            return self.store.get(sid)
        except KeyError:
            raise ApiError(404, "unknown-session", f"no session {sid!r}")

    def _check(self, data):
        try:
            d = jsonio.deriv_from_json(data["deriv"])
            end = check(d)
        except KeyError:
            raise ApiError(400, "missing", "missing field 'deriv'")
        except (jsonio.DecodeError, TypeError) as err:
            raise ApiError(400, "bad-derivation", str(err))
        except CheckError as err:
            raise ApiError(422, "check-failed", str(err))
        return 200, {"end": jsonio._judgment_to_json(end)}

    def _normalize(self, data):
        try:
            d = jsonio.deriv_from_json(data["deriv"])
            out = normalize(d)
        except KeyError:
            raise ApiError(400, "missing", "missing field 'deriv'")
        except (jsonio.DecodeError, TypeError) as err:
            raise ApiError(400, "bad-derivation", str(err))
        except (CheckError, NotFragment) as err:
            raise ApiError(422, "not-normalizable", str(err))
        return 200, {"deriv": jsonio.deriv_to_json(out)}

    def _eval(self, kind, data):
        phi = _formula_of(data)
        try:
            if kind == "tarski":
                m = jsonio.model_from_json(data["model"])
                rho = jsonio.environment_from_json(data.get("env", {}))
                return 200, {"value": sat(m, rho, phi)}
            if kind == "kripke":
                k = jsonio.kripke_from_json(data["model"])
                rho = jsonio.environment_from_json(data.get("env", {}))
                return 200, {"value": ksat(k, data.get("world", 0), rho, phi)}
            if kind == "heyting":
                h = jsonio.algebra_from_json(data["algebra"])
                interp = jsonio.interp_from_json(data.get("interp", {}))
                return 200, {"value": eval_formula(h, interp, phi)}
        except ApiError:
            raise
        except KeyError as err:
            raise ApiError(400, "missing", f"missing field {err}")
        except Exception as err:
            raise ApiError(400, "bad-input", str(err))
        raise ApiError(404, "no-route", f"unknown evaluation kind {kind!r}")

    def _countermodel(self, data):
        phi = _formula_of(data)
        mode = data.get("mode", "kripke")
        if mode == "tarski":
            got = countermodel_search_tarski(phi, data.get("max_domain", 3))
            if got is None:
                return 200, {"found": False}
            m, rho = got
            return 200, {"found": True, "model": jsonio.model_to_json(m),
                         "env": jsonio.environment_to_json(rho)}
        got = countermodel_search_kripke(phi, data.get("max_worlds", 2),
                                         data.get("max_domain", 1))
        if got is None:
            return 200, {"found": False}
        k, rho, w = got
        return 200, {"found": True, "model": jsonio.kripke_to_json(k),
                     "env": jsonio.environment_to_json(rho), "world": w}

    def _new_game(self, data):
        variant = data.get("variant", "e")
        phi = _formula_of(data)
        proof = None
        if data.get("proof") is not None:
            try:
                proof = jsonio.deriv_from_json(data["proof"])
            except (jsonio.DecodeError, TypeError) as err:
                raise ApiError(400, "bad-derivation", str(err))
        menu = ()
        for raw in data.get("term_menu", []):
            try:
                menu += (parse_term(raw),)
            except ParseError as err:
                raise ApiError(400, "bad-term", str(err))
        try:
            session = new_game(variant, phi, proof, menu)
        except (SessionError, CheckError, StrategyIncomplete, ValueError) as err:
            raise ApiError(422, "cannot-host", str(err))
        self.store.add(session)
        return 200, engine_state(session)

    def _move(self, sid, data):
        session = self._session(sid)
        with self.store.lock(sid):
            if session.status != "open":
                raise ApiError(409, "finished", "game is already finished")
            try:
                result = opponent_move(session, data.get("move_id", ""),
                                       data.get("term"))
            except IllegalMove as err:
                raise ApiError(422, "illegal-move", str(err), rule=err.rule)
            except SessionError as err:
                raise ApiError(409, "finished", str(err))
            self.store.persist(session)
        out = engine_state(session)
        out["reply"] = result
        return 200, out


_CONTENT_TYPES = {".html": "text/html", ".js": "text/javascript",
                  ".css": "text/css", ".json": "application/json"}


def make_server(addr: str, store: SessionStore | None = None,
                cors_origin: str | None = None,
                ui_dir: str | None = None) -> ThreadingHTTPServer:
    host, _, port = addr.partition(":")
    api = Api(store or SessionStore())

    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):
            pass

        def _try_static(self) -> bool:
            import os
            if not ui_dir:
                return False
            rel = self.path.split("?")[0].lstrip("/") or "index.html"
            path = os.path.normpath(os.path.join(ui_dir, rel))
            if not path.startswith(os.path.normpath(ui_dir)) \
                    or not os.path.isfile(path):
                return False
            with open(path, "rb") as fh:
                blob = fh.read()
            ext = os.path.splitext(path)[1]
            self.send_response(200)
            self.send_header("Content-Type",
                             _CONTENT_TYPES.get(ext, "application/octet-stream"))
            self.send_header("Content-Length", str(len(blob)))
            self.end_headers()
            self.wfile.write(blob)
            return True

        def _respond(self, status: int, payload: dict):
            blob = jsonio.dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(blob)))
            if cors_origin:
                self.send_header("Access-Control-Allow-Origin", cors_origin)
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.send_header("Access-Control-Allow-Methods",
                                 "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(blob)

        def do_OPTIONS(self):
            self._respond(200, {})

        def do_GET(self):
            status, payload = api.handle("GET", self.path, {})
            if status == 404 and self._try_static():
                return
            self._respond(status, payload)

        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            raw = self.rfile.read(length) if length else b"{}"
            try:
                data = json.loads(raw or b"{}")
            except json.JSONDecodeError as err:
                self._respond(400, {"error": {"code": "bad-json",
                                              "message": str(err)}})
                return
            status, payload = api.handle("POST", self.path, data)
            self._respond(status, payload)

    server = ThreadingHTTPServer((host or "127.0.0.1", int(port or 0)), Handler)
    server.api = api
    return server


def serve(addr: str, persist_dir: str | None = None, ttl: float | None = None,
          cors_origin: str | None = None, ui_dir: str | None = None) -> None:
    store = SessionStore(persist_dir, ttl)
    server = make_server(addr, store, cors_origin, ui_dir)
    host, port = server.server_address[:2]
    print(f"folkit service listening on http://{host}:{port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
