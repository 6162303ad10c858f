"""Canonical JSON codecs shared by the CLI and the HTTP service.

One wire schema per value kind; encoding is deterministic (sorted keys,
compact separators) so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json

from .syntax import (All, App, Atom, Bot, Conj, Disj, Ex, Formula, Impl,
                     Term, Var, _Bot)


class DecodeError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def term_to_json(t: Term):
    if isinstance(t, Var):
        return {"var": t.index}
    return {"app": [t.func, [term_to_json(a) for a in t.args]]}


def term_from_json(data) -> Term:
    if not isinstance(data, dict) or len(data) != 1:
        raise DecodeError(f"bad term: {data!r}")
    if "var" in data:
        if not isinstance(data["var"], int) or data["var"] < 0:
            raise DecodeError(f"bad variable index: {data['var']!r}")
        return Var(data["var"])
    if "app" in data:
        sym, args = data["app"]
        return App(sym, tuple(term_from_json(a) for a in args))
    raise DecodeError(f"bad term: {data!r}")


def formula_to_json(phi: Formula):
    if isinstance(phi, _Bot):
        return {"bot": True}
    if isinstance(phi, Atom):
        return {"atom": [phi.pred, [term_to_json(a) for a in phi.args]]}
    if isinstance(phi, Impl):
        return {"impl": [formula_to_json(phi.lhs), formula_to_json(phi.rhs)]}
    if isinstance(phi, Conj):
        return {"conj": [formula_to_json(phi.lhs), formula_to_json(phi.rhs)]}
    if isinstance(phi, Disj):
        return {"disj": [formula_to_json(phi.lhs), formula_to_json(phi.rhs)]}
    if isinstance(phi, All):
        return {"all": formula_to_json(phi.body)}
    if isinstance(phi, Ex):
        return {"ex": formula_to_json(phi.body)}
    raise DecodeError(f"not a formula: {phi!r}")


def formula_from_json(data) -> Formula:
    if not isinstance(data, dict) or len(data) != 1:
        raise DecodeError(f"bad formula: {data!r}")
    if "bot" in data:
        return Bot
    if "atom" in data:
        sym, args = data["atom"]
        return Atom(sym, tuple(term_from_json(a) for a in args))
    for key, ctor in (("impl", Impl), ("conj", Conj), ("disj", Disj)):
        if key in data:
            lhs, rhs = data[key]
            return ctor(formula_from_json(lhs), formula_from_json(rhs))
    if "all" in data:
        return All(formula_from_json(data["all"]))
    if "ex" in data:
        return Ex(formula_from_json(data["ex"]))
    raise DecodeError(f"bad formula: {data!r}")


# ---------------------------------------------------------------------------
# derivations


def _judgment_to_json(j):
    from .kernel import FiniteSet, LjdSeq, LjSeq, LjtFocus, LjtSeq, NdSeq
    if isinstance(j, NdSeq):
        return {"kind": "nd", "ctx": [formula_to_json(p) for p in j.ctx],
                "goal": formula_to_json(j.goal)}
    if isinstance(j, LjtSeq):
        return {"kind": "ljt", "ctx": [formula_to_json(p) for p in j.ctx],
                "goal": formula_to_json(j.goal)}
    if isinstance(j, LjtFocus):
        return {"kind": "ljt_focus", "ctx": [formula_to_json(p) for p in j.ctx],
                "focus": formula_to_json(j.focus), "goal": formula_to_json(j.goal)}
    if isinstance(j, LjSeq):
        return {"kind": "lj", "ctx": [formula_to_json(p) for p in j.ctx],
                "goal": formula_to_json(j.goal)}
    if isinstance(j, LjdSeq):
        return {"kind": "ljd", "ctx": [formula_to_json(p) for p in j.ctx],
                "goals": defset_to_json(j.goals)}
    raise DecodeError(f"unknown judgment {j!r}")


def _judgment_from_json(data):
    from .kernel import LjdSeq, LjSeq, LjtFocus, LjtSeq, NdSeq
    kind = data.get("kind")
    ctx = tuple(formula_from_json(p) for p in data.get("ctx", []))
    if kind == "nd":
        return NdSeq(ctx, formula_from_json(data["goal"]))
    if kind == "ljt":
        return LjtSeq(ctx, formula_from_json(data["goal"]))
    if kind == "ljt_focus":
        return LjtFocus(ctx, formula_from_json(data["focus"]),
                        formula_from_json(data["goal"]))
    if kind == "lj":
        return LjSeq(ctx, formula_from_json(data["goal"]))
    if kind == "ljd":
        return LjdSeq(ctx, defset_from_json(data["goals"]))
    raise DecodeError(f"bad judgment: {data!r}")


def defset_to_json(s):
    from .kernel import FiniteSet
    if isinstance(s, FiniteSet):
        return {"set": [formula_to_json(p) for p in s.formulas]}
    return {"ex": formula_to_json(s.body)}


def defset_from_json(data):
    from .kernel import FiniteSet, TermIndexed
    if "set" in data:
        return FiniteSet(tuple(formula_from_json(p) for p in data["set"]))
    if "ex" in data:
        return TermIndexed(formula_from_json(data["ex"]))
    raise DecodeError(f"bad defense set: {data!r}")


def attack_to_json(a):
    out = {"target": formula_to_json(a.target), "kind": a.kind}
    if a.term is not None:
        out["term"] = term_to_json(a.term)
    return out


def attack_from_json(data):
    from .kernel import Attack
    return Attack(formula_from_json(data["target"]), data["kind"],
                  term_from_json(data["term"]) if "term" in data else None)


def _data_to_json(d):
    from .kernel import Attack
    from .syntax import Formula, Term
    rule, calc, data = d.rule, d.calc, d.data
    if not data:
        return {}
    if calc == "ljd" and rule == "R":
        phi, wit = data
        out = {"defense": formula_to_json(phi)}
        if wit is not None:
            out["witness"] = term_to_json(wit)
        return out
    if calc == "ljd" and rule == "L":
        return {"attack": attack_to_json(data[0])}
    if calc == "lj" and rule == "P":
        return {"index": data[0]}
    (x,) = data
    if isinstance(x, Term):
        return {"term": term_to_json(x)}
    if isinstance(x, Formula):
        return {"formula": formula_to_json(x)}
    raise DecodeError(f"cannot encode rule data {data!r}")


def _data_from_json(calc, rule, data):
    if calc == "ljd" and rule == "R":
        return (formula_from_json(data["defense"]),
                term_from_json(data["witness"]) if "witness" in data else None)
    if calc == "ljd" and rule == "L":
        return (attack_from_json(data["attack"]),)
    if not data:
        return ()
    if "index" in data:
        return (data["index"],)
    if "term" in data:
        return (term_from_json(data["term"]),)
    if "formula" in data:
        return (formula_from_json(data["formula"]),)
    raise DecodeError(f"cannot decode rule data {data!r}")


def deriv_to_json(d):
    return {"calc": d.calc, "rule": d.rule, "data": _data_to_json(d),
            "premises": [deriv_to_json(p) for p in d.premises],
            "end": _judgment_to_json(d.end)}


def deriv_from_json(data):
    from .kernel import Deriv
    calc, rule = data["calc"], data["rule"]
    return Deriv(calc, rule,
                 tuple(deriv_from_json(p) for p in data.get("premises", [])),
                 _data_from_json(calc, rule, data.get("data", {})),
                 _judgment_from_json(data["end"]))


# ---------------------------------------------------------------------------
# models: tables are flat lists in lexicographic argument order


def _table_to_list(table, domain, arity):
    import itertools
    return [table[k] for k in itertools.product(range(domain), repeat=arity)]


def _table_from_list(values, domain, arity):
    import itertools
    keys = list(itertools.product(range(domain), repeat=arity))
    if len(values) != len(keys):
        raise DecodeError("table length does not match domain^arity")
    return dict(zip(keys, values))


def model_to_json(m):
    import itertools
    out = {"domain": m.domain, "bot": m.bot, "funcs": {}, "preds": {}}
    for name, table in sorted(m.funcs.items()):
        arity = len(next(iter(table))) if table else 0
        out["funcs"][name] = {"arity": arity,
                              "table": _table_to_list(table, m.domain, arity)}
    for name, table in sorted(m.preds.items()):
        arity = len(next(iter(table))) if table else 0
        out["preds"][name] = {"arity": arity,
                              "table": _table_to_list(table, m.domain, arity)}
    return out


def model_from_json(data):
    from .models import FiniteModel
    domain = data["domain"]
    funcs = {name: _table_from_list(spec["table"], domain, spec["arity"])
             for name, spec in data.get("funcs", {}).items()}
    preds = {name: _table_from_list([bool(v) for v in spec["table"]],
                                    domain, spec["arity"])
             for name, spec in data.get("preds", {}).items()}
    return FiniteModel(domain, funcs, preds, bot=bool(data.get("bot", False)))


def kripke_to_json(k):
    out = {"worlds": k.worlds, "order": [list(row) for row in k.order],
           "domain": k.domain, "funcs": {}, "per_world_preds": {},
           "bot_table": list(k.bot_table)}
    for name, table in sorted(k.funcs.items()):
        arity = len(next(iter(table))) if table else 0
        out["funcs"][name] = {"arity": arity,
                              "table": _table_to_list(table, k.domain, arity)}
    for name, tables in sorted(k.preds.items()):
        arity = len(next(iter(tables[0]))) if tables[0] else 0
        out["per_world_preds"][name] = {
            "arity": arity,
            "tables": [_table_to_list(t, k.domain, arity) for t in tables]}
    return out


def kripke_from_json(data):
    from .models import FiniteKripke
    domain = data["domain"]
    funcs = {name: _table_from_list(spec["table"], domain, spec["arity"])
             for name, spec in data.get("funcs", {}).items()}
    preds = {}
    for name, spec in data.get("per_world_preds", {}).items():
        preds[name] = [_table_from_list([bool(v) for v in t], domain, spec["arity"])
                       for t in spec["tables"]]
    return FiniteKripke(data["worlds"],
                        tuple(tuple(bool(v) for v in row) for row in data["order"]),
                        domain, funcs, preds,
                        tuple(bool(v) for v in data.get("bot_table",
                                                        [False] * data["worlds"])))


def environment_to_json(rho):
    return {"prefix": list(rho.prefix), "default": rho.default}


def environment_from_json(data):
    from .models import Environment
    return Environment(tuple(data.get("prefix", [])), data.get("default", 0))


# ---------------------------------------------------------------------------
# algebras


def algebra_to_json(h):
    return {"size": h.size, "le": [list(row) for row in h.le], "bot": h.bot,
            "meet": [list(row) for row in h.meet],
            "join": [list(row) for row in h.join],
            "impl": [list(row) for row in h.impl]}


def algebra_from_json(data):
    from .heyting import FiniteHeyting
    return FiniteHeyting(
        data["size"],
        tuple(tuple(bool(v) for v in row) for row in data["le"]),
        data["bot"],
        tuple(tuple(row) for row in data["meet"]),
        tuple(tuple(row) for row in data["join"]),
        tuple(tuple(row) for row in data["impl"]))


def interp_to_json(i):
    from .surface import print_formula
    from .syntax import Atom
    return {"default": i.default,
            "support": [{"atom": print_formula(Atom(pred, args)), "value": v}
                        for (pred, args), v in i.support]}


def interp_from_json(data):
    from .heyting import AtomInterp
    from .surface import parse
    support = []
    for row in data.get("support", []):
        atom = parse(row["atom"])
        support.append(((atom.pred, atom.args), row["value"]))
    return AtomInterp(tuple(support), data.get("default", 0))


# ---------------------------------------------------------------------------
# game moves and states


def pmove_to_json(m):
    from .dialogues import PAttack, PDefend
    if isinstance(m, PDefend):
        out = {"type": "defend", "formula": formula_to_json(m.formula)}
        if m.witness is not None:
            out["witness"] = term_to_json(m.witness)
        return out
    return {"type": "attack", "attack": attack_to_json(m.attack)}


def omove_to_json(m):
    from .dialogues import OAttack, ODefend
    if isinstance(m, ODefend):
        out = {"type": "defend", "formula": formula_to_json(m.formula)}
        if m.witness is not None:
            out["witness"] = term_to_json(m.witness)
        return out
    return {"type": "attack", "attack": attack_to_json(m.attack),
            "index": m.index}


def omove_from_json(data):
    from .dialogues import OAttack, ODefend
    if data["type"] == "defend":
        return ODefend(formula_from_json(data["formula"]),
                       term_from_json(data["witness"]) if "witness" in data else None)
    return OAttack(attack_from_json(data["attack"]), data.get("index", 0))


def gamestate_to_json(state):
    from .dialogues import DState, EState, SState
    if state is None:
        return {"variant": "opening"}
    if isinstance(state, EState):
        return {"variant": "e",
                "admissions": [formula_to_json(p) for p in state.admissions],
                "challenge": attack_to_json(state.challenge)}
    if isinstance(state, DState):
        return {"variant": "d",
                "p_admissions": [formula_to_json(p) for p in state.p_admissions],
                "p_challenges": [attack_to_json(a) for a in state.p_challenges],
                "o_admissions": [formula_to_json(p) for p in state.o_admissions],
                "o_challenges": [attack_to_json(a) for a in state.o_challenges]}
    return {"variant": "s",
            "p_admissions": [formula_to_json(p) for p in state.p_admissions],
            "o_admissions": [formula_to_json(p) for p in state.o_admissions],
            "deferrals": [[attack_to_json(a), attack_to_json(c)]
                          for a, c in state.deferrals],
            "challenge": attack_to_json(state.challenge)
            if state.challenge is not None else None}
