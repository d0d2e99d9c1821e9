"""JSON (de)serialisation for every file format the CLI reads or writes.

Values are strings (``"3/2"``, ``"4"``, ``"inf"``); subsets are sorted index
lists; output is canonical (sorted keys) so equal inputs give equal bytes.
"""
from __future__ import annotations

import json
from typing import Any

from .bgmc import BGMCInstance, EnumerationResult, OptimumClass
from .classify import ClassReport, Verdict
from .errors import InputError
from .ext import fmt, to_ext
from .graphs import WeightedGraph, mask_of, members
from .relations import WeightedRelation
from .setfunctions import GeneratorSetFunction, SetFunction, TableSetFunction
from .vcsp import Constraint, Language, Mode, SolveResult, VCSPInstance


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n"


def load(path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _value(text):
    try:
        return to_ext(text if isinstance(text, str) else int(text) if isinstance(text, int) else text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad value {text!r}: {exc}") from None


def _need(obj: dict, key: str, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"missing field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise InputError(f"field {key!r} has the wrong type")
    return val


def subset_list(mask: int) -> list[int]:
    return members(mask)


# graphs and set functions

def graph_to_json(g: WeightedGraph) -> dict:
    return {"n": g.n, "edges": [[u, v, fmt(w)] for (u, v), w in g.edges.items()]}


def graph_from_json(obj: dict) -> WeightedGraph:
    n = _need(obj, "n", int)
    edges = []
    for e in _need(obj, "edges", list):
        if not isinstance(e, list) or len(e) != 3:
            raise InputError(f"edge {e!r} is not [u, v, weight]")
        edges.append((int(e[0]), int(e[1]), _value(e[2])))
    return WeightedGraph(n, edges)


def _key(mask: int) -> str:
    return ",".join(map(str, members(mask)))


def _parse_key(key: str) -> int:
    key = key.strip()
    if not key:
        return 0
    try:
        return mask_of(int(p) for p in key.split(","))
    except ValueError:
        raise InputError(f"bad subset key {key!r}") from None


def setfn_to_json(f: SetFunction) -> dict:
    if isinstance(f, GeneratorSetFunction):
        return {"n": f.n, "kind": "generator", "terms": [[members(m), fmt(c)] for m, c in f.terms]}
    vals = f.values()
    return {"n": f.n, "kind": "table", "entries": {_key(m): fmt(v) for m, v in enumerate(vals) if v != 0}}


def setfn_from_json(obj: dict) -> SetFunction:
    n = _need(obj, "n", int)
    kind = obj.get("kind", "table")
    if kind == "table":
        entries = obj.get("entries", {})
        if not isinstance(entries, dict):
            raise InputError("table entries must be an object")
        return TableSetFunction(n, {_parse_key(k): _value(v) for k, v in entries.items()})
    if kind == "generator":
        terms = obj.get("terms", obj.get("entries", []))
        out = []
        for t in terms:
            if not isinstance(t, list) or len(t) != 2:
                raise InputError(f"generator term {t!r} is not [[indices], coeff]")
            out.append(([int(i) for i in t[0]], _value(t[1])))
        return GeneratorSetFunction(n, out)
    raise InputError(f"unknown set function kind {kind!r}")


def bgmc_to_json(h: BGMCInstance) -> dict:
    return {"graph": graph_to_json(h.graph), "set_function": setfn_to_json(h.f), "q": h.q, "p": h.p}


def bgmc_from_json(obj: dict, check: bool = True) -> BGMCInstance:
    g = graph_from_json(_need(obj, "graph", dict))
    f = setfn_from_json(_need(obj, "set_function", dict))
    return BGMCInstance(g, f, _need(obj, "q", int), _need(obj, "p", int), check=check)


def enumeration_to_json(res: EnumerationResult) -> dict:
    return {"lambda": fmt(res.lam), "solutions": [members(m) for m in res.solutions]}


def optimum_class_to_json(cls: OptimumClass) -> dict:
    out = {"class": cls.kind}
    if cls.kind == OptimumClass.ZERO:
        out["solution"] = members(cls.solution)
    return out


# relations, languages, instances

def relation_to_json(rel: WeightedRelation) -> dict:
    return {"arity": rel.arity, "values": [fmt(v) for v in rel.values]}


def relation_from_json(obj: dict, domain_size: int) -> WeightedRelation:
    return WeightedRelation(_need(obj, "arity", int), domain_size, [_value(v) for v in _need(obj, "values", list)])


def language_to_json(lang: Language) -> dict:
    out = {
        "domain_size": lang.domain_size,
        "relations": {name: relation_to_json(rel) for name, rel in lang.items()},
    }
    if lang.provenance:
        out["provenance"] = {
            name: {"source": src, "pinned": list(pinned)} for name, (src, pinned) in lang.provenance.items()
        }
    return out


def language_from_json(obj: dict) -> Language:
    d = _need(obj, "domain_size", int)
    rels = _need(obj, "relations", dict)
    prov = {}
    for name, p in obj.get("provenance", {}).items():
        prov[name] = (_need(p, "source", str), tuple(int(i) for i in _need(p, "pinned", list)))
    return Language(d, {name: relation_from_json(r, d) for name, r in rels.items()}, provenance=prov)


def mode_to_json(mode: Mode) -> dict:
    out = {"kind": mode.kind}
    if mode.kind == "lower_bounded":
        out["bounds"] = list(mode.bounds)
    return out


def mode_from_json(obj) -> Mode:
    if obj is None:
        return Mode.plain()
    kind = _need(obj, "kind", str).replace("-", "_")
    if kind == "lower_bounded":
        return Mode.lower_bounded(_need(obj, "bounds", list))
    return Mode(kind)


def instance_to_json(inst: VCSPInstance) -> dict:
    out = language_to_json(inst.language)
    out["variables"] = list(inst.variables)
    out["constraints"] = [
        {"weight": fmt(c.weight), "relation": c.relation, "scope": list(c.scope)} for c in inst.constraints
    ]
    out["mode"] = mode_to_json(inst.mode)
    return out


def instance_from_json(obj: dict, language: Language | None = None) -> VCSPInstance:
    if language is None:
        language = language_from_json(obj)
    variables = _need(obj, "variables", list)
    cons = []
    for c in _need(obj, "constraints", list):
        cons.append(Constraint(_value(_need(c, "weight")), _need(c, "relation", str), tuple(_need(c, "scope", list))))
    return VCSPInstance([str(v) for v in variables], language, cons, mode_from_json(obj.get("mode")))


# results

def _witness(w):
    if isinstance(w, tuple):
        return [_witness(x) for x in w]
    return w


def report_to_json(rep: ClassReport) -> dict:
    out = {"class": rep.cls, "alpha": fmt(rep.alpha), "witness": _witness(rep.witness), "reason": rep.reason}
    if rep.relation is not None:
        out["relation"] = rep.relation
    return out


def verdict_to_json(v: Verdict) -> dict:
    return {"verdict": v.verdict, "reason": v.reason}


def solve_to_json(status: str, value, assignment, enumeration=None) -> dict:
    out = {"status": status, "value": fmt(value), "assignment": list(assignment) if assignment is not None else None}
    if enumeration is not None:
        out["enumeration"] = [list(a) for a in enumeration]
    return out


def solve_result_to_json(res: SolveResult, enumerate_all: bool = False) -> dict:
    return solve_to_json(res.status, res.value, res.assignment, res.assignments if enumerate_all else None)
