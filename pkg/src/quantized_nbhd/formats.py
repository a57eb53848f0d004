"""JSON map files and report serialization.

Map file::

    {"domain": [[id, size], ...], "codomain": [...], "kind": "explicit", "table": [...]}
    {"domain": ..., "codomain": ..., "kind": "rule", "rule": {...}}

Explicit tables list codomain word indices in domain enumeration order; an
optional ``"ring": {"cells": N, "layers": L}`` marks both spaces as rings.
A rule is either a zoo descriptor ``{"zoo": name, "params": {...}, "ring": N}``
or a lookup-table rule ``{"ring": N, "layers": L, "window": [lo, hi],
"table": [...], "inverse": {"window": ..., "table": ...}}``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import (
    BlockMap,
    CellSpace,
    ExplicitMap,
    NbhdError,
    RingMap,
    make_cellspace,
    make_explicit_map,
    ring_space,
    table_rule,
)

EXPLICIT_LIMIT = 4096


class ParseError(NbhdError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.field = field
        self.line = line


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _space_json(space: CellSpace) -> list:
    return [[s, int(a)] for s, a in zip(space.sites, space.sizes)]


def map_to_json(f: BlockMap, explicit_limit: int = EXPLICIT_LIMIT) -> dict:
    """Serialize a map; ring maps become explicit tables when small enough."""
    out = {"domain": _space_json(f.domain), "codomain": _space_json(f.codomain)}
    if isinstance(f, RingMap) and f.domain.total_dim > explicit_limit:
        out["kind"] = "rule"
        out["rule"] = _rule_json(f)
        return out
    out["kind"] = "explicit"
    out["table"] = [int(x) for x in f.table()]
    if f.domain.ring is not None and f.domain == f.codomain:
        out["ring"] = {"cells": f.domain.ring, "layers": f.domain.layers}
    return out


def _rule_json(f: RingMap) -> dict:
    if f.origin is not None:
        return {"zoo": f.origin["zoo"], "params": dict(f.origin["params"]), "ring": f.ring}
    rule = f.rule
    if "table" not in rule.params:
        raise ParseError(f"rule {rule.name} has no serializable description", "rule")
    desc = {"ring": f.ring, "layers": rule.layers, "window": list(rule.window), "table": rule.params["table"]}
    inv = rule.inverse_rule
    if inv is not None and "table" in inv.params:
        desc["inverse"] = {"window": list(inv.window), "table": inv.params["table"]}
    return desc


def _field(obj: dict, name: str, path: str):
    if not isinstance(obj, dict) or name not in obj:
        raise ParseError("missing field", f"{path}{name}")
    return obj[name]


def _parse_space(spec, path: str) -> CellSpace:
    if not isinstance(spec, list):
        raise ParseError("expected a list of [id, size] pairs", path)
    pairs = []
    for i, item in enumerate(spec):
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], int)):
            raise ParseError("expected [id, size]", f"{path}[{i}]")
        site = item[0]
        if isinstance(site, list):
            site = tuple(site)
        pairs.append((site, item[1]))
    try:
        return make_cellspace(pairs)
    except NbhdError as e:
        raise ParseError(str(e), path) from e
    except ValueError as e:
        raise ParseError(str(e), path) from e


def parse_map(source) -> BlockMap:
    """Build a map from JSON text, a parsed dict or a path."""
    if isinstance(source, Path):
        source = source.read_text()
    if isinstance(source, str):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, line=e.lineno) from e
    else:
        obj = source
    kind = _field(obj, "kind", "")
    domain = _parse_space(_field(obj, "domain", ""), "domain")
    codomain = _parse_space(_field(obj, "codomain", ""), "codomain")
    if kind == "explicit":
        table = _field(obj, "table", "")
        if not isinstance(table, list) or not all(isinstance(x, int) for x in table):
            raise ParseError("table must be a list of word indices", "table")
        if "ring" in obj:
            ring = obj["ring"]
            cells, layers = _field(ring, "cells", "ring."), _field(ring, "layers", "ring.")
            rs = ring_space(cells, layers)
            if _space_json(rs) != _space_json(domain) or _space_json(rs) != _space_json(codomain):
                raise ParseError("ring does not match the listed spaces", "ring")
            domain = codomain = rs
        try:
            return make_explicit_map(domain, codomain, table)
        except NbhdError as e:
            raise ParseError(str(e), "table") from e
    if kind == "rule":
        f = _parse_rule(_field(obj, "rule", ""))
        if _space_json(f.domain) != _space_json(domain) or _space_json(f.codomain) != _space_json(codomain):
            raise ParseError("rule does not act on the listed spaces", "rule")
        return f
    raise ParseError(f"unknown kind {kind!r}", "kind")


def _parse_rule(desc) -> RingMap:
    from . import zoo

    ring = _field(desc, "ring", "rule.")
    if "zoo" in desc:
        params = desc.get("params", {})
        try:
            return zoo.make(desc["zoo"], ring, **params)
        except (NbhdError, ValueError, TypeError) as e:
            raise ParseError(str(e), "rule.zoo") from e
    layers = _field(desc, "layers", "rule.")
    window = tuple(_field(desc, "window", "rule."))
    try:
        rule = table_rule(layers, window, _field(desc, "table", "rule."))
        if "inverse" in desc:
            inv = desc["inverse"]
            rule = rule.with_inverse(
                table_rule(layers, tuple(_field(inv, "window", "rule.inverse.")), _field(inv, "table", "rule.inverse."))
            )
        return RingMap(ring, rule)
    except (NbhdError, ValueError) as e:
        raise ParseError(str(e), "rule") from e


def load_map(path) -> BlockMap:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e
    return parse_map(text)


def scheme_table(scheme, title: str) -> str:
    """Plain-text table of a scheme: site, members, arc."""
    from .arcs import format_arc

    lines = [title]
    target = scheme.target
    for s in scheme.source.sites:
        members = sorted(scheme.mapping[s], key=target.position)
        arc = scheme.offsets(s) if target.ring is not None else None
        shown = f"  arc {format_arc(arc)}" if target.ring is not None else ""
        lines.append(f"  {s!s:>6}: {members}{shown}")
    return "\n".join(lines)
