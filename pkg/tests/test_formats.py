import json

import pytest

from quantized_nbhd.core import RingMap, table_rule
from quantized_nbhd.formats import ParseError, dumps, load_map, map_to_json, parse_map, scheme_table
from quantized_nbhd.nbhd import in_scheme
from quantized_nbhd.qnbhd import quantum_scheme
from quantized_nbhd.zoo import make, toffoli_rule

from conftest import random_map


def test_explicit_round_trip():
    f = random_map(11, (2, 3, 2))
    g = parse_map(dumps(map_to_json(f)))
    assert list(g.table()) == list(f.table())
    assert g.domain == f.domain


def test_small_ring_becomes_explicit_table():
    f = make("jk", 6, k=2)
    obj = map_to_json(f)
    assert obj["kind"] == "explicit" and obj["ring"] == {"cells": 6, "layers": 2}
    g = parse_map(obj)
    assert g.domain.ring == 6
    assert quantum_scheme(g) == quantum_scheme(f)


def test_large_ring_becomes_zoo_descriptor():
    f = make("jt", k=2, l=1)
    obj = map_to_json(f)
    assert obj["kind"] == "rule" and obj["rule"]["zoo"] == "jt"
    g = parse_map(json.loads(dumps(obj)))
    assert in_scheme(g) == in_scheme(f)


def test_table_rule_round_trip():
    t = toffoli_rule()
    rule = table_rule(2, (0, 1), [int(x) for x in RingMap(6, t).rule.apply_letters(
        [[a % 4, a // 4, 0, 0, 0, 0] for a in range(16)])[:, 0]])
    inv = t.inverse_rule
    rule = rule.with_inverse(inv)
    f = RingMap(40, rule)
    obj = map_to_json(f)
    assert obj["kind"] == "rule" and "table" in obj["rule"]
    g = parse_map(obj)
    assert in_scheme(g) == in_scheme(f)


@pytest.mark.parametrize(
    "text,field",
    [
        ('{"kind": "explicit", "domain": [["a", 2]], "codomain": [["a", 2]]}', "table"),
        ('{"kind": "explicit", "domain": [["a", 2]], "codomain": [["a", 2]], "table": [0, 0]}', "table"),
        ('{"kind": "explicit", "domain": [["a"]], "codomain": [["a", 2]], "table": [0, 1]}', "domain[0]"),
        ('{"kind": "bogus", "domain": [["a", 2]], "codomain": [["a", 2]]}', "kind"),
        ('{"kind": "rule", "domain": [], "codomain": [], "rule": {"zoo": "jk", "params": {"k": 2}, "ring": 3}}', "rule.zoo"),
    ],
)
def test_parse_errors_name_the_field(text, field):
    with pytest.raises(ParseError) as e:
        parse_map(text)
    assert e.value.field == field


def test_syntax_error_reports_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "kind": \n}')
    with pytest.raises(ParseError) as e:
        load_map(p)
    assert e.value.line == 3


def test_scheme_table_lists_arcs():
    text = scheme_table(in_scheme(make("jk", 6, k=2)), "in")
    assert "arc [0,1]" in text.splitlines()[1]
