import random
import sys
from pathlib import Path

import pytest

from amdsl.parser import parse_system
from amdsl.printer import print_system

sys.path.insert(0, str(Path(__file__).parent))
from modelgen import random_model

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def test_empty_system():
    model, _ = parse_system("system S {}")
    assert print_system(model) == "system S {\n}\n"


def test_roundtrip_is_stable():
    text = 'system S { space q : JointAngles(7) @arm "angles" }'
    model, _ = parse_system(text)
    printed = print_system(model)
    reparsed, diags = parse_system(printed)
    assert diags == []
    assert reparsed == model
    assert print_system(reparsed) == printed


def test_declaration_order_preserved():
    model, _ = parse_system("system S { space b : Scalar(1) space a : Scalar(1) }")
    printed = print_system(model)
    assert printed.index("space b") < printed.index("space a")


def test_string_escaping_roundtrip():
    model, _ = parse_system('system S { space q : Scalar(1) "a \\"quoted\\" \\\\ tail" }')
    reparsed, diags = parse_system(print_system(model))
    assert diags == []
    assert reparsed.spaces[0].description == 'a "quoted" \\ tail'


def test_two_space_indentation():
    text = "system S { adaptive module M { out u } }"
    printed = print_system(parse_system(text)[0])
    assert "\n  adaptive module M {\n" in printed
    assert "\n    out u\n" in printed


@pytest.mark.parametrize("name", ["balance_mix", "gait_sequence", "paddling", "reaching"])
def test_corpus_roundtrip(name):
    text = (CORPUS / f"{name}.am").read_text(encoding="utf-8")
    model, diags = parse_system(text)
    assert model is not None and diags == []
    reparsed, rediags = parse_system(print_system(model))
    assert rediags == []
    assert reparsed == model


@pytest.mark.parametrize("seed", range(6))
def test_generated_models_roundtrip(seed):
    model = random_model(random.Random(seed), seed)
    printed = print_system(model)
    reparsed, diags = parse_system(printed)
    assert diags == [], [d.render() for d in diags]
    assert reparsed == model
    assert print_system(reparsed) == printed
