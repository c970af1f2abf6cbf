import json
import math
import os
import struct
from pathlib import Path

import pytest

import dendrite

ROOT = Path(os.environ.get("DENDRITE_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def program(name):
    return (ROOT / "programs" / name).read_text()


def test_smooth_fractal_has_510_nodes_and_bound_3():
    tree = dendrite.smooth_fractal()
    assert tree.node_count == 510
    evaluated = tree.evaluate()
    assert len(evaluated.nodes) == 510
    assert dendrite.bound(tree)["radius"] == pytest.approx(3.0)
    far = max(math.hypot(*n["pos"]) for n in evaluated.nodes)
    assert far <= 3.0


def test_backends_agree():
    tree = dendrite.straight_fractal()
    a = tree.evaluate(parallel=True).nodes
    b = tree.evaluate_transform_stack().nodes
    assert [n["id"] for n in a] == [n["id"] for n in b]
    worst = max(abs(x - y) for na, nb in zip(a, b) for x, y in zip(na["pos"], nb["pos"]))
    assert worst < 1e-9


def test_classify_and_compare():
    params = dendrite.FractalParams()
    params.generations = 6
    smooth = dendrite.smooth_fractal(params)
    report = dendrite.classify(smooth)
    assert report["classification"] == "exact_fractal"
    assert report["rho"] == pytest.approx(2 / 3)
    same = dendrite.compare(smooth, smooth, 6)
    assert same["converged"]
    assert max(same["distances"]) < 1e-12


def test_compile_and_format_round_trip():
    src = program("golden_koch_h.ftree")
    once = dendrite.format_program(src)
    assert dendrite.format_program(once) == once
    tree = dendrite.compile(src)
    evaluated = tree.evaluate()
    assert set(evaluated.channels) == {"color", "shade", "width"}
    svg = evaluated.to_svg({"width": "stroke-width", "color": "stroke"})
    assert "<svg" in svg and svg.rstrip().endswith("</svg>")


def test_compile_errors_are_value_errors():
    with pytest.raises(ValueError, match="4:5"):
        dendrite.compile((ROOT / "tests/fixtures/missing_semicolon.ftree").read_text())


def test_json_round_trip():
    evaluated = dendrite.compile(program("hybrid_nary.ftree"), generations=3).evaluate()
    text = evaluated.to_json()
    doc = json.loads(text)
    assert doc["version"] == 1
    back = dendrite.from_json(text)
    assert back.to_json() == text
    with pytest.raises(dendrite.DendriteError):
        dendrite.from_json("{}")


def test_stl_of_3d_tree():
    evaluated = dendrite.compile(program("tree3d.ftree"), generations=2).evaluate()
    blob = evaluated.to_stl(segments=6)
    (count,) = struct.unpack_from("<I", blob, 80)
    assert len(blob) == 84 + 50 * count
    with pytest.raises(dendrite.DendriteError):
        evaluated.to_svg()
    flat = evaluated.project([[1, 0, 0], [0, 1, 0]])
    assert flat.dim == 2


def test_concatenation_operator():
    params = dendrite.FractalParams()
    params.generations = 2
    joined = dendrite.smooth_fractal(params) << dendrite.straight_fractal(params)
    assert joined.node_count == 2 + 4 + 8 + 16
