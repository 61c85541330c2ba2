import pytest
import json
import sys
import os
sys.path.append(os.path.join(os.path.dirname(__file__), '..', 'src'))

from artranslate import classify_component, explore_component
from modrep import simple_module
from quiver_export import FORMAT_VERSION, fragment_to_dict, to_dot, to_json
from rankvariety import principal_module, rank_point


@pytest.fixture(scope="module")
def k_fragment(alg22):
    frag = explore_component(simple_module(alg22), radius=1, seed=2)
    return fragment_to_dict(frag, classify_component(frag))


class TestFragmentDict:

    def test_fields(self, k_fragment, alg22):
        assert k_fragment["version"] == FORMAT_VERSION
        assert k_fragment["algebra_hash"] == alg22.digest()
        assert k_fragment["radius"] == 1
        assert k_fragment["vertices"][0]["dim"] == 1
        assert k_fragment["vertices"][0]["distance"] == 0
        assert "evidence" in k_fragment

    def test_sequences_and_translates(self, k_fragment):
        ends = [s["end"] for s in k_fragment["sequences"]]
        assert 0 in ends
        assert all(len(pair) == 2 for pair in k_fragment["tau"])

    def test_json_is_stable(self, k_fragment):
        text = to_json(k_fragment)
        assert text.endswith("\n")
        assert json.loads(text) == k_fragment
        assert to_json(json.loads(text)) == text


class TestDot:

    def test_structure(self, k_fragment):
        dot = to_dot(k_fragment)
        assert dot.startswith("digraph fragment {")
        assert '"v0" [label="d=1 id=1:' in dot
        assert "style=dashed" in dot

    def test_cached_copy_renders_identically(self, k_fragment):
        assert to_dot(json.loads(to_json(k_fragment))) == to_dot(k_fragment)

    def test_unknown_valuation(self):
        data = {"vertices": [{"id": 0, "dim": 1, "key": "1:abc", "periodic": False, "frontier": False},
                             {"id": 1, "dim": 3, "key": "3:def", "periodic": False, "frontier": True}],
                "projective_attachments": [[1, 1]],
                "arrows": [{"source": 1, "target": 0, "a": 2, "b": None}],
                "tau": [[0, 0]]}
        dot = to_dot(data)
        assert '[label="(2,?)"]' in dot
        assert '"P0" [label="A", shape=box]' in dot
        assert "color=gray" not in dot

    def test_periodic_vertices_are_marked(self, alg22):
        M = principal_module(alg22, rank_point(alg22, [1, 2]))
        dot = to_dot(fragment_to_dict(explore_component(M, radius=1, seed=2)))
        assert ' P"' in dot
