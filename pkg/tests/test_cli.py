"""
End-to-end tests for the spreadhom command line.
"""
import json

import pytest

from src.api.models import ModuleSpec
from src.cli import EXIT_INVALID, EXIT_OK, EXIT_TRUNCATED, main
from src.core.functors import contract
from src.core.poset import AlignedSubgrid
from src.utils.serialization import build_module

TWO_SOURCE = {"poset": {"kind": "grid", "sizes": [3, 3]}, "spread": {"A": [[0, 1], [1, 0]], "B": [[2, 1]]}}
SIMPLE_00 = {"poset": {"kind": "grid", "sizes": [2, 2]}, "spread": {"support": [[0, 0]]}}


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def error_of(out):
    return json.loads(out)["error"]


class TestHom:
    def test_upsets(self, capsys, write_json):
        a = write_json("a.json", {"A": [[1, 1]], "B": "inf"})
        b = write_json("b.json", {"A": [[0, 0]]})
        code, out = run(capsys, "hom", "--spread1", a, "--spread2", b, "--poset", "2x2")
        assert code == EXIT_OK
        assert json.loads(out) == {"dim": 1, "witnesses": ["<{(1,1)},inf<"]}

    def test_disconnected_support(self, capsys, write_json):
        a = write_json("a.json", {"support": [[0, 1], [1, 0]]})
        b = write_json("b.json", {"A": [[0, 0]]})
        code, out = run(capsys, "hom", "--spread1", a, "--spread2", b, "--poset", "2x2")
        assert code == EXIT_INVALID
        assert error_of(out) == {
            "type": "NotASpreadError",
            "message": "support has 2 connected components",
            "exit_code": 2,
        }

    def test_poset_file(self, capsys, write_json):
        poset = write_json("poset.json", {"kind": "finite", "elements": ["a", "b"], "leq": [[0, 1]]})
        a = write_json("a.json", {"A": ["b"], "B": "inf"})
        b = write_json("b.json", {"A": ["a"], "B": "inf"})
        code, out = run(capsys, "hom", "--spread1", a, "--spread2", b, "--poset", poset)
        assert code == EXIT_OK
        assert json.loads(out)["dim"] == 1

    def test_finite_chain_uses_transitive_leq(self, capsys, write_json):
        poset = write_json("poset.json", {"kind": "finite", "elements": [0, 1, 2], "leq": [[0, 1], [1, 2]]})
        a = write_json("a.json", {"A": [2], "B": "inf"})
        b = write_json("b.json", {"A": [0], "B": "inf"})
        code, out = run(capsys, "hom", "--spread1", a, "--spread2", b, "--poset", poset)
        assert code == EXIT_OK
        assert json.loads(out)["dim"] == 1

    def test_unknown_field(self, capsys, write_json):
        poset = write_json("poset.json", {"kind": "finite", "elements": [0, 1], "relations": [[0, 1]]})
        a = write_json("a.json", {"A": [1], "B": "inf"})
        code, out = run(capsys, "hom", "--spread1", a, "--spread2", a, "--poset", poset)
        assert code == EXIT_INVALID
        assert error_of(out)["type"] == "ValidationError"

    def test_leq_index_out_of_range(self, capsys, write_json):
        poset = write_json("poset.json", {"kind": "finite", "elements": [0, 1], "leq": [[0, 3]]})
        a = write_json("a.json", {"A": [1], "B": "inf"})
        code, out = run(capsys, "hom", "--spread1", a, "--spread2", a, "--poset", poset)
        assert code == EXIT_INVALID
        assert error_of(out) == {"type": "UnknownPointError", "message": "unknown point 3", "exit_code": 2}

    def test_missing_file(self, capsys, tmp_path):
        code, out = run(capsys, "hom", "--spread1", str(tmp_path / "nope.json"),
                        "--spread2", str(tmp_path / "nope.json"))
        assert code == EXIT_INVALID
        assert error_of(out)["type"] == "InvalidInputError"


class TestResolve:
    def test_simple_over_projectives(self, capsys, write_json):
        module = write_json("m.json", SIMPLE_00)
        code, out = run(capsys, "resolve", "--family", "projectives", "--module", module)
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["length"] == 2
        assert report["plus"] == ["<{(0,0)},inf<", "<{(1,1)},inf<"]
        assert report["minus"] == ["<{(0,1)},inf<", "<{(1,0)},inf<"]

    def test_truncated(self, capsys, write_json):
        module = write_json("m.json", SIMPLE_00)
        code, out = run(capsys, "resolve", "--family", "projectives", "--module", module, "--max-len", "1")
        assert code == EXIT_TRUNCATED
        assert error_of(out)["type"] == "TruncatedError"
        assert error_of(out)["exit_code"] == 3

    def test_custom_family(self, capsys, write_json):
        module = write_json("m.json", SIMPLE_00)
        spreads = write_json("s.json", [{"support": [[0, 0], [0, 1]]}])
        code, out = run(capsys, "resolve", "--family", "custom", "--module", module, "--spreads", spreads)
        assert code == EXIT_OK
        assert json.loads(out)["family_size"] == 5

    def test_bad_prime(self, capsys, write_json):
        module = write_json("m.json", SIMPLE_00)
        code, out = run(capsys, "--prime", "4", "resolve", "--family", "projectives", "--module", module)
        assert code == EXIT_INVALID
        assert error_of(out)["type"] == "ValidationError"

    def test_output_file_and_determinism(self, capsys, write_json, tmp_path):
        module = write_json("m.json", SIMPLE_00)
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for target in (first, second):
            code, out = run(capsys, "--output", str(target), "resolve", "--family", "hooks", "--module", module)
            assert code == EXIT_OK
            assert out == ""
        assert first.read_bytes() == second.read_bytes()


class TestQuiver:
    def test_dot(self, capsys):
        code, out = run(capsys, "quiver", "--family", "projectives", "--poset", "2x2")
        assert code == EXIT_OK
        assert out.startswith('digraph "projectives" {')
        assert out.count("->") == 4

    def test_json(self, capsys):
        code, out = run(capsys, "quiver", "--family", "hooks", "--poset", "2x2", "--format", "json")
        assert code == EXIT_OK
        report = json.loads(out)
        assert len(report["vertices"]) == 5
        assert report["mismatches"] == []

    def test_upsets_need_a_top(self, capsys, write_json):
        poset = write_json("v.json", {"kind": "finite", "elements": ["a", "b", "c"], "leq": [[0, 1], [0, 2]]})
        code, out = run(capsys, "quiver", "--family", "upsets", "--poset", poset)
        assert code == EXIT_INVALID
        assert error_of(out)["type"] == "FamilyError"


class TestOtherCommands:
    def test_koszul(self, capsys):
        code, out = run(capsys, "koszul", "--n", "3", "--family", "single_source_spreads")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["ranks"] == [1, 3, 3, 1]
        assert report["coefficients"][1] == [[1, 1, 0], [-1, 0, 1], [0, -1, -1]]
        assert report["relative_exact"] == {"single_source_spreads": True}
        assert report["witness_length"] == 3

    def test_barcode(self, capsys, write_json):
        module = write_json("m.json", {
            "poset": {"sizes": [3]},
            "dims": {"(0)": 1, "(1)": 1},
            "maps": {"(0)->(1)": [[1]]},
        })
        code, out = run(capsys, "invariant", "--which", "barcode", "--module", module)
        assert code == EXIT_OK
        assert json.loads(out)["entries"] == [{"bar": "<{(0)},{(2)}<", "multiplicity": 1}]

    def test_non_functorial_module(self, capsys, write_json):
        module = write_json("m.json", {
            "poset": {"sizes": [2, 2]},
            "dims": {"(0,0)": 1, "(0,1)": 1, "(1,0)": 1, "(1,1)": 1},
            "maps": {
                "(0,0)->(0,1)": [[1]],
                "(0,0)->(1,0)": [[1]],
                "(0,1)->(1,1)": [[1]],
                "(1,0)->(1,1)": [[2]],
            },
        })
        code, out = run(capsys, "invariant", "--which", "dim", "--module", module)
        assert code == EXIT_INVALID
        assert error_of(out)["type"] == "FunctorialityError"

    def test_contract_round_trips_through_json(self, capsys, write_json, tmp_path):
        grid = write_json("q.json", {"axes": [[0, 2], [0, 2]]})
        module = write_json("m.json", TWO_SOURCE)
        target = tmp_path / "out.json"
        code, _ = run(capsys, "-o", str(target), "functor", "--op", "contract", "--grid", grid, "--module", module)
        assert code == EXIT_OK
        report = json.loads(target.read_text())
        parsed = build_module(ModuleSpec.model_validate(report["module"]))
        expected = contract(build_module(ModuleSpec.model_validate(TWO_SOURCE)), AlignedSubgrid([[0, 2], [0, 2]]))
        assert parsed.equals(expected)

    def test_extend_needs_a_target(self, capsys, write_json):
        grid = write_json("q.json", {"axes": [[0, 2], [0, 2]]})
        module = write_json("m.json", {"poset": {"axes": [[0, 2], [0, 2]]}, "spread": {"A": [[2, 0]]}})
        code, out = run(capsys, "functor", "--op", "extend", "--grid", grid, "--module", module)
        assert code == EXIT_INVALID
        code, out = run(capsys, "functor", "--op", "extend", "--grid", grid, "--module", module, "--target", "3x3")
        assert code == EXIT_OK
        dims = json.loads(out)["module"]["dims"]
        assert dims["(2,1)"] == 1 and "(1,2)" not in dims

    def test_check_family(self, capsys, write_json):
        grids = write_json("g.json", {
            "bound": {"axes": [[1, 2], [1, 2]]},
            "grids": [{"axes": [[2], [1, 2]]}, {"axes": [[1, 2], [1, 2]]}],
        })
        code, out = run(capsys, "check-family", "--grids", grids, "--family", "fp_upsets")
        assert code == EXIT_OK
        report = json.loads(out)
        assert not report["passed"]
        assert report["first_violation"]["condition"] == 5

    def test_precover_within_bound(self, capsys):
        code, out = run(capsys, "probe-precover", "--bound", "4x4", "--r", "0", "--s", "2", "--t", "1")
        assert code == EXIT_OK
        assert json.loads(out)["precover_within_bound"] is True
        code, out = run(capsys, "probe-precover", "--bound", "4x4", "--r", "2", "--s", "2", "--t", "1")
        assert code == EXIT_INVALID

    def test_unknown_family_is_rejected_by_argparse(self, capsys):
        with pytest.raises(SystemExit):
            main(["quiver", "--family", "zigzags", "--poset", "2x2"])
