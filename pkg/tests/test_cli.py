import json

import pytest

from wittkit.cli import main
from wittkit.rings import FreeAssoc
from wittkit.series import TruncatedSeries
from wittkit.witt import WittRep

INTS = json.dumps({"kind": "Integers"})
FREE4 = json.dumps({"kind": "FreeAssoc", "params": {"generators": list("abcd"), "D": 6}})
FREE2 = json.dumps({"kind": "FreeAssoc", "params": {"generators": ["a", "b"], "D": 4}})


def letter(w):
    return [{"coeff": "1", "word": list(w)}]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if code == 0 else None), err


class TestChi:
    def test_free_example(self, capsys):
        matrix = json.dumps([[letter("a"), letter("b")], [letter("c"), letter("d")]])
        code, report, _ = run(capsys, "chi", "--ring", FREE4, "--in", matrix, "--N", "5")
        assert code == 0
        assert report["display"] == "1 + (-a - d)t + (ad - cb)t^2 + (acb - cab)t^3 + (acab - caab)t^4"
        assert set(report) == {"coords", "series", "display", "ghost"}

    def test_zero_matrix(self, capsys):
        code, report, _ = run(capsys, "chi", "--ring", INTS, "--in", '[["0","0"],["0","0"]]')
        assert code == 0
        assert report["coords"]["coords"] == {}
        assert report["display"] == "1"

    def test_integer_example(self, capsys):
        doc = json.dumps({"ring": {"kind": "Integers"}, "matrix": [["1", "2"], ["3", "4"]]})
        code, report, _ = run(capsys, "chi", "--in", doc, "--N", "3")
        assert code == 0
        assert report["series"]["coeffs"] == ["1", "-5", "-2"]

    def test_file_io(self, capsys, tmp_path):
        ring = tmp_path / "ring.json"
        ring.write_text(INTS)
        matrix = tmp_path / "m.json"
        matrix.write_text('[["1","2"],["3","4"]]')
        out = tmp_path / "out.json"
        assert main(["chi", "--ring", str(ring), "--in", str(matrix), "--N", "3", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["series"]["coeffs"] == ["1", "-5", "-2"]

    def test_malformed(self, capsys):
        assert main(["chi", "--ring", INTS, "--in", '[["1","2"]]']) == 2
        assert main(["chi", "--ring", INTS, "--in", "{not json"]) == 2
        assert main(["chi", "--ring", INTS, "--in", "/nonexistent/path.json"]) == 2
        assert main(["chi", "--ring", '{"kind": "Octonions"}', "--in", '[["1"]]']) == 2
        assert main(["chi", "--ring", INTS]) == 2

    def test_argparse_errors_exit_2(self):
        with pytest.raises(SystemExit) as info:
            main(["op", "sideways"])
        assert info.value.code == 2


class TestOp:
    def test_verschiebung(self, capsys):
        code, report, _ = run(
            capsys, "op", "V", "--ring", FREE2, "--N", "5", "--n", "2",
            "--in", json.dumps({"coords": {"1": letter("a")}}),
        )
        assert code == 0
        assert report["coords"]["coords"] == {"2": letter("a")}

    def test_equals_free(self, capsys):
        x = json.dumps({"coords": {"1": letter("ab")}})
        y = json.dumps({"coords": {"1": letter("ba")}})
        code, report, _ = run(capsys, "op", "equals", "--ring", FREE2, "--N", "4", "--in", x, "--in", y)
        assert code == 0
        assert report == {"verdict": "Equal"}

    def test_equals_unknown_is_success(self, capsys):
        ring = json.dumps({"kind": "Modular", "params": {"m": 4}})
        x = json.dumps({"coords": {"2": "2"}})
        code, report, _ = run(capsys, "op", "equals", "--ring", ring, "--N", "3", "--in", x, "--in", "{}")
        assert code == 0
        assert report == {"verdict": "Unknown"}

    def test_frobenius(self, capsys):
        code, report, _ = run(
            capsys, "op", "F", "--ring", INTS, "--N", "5", "--n", "2",
            "--in", json.dumps({"coords": {"2": "3"}}),
        )
        assert code == 0
        assert report["ghost"]["entries"] == {"1": "6", "2": "18"}

    def test_add_neg_ghost(self, capsys):
        x = json.dumps({"coords": {"1": "2", "3": "1"}})
        _, added, _ = run(capsys, "op", "add", "--ring", INTS, "--N", "4", "--in", x, "--in", x)
        _, ghost, _ = run(capsys, "op", "ghost", "--ring", INTS, "--N", "4", "--in", x)
        base = ghost["ghost"]["entries"]
        assert added["ghost"]["entries"] == {n: str(2 * int(v)) for n, v in base.items()}
        _, neg, _ = run(capsys, "op", "neg", "--ring", INTS, "--N", "4", "--in", x)
        assert neg["ghost"]["entries"] == {n: str(-int(v)) for n, v in base.items()}

    def test_restrict(self, capsys):
        x = json.dumps({"coords": {"1": "2", "2": "5", "3": "1"}})
        code, report, _ = run(capsys, "op", "restrict", "--ring", INTS, "--N", "4", "--to-S", "1,3", "--in", x)
        assert code == 0
        assert report["coords"]["S"] == [1, 3]
        assert main(["op", "restrict", "--ring", INTS, "--N", "4", "--in", x]) == 2

    def test_star_across_rings(self, capsys):
        x = json.dumps({"coords": {"1": "3"}})
        y = json.dumps({"ring": json.loads(FREE2), "coords": {"1": letter("ab")}})
        code, report, _ = run(capsys, "op", "star", "--ring", INTS, "--N", "3", "--in", x, "--in", y)
        assert code == 0
        assert report["coords"]["ring"] == json.loads(FREE2)

    def test_star_unsupported(self, capsys):
        x = json.dumps({"coords": {"1": "1"}})
        code, _, err = run(
            capsys, "op", "star", "--N", "3",
            "--ring", json.dumps({"kind": "Modular", "params": {"m": 3}}),
            "--ring2", json.dumps({"kind": "Modular", "params": {"m": 2}}),
            "--in", x, "--in", x,
        )
        assert code == 3
        assert "tensor product" in err

    def test_missing_operands(self, capsys):
        x = json.dumps({"coords": {"1": "1"}})
        assert main(["op", "add", "--ring", INTS, "--N", "3", "--in", x]) == 2
        assert main(["op", "V", "--ring", INTS, "--N", "3", "--in", x]) == 2
        assert main(["op", "neg", "--ring", INTS, "--in", x]) == 2

    def test_roundtrip(self, capsys):
        F = FreeAssoc(("a", "b"), 4)
        x = json.dumps({"coords": {"1": letter("ab"), "2": letter("b")}})
        _, report, _ = run(capsys, "op", "neg", "--ring", FREE2, "--N", "4", "--in", x)
        w = WittRep.from_json(report["coords"])
        assert w.to_json() == report["coords"]
        assert TruncatedSeries.from_json(report["series"]).to_json() == report["series"]
        assert w.ring == F


class TestOracle:
    def test_mod2(self, capsys):
        ring = json.dumps({"kind": "Modular", "params": {"m": 2}})
        code, report, _ = run(capsys, "oracle", "--ring", ring, "--N", "4")
        assert code == 0
        assert report["discrepancies"] == []
        assert report["groupSize"] == 8

    def test_mod4_pivot(self, capsys):
        ring = json.dumps({"kind": "Modular", "params": {"m": 4}})
        code, report, _ = run(capsys, "oracle", "--ring", ring, "--N", "4", "--checks", "pivot")
        assert code == 0
        assert report["discrepancies"] == []
        assert set(report["checks"]) == {"pivot"}

    def test_oversized(self, capsys):
        ring = json.dumps({"kind": "Modular", "params": {"m": 7}})
        assert main(["oracle", "--ring", ring, "--N", "9"]) == 4

    def test_infinite_ring(self, capsys):
        assert main(["oracle", "--ring", INTS, "--N", "3"]) == 3

    def test_deterministic(self, capsys):
        ring = json.dumps({"kind": "Modular", "params": {"m": 3}})
        argv = ["oracle", "--ring", ring, "--N", "3", "--seed", "11", "--samples", "10"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first


def test_chi_deterministic(capsys):
    matrix = json.dumps([[letter("a"), letter("b")], [letter("c"), letter("d")]])
    argv = ["chi", "--ring", FREE4, "--in", matrix, "--N", "5"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
    assert first.endswith("\n")
