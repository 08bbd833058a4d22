"""Tests for the optuple command line."""

import json
import sys
from pathlib import Path

import numpy as np
import pytest
from typer.testing import CliRunner

# Add the repository root to Python path for absolute imports
sys.path.insert(0, str(Path(__file__).resolve().parents[3]))

from src.cli.main import app
from src.core.schemas import to_canonical_json
from src.numeric.matrices import MatrixTuple, conjugate, random_unitary
from src.oracle.planted import planted_tuple, random_irreducible
from src.symbolic.classes import PrimeLabel, TupleClass

runner = CliRunner()

P = PrimeLabel.atom("P")
S = PrimeLabel.semiprime("S")


def last_json(output: str) -> dict:
    """The JSON document the command printed on stdout."""
    lines = [line for line in output.splitlines() if line.startswith("{")]
    assert lines, output
    return json.loads(lines[-1])


def write_tuple(path: Path, a: MatrixTuple) -> Path:
    path.write_text(to_canonical_json(a.to_model()))
    return path


def write_class(path: Path, mults: dict) -> Path:
    path.write_text(to_canonical_json(TupleClass.of(mults).to_model()))
    return path


@pytest.fixture
def planted_file(tmp_path):
    p = random_irreducible(2, 2, seed=91)
    q = random_irreducible(2, 1, seed=92)
    inst = planted_tuple([(p, 2), (q, 1)], seed=93)
    return write_tuple(tmp_path / "planted.json", inst.system), inst


@pytest.mark.unit
class TestTupleCommands:

    def test_decompose(self, planted_file):
        path, _ = planted_file
        result = runner.invoke(app, ["decompose", str(path)])
        assert result.exit_code == 0, result.output
        report = last_json(result.stdout)
        assert report["dim"] == 5
        assert sorted(b["multiplicity"] for b in report["blocks"]) == [1, 2]

    def test_classify(self, planted_file, tmp_path):
        path, _ = planted_file
        registry = tmp_path / "registry"
        result = runner.invoke(app, ["classify", str(path), "--registry", str(registry)])
        assert result.exit_code == 0, result.output
        labels = last_json(result.stdout)["labels"]
        assert sorted(entry["id"] for entry in labels) == ["atom-0001", "atom-0002"]
        assert (registry / "index.json").exists()

    def test_equiv(self, planted_file, tmp_path):
        path, inst = planted_file
        rotated = conjugate(random_unitary(5, seed=94), inst.system)
        other = write_tuple(tmp_path / "rotated.json", rotated)
        result = runner.invoke(app, ["equiv", str(path), str(other)])
        assert result.exit_code == 0
        assert last_json(result.stdout) == {"equivalent": True}

        scaled = write_tuple(tmp_path / "scaled.json", MatrixTuple(2.0 * inst.system.matrices))
        result = runner.invoke(app, ["equiv", str(path), str(scaled)])
        assert result.exit_code == 1
        assert last_json(result.stdout) == {"equivalent": False}

    def test_btransform(self, tmp_path):
        path = write_tuple(tmp_path / "three.json", MatrixTuple.of(np.array([[3.0]])))
        result = runner.invoke(app, ["btransform", str(path)])
        assert result.exit_code == 0
        out = last_json(result.stdout)
        assert out["matrices"][0][0][0] == pytest.approx([0.75, 0.0])

        back = tmp_path / "back.json"
        back.write_text(json.dumps(out))
        result = runner.invoke(app, ["btransform", str(back), "--inverse"])
        assert result.exit_code == 0
        assert last_json(result.stdout)["matrices"][0][0][0] == pytest.approx([3.0, 0.0])

    def test_inverse_btransform_outside_the_domain(self, tmp_path):
        path = write_tuple(tmp_path / "one.json", MatrixTuple.of(np.array([[1.0]])))
        result = runner.invoke(app, ["btransform", str(path), "--inverse"])
        assert result.exit_code == 3

    def test_split(self, tmp_path):
        scalar = MatrixTuple.of(np.array([[3.0]]), np.array([[5.0]]))
        inst = planted_tuple([(scalar, 1), (random_irreducible(2, 2, seed=95), 1)], seed=96)
        path = write_tuple(tmp_path / "mixed.json", inst.system)
        outdir = tmp_path / "out"
        result = runner.invoke(
            app, ["split", str(path), "--ideal", "jointly-normal", "--outdir", str(outdir)]
        )
        assert result.exit_code == 0, result.output
        assert last_json(result.stdout)["part"]["dim"] == 1
        assert json.loads((outdir / "mixed.part.json").read_text())["dim"] == 1
        assert json.loads((outdir / "mixed.complement.json").read_text())["dim"] == 2

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        result = runner.invoke(app, ["decompose", str(path)])
        assert result.exit_code == 2

    def test_missing_file(self, tmp_path):
        result = runner.invoke(app, ["decompose", str(tmp_path / "absent.json")])
        assert result.exit_code == 2


@pytest.mark.unit
class TestClassOps:

    def test_oplus(self, tmp_path):
        a = write_class(tmp_path / "a.json", {P: 1})
        b = write_class(tmp_path / "b.json", {P: 2, S: "1/2"})
        result = runner.invoke(app, ["class-op", "oplus", str(a), str(b)])
        assert result.exit_code == 0, result.output
        labels = {e["id"]: e["mult"] for e in last_json(result.stdout)["labels"]}
        assert labels["P"] == {"type": "rational", "num": 3, "den": 1}
        assert labels["S"] == {"type": "rational", "num": 1, "den": 2}

    def test_ratio(self, tmp_path):
        a = write_class(tmp_path / "a.json", {P: 6})
        b = write_class(tmp_path / "b.json", {P: 2})
        result = runner.invoke(app, ["class-op", "ratio", str(a), str(b)])
        assert result.exit_code == 0
        assert last_json(result.stdout) == {"type": "rational", "num": 3, "den": 1}

    def test_flags(self, tmp_path):
        a = write_class(tmp_path / "a.json", {S: "2/3"})
        result = runner.invoke(app, ["class-op", "flags", str(a)])
        assert result.exit_code == 0
        assert "semiprime" in last_json(result.stdout)["flags"]

    def test_scalar_mul(self, tmp_path):
        a = write_class(tmp_path / "a.json", {P: 2})
        result = runner.invoke(app, ["class-op", "scalar-mul", str(a), "--alpha", "aleph0"])
        assert result.exit_code == 0
        assert last_json(result.stdout)["labels"][0]["mult"] == {"type": "aleph", "index": 0}
        result = runner.invoke(app, ["class-op", "scalar-mul", str(a), "--alpha", "1/2"])
        assert result.exit_code == 4

    def test_minus_delta_needs_order(self, tmp_path):
        b = write_class(tmp_path / "b.json", {P: 1})
        a = write_class(tmp_path / "a.json", {P: 2})
        result = runner.invoke(app, ["class-op", "minus-delta", str(b), str(a)])
        assert result.exit_code == 4
        result = runner.invoke(app, ["class-op", "minus-delta", str(a), str(b)])
        assert result.exit_code == 0

    def test_arity_and_unknown_ops(self, tmp_path):
        a = write_class(tmp_path / "a.json", {P: 1})
        assert runner.invoke(app, ["class-op", "ratio", str(a)]).exit_code == 2
        assert runner.invoke(app, ["class-op", "transpose", str(a)]).exit_code == 2


@pytest.mark.unit
def test_laws_command():
    result = runner.invoke(
        app, ["laws", "--registry-size", "1", "--mults", "0,1,aleph0", "--no-table"]
    )
    assert result.exit_code == 0, result.output
    report = last_json(result.stdout)
    assert report["registry_size"] == 1
    assert all(not law["failures"] for law in report["laws"])
