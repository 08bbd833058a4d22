"""Tests for configuration, errors and wire formats."""

import json
import sys
from pathlib import Path

import pytest

# Add the repository root to Python path for absolute imports
sys.path.insert(0, str(Path(__file__).resolve().parents[3]))

from src.core.config import Config, config
from src.core.errors import (
    AdmissibilityError, DomainError, InputError, NotComparableError, OptupleError,
    PreconditionError, ToleranceAmbiguityError
)
from src.core.schemas import (
    ClassModel, ScalarModel, TupleModel, load_json, parse_json, to_canonical_json
)


@pytest.fixture
def restore_config():
    saved = {key: getattr(config, key) for key in vars(Config) if key.isupper()}
    yield
    for key, value in saved.items():
        setattr(config, key, value)


@pytest.mark.unit
class TestConfig:

    def test_overrides_leave_the_default_alone(self):
        original = config.TOL
        updated = config.with_overrides(TOL=original * 10, SEED=None)
        assert updated.TOL == original * 10
        assert updated.SEED == config.SEED
        assert config.TOL == original

    def test_unknown_key(self):
        with pytest.raises(AttributeError):
            config.with_overrides(TOLERANCE=1.0)

    def test_apply(self, restore_config):
        config.with_overrides(MAX_DIM=8).apply()
        assert config.MAX_DIM == 8

    def test_registry_layout(self, tmp_path):
        Config.ensure_directories(tmp_path / "reg")
        assert (tmp_path / "reg" / "atoms").is_dir()


@pytest.mark.unit
class TestErrors:

    def test_exit_codes(self):
        assert OptupleError.exit_code == 1
        assert InputError.exit_code == 2
        assert DomainError.exit_code == 3
        for cls in (AdmissibilityError, PreconditionError, NotComparableError):
            assert cls.exit_code == 4
            assert issubclass(cls, ValueError)

    def test_ambiguity_carries_the_spectrum(self):
        e = ToleranceAmbiguityError("rank", spectrum=[1.0, 5e-9])
        assert e.exit_code == 3
        assert e.spectrum == [1.0, 5e-9]
        assert "spectrum" in str(e)


@pytest.mark.unit
class TestSchemas:

    def test_scalar_shorthand(self):
        assert ScalarModel.model_validate("aleph0") == ScalarModel(type="aleph", index=0)
        assert ScalarModel.model_validate("3/2") == ScalarModel(type="rational", num=3, den=2)
        assert ScalarModel.model_validate(4) == ScalarModel(type="rational", num=4, den=1)

    def test_scalar_validation(self):
        with pytest.raises(InputError):
            parse_json(ScalarModel, '{"type": "aleph"}')
        with pytest.raises(InputError):
            parse_json(ScalarModel, '"-1/2"')

    def test_tuple_shape(self):
        with pytest.raises(InputError):
            parse_json(TupleModel, '{"n": 2, "dim": 1, "matrices": [[[[1, 0]]]]}')
        model = parse_json(TupleModel, '{"n": 1, "dim": 1, "matrices": [[[[1, 0]]]]}')
        assert model.matrices[0][0][0] == (1.0, 0.0)

    def test_invalid_json(self):
        with pytest.raises(InputError):
            parse_json(ClassModel, "{")

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            load_json(ClassModel, tmp_path / "absent.json")

    def test_canonical_json(self):
        model = ClassModel.model_validate(
            {"labels": [{"id": "P", "kind": "atom", "dim": 1, "mult": "aleph1"}]}
        )
        text = to_canonical_json(model)
        assert text == to_canonical_json(parse_json(ClassModel, text))
        assert json.loads(text)["labels"][0]["mult"] == {"index": 1, "type": "aleph"}
        assert "null" not in text

    def test_canonical_floats_keep_seventeen_digits(self):
        model = TupleModel(n=1, dim=1, matrices=[[[[0.1, -2.0]]]])
        text = to_canonical_json(model)
        assert "[0.10000000000000001, -2.0]" in text
        back = parse_json(TupleModel, text)
        assert back.matrices == model.matrices
        assert to_canonical_json(back) == text
