"""Tests for the atom registry and its stores."""

import json
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pytest

# Add the repository root to Python path for absolute imports
sys.path.insert(0, str(Path(__file__).resolve().parents[3]))

from src.core.config import config
from src.core.errors import InputError
from src.decomp.classification import classify
from src.decomp.invariants import invariant_key
from src.decomp.registry import AtomRegistry, DirectoryRegistryStore, atom_id
from src.numeric.matrices import MatrixTuple, conjugate, random_tuple, random_unitary
from src.oracle.planted import random_irreducible
from src.symbolic.classes import LabelKind


@pytest.fixture(scope="module")
def atoms():
    return random_irreducible(2, 2, seed=41), random_irreducible(2, 3, seed=42)


@pytest.mark.unit
class TestMemoryRegistry:

    def test_ids(self):
        assert atom_id(1) == "atom-0001"
        assert atom_id(123) == "atom-0123"

    def test_resolve_reuses_equivalent_atoms(self, atoms):
        p, q = atoms
        registry = AtomRegistry()
        first = registry.resolve(p)
        assert first.id == "atom-0001"
        assert first.kind is LabelKind.ATOM
        assert first.dim == 2
        assert registry.resolve(conjugate(random_unitary(2, seed=43), p)) == first
        assert registry.resolve(q).id == "atom-0002"
        assert len(registry) == 2

    def test_lookup_without_registering(self, atoms):
        p, _ = atoms
        registry = AtomRegistry()
        assert registry.lookup(p) is None
        assert len(registry) == 0

    def test_label_and_view(self, atoms):
        p, q = atoms
        registry = AtomRegistry()
        registry.resolve(p)
        registry.resolve(q)
        assert registry.label("atom-0002").dim == 3
        assert [label.id for label in registry.view().labels] == ["atom-0001", "atom-0002"]
        with pytest.raises(InputError):
            registry.label("atom-9999")

    def test_shared_key_is_settled_by_equivalence(self, monkeypatch):
        monkeypatch.setattr(config, "MAX_WORD_LENGTH", 1)
        x = random_tuple(1, 3, seed=44)
        transposed = MatrixTuple(np.swapaxes(x.matrices, 1, 2))
        assert invariant_key(x).bucket == invariant_key(transposed).bucket
        registry = AtomRegistry()
        assert registry.resolve(x) != registry.resolve(transposed)
        assert len(registry) == 2


@pytest.mark.unit
class TestConcurrentResolve:

    WORKERS = 8

    def _classify_together(self, registry, copies):
        barrier = threading.Barrier(len(copies))

        def work(a):
            barrier.wait()
            return classify(a, registry, seed=0)

        with ThreadPoolExecutor(max_workers=len(copies)) as pool:
            return list(pool.map(work, copies))

    @pytest.mark.parametrize("trial", range(3))
    def test_conjugate_copies_share_one_atom(self, atoms, trial):
        _, q = atoms
        copies = [
            conjugate(random_unitary(3, seed=100 * trial + i), q) for i in range(self.WORKERS)
        ]
        registry = AtomRegistry()
        classes = self._classify_together(registry, copies)
        assert len(registry) == 1
        assert all(c == classes[0] for c in classes)

    def test_two_atoms_interleaved(self, atoms):
        p, q = atoms
        copies = [
            conjugate(random_unitary(x.dim, seed=200 + i), x)
            for i, x in enumerate([p, q] * (self.WORKERS // 2))
        ]
        registry = AtomRegistry()
        classes = self._classify_together(registry, copies)
        assert len(registry) == 2
        assert len(set(classes)) == 2


@pytest.mark.unit
class TestDirectoryRegistry:

    def test_files(self, tmp_path, atoms):
        p, _ = atoms
        AtomRegistry.at(tmp_path).resolve(p)
        index = json.loads((tmp_path / "index.json").read_text())
        assert [entry["id"] for entry in index["atoms"]] == ["atom-0001"]
        assert (tmp_path / "atoms" / "atom-0001.json").exists()

    def test_reopened_registry_finds_stored_atoms(self, tmp_path, atoms):
        p, q = atoms
        AtomRegistry.at(tmp_path).resolve(p)
        reopened = AtomRegistry.at(tmp_path)
        found = reopened.lookup(conjugate(random_unitary(2, seed=44), p))
        assert found is not None and found.id == "atom-0001"
        assert reopened.resolve(q).id == "atom-0002"

    def test_clear(self, tmp_path, atoms):
        p, _ = atoms
        store = DirectoryRegistryStore(tmp_path)
        AtomRegistry(store).resolve(p)
        store.clear()
        assert store.load() == []
        assert not (tmp_path / "atoms" / "atom-0001.json").exists()
