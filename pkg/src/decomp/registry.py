"""Persistent registry of canonical atoms.

Atoms found by classification are stored once and given stable label ids
("atom-0001", ...), so classes computed in different runs are comparable.

Directory layout:

    <root>/index.json          RegistryIndexModel
    <root>/atoms/<id>.json     TupleModel of the representative
    <root>/.lock               exclusive lock for writers
"""

from __future__ import annotations

import contextlib
import dataclasses
import fcntl
import threading
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, Iterator, List, Optional

from ..core.config import Config, config
from ..core.errors import InputError
from ..core.logging import get_logger
from ..core.schemas import (
    RegistryEntryModel, RegistryIndexModel, TupleModel, load_json, to_canonical_json
)
from ..numeric.matrices import MatrixTuple, Seed
from ..symbolic.classes import PrimeLabel, UnityView
from .equivalence import atoms_equivalent
from .invariants import InvariantKey, invariant_key

logger = get_logger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class StoredAtom:
    id: str
    atom: MatrixTuple
    key: InvariantKey

    @property
    def label(self) -> PrimeLabel:
        return PrimeLabel.atom(self.id, dim=self.atom.dim)


def atom_id(number: int) -> str:
    return f"atom-{number:04d}"


class RegistryStore(ABC):
    """Storage backend for registered atoms."""

    @abstractmethod
    def load(self) -> List[StoredAtom]:
        """All stored atoms in registration order."""

    @abstractmethod
    def add(self, atom: MatrixTuple, key: InvariantKey) -> StoredAtom:
        """Stores a new atom under a fresh id."""

    @abstractmethod
    def clear(self) -> None:
        """Removes every stored atom."""

    @contextlib.contextmanager
    def transaction(self) -> Iterator[None]:
        """Serializes writers across lookup-then-add. Concrete stores hold a lock."""
        yield


class MemoryRegistryStore(RegistryStore):
    """Process-local store, used by tests and by the law suite."""

    def __init__(self):
        self._atoms: List[StoredAtom] = []
        self._lock = threading.Lock()

    def load(self) -> List[StoredAtom]:
        return list(self._atoms)

    def add(self, atom: MatrixTuple, key: InvariantKey) -> StoredAtom:
        stored = StoredAtom(id=atom_id(len(self._atoms) + 1), atom=atom, key=key)
        self._atoms.append(stored)
        return stored

    def clear(self) -> None:
        with self._lock:
            self._atoms.clear()

    @contextlib.contextmanager
    def transaction(self) -> Iterator[None]:
        with self._lock:
            yield


class DirectoryRegistryStore(RegistryStore):
    """JSON files under a registry directory, guarded by an fcntl lock."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self._cache: Dict[str, StoredAtom] = {}

    @property
    def index_path(self) -> Path:
        return self.root / "index.json"

    def _read_index(self) -> RegistryIndexModel:
        if not self.index_path.exists():
            return RegistryIndexModel()
        return load_json(RegistryIndexModel, self.index_path)

    def _write_index(self, index: RegistryIndexModel) -> None:
        tmp = self.index_path.with_suffix(".json.tmp")
        tmp.write_text(to_canonical_json(index) + "\n", encoding="utf-8")
        tmp.replace(self.index_path)

    def _load_entry(self, entry: RegistryEntryModel) -> StoredAtom:
        cached = self._cache.get(entry.id)
        if cached is not None:
            return cached
        model = load_json(TupleModel, self.root / entry.file)
        atom = MatrixTuple.from_model(model)
        if (atom.n, atom.dim) != (entry.n, entry.dim):
            raise InputError(f"Registry entry {entry.id} does not match its atom file.")
        stored = StoredAtom(id=entry.id, atom=atom, key=invariant_key(atom))
        self._cache[entry.id] = stored
        return stored

    def load(self) -> List[StoredAtom]:
        return [self._load_entry(e) for e in self._read_index().atoms]

    def add(self, atom: MatrixTuple, key: InvariantKey) -> StoredAtom:
        Config.ensure_directories(self.root)
        index = self._read_index()
        index.next_id += 1
        new_id = atom_id(index.next_id)
        rel = f"atoms/{new_id}.json"
        (self.root / rel).write_text(to_canonical_json(atom.to_model()) + "\n", encoding="utf-8")
        index.atoms.append(RegistryEntryModel(
            id=new_id, n=atom.n, dim=atom.dim, bucket=key.bucket, file=rel
        ))
        self._write_index(index)
        stored = StoredAtom(id=new_id, atom=atom, key=key)
        self._cache[new_id] = stored
        logger.info(f"Registered {new_id} (n={atom.n}, dim={atom.dim}) in {self.root}")
        return stored

    def clear(self) -> None:
        with self.transaction():
            for entry in self._read_index().atoms:
                (self.root / entry.file).unlink(missing_ok=True)
            if self.index_path.exists():
                self.index_path.unlink()
        self._cache.clear()

    @contextlib.contextmanager
    def transaction(self) -> Iterator[None]:
        Config.ensure_directories(self.root)
        with open(self.root / ".lock", "a+") as handle:
            fcntl.flock(handle, fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(handle, fcntl.LOCK_UN)


class AtomRegistry:
    """Canonical atoms with lookup by fingerprint confirmed by equivalence."""

    def __init__(
        self,
        store: Optional[RegistryStore] = None,
        tol: Optional[float] = None,
        seed: Seed = None,
    ):
        self.store = store or MemoryRegistryStore()
        self.tol = config.TOL if tol is None else tol
        self.seed = config.SEED if seed is None else seed

    @classmethod
    def at(cls, root: Optional[Path] = None, **kwargs) -> "AtomRegistry":
        """Registry persisted under `root` (default: the configured registry dir)."""
        return cls(DirectoryRegistryStore(root or config.REGISTRY_DIR), **kwargs)

    def entries(self) -> List[StoredAtom]:
        return self.store.load()

    def __len__(self) -> int:
        return len(self.entries())

    def _candidates(self, atom: MatrixTuple, key: InvariantKey) -> List[StoredAtom]:
        same_shape = [e for e in self.entries() if (e.atom.n, e.atom.dim) == (atom.n, atom.dim)]
        exact = [e for e in same_shape if e.key.bucket == key.bucket]
        close = [e for e in same_shape if e not in exact and e.key.close_to(key)]
        return exact + close

    def lookup(self, atom: MatrixTuple) -> Optional[StoredAtom]:
        """The registered atom equivalent to `atom`, if any."""
        key = invariant_key(atom)
        for entry in self._candidates(atom, key):
            if atoms_equivalent(entry.atom, atom, self.tol):
                return entry
        return None

    def resolve(self, atom: MatrixTuple) -> PrimeLabel:
        """Label of `atom`, registering it when no equivalent atom is stored."""
        found = self.lookup(atom)
        if found is not None:
            return found.label
        with self.store.transaction():
            # Another writer may have added it meanwhile.
            found = self.lookup(atom)
            if found is None:
                found = self.store.add(atom, invariant_key(atom))
        return found.label

    def label(self, id: str) -> PrimeLabel:
        for entry in self.entries():
            if entry.id == id:
                return entry.label
        raise InputError(f"No atom {id!r} in the registry.")

    def view(self) -> UnityView:
        return UnityView(labels=tuple(e.label for e in self.entries()))
