"""Repositories: a dataset, its view registry and an entailment regime.

Two storage modes exist.  ``memory`` keeps everything in the process.
``file`` mirrors the repository into a directory that a later process can
reopen::

    config.json            storage mode, entailment regime, data generation
    graphs/manifest.json   graph name -> list of segment files
    graphs/*.nt            append-only N-Triples segments, one per load
    views.trig             ng:definedBy registry
    extents/index.json     materialized view extents and their generation
    extents/*.nt
    .lock                  held by the single writer

The entailment regime is fixed when the repository is created.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from .algebra import ENTAILMENT_REGIMES, eval_query
from .graph import Dataset, Graph
from .ntriples import parse_ntriples, serialize_ntriples
from .sparql.parser import parse_query
from .terms import IRI
from .trig import parse_trig
from .views import ViewDef, ViewRegistry

STORAGE_MODES = ("memory", "file")
FORMAT_VERSION = 1


class RepositoryError(Exception):
    pass


@dataclass(frozen=True)
class RepoConfig:
    storage: str = "memory"
    entailment: str = "none"
    path: Optional[str] = None

    def __post_init__(self):
        if self.storage not in STORAGE_MODES:
            raise RepositoryError(f"unknown storage mode {self.storage!r}")
        if self.entailment not in ENTAILMENT_REGIMES:
            raise RepositoryError(f"unknown entailment regime {self.entailment!r}")
        if self.storage == "file" and not self.path:
            raise RepositoryError("file-backed repositories need a path")


def _graph_key(name: Optional[IRI]) -> str:
    if name is None:
        return "default"
    return "g" + hashlib.sha1(name.value.encode("utf-8")).hexdigest()[:16]


class _FileLock:
    """Exclusive writer lock (a lock file created with O_EXCL)."""

    def __init__(self, path: Path):
        self.path = path
        self.held = False

    def acquire(self):
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise RepositoryError(f"repository is locked by another writer ({self.path})") from None
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        self.held = True

    def release(self):
        if self.held:
            self.path.unlink(missing_ok=True)
            self.held = False

    def __enter__(self):
        self.acquire()
        return self

    def __exit__(self, *exc):
        self.release()


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


class Repository:
    """Loaded data plus views, queried under a fixed entailment regime."""

    def __init__(self, config: RepoConfig = RepoConfig()):
        self.config = config
        self.dataset = Dataset()
        self.registry = ViewRegistry(self.dataset, config.entailment)
        self.generation = 0
        self._segments: dict = {}  # graph key -> list of file names
        self._names: dict = {}  # graph key -> IRI (None for the default graph)

    # -- lifecycle -----------------------------------------------------------

    @classmethod
    def create(cls, path, entailment: str = "none", exist_ok: bool = False) -> "Repository":
        root = Path(path)
        if (root / "config.json").exists() and not exist_ok:
            raise RepositoryError(f"a repository already exists at {root}")
        (root / "graphs").mkdir(parents=True, exist_ok=True)
        (root / "extents").mkdir(exist_ok=True)
        repo = cls(RepoConfig("file", entailment, str(root)))
        repo._save_all()
        return repo

    @classmethod
    def open(cls, path) -> "Repository":
        root = Path(path)
        try:
            meta = json.loads((root / "config.json").read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise RepositoryError(f"no repository at {root}") from None
        if meta.get("format") != FORMAT_VERSION:
            raise RepositoryError(f"unsupported repository format {meta.get('format')!r}")
        repo = cls(RepoConfig("file", meta["entailment"], str(root)))
        repo.generation = meta.get("generation", 0)
        repo._read_graphs()
        views = root / "views.trig"
        if views.exists():
            repo.registry.load_trig(views.read_text(encoding="utf-8"))
        repo._read_extents()
        return repo

    @property
    def root(self) -> Optional[Path]:
        return Path(self.config.path) if self.config.storage == "file" else None

    def _writing(self):
        if self.root is None:
            return _NullLock()
        return _FileLock(self.root / ".lock")

    # -- data ----------------------------------------------------------------

    def load(self, text: str, fmt: str = "nt", graph: Optional[IRI] = None,
             also_default: bool = False) -> int:
        """Add a document's triples; returns the number of triples read.

        N-Triples go into ``graph`` (default graph when None).  TriG blocks
        go into their named graphs and bare statements into the default
        graph; ``graph`` is not allowed with TriG.  With ``also_default``
        every loaded triple is added to the default graph as well.
        """
        if fmt == "nt":
            parts = {graph: parse_ntriples(text)}
        elif fmt == "trig":
            if graph is not None:
                raise RepositoryError("--graph cannot be combined with TriG input")
            ds, _ = parse_trig(text)
            parts = dict(ds.named)
            if len(ds.default_graph):
                parts[None] = ds.default_graph
        else:
            raise RepositoryError(f"unknown data format {fmt!r}")
        read = sum(len(g) for g in parts.values())
        if also_default:
            extra = [g for name, g in parts.items() if name is not None]
            if extra:
                parts[None] = parts.get(None, Graph()).union(Graph.from_ids(
                    set().union(*(g.id_triples() for g in extra))))
        with self._writing():
            for name, g in parts.items():
                self._add(name, g)
            self.generation += 1
            self.registry.invalidate_all()
            if self.root is not None:
                self._save_config()
                self._save_manifest()
                self._save_extents()
        return read

    def _add(self, name: Optional[IRI], g: Graph) -> None:
        # graphs are snapshots: build a new one rather than mutating in place
        if name is None:
            self.dataset.default_graph = self.dataset.default_graph.union(g)
        else:
            self.dataset.add_named(name, g)
        if self.root is not None and len(g):
            key = _graph_key(name)
            self._names[key] = name
            files = self._segments.setdefault(key, [])
            fname = f"{key}-{len(files):06d}.nt"
            _write_atomic(self.root / "graphs" / fname, serialize_ntriples(g))
            files.append(fname)

    def add_graph(self, g: Graph, name: Optional[IRI] = None) -> None:
        """Add an in-process graph (same effect as loading its serialization)."""
        with self._writing():
            self._add(name, g)
            self.generation += 1
            self.registry.invalidate_all()
            if self.root is not None:
                self._save_config()
                self._save_manifest()
                self._save_extents()

    def graph_names(self) -> list:
        return sorted(self.dataset.named, key=lambda i: i.value)

    # -- queries and views ---------------------------------------------------

    def query(self, text: str, timeout: Optional[float] = None, prefixes: Optional[dict] = None):
        q = parse_query(text, prefixes)
        return eval_query(q, self.dataset, self.registry, entailment=self.config.entailment, timeout=timeout)

    def define_view(self, name: IRI, text: str, prefixes: Optional[dict] = None) -> ViewDef:
        view = ViewDef.from_text(name, text, prefixes)
        with self._writing():
            self.registry.register(view)
            self._save_views()
        return view

    def load_views(self, trig_text: str, prefixes: Optional[dict] = None) -> list:
        with self._writing():
            names = self.registry.load_trig(trig_text, prefixes)
            self._save_views()
        return names

    def drop_view(self, name: IRI) -> None:
        with self._writing():
            self.registry.drop(name)
            self._save_views()

    def views(self) -> list:
        return self.registry.definitions()

    def materialize(self, name: IRI, timeout: Optional[float] = None) -> Graph:
        with self._writing():
            g = self.registry.materialize(name, timeout)
            self._save_extents()
        return g

    # -- persistence ---------------------------------------------------------

    def _save_all(self):
        self._save_config()
        self._save_manifest()
        self._save_views()
        self._save_extents()

    def _save_config(self):
        meta = asdict(self.config)
        meta.pop("path")
        meta.update(format=FORMAT_VERSION, generation=self.generation)
        _write_atomic(self.root / "config.json", json.dumps(meta, indent=1, sort_keys=True) + "\n")

    def _save_manifest(self):
        if self.root is None:
            return
        entries = [
            {"name": None if self._names[k] is None else self._names[k].value, "segments": files}
            for k, files in sorted(self._segments.items())
        ]
        _write_atomic(self.root / "graphs" / "manifest.json", json.dumps(entries, indent=1) + "\n")

    def _save_views(self):
        if self.root is None:
            return
        _write_atomic(self.root / "views.trig", self.registry.dump_trig())
        self._save_extents()

    def _save_extents(self):
        if self.root is None:
            return
        ext = self.root / "extents"
        ext.mkdir(exist_ok=True)
        index = {}
        for view in self.registry.definitions():
            if self.registry.is_materialized(view.name) and self.registry.is_fresh(view.name):
                fname = _graph_key(view.name) + ".nt"
                _write_atomic(ext / fname, serialize_ntriples(self.registry.stored_extent(view.name)))
                index[view.name.value] = {"file": fname, "generation": self.generation}
        for stale in ext.glob("*.nt"):
            if stale.name not in {v["file"] for v in index.values()}:
                stale.unlink()
        _write_atomic(ext / "index.json", json.dumps(index, indent=1, sort_keys=True) + "\n")

    def _read_graphs(self):
        manifest = self.root / "graphs" / "manifest.json"
        if not manifest.exists():
            return
        # one blank-node scope for the whole repository, so nodes shared
        # between graphs stay shared after reopening
        bnodes: dict = {}
        for entry in json.loads(manifest.read_text(encoding="utf-8")):
            name = None if entry["name"] is None else IRI(entry["name"])
            key = _graph_key(name)
            g = Graph()
            for fname in entry["segments"]:
                with open(self.root / "graphs" / fname, encoding="utf-8") as fh:
                    parse_ntriples(fh, g, bnodes)
            self._names[key] = name
            self._segments[key] = list(entry["segments"])
            if name is None:
                self.dataset.default_graph = g
            else:
                self.dataset.named[name] = g

    def _read_extents(self):
        index_path = self.root / "extents" / "index.json"
        if not index_path.exists():
            return
        for name, entry in json.loads(index_path.read_text(encoding="utf-8")).items():
            iri = IRI(name)
            if iri not in self.registry or entry["generation"] != self.generation:
                continue
            g = parse_ntriples((self.root / "extents" / entry["file"]).read_text(encoding="utf-8"))
            self.registry.install_extent(iri, g, fresh=True)


class _NullLock:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        pass


__all__ = ["Repository", "RepoConfig", "RepositoryError", "STORAGE_MODES"]
