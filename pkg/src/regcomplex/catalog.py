"""Named regular complexes: generator data plus expected properties.

The embedded catalog lives in ``data/catalog.json``.  Each entry has a
``source`` of one of four kinds:

``explicit``       a generator set given verbatim;
``derived``        ``{"base", "op", "element"}`` applied through :mod:`gen_ops`;
``reconstructed``  a constraint block handed to ``reconstruct_generators``;
``apeir``          the 2-skeleton of ``apeir Q`` for a stored polyhedron ``Q``.

Derived entries may carry ``aliases`` mapping a local element name to a
selector (``"R2": "halfturn"``); aliases override inherited names.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from .gen_ops import (
    Constraints,
    ReconstructionError,
    ReconstructionResult,
    apeir,
    lambda0,
    lambda1,
    petrie_lambda,
    reconstruct_generators,
    resolve_element,
)
from .point_groups import PointGroupError
from .wythoff import FaceClass, GeneratorSet, WythoffError

SCHEMA_VERSION = 1
SOURCE_KINDS = ("explicit", "derived", "reconstructed", "apeir")
OPS = ("lambda0", "lambda1", "petrie_lambda")
EXPECTED_FIELDS = ("g2", "r", "face", "vertex_figure", "special_group", "face_mirror", "flag_stabilizer")


class CatalogError(ValueError):
    pass


class SchemaError(CatalogError):
    pass


class UnresolvedBaseError(CatalogError):
    pass


class CycleError(CatalogError):
    pass


class UnknownEntryError(CatalogError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0])


@dataclass(frozen=True)
class ExpectedProperties:
    g2: str
    r: int
    face: str
    vertex_figure: str
    special_group: str
    face_mirror: bool
    flag_stabilizer: int
    vertex_set: str | None = None
    extra_claims: tuple = ()

    @classmethod
    def from_json(cls, name: str, data: dict) -> "ExpectedProperties":
        missing = [k for k in EXPECTED_FIELDS if k not in data]
        if missing:
            raise SchemaError(f"{name}: expected properties missing {', '.join(missing)}")
        try:
            FaceClass.parse(data["face"])
        except ValueError as exc:
            raise SchemaError(f"{name}: bad face class {data['face']!r}") from exc
        claims = data.get("extra_claims", [])
        if not isinstance(claims, list) or not all(isinstance(c, dict) and "check" in c for c in claims):
            raise SchemaError(f"{name}: extra_claims must be a list of objects with a 'check' key")
        return cls(
            data["g2"],
            int(data["r"]),
            data["face"],
            data["vertex_figure"],
            data["special_group"],
            bool(data["face_mirror"]),
            int(data["flag_stabilizer"]),
            data.get("vertex_set"),
            tuple(claims),
        )

    def to_json(self) -> dict:
        out = {
            "g2": self.g2,
            "r": self.r,
            "face": self.face,
            "vertex_figure": self.vertex_figure,
            "special_group": self.special_group,
            "face_mirror": self.face_mirror,
            "flag_stabilizer": self.flag_stabilizer,
            "extra_claims": list(self.extra_claims),
        }
        if self.vertex_set is not None:
            out["vertex_set"] = self.vertex_set
        return out


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    title: str
    mirror_vector: tuple[int, int] | str
    source: dict
    expected: ExpectedProperties | None

    @property
    def kind(self) -> str:
        return self.source["kind"]

    @property
    def is_skeleton(self) -> bool:
        return self.mirror_vector == "skeleton"

    @property
    def base(self) -> str | None:
        return self.source.get("base") if self.kind == "derived" else None

    def to_json(self) -> dict:
        mv = self.mirror_vector if isinstance(self.mirror_vector, str) else list(self.mirror_vector)
        out = {"title": self.title, "mirror_vector": mv, "source": self.source}
        if self.expected is not None:
            out["expected"] = self.expected.to_json()
        return out


def _parse_entry(name: str, data: Any) -> CatalogEntry:
    if not isinstance(data, dict):
        raise SchemaError(f"{name}: entry must be an object")
    for key in ("mirror_vector", "source"):
        if key not in data:
            raise SchemaError(f"{name}: missing field {key!r}")
    mv = data["mirror_vector"]
    if mv != "skeleton":
        if not (isinstance(mv, list) and len(mv) == 2 and all(isinstance(c, int) for c in mv)):
            raise SchemaError(f"{name}: mirror_vector must be [i, j] or \"skeleton\"")
        mv = tuple(mv)
    src = data["source"]
    if not isinstance(src, dict) or src.get("kind") not in SOURCE_KINDS:
        raise SchemaError(f"{name}: source.kind must be one of {', '.join(SOURCE_KINDS)}")
    kind = src["kind"]
    if kind == "explicit":
        gens = src.get("generators")
        if not isinstance(gens, dict):
            raise SchemaError(f"{name}: explicit source needs 'generators'")
        for key in ("R0", "R1", "G2"):
            if key not in gens:
                raise SchemaError(f"{name}: generators missing {key}")
        try:
            GeneratorSet.from_json(gens)
        except (WythoffError, ValueError) as exc:
            raise CatalogError(f"{name}: invalid generator set: {exc}") from exc
    elif kind == "derived":
        for key in ("base", "op", "element"):
            if key not in src:
                raise SchemaError(f"{name}: derived source missing {key!r}")
        if src["op"] not in OPS:
            raise SchemaError(f"{name}: unknown operation {src['op']!r}")
    elif kind == "reconstructed":
        if not isinstance(src.get("constraints"), dict):
            raise SchemaError(f"{name}: reconstructed source needs a 'constraints' block")
        try:
            Constraints.from_json(src["constraints"])
        except (ReconstructionError, ValueError) as exc:
            raise SchemaError(f"{name}: {exc}") from exc
    elif kind == "apeir":
        if "q" not in src:
            raise SchemaError(f"{name}: apeir source needs 'q'")
    expected = data.get("expected")
    if expected is not None and not isinstance(expected, dict):
        raise SchemaError(f"{name}: expected must be an object")
    exp = None if expected is None else ExpectedProperties.from_json(name, expected)
    return CatalogEntry(name, data.get("title", name), mv, src, exp)


class Catalog:
    """Loaded catalog with memoized resolution (safe to share between threads)."""

    def __init__(self, entries: dict[str, CatalogEntry], origin: str = "<memory>"):
        self.entries = entries
        self.origin = origin
        self._cache: dict[str, GeneratorSet] = {}
        self._recon: dict[str, ReconstructionResult] = {}
        self._lock = threading.RLock()
        self._check_graph()

    def _check_graph(self) -> None:
        for name, entry in self.entries.items():
            if entry.kind == "derived" and entry.base not in self.entries:
                raise UnresolvedBaseError(f"{name}: base {entry.base!r} is not in the catalog")
        state: dict[str, int] = {}

        def visit(name: str, path: list[str]) -> None:
            if state.get(name) == 2:
                return
            if state.get(name) == 1:
                cycle = path[path.index(name):] + [name]
                raise CycleError("derivation cycle: " + " -> ".join(cycle))
            state[name] = 1
            base = self.entries[name].base
            if base is not None:
                visit(base, path + [name])
            state[name] = 2

        for name in sorted(self.entries):
            visit(name, [])

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.values())

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def names(self) -> list[str]:
        return list(self.entries)

    def entry(self, name: str) -> CatalogEntry:
        try:
            return self.entries[name]
        except KeyError:
            raise UnknownEntryError(f"unknown catalog entry {name!r}") from None

    def select(self, mirror: tuple[int, int] | None = None, skeletons: bool | None = None) -> list[CatalogEntry]:
        out = []
        for e in self.entries.values():
            if skeletons is not None and e.is_skeleton != skeletons:
                continue
            if mirror is not None and e.mirror_vector != tuple(mirror):
                continue
            out.append(e)
        return out

    def resolve(self, name: str) -> GeneratorSet:
        entry = self.entry(name)
        with self._lock:
            if name in self._cache:
                return self._cache[name]
            gs = self._build(entry)
            self._cache[name] = gs
            return gs

    def reconstruction(self, name: str) -> ReconstructionResult:
        """Full reconstruction report of a reconstructed entry."""
        entry = self.entry(name)
        if entry.kind != "reconstructed":
            raise CatalogError(f"{name} is not a reconstructed entry")
        self.resolve(name)
        return self._recon[name]

    def _build(self, entry: CatalogEntry) -> GeneratorSet:
        src = entry.source
        if entry.kind == "explicit":
            return GeneratorSet.from_json(src["generators"])
        if entry.kind == "reconstructed":
            result = reconstruct_generators(src["constraints"])
            self._recon[entry.name] = result
            return result.generators
        if entry.kind == "apeir":
            return apeir(src["q"]).skeleton()
        base = self.resolve(src["base"])
        gs = apply_operation(base, src["op"], src["element"])
        aliases = src.get("aliases") or {}
        if aliases:
            names = dict(gs.names)
            for alias, selector in sorted(aliases.items()):
                names[alias] = resolve_element(gs, selector)
            gs = gs.with_names(names)
        return gs


def apply_operation(gs: GeneratorSet, op: str, element: str) -> GeneratorSet:
    """Apply ``op`` with the element named (or selected) by ``element``."""
    if op == "lambda0":
        return lambda0(gs, resolve_element(gs, element))
    if op == "lambda1":
        return lambda1(gs, resolve_element(gs, element))
    if op == "petrie_lambda":
        return petrie_lambda(gs, resolve_element_any(gs, element))
    raise CatalogError(f"unknown operation {op!r}; expected one of {', '.join(OPS)}")


def resolve_element_any(gs: GeneratorSet, element: str):
    """Named isometry that need not lie in G2 (used for ``T3``)."""
    names = gs.named()
    if element in names:
        return names[element]
    return resolve_element(gs, element)


def parse_catalog(data: Any, origin: str = "<memory>") -> Catalog:
    if not isinstance(data, dict) or not isinstance(data.get("entries"), dict):
        raise SchemaError(f"{origin}: top level must be an object with an 'entries' object")
    version = data.get("schema", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"{origin}: unsupported schema version {version}")
    entries = {}
    for name, raw in data["entries"].items():
        try:
            entries[name] = _parse_entry(name, raw)
        except (PointGroupError, WythoffError) as exc:
            raise CatalogError(f"{name}: {exc}") from exc
    return Catalog(entries, origin)


def load(path: str | Path | None = None) -> Catalog:
    """Load a catalog file, or the embedded default when ``path`` is None."""
    if path is None:
        text = resources.files("regcomplex").joinpath("data/catalog.json").read_text(encoding="utf-8")
        origin = "embedded"
    else:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise CatalogError(f"cannot read catalog {p}: {exc}") from exc
        origin = str(p)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{origin}: invalid JSON: {exc}") from exc
    return parse_catalog(data, origin)


_default: Catalog | None = None
_default_lock = threading.Lock()


def default_catalog() -> Catalog:
    """Process-wide embedded catalog (resolution results are shared)."""
    global _default
    with _default_lock:
        if _default is None:
            _default = load()
        return _default


def fragment(name: str, gs: GeneratorSet, expected: ExpectedProperties | None, title: str | None = None) -> dict:
    """A loadable one-entry catalog holding ``gs`` explicitly."""
    from .exact_geometry import fixed_space_dimension

    mv = [fixed_space_dimension(gs.R0), fixed_space_dimension(gs.R1)]
    entry: dict = {
        "title": title or name,
        "mirror_vector": mv if None not in mv else "skeleton",
        "source": {"kind": "explicit", "generators": gs.to_json()},
    }
    if expected is not None:
        entry["expected"] = expected.to_json()
    return {"schema": SCHEMA_VERSION, "entries": {name: entry}}
