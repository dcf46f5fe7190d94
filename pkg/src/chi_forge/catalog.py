"""Loader for the bundled catalog of groups, metric groups, actions and fixtures.

A catalog is a directory holding ``index.json`` with a list of entries
``{"name", "kind", "path"}``.  The environment variable ``CHI_FORGE_CATALOG``
points at an alternative directory.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .groups import FiniteGroup, GroupError, Subgroup
from .metric import MetricGroup

__all__ = ["CatalogError", "CatalogEntry", "Catalog", "default_catalog_path", "load_catalog",
           "group_from_json", "subgroup_from_json"]

KINDS = ("group", "metric", "algebra-action", "cocycle", "ses-instance", "representation")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    path: Path

    def payload(self):
        try:
            return json.loads(self.path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CatalogError(f"cannot read {self.path}: {exc}") from exc


def default_catalog_path() -> Path:
    env = os.environ.get("CHI_FORGE_CATALOG")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "catalog"


def group_from_json(data, name=None) -> FiniteGroup:
    try:
        degree = int(data["degree"])
        gens = [tuple(int(a) for a in g) for g in data["generators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CatalogError(f"group file is malformed: {exc}") from exc
    return FiniteGroup(degree, gens, name=data.get("name", name))


def subgroup_from_json(group: FiniteGroup, data) -> Subgroup:
    """Members given as element indices, or generators as indices or permutations."""
    def element(x):
        if isinstance(x, int):
            if not 0 <= x < group.order:
                raise CatalogError(f"element index {x} out of range")
            return x
        perm = tuple(int(a) for a in x)
        if perm not in group.index:
            raise CatalogError(f"permutation {list(perm)} is not in the group")
        return group.index[perm]

    if "members" in data:
        members = frozenset(element(x) for x in data["members"])
        try:
            return Subgroup(group, members)
        except GroupError as exc:
            raise CatalogError(str(exc)) from exc
    if "generators" in data:
        return group.subgroup([element(x) for x in data["generators"]])
    raise CatalogError("subgroup needs 'members' or 'generators'")


class Catalog:
    def __init__(self, root: Path | str | None = None):
        self.root = Path(root) if root is not None else default_catalog_path()
        index = self.root / "index.json"
        if not index.is_file():
            raise CatalogError(f"no catalog index at {index}")
        try:
            raw = json.loads(index.read_text())
        except json.JSONDecodeError as exc:
            raise CatalogError(f"catalog index does not parse: {exc}") from exc
        self.entries: list[CatalogEntry] = []
        for e in raw.get("entries", []):
            if e.get("kind") not in KINDS:
                raise CatalogError(f"unknown catalog kind {e.get('kind')!r}")
            self.entries.append(CatalogEntry(e["name"], e["kind"], self.root / e["path"]))
        self._groups: dict[str, FiniteGroup] = {}

    def __len__(self):
        return len(self.entries)

    def of_kind(self, kind: str) -> list[CatalogEntry]:
        return [e for e in self.entries if e.kind == kind]

    def find(self, name: str, kind: str | None = None) -> CatalogEntry | None:
        key = name.lower()
        for e in self.entries:
            if (kind is None or e.kind == kind) and (e.name.lower() == key or e.path.name == name
                                                     or e.path.stem.lower() == key):
                return e
        return None

    # -- typed loaders ---------------------------------------------------------
    def group(self, ref) -> FiniteGroup:
        """A group by catalog name, or from an inline group object."""
        if isinstance(ref, dict):
            return group_from_json(ref)
        if ref in self._groups:
            return self._groups[ref]
        entry = self.find(ref, "group")
        if entry is None:
            raise CatalogError(f"unknown group {ref!r}")
        g = group_from_json(entry.payload(), entry.name)
        self._groups[ref] = g
        return g

    def groups(self) -> list[tuple[str, FiniteGroup]]:
        return [(e.name, self.group(e.name)) for e in self.of_kind("group")]

    def metrics(self) -> list[tuple[str, MetricGroup]]:
        return [(e.name, MetricGroup.from_json(e.payload())) for e in self.of_kind("metric")]

    def action(self, name_or_data):
        from .opalg.algebra import AlgAction
        data = name_or_data
        if isinstance(data, str):
            entry = self.find(data, "algebra-action")
            if entry is None:
                raise CatalogError(f"unknown action {data!r}")
            data = entry.payload()
        return AlgAction.from_json(data, self.group(data["group"]))

    def actions(self):
        return [(e.name, self.action(e.name)) for e in self.of_kind("algebra-action")]

    def representation(self, name_or_data):
        from .opalg.bimodule import Representation
        data = name_or_data
        if isinstance(data, str):
            entry = self.find(data, "representation")
            if entry is None:
                raise CatalogError(f"unknown representation {data!r}")
            data = entry.payload()
        return Representation.from_json(data, self.group(data["group"]))

    def representations(self):
        return [(e.name, e.payload()["group"], self.representation(e.name))
                for e in self.of_kind("representation")]

    def cocycles(self):
        """(name, action name, payload) for every cocycle fixture."""
        return [(e.name, e.payload().get("action"), e.payload()) for e in self.of_kind("cocycle")]

    def ses_instances(self):
        out = []
        for e in self.of_kind("ses-instance"):
            data = e.payload()
            g = self.group(data["group"])
            out.append((e.name, g, subgroup_from_json(g, data["normal"])))
        return out


def load_catalog(root=None) -> Catalog:
    return Catalog(root)
