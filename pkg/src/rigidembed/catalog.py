"""Built-in catalog of minimally rigid graphs with known embedding counts.

Entries carry the graph, its known complex/real embedding counts, and any
published edge-length assignments together with the number of real
embeddings they realize.  A published length set may span a relabeling of
the entry graph; in that case it carries its own edge set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .graphs import RigidGraph, geometry_dim, maxwell_check
from .systems import LengthAssignment


@dataclass(frozen=True)
class PublishedLengths:
    """One published edge-length assignment and what it realizes."""

    id: str
    geometry: str
    realized: int
    lengths: LengthAssignment
    graph: RigidGraph  # the graph spanned by the length keys
    relabeled: bool = False
    realized_filtered: int | None = None


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    graph: RigidGraph
    known_complex: int | None = None
    known_real: int | None = None
    published: tuple[PublishedLengths, ...] = ()
    metadata: dict = field(default_factory=dict)

    @property
    def geometry(self) -> str:
        return self.graph.geometry

    @property
    def n(self) -> int:
        return self.graph.n


def _entry_from_dict(d: dict) -> CatalogEntry:
    G = RigidGraph.from_json_dict(d)
    published = []
    for p in d.get("published_lengths", []):
        keys = sorted(
            tuple(sorted(int(x) for x in k.split("-"))) for k in p["lengths"]
        )
        if p.get("relabeled"):
            pg = RigidGraph.from_edges(p["id"], p["geometry"], keys, n=G.n)
        else:
            pg = G
        lengths = LengthAssignment.from_json_dict(
            {"graph": pg.name, "geometry": p["geometry"], "lengths": p["lengths"]}
        )
        lengths.check_graph(pg)
        published.append(
            PublishedLengths(
                id=p["id"],
                geometry=p["geometry"],
                realized=p["realized"],
                lengths=lengths,
                graph=pg,
                relabeled=bool(p.get("relabeled", False)),
                realized_filtered=p.get("realized_filtered"),
            )
        )
    return CatalogEntry(
        name=d["name"],
        graph=G,
        known_complex=d.get("known_complex"),
        known_real=d.get("known_real"),
        published=tuple(published),
        metadata=d.get("metadata", {}),
    )


def load_catalog() -> list[CatalogEntry]:
    raw = resources.files("rigidembed.data").joinpath("catalog.json").read_text()
    data = json.loads(raw)
    entries = [_entry_from_dict(d) for d in data["entries"]]
    for ent in entries:
        if not maxwell_check(ent.graph, geometry_dim(ent.geometry)):
            raise ValueError(f"catalog entry {ent.name} is not minimally rigid")
        for p in ent.published:
            if ent.known_complex is not None and p.realized > ent.known_complex:
                raise ValueError(
                    f"{p.id}: realized {p.realized} exceeds complex count "
                    f"{ent.known_complex}"
                )
    return entries


def get_entry(name: str) -> CatalogEntry:
    for ent in load_catalog():
        if ent.name == name:
            return ent
    raise KeyError(f"no catalog entry named {name!r}")


def get_published(entry_name: str, pub_id: str) -> PublishedLengths:
    ent = get_entry(entry_name)
    for p in ent.published:
        if p.id == pub_id:
            return p
    raise KeyError(f"entry {entry_name!r} has no published lengths {pub_id!r}")
