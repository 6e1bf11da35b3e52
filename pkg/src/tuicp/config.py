"""Resource caps and run configuration.

Caps are plain values that every size-sensitive operation accepts through a
``caps`` argument; ``None`` means :data:`DEFAULT_CAPS`.  A JSON file named by
the ``TUICP_CONFIG`` environment variable can override the defaults for the
command-line tool.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, replace

CONFIG_ENV_VAR = "TUICP_CONFIG"


@dataclass(frozen=True)
class Caps:
    materialize_mt: int = 14  # confusion graph edge materialization
    predicate_mt: int = 24  # confusability predicate / decodability checks
    exact_mt: int = 12  # exact two-sender coloring search
    chromatic_vertices: int = 4096
    chromatic_nodes: int = 200_000  # branch-and-bound search nodes
    isomorphism_vertices: int = 4096
    exact_clique_vertices: int = 64
    acyclic_subset_vertices: int = 20

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"cap {name} must be a positive integer, got {value!r}")


DEFAULT_CAPS = Caps()


def resolve(caps: Caps | None) -> Caps:
    return DEFAULT_CAPS if caps is None else caps


@dataclass(frozen=True)
class RunConfig:
    caps: Caps = field(default_factory=Caps)
    threads: int = 1
    seed: int = 0
    output: str = "json"

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.output not in ("json", "markdown", "dot"):
            raise ValueError(f"unknown output format {self.output!r}")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        caps = Caps(**data.get("caps", {}))
        rest = {k: v for k, v in data.items() if k != "caps"}
        return cls(caps=caps, **rest)

    def with_overrides(self, **kwargs) -> "RunConfig":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)


def load_config(path: str | None = None) -> RunConfig:
    """Load a :class:`RunConfig` from ``path`` or ``$TUICP_CONFIG``; defaults otherwise."""
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return RunConfig()
    with open(path, encoding="utf-8") as fh:
        return RunConfig.from_mapping(json.load(fh))
