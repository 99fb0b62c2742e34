"""Group documents (JSON) and run configurations."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .groups import (AbelianGroup, DirectProduct, FreeGroup, FreeProduct, Group, HeisenbergGroup,
                     MatrixGroup)


class ConfigError(ValueError):
    """A malformed group document; ``path`` points at the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


_FIELDS = {
    "free": {"kind", "rank", "labels", "name"},
    "abelian": {"kind", "rank", "torsion", "labels", "name"},
    "heisenberg": {"kind", "labels", "name"},
    "matrix": {"kind", "generators", "labels", "name"},
    "direct_product": {"kind", "factors", "name"},
    "free_product": {"kind", "factors", "name"},
}


def _int(doc: dict, key: str, path: str, minimum: int) -> int:
    if key not in doc:
        raise ConfigError(f"{path}.{key}", "missing required field")
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
        raise ConfigError(f"{path}.{key}", f"expected an integer >= {minimum}, got {v!r}")
    return v


def _labels(doc: dict, path: str, count: int | None) -> list[str] | None:
    labs = doc.get("labels")
    if labs is None:
        return None
    if not isinstance(labs, list) or not all(isinstance(s, str) and s and " " not in s for s in labs):
        raise ConfigError(f"{path}.labels", "expected a list of non-empty strings without spaces")
    if count is not None and len(labs) != count:
        raise ConfigError(f"{path}.labels", f"expected {count} labels, got {len(labs)}")
    return labs


def build_group(doc: Any, path: str = "$") -> Group:
    if not isinstance(doc, dict):
        raise ConfigError(path, "expected an object")
    kind = doc.get("kind")
    if kind not in _FIELDS:
        raise ConfigError(f"{path}.kind", f"unknown kind {kind!r}; expected one of {sorted(_FIELDS)}")
    extra = set(doc) - _FIELDS[kind]
    if extra:
        raise ConfigError(f"{path}.{sorted(extra)[0]}", f"unexpected field for kind {kind!r}")
    name = doc.get("name")
    try:
        if kind == "free":
            rank = _int(doc, "rank", path, 1)
            return FreeGroup(rank, _labels(doc, path, rank), name)
        if kind == "abelian":
            rank = _int(doc, "rank", path, 0)
            torsion = doc.get("torsion", [])
            if not isinstance(torsion, list) or not all(isinstance(m, int) and m >= 2 for m in torsion):
                raise ConfigError(f"{path}.torsion", "expected a list of integers >= 2")
            if rank + len(torsion) == 0:
                raise ConfigError(path, "abelian group needs rank or torsion")
            return AbelianGroup(rank, torsion, _labels(doc, path, rank + len(torsion)), name=name)
        if kind == "heisenberg":
            labs = _labels(doc, path, 2)
            return HeisenbergGroup(labs or ("x", "y"), name or "H3")
        if kind == "matrix":
            gens = doc.get("generators")
            if not isinstance(gens, list) or not gens:
                raise ConfigError(f"{path}.generators", "expected a non-empty list of matrices")
            for i, m in enumerate(gens):
                if not (isinstance(m, list) and m and all(isinstance(r, list) for r in m)
                        and all(isinstance(v, int) for r in m for v in r)):
                    raise ConfigError(f"{path}.generators[{i}]", "expected a square integer matrix")
            return MatrixGroup(gens, _labels(doc, path, len(gens)), name)
        factors = doc.get("factors")
        if not isinstance(factors, list) or not factors:
            raise ConfigError(f"{path}.factors", "expected a non-empty list of groups")
        built = [build_group(f, f"{path}.factors[{i}]") for i, f in enumerate(factors)]
        cls = DirectProduct if kind == "direct_product" else FreeProduct
        return cls(built, name)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def parse_group_config(text: str | dict) -> Group:
    """Build a realization from a JSON group document (text or parsed)."""
    if isinstance(text, str):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("$", f"invalid JSON: {exc}") from None
    else:
        doc = text
    return build_group(doc)


@dataclass
class RunConfig:
    """Everything needed to reproduce an output: the command, the group
    document, every parameter (defaults included) and the argv to re-run."""

    command: str
    group_file: str
    group: dict
    params: dict
    output_format: str
    argv: list = field(default_factory=list)

    def __post_init__(self):
        for k, v in self.params.items():
            if k in ("radius", "steps", "n_max", "conj_budget") and v is not None and v < 0:
                raise ConfigError(f"params.{k}", "must be >= 0")
            if k in ("budget", "samples") and v is not None and v <= 0:
                raise ConfigError(f"params.{k}", "must be positive")

    def to_dict(self) -> dict:
        return {"command": self.command, "group_file": self.group_file, "group": self.group,
                "params": self.params, "output_format": self.output_format, "argv": self.argv}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
