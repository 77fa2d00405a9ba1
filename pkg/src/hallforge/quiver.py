"""Quivers, dimension vectors and the bilinear forms used by the twists."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import InputError, QuiverMismatch

DimVector = tuple[int, ...]


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[int, int], ...]  # (source index, target index)
    name: str = ""

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex ids")
        n = len(self.vertices)
        for s, t in self.arrows:
            if not (0 <= s < n and 0 <= t < n):
                raise InputError(f"arrow ({s},{t}) references an undeclared vertex")

    @classmethod
    def from_names(cls, vertices: Sequence[str], arrows: Iterable[tuple[str, str]], name: str = "") -> "Quiver":
        pos = {v: i for i, v in enumerate(vertices)}
        try:
            arr = tuple((pos[s], pos[t]) for s, t in arrows)
        except KeyError as exc:
            raise InputError(f"arrow references undeclared vertex {exc.args[0]!r}") from None
        return cls(tuple(vertices), arr, name)

    @classmethod
    def from_json(cls, data: dict | str, name: str = "") -> "Quiver":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise InputError(f"bad quiver json: {exc}") from None
        try:
            vertices = [str(v) for v in data["vertices"]]
            arrows = [(str(a["src"]), str(a["tgt"])) for a in data["arrows"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad quiver json: {exc}") from None
        return cls.from_names(vertices, arrows, name or data.get("name", ""))

    @classmethod
    def load(cls, path: str | Path) -> "Quiver":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(str(exc)) from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: {exc}") from None
        return cls.from_json(data, name=data.get("name", path.stem) if isinstance(data, dict) else path.stem)

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"src": self.vertices[s], "tgt": self.vertices[t]} for s, t in self.arrows],
        }

    @property
    def n(self) -> int:
        return len(self.vertices)

    def has_loop(self, i: int) -> bool:
        return any(s == t == i for s, t in self.arrows)

    def arrow_count(self, i: int, j: int) -> int:
        return sum(1 for s, t in self.arrows if s == i and t == j)

    def vertex_index(self, v: str | int) -> int:
        if isinstance(v, int):
            if 0 <= v < self.n:
                return v
            raise InputError(f"vertex index {v} out of range")
        try:
            return self.vertices.index(v)
        except ValueError:
            raise InputError(f"unknown vertex {v!r}") from None

    def unit(self, i: int) -> DimVector:
        return tuple(1 if k == i else 0 for k in range(self.n))

    def zero(self) -> DimVector:
        return (0,) * self.n

    def check(self, *dims: Sequence[int]) -> None:
        for d in dims:
            if len(d) != self.n:
                raise QuiverMismatch(f"dimension vector {tuple(d)} has wrong length for {self.n} vertices")
            if any(x < 0 for x in d):
                raise InputError(f"negative dimension vector {tuple(d)}")

    def label(self) -> str:
        return self.name or "quiver"


def euler_form(quiver: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    quiver.check(a, b)
    return sum(x * y for x, y in zip(a, b)) - sum(a[s] * b[t] for s, t in quiver.arrows)


def twist_form(quiver: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    quiver.check(a, b)
    return sum(x * y for x, y in zip(a, b)) + sum(a[s] * b[t] for s, t in quiver.arrows)


def symmetric_form(quiver: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    return euler_form(quiver, a, b) + euler_form(quiver, b, a)


def inner(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def space_dims(quiver: Quiver, alpha: Sequence[int]) -> tuple[int, int]:
    """``(dim E_alpha, dim G_alpha)``."""
    quiver.check(alpha)
    return (
        sum(alpha[s] * alpha[t] for s, t in quiver.arrows),
        sum(x * x for x in alpha),
    )


def add(a: Sequence[int], b: Sequence[int]) -> DimVector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> DimVector:
    return tuple(x - y for x, y in zip(a, b))


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def below(alpha: Sequence[int]) -> Iterator[DimVector]:
    """All dimension vectors componentwise <= alpha, in lexicographic order."""
    return product(*(range(x + 1) for x in alpha))


def with_total(n_vertices: int, total: int) -> Iterator[DimVector]:
    """Dimension vectors with exactly the given total, lexicographic order."""
    if n_vertices == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in with_total(n_vertices - 1, total - first):
            yield (first,) + rest


def up_to_total(n_vertices: int, total: int) -> list[DimVector]:
    out = []
    for t in range(total + 1):
        out.extend(sorted(with_total(n_vertices, t)))
    return out


def parse_dim(text: str) -> DimVector:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise InputError(f"bad dimension vector {text!r}") from None


def fmt_dim(alpha: Sequence[int]) -> str:
    return ",".join(str(x) for x in alpha)


# Frequently used small quivers.

def a2() -> Quiver:
    return Quiver(("1", "2"), ((0, 1),), "A2")


def a3() -> Quiver:
    return Quiver(("1", "2", "3"), ((0, 1), (1, 2)), "A3")


def jordan() -> Quiver:
    return Quiver(("1",), ((0, 0),), "Jordan")


def kronecker() -> Quiver:
    return Quiver(("1", "2"), ((0, 1), (0, 1)), "Kronecker")


BUILTIN = {"A2": a2, "A3": a3, "Jordan": jordan, "Kronecker": kronecker}


def builtin(name: str) -> Quiver:
    for key, make in BUILTIN.items():
        if key.lower() == name.lower():
            return make()
    raise InputError(f"unknown builtin quiver {name!r}")
