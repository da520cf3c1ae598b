"""CNF encodings of the L-grid, van der Square and van der Cube problems.

Elements are numbered row-major from 0 internally.  Public functions take
1-based points ``(i, j)`` for grids and 1-based integers for sequences.
Variable ``var_id(spec, e, k)`` is true iff element ``e`` gets color ``k``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence, Union

from .cnf import Assignment, Formula

Element = Union[int, tuple[int, int]]
Pattern = tuple  # tuple of 2 or 3 elements that must not be monochromatic


class Kind(str, enum.Enum):
    L = "L"
    VDS = "VDS"
    VDC = "VDC"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ProblemSpec:
    kind: Kind
    n: int
    c: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.n < 1 or self.c < 1:
            raise ValueError(f"n and c must be positive, got n={self.n}, c={self.c}")

    @property
    def is_grid(self) -> bool:
        return self.kind is Kind.L

    @property
    def num_elements(self) -> int:
        return self.n * self.n if self.is_grid else self.n

    @property
    def num_vars(self) -> int:
        return self.num_elements * self.c

    def element_index(self, element: Element) -> int:
        """0-based flat index of a 1-based point or integer."""
        if self.is_grid:
            i, j = element
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"point {element} outside {self.n}x{self.n} grid")
            return (i - 1) * self.n + (j - 1)
        if isinstance(element, tuple) or not 1 <= element <= self.n:
            raise ValueError(f"element {element} outside [1, {self.n}]")
        return element - 1

    def element_label(self, index: int) -> Element:
        if self.is_grid:
            return (index // self.n + 1, index % self.n + 1)
        return index + 1

    def __str__(self) -> str:
        return f"{self.kind} n={self.n} c={self.c}"


@dataclass(frozen=True)
class Coloring:
    """A color (1..c) per element; grids are stored row-major."""

    spec: ProblemSpec
    colors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(int(x) for x in self.colors))
        if len(self.colors) != self.spec.num_elements:
            raise ValueError(
                f"expected {self.spec.num_elements} colors, got {len(self.colors)}"
            )
        for idx, col in enumerate(self.colors):
            if not 1 <= col <= self.spec.c:
                raise ValueError(
                    f"color {col} at element {self.spec.element_label(idx)} not in 1..{self.spec.c}"
                )

    @classmethod
    def from_rows(cls, spec: ProblemSpec, rows: Sequence[Sequence[int]]) -> "Coloring":
        if len(rows) != spec.n or any(len(r) != spec.n for r in rows):
            raise ValueError(f"grid must be {spec.n}x{spec.n}")
        return cls(spec, tuple(itertools.chain.from_iterable(rows)))

    @property
    def rows(self) -> list[list[int]]:
        if not self.spec.is_grid:
            return [list(self.colors)]
        n = self.spec.n
        return [list(self.colors[r * n:(r + 1) * n]) for r in range(n)]

    def __getitem__(self, element: Element) -> int:
        return self.colors[self.spec.element_index(element)]

    def restrict(self, n: int) -> "Coloring":
        """Prefix (sequences) or top-left subgrid (grids) of side ``n``.

        Any forbidden pattern inside the restriction is also one of the
        original, so certificates restrict downward.
        """
        spec = ProblemSpec(self.spec.kind, n, self.spec.c)
        if n > self.spec.n:
            raise ValueError("cannot restrict to a larger instance")
        if self.spec.is_grid:
            return Coloring.from_rows(spec, [r[:n] for r in self.rows[:n]])
        return Coloring(spec, self.colors[:n])


def var_id(spec: ProblemSpec, element: Element, color: int) -> int:
    if not 1 <= color <= spec.c:
        raise ValueError(f"color {color} not in 1..{spec.c}")
    return spec.element_index(element) * spec.c + color


def _distances(kind: Kind, n: int) -> list[int]:
    power = 2 if kind is Kind.VDS else 3
    out = []
    k = 1
    while k**power <= n - 1:
        out.append(k**power)
        k += 1
    return out


def enumerate_patterns(spec: ProblemSpec) -> list[Pattern]:
    """Every forbidden configuration, ordered by (t, i, j) or (k, a)."""
    n = spec.n
    if spec.is_grid:
        return [
            ((i, j), (i, j + t), (i + t, j + t))
            for t in range(1, n)
            for i in range(1, n - t + 1)
            for j in range(1, n - t + 1)
        ]
    return [(a, a + d) for d in _distances(spec.kind, n) for a in range(1, n - d + 1)]


def pattern_indices(spec: ProblemSpec) -> list[tuple[int, ...]]:
    """Patterns as tuples of 0-based element indices."""
    return [tuple(spec.element_index(e) for e in p) for p in enumerate_patterns(spec)]


def encode(spec: ProblemSpec) -> Formula:
    """Exactly-one color per element, then one clause per (pattern, color).

    The at-most-one part uses pairwise binary clauses.
    """
    c = spec.c
    clauses: list[tuple[int, ...]] = []
    for e in range(spec.num_elements):
        base = e * c
        clauses.append(tuple(base + k for k in range(1, c + 1)))
        for k, l in itertools.combinations(range(1, c + 1), 2):
            clauses.append((-(base + k), -(base + l)))
    for pat in pattern_indices(spec):
        for k in range(1, c + 1):
            clauses.append(tuple(-(e * c + k) for e in pat))
    return Formula(spec.num_vars, tuple(clauses))


class DecodeError(ValueError):
    def __init__(self, element: Element, true_colors: list[int]):
        self.element = element
        self.true_colors = true_colors
        super().__init__(
            f"element {element} has {len(true_colors)} true color variables {true_colors}"
        )


def decode(spec: ProblemSpec, a: Assignment) -> Coloring:
    c = spec.c
    colors = []
    for e in range(spec.num_elements):
        true_colors = [k for k in range(1, c + 1) if a[e * c + k]]
        if len(true_colors) != 1:
            raise DecodeError(spec.element_label(e), true_colors)
        colors.append(true_colors[0])
    return Coloring(spec, tuple(colors))


def coloring_to_assignment(coloring: Coloring) -> Assignment:
    spec = coloring.spec
    a = Assignment(spec.num_vars, [None] + [False] * spec.num_vars)
    for e, col in enumerate(coloring.colors):
        a[e * spec.c + col] = True
    return a
