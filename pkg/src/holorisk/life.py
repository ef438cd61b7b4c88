"""Conway's Game of Life on a bounded grid with a dead border.

Cells are (x, y) pairs with x the column and y the row. The text format
is one line per row of '0'/'1' characters, row 0 first.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import ValidationError

_NEIGHBOR_OFFSETS = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)]


@dataclass(frozen=True)
class LifeGrid:
    width: int
    height: int
    alive: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValidationError("grid dimensions must be >= 1", detail="width/height")
        cells = frozenset((int(x), int(y)) for x, y in self.alive)
        for x, y in cells:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise ValidationError(f"cell ({x}, {y}) out of bounds", detail="alive")
        object.__setattr__(self, "alive", cells)

    @property
    def population(self) -> int:
        return len(self.alive)


def life_step(grid: LifeGrid) -> LifeGrid:
    """One synchronous update: birth on 3 neighbors, survival on 2 or 3.

    Cells outside the grid are permanently dead (no wraparound).
    """
    counts: Counter[tuple[int, int]] = Counter()
    for x, y in grid.alive:
        for dx, dy in _NEIGHBOR_OFFSETS:
            nx, ny = x + dx, y + dy
            if 0 <= nx < grid.width and 0 <= ny < grid.height:
                counts[(nx, ny)] += 1
    nxt = frozenset(
        cell
        for cell, n in counts.items()
        if n == 3 or (n == 2 and cell in grid.alive)
    )
    return LifeGrid(grid.width, grid.height, nxt)


def run_life(grid: LifeGrid, steps: int) -> list[LifeGrid]:
    """Iterated life_step; returns steps+1 grids starting with the input."""
    if steps < 0:
        raise ValidationError("steps must be >= 0", detail="steps")
    frames = [grid]
    for _ in range(steps):
        frames.append(life_step(frames[-1]))
    return frames


def parse_grid(text: str) -> LifeGrid:
    """Parse the plain-text format: rows of '0'/'1', row 0 first."""
    rows = [line for line in text.strip().splitlines() if line.strip()]
    if not rows:
        raise ValidationError("empty grid text")
    width = len(rows[0])
    alive = set()
    for y, line in enumerate(rows):
        line = line.strip()
        if len(line) != width:
            raise ValidationError(f"row {y} has length {len(line)}, expected {width}")
        for x, ch in enumerate(line):
            if ch == "1":
                alive.add((x, y))
            elif ch != "0":
                raise ValidationError(f"invalid character {ch!r} at row {y}", detail="grid")
    return LifeGrid(width, len(rows), frozenset(alive))


def format_grid(grid: LifeGrid) -> str:
    lines = []
    for y in range(grid.height):
        lines.append("".join("1" if (x, y) in grid.alive else "0" for x in range(grid.width)))
    return "\n".join(lines)


def grid_to_dict(grid: LifeGrid) -> dict:
    return {
        "width": grid.width,
        "height": grid.height,
        "alive": sorted(grid.alive),
        "population": grid.population,
    }
