import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holorisk.errors import ValidationError
from holorisk.life import (
    LifeGrid,
    format_grid,
    grid_to_dict,
    life_step,
    parse_grid,
    run_life,
)

GLIDER = "010\n001\n111"


def brute_force_step(grid: LifeGrid) -> LifeGrid:
    """Independent oracle: full-board scan with explicit neighbor counting."""
    nxt = set()
    for y in range(grid.height):
        for x in range(grid.width):
            n = 0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    if dx == 0 and dy == 0:
                        continue
                    if (x + dx, y + dy) in grid.alive:
                        n += 1
            if n == 3 or (n == 2 and (x, y) in grid.alive):
                nxt.add((x, y))
    return LifeGrid(grid.width, grid.height, frozenset(nxt))


def test_block_is_fixed_point():
    block = parse_grid("0000\n0110\n0110\n0000")
    assert life_step(block).alive == block.alive


def test_blinker_has_period_two():
    blinker = parse_grid("00000\n00000\n01110\n00000\n00000")
    frames = run_life(blinker, 4)
    assert frames[1].alive != frames[0].alive
    assert frames[2].alive == frames[0].alive
    assert frames[4].alive == frames[0].alive
    assert all(f.population == 3 for f in frames)


def test_glider_translates_one_cell_per_four_steps():
    base = parse_grid(GLIDER)
    grid = LifeGrid(12, 12, frozenset(base.alive))
    frames = run_life(grid, 8)
    shifted_once = {(x + 1, y + 1) for x, y in grid.alive}
    shifted_twice = {(x + 2, y + 2) for x, y in grid.alive}
    assert frames[4].alive == frozenset(shifted_once)
    assert frames[8].alive == frozenset(shifted_twice)
    assert all(f.population == 5 for f in frames)


def test_empty_grid_stays_empty():
    grid = LifeGrid(6, 6)
    assert life_step(grid).alive == frozenset()
    assert grid.population == 0


def test_lone_cells_die():
    grid = parse_grid("100\n000\n001")
    assert life_step(grid).population == 0


def test_border_is_dead():
    # a blinker jammed against the edge loses its off-board neighbor support
    corner_block = parse_grid("110\n110\n000")
    assert life_step(corner_block).alive == corner_block.alive
    edge_row = parse_grid("111\n000\n000")
    stepped = life_step(edge_row)
    assert stepped.alive == frozenset({(1, 0), (1, 1)})


def test_matches_brute_force_oracle_on_random_grids():
    rng = np.random.default_rng(2024)
    for _ in range(10):
        mask = rng.random((16, 16)) < 0.35
        alive = frozenset(
            (int(x), int(y)) for y in range(16) for x in range(16) if mask[y, x]
        )
        fast = LifeGrid(16, 16, alive)
        slow = LifeGrid(16, 16, alive)
        for _ in range(50):
            fast = life_step(fast)
            slow = brute_force_step(slow)
            assert fast.alive == slow.alive


def test_parse_format_round_trip_examples():
    text = "010\n001\n111"
    assert format_grid(parse_grid(text)) == text


@given(
    width=st.integers(min_value=1, max_value=12),
    height=st.integers(min_value=1, max_value=12),
    bits=st.integers(min_value=0),
)
@settings(max_examples=60, deadline=None)
def test_parse_format_round_trip_property(width, height, bits):
    alive = frozenset(
        (x, y)
        for y in range(height)
        for x in range(width)
        if (bits >> (y * width + x)) & 1
    )
    grid = LifeGrid(width, height, alive)
    assert parse_grid(format_grid(grid)).alive == grid.alive


def test_parse_validation():
    with pytest.raises(ValidationError):
        parse_grid("")
    with pytest.raises(ValidationError):
        parse_grid("01\n011")
    with pytest.raises(ValidationError):
        parse_grid("0x\n00")


def test_grid_validation():
    with pytest.raises(ValidationError):
        LifeGrid(0, 3)
    with pytest.raises(ValidationError):
        LifeGrid(3, 3, frozenset({(5, 1)}))


def test_run_life_validation():
    with pytest.raises(ValidationError):
        run_life(LifeGrid(3, 3), -1)


def test_grid_to_dict():
    grid = parse_grid("10\n01")
    payload = grid_to_dict(grid)
    assert payload == {
        "width": 2,
        "height": 2,
        "alive": [(0, 0), (1, 1)],
        "population": 2,
    }
