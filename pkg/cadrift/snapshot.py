"""
Grid snapshots: dump a CURIE grid to JSON lines and render it as text.

The first line is a header (geometry, limits, clock, detection settings and
the trigger of the detection the snapshot was taken at, if any); every
other line describes one cell.
"""
import json
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from pydantic import Field, ValidationError, model_validator

from cadrift.exceptions import NotPreparedError, SnapshotFormatError
from cadrift.grid import UNASSIGNED, Grid
from cadrift.pydantic.models import BaseModel

PathLike = Union[str, Path]

GLYPHS = "0123456789"
UNASSIGNED_GLYPH = "."


class TriggerRecord(BaseModel):
    t: int
    cell: List[int]
    mutant_neighbors: List[Tuple[List[int], int]] = Field(default_factory=list)


class SnapshotHeader(BaseModel):
    kind: str = "header"
    d: int = Field(ge=1)
    bins_per_dim: int = Field(ge=2)
    levels: Optional[List[Optional[int]]] = None
    low: np.ndarray
    high: np.ndarray
    state_alphabet: List[int]
    clock: int = 0
    radius_mut: Optional[int] = None
    mutation_period: Optional[int] = None
    n_muts_allowed: Optional[int] = None
    trigger: Optional[TriggerRecord] = None

    @model_validator(mode="after")
    def check_levels(self) -> "SnapshotHeader":
        if self.levels is not None and len(self.levels) != self.d:
            raise ValueError(f"levels must list {self.d} axes")
        if any(level is not None and level < 2 for level in self.levels or ()):
            raise ValueError("a categorical axis needs at least two levels")
        return self

    @property
    def shape(self) -> Tuple[int, ...]:
        levels = self.levels or [None] * self.d
        return tuple(self.bins_per_dim if level is None else level for level in levels)


class CellRecord(BaseModel):
    kind: str = "cell"
    coords: List[int]
    state: Optional[int]
    hits: List[int] = Field(default_factory=list)
    last_mutation: Optional[int] = None
    mutations: List[int] = Field(default_factory=list)


class Snapshot(BaseModel):
    header: SnapshotHeader
    cells: List[CellRecord]

    def state_array(self) -> np.ndarray:
        states = np.full(self.header.shape, UNASSIGNED, dtype=np.int64)
        for cell in self.cells:
            states[tuple(cell.coords)] = UNASSIGNED if cell.state is None else cell.state
        return states

    def recent_mutations(self) -> List[CellRecord]:
        """Cells whose last mutation falls inside the mutation period before the clock."""
        period = self.header.mutation_period
        clock = self.header.clock
        recent = [
            cell
            for cell in self.cells
            if cell.last_mutation is not None
            and (period is None or clock - period < cell.last_mutation <= clock)
        ]
        return sorted(recent, key=lambda cell: (cell.last_mutation, cell.coords))


def grid_snapshot(grid: Grid, clock: int = 0, **detection) -> Snapshot:
    header = SnapshotHeader(
        d=grid.config.d,
        bins_per_dim=grid.config.bins_per_dim,
        levels=None if grid.config.levels is None else list(grid.config.levels),
        low=grid.limits.low,
        high=grid.limits.high,
        state_alphabet=list(grid.config.state_alphabet),
        clock=clock,
        **detection,
    )
    cells = []
    for cell in grid.cells():
        last = int(grid.last_mutation[cell.coords])
        cells.append(
            CellRecord(
                coords=list(cell.coords),
                state=cell.state,
                hits=cell.hit_history,
                last_mutation=None if last == UNASSIGNED else last,
                mutations=cell.mutation_times,
            )
        )
    return Snapshot(header=header, cells=cells)


def detector_snapshot(detector) -> Snapshot:
    if detector.grid is None:
        raise NotPreparedError("cannot snapshot a detector that was never prepared")
    config = detector.config
    trigger = None
    last = detector.last_trigger
    if last is not None and last.t == detector.clock:
        trigger = TriggerRecord(
            t=last.t,
            cell=list(last.cell),
            mutant_neighbors=[(list(c), t) for c, t in last.mutant_neighbors],
        )
    return grid_snapshot(
        detector.grid,
        clock=detector.clock,
        radius_mut=config.radius_mut,
        mutation_period=config.mutation_period,
        n_muts_allowed=config.n_muts_allowed,
        trigger=trigger,
    )


def write_snapshot(snapshot: Snapshot, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as handle:
        handle.write(snapshot.header.model_dump_json() + "\n")
        for cell in snapshot.cells:
            handle.write(cell.model_dump_json() + "\n")
    return path


def _parse_line(path: Path, number: int, text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SnapshotFormatError(path, number, f"invalid JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise SnapshotFormatError(path, number, "expected a JSON object")
    return data


def _validation_message(exc: ValidationError) -> str:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first["loc"])
    return f"{location}: {first['msg']}" if location else first["msg"]


def read_snapshot(path: PathLike) -> Snapshot:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise SnapshotFormatError(path, 1, "empty snapshot")
    header_data = _parse_line(path, 1, lines[0])
    if header_data.get("kind") != "header":
        raise SnapshotFormatError(path, 1, "the first line must be the snapshot header")
    try:
        header = SnapshotHeader.validate_python(header_data)
    except ValidationError as exc:
        raise SnapshotFormatError(path, 1, _validation_message(exc)) from exc

    cells = []
    seen: Dict[Tuple[int, ...], int] = {}
    for number, text in enumerate(lines[1:], start=2):
        if not text.strip():
            continue
        data = _parse_line(path, number, text)
        try:
            cell = CellRecord.validate_python(data)
        except ValidationError as exc:
            raise SnapshotFormatError(path, number, _validation_message(exc)) from exc
        coords = tuple(cell.coords)
        if len(coords) != header.d or not all(0 <= c < b for c, b in zip(coords, header.shape)):
            raise SnapshotFormatError(path, number, f"cell {list(coords)} is outside the grid")
        if coords in seen:
            raise SnapshotFormatError(
                path, number, f"cell {list(coords)} already described on line {seen[coords]}"
            )
        seen[coords] = number
        cells.append(cell)
    return Snapshot(header=header, cells=cells)


def _glyph(state: int) -> str:
    if state == UNASSIGNED:
        return UNASSIGNED_GLYPH
    return GLYPHS[state] if 0 <= state < len(GLYPHS) else "#"


def _render_plane(plane: np.ndarray) -> List[str]:
    if plane.ndim == 1:
        return ["".join(_glyph(int(s)) for s in plane)]
    return ["".join(_glyph(int(s)) for s in row) for row in plane]


def _slices(shape: Tuple[int, ...]) -> Iterable[Tuple[int, ...]]:
    if len(shape) <= 2:
        yield ()
        return
    yield from np.ndindex(*shape[2:])


def render_snapshot(snapshot: Snapshot) -> str:
    """
    Text report: the states of every 2-D slice (rows follow the first
    dimension, columns the second), then the trigger and recent mutations.
    """
    header = snapshot.header
    states = snapshot.state_array()
    geometry = f"{header.d} dims x {header.bins_per_dim} bins"
    if header.levels is not None:
        geometry += f" (shape {'x'.join(str(b) for b in header.shape)})"
    lines = [
        f"grid: {geometry}, clock t={header.clock}",
        "limits: "
        + ", ".join(f"[{lo:.6g}, {hi:.6g}]" for lo, hi in zip(header.low, header.high)),
    ]
    for rest in _slices(header.shape):
        if rest:
            lines.append(f"slice {list(int(r) for r in rest)}:")
        plane = states[(slice(None), slice(None)) + tuple(rest)] if rest else states
        lines.extend(_render_plane(plane))

    trigger = header.trigger
    if trigger is not None:
        lines.append("")
        lines.append(f"drift at t={trigger.t} in cell {trigger.cell}")
        for coords, t in trigger.mutant_neighbors:
            lines.append(f"  mutant neighbour {coords} mutated at t={t}")

    lines.append("")
    recent = snapshot.recent_mutations()
    if not recent:
        lines.append("no recent mutations")
    else:
        lines.append("recent mutations:")
        flagged = set()
        if trigger is not None:
            flagged.add(tuple(trigger.cell))
            flagged.update(tuple(coords) for coords, _ in trigger.mutant_neighbors)
        for cell in recent:
            mark = " *" if tuple(cell.coords) in flagged else ""
            lines.append(
                f"  {cell.coords} state={_glyph(UNASSIGNED if cell.state is None else cell.state)}"
                f" last t={cell.last_mutation} log={cell.mutations}{mark}"
            )
    return "\n".join(lines) + "\n"
