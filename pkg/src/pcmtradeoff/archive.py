"""Solution archive, Pareto filtering and their CSV form."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .metrics import MappingMetrics

ARCHIVE_COLUMNS = (
    "mapping_id",
    "fitness_kind",
    "policy",
    "exec_time_s",
    "min_lifetime",
    "energy_j",
    "interconnect_spikes",
    "iteration",
    "seed",
    "assignment",
)


@dataclass(frozen=True)
class ArchiveEntry:
    mapping_id: int
    fitness_kind: str
    policy: str
    iteration: int
    seed: int
    assignment: tuple[int, ...]
    metrics: MappingMetrics

    @property
    def exec_time(self) -> float:
        return self.metrics.execution_time

    @property
    def lifetime(self) -> float:
        return self.metrics.min_effective_lifetime

    @property
    def descriptor(self) -> str:
        return f"{self.policy}:{'-'.join(map(str, self.assignment))}"

    def row(self) -> list[str]:
        m = self.metrics
        return [
            str(self.mapping_id),
            self.fitness_kind,
            self.policy,
            repr(m.execution_time),
            repr(m.min_effective_lifetime),
            repr(m.energy),
            str(m.interconnect_spikes),
            str(self.iteration),
            str(self.seed),
            "-".join(map(str, self.assignment)),
        ]

    @classmethod
    def from_row(cls, row: dict) -> "ArchiveEntry":
        assignment = tuple(int(x) for x in row["assignment"].split("-")) if row["assignment"] else ()
        return cls(
            mapping_id=int(row["mapping_id"]),
            fitness_kind=row["fitness_kind"],
            policy=row["policy"],
            iteration=int(row["iteration"]),
            seed=int(row["seed"]),
            assignment=assignment,
            metrics=MappingMetrics(
                min_effective_lifetime=float(row["min_lifetime"]),
                execution_time=float(row["exec_time_s"]),
                energy=float(row["energy_j"]),
                interconnect_spikes=int(row["interconnect_spikes"]),
            ),
        )


class SolutionArchive:
    """Append-only record of every evaluated candidate."""

    def __init__(self, entries=()):
        self._entries: list[ArchiveEntry] = list(entries)

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __getitem__(self, i):
        return self._entries[i]

    def append(self, fitness_kind, policy, iteration, seed, assignment, metrics) -> ArchiveEntry:
        e = ArchiveEntry(len(self._entries), fitness_kind, policy, iteration, seed, tuple(assignment), metrics)
        self._entries.append(e)
        return e

    def extend(self, other: "SolutionArchive") -> None:
        """Merge ``other``, renumbering its ids to continue this archive's sequence."""
        for e in other:
            self.append(e.fitness_kind, e.policy, e.iteration, e.seed, e.assignment, e.metrics)

    def select(self, fitness_kind=None, policy=None) -> list[ArchiveEntry]:
        return [
            e
            for e in self._entries
            if (fitness_kind is None or e.fitness_kind == fitness_kind) and (policy is None or e.policy == policy)
        ]


def dominates(a: ArchiveEntry, b: ArchiveEntry) -> bool:
    """``a`` is no slower and no shorter-lived than ``b``, and strictly better in one."""
    return (
        a.exec_time <= b.exec_time
        and a.lifetime >= b.lifetime
        and (a.exec_time < b.exec_time or a.lifetime > b.lifetime)
    )


def pareto_front(archive) -> list[ArchiveEntry]:
    """Non-dominated entries in (execution time down, lifetime up), sorted by time.

    Entries with identical metrics collapse onto the lowest mapping id.
    """
    entries = list(archive)
    if not entries:
        raise ValueError("cannot take the Pareto front of an empty archive")
    entries.sort(key=lambda e: (e.exec_time, -e.lifetime, e.mapping_id))
    front = []
    best_life = -float("inf")
    for e in entries:
        if e.lifetime > best_life:
            front.append(e)
            best_life = e.lifetime
    return front


def _write(entries, path, stamp: bool) -> None:
    buf = io.StringIO()
    if stamp:
        buf.write(f"# generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ARCHIVE_COLUMNS)
    for e in entries:
        w.writerow(e.row())
    Path(path).write_text(buf.getvalue())


def write_archive_csv(archive, path, stamp: bool = True) -> None:
    """Write entries as CSV; the optional first line is a ``#`` timestamp comment."""
    _write(archive, path, stamp)


def read_archive_csv(path) -> SolutionArchive:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    missing = set(ARCHIVE_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"{path}: missing archive columns {sorted(missing)}")
    return SolutionArchive(ArchiveEntry.from_row(r) for r in reader)
