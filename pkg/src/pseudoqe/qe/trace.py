"""Rewrite traces for the rank-descent loop."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import List, Tuple

from ..syntax import Formula, fmt_rank, render

Rank = Tuple[float, float]


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    anchor: str  # the fact the rewrite relies on, in words
    before: Formula
    after: Formula
    rank_before: Rank
    rank_after: Rank

    def row(self) -> str:
        return (f"{self.rule:<14} {fmt_rank(self.rank_before)} -> {fmt_rank(self.rank_after)}  "
                f"{render(self.before)}  ==>  {render(self.after)}")


@dataclass
class RewriteTrace:
    entries: List[TraceEntry] = field(default_factory=list)

    def add(self, entry: TraceEntry) -> None:
        self.entries.append(entry)

    def descending(self) -> bool:
        return all(e.rank_after < e.rank_before for e in self.entries)

    def digest(self) -> str:
        h = hashlib.sha256()
        for e in self.entries:
            h.update(e.row().encode())
        return h.hexdigest()[:16]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)
