"""Belief revision with dependency tracking.

The tracker wraps the engine: queries run through it, and it remembers,
for every derived conclusion, the set of stored atoms and rule/case
identifiers the answer rests on.  When evidence changes it invalidates
exactly the conclusions whose support set contains the updated atom,
drops the affected memoized sub-results, and recomputes lazily.

The defining contract: after any sequence of updates, recomputed
intervals are identical to what discarding all state and re-proving
from scratch would give.  Everything here is an optimisation around
that equality, never a change to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .calculus import CertaintyInterval, ConflictPolicy
from .engine import ProofNode, QueryConfig, QueryResult, QuerySession
from .knowledge import Atom, KnowledgeBase, World, assert_evidence

__all__ = ["DependencyRecord", "DependencyTracker"]

Supporter = Union[Atom, str]


@dataclass(slots=True)
class DependencyRecord:
    """One tracked conclusion and what it currently rests on.

    supporters holds every stored atom whose value the derivation read
    (facts, context atoms, unknown lookups) plus the identifiers of the
    rules, cases, and precedent links that shaped it.  epoch is the
    world epoch the cached interval was computed at.
    """

    conclusion: Atom
    supporters: frozenset[Supporter]
    cached: CertaintyInterval
    epoch: int


def _record_sites(proof: ProofNode) -> Iterable[ProofNode]:
    """The proof's root plus every nested aggregation node."""
    yield proof
    stack = list(proof.children)
    while stack:
        node = stack.pop()
        if node.kind == "aggregation":
            yield node
        stack.extend(node.children)


class DependencyTracker:
    """Incremental re-reasoning over one knowledge base and world."""

    def __init__(
        self,
        kb: KnowledgeBase,
        world: World,
        config: QueryConfig | None = None,
    ):
        self.kb = kb
        self.world = world
        self.config = config or QueryConfig()
        self.records: dict[Atom, DependencyRecord] = {}
        self._memo: dict = {}
        self._deps: dict = {}
        self._stale: set[Atom] = set()

    def _session(self) -> QuerySession:
        return QuerySession(
            self.kb, self.world, self.config, memo=self._memo, deps=self._deps
        )

    def query(self, goal: Atom) -> QueryResult:
        """Prove a goal and start tracking it (and its derived sub-goals)."""
        result = self._session().prove(goal)
        self.track(result)
        self._stale.discard(result.goal)
        return result

    def track(self, result: QueryResult) -> list[DependencyRecord]:
        """Create or refresh records for every derived site in a proof.

        A record that would come out identical (same interval, same
        supporters) is left alone, so untouched conclusions keep their
        epoch across other conclusions' recomputation.
        """
        touched = []
        for node in _record_sites(result.proof):
            atom = node.goal
            supporters = self._closure(atom)
            old = self.records.get(atom)
            if old is not None and old.cached == node.result and old.supporters == supporters:
                continue
            record = DependencyRecord(atom, supporters, node.result, self.world.epoch)
            self.records[atom] = record
            touched.append(record)
        return touched

    def on_update(
        self,
        atom: Atom,
        interval: CertaintyInterval,
        source: str,
    ) -> set[Atom]:
        """Apply new evidence and report which conclusions it unsettles.

        An update that does not move the fact's effective interval is a
        complete no-op: nothing is invalidated, no epoch advances.  The
        returned atoms stay stale (their records keep the old interval)
        until ``recompute`` or a fresh ``query`` refreshes them.
        """
        changed = assert_evidence(
            self.world, atom, interval, source, self.config.conflict_policy
        )
        if not changed:
            return set()
        # Closures must all be computed before any purging mutates _deps.
        doomed = [g for g in self._memo if atom in self._closure(g)]
        for g in doomed:
            self._memo.pop(g, None)
            self._deps.pop(g, None)
        invalidated = {
            goal for goal, record in self.records.items() if atom in record.supporters
        }
        self._stale |= invalidated
        return invalidated

    def recompute(self, invalidated: Iterable[Atom] | None = None) -> dict[Atom, CertaintyInterval]:
        """Re-prove stale conclusions, reusing every surviving sub-result."""
        targets = set(invalidated) if invalidated is not None else set(self._stale)
        refreshed: dict[Atom, CertaintyInterval] = {}
        for atom in sorted(targets, key=str):
            result = self._session().prove(atom)
            self.track(result)
            refreshed[atom] = result.interval
        self._stale -= targets
        return refreshed

    def stale(self) -> frozenset[Atom]:
        """Tracked conclusions invalidated and not yet recomputed."""
        return frozenset(self._stale)

    def _closure(self, atom: Atom) -> frozenset[Supporter]:
        """All atoms read and identifiers used under one sub-goal."""
        out: set[Supporter] = set()
        seen: set[Atom] = set()
        stack = [atom]
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            deps = self._deps.get(current)
            if deps is None:
                continue
            out |= deps.atoms
            out |= deps.identifiers
            stack.extend(deps.subgoals)
        return frozenset(out)
