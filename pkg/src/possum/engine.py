"""Backward and forward inference over certainty intervals.

A query walks rule and precedent support for a goal depth-first,
evaluates premises as sub-goals, detaches each support path through its
rule's strength, aggregates the parallel paths, and reconciles the
result with any stored evidence about the goal itself.  Every step is
kept as a proof node so answers can be explained, and every sub-goal
records which stored atoms it read so belief revision can later
invalidate exactly what an update touches.

Context screening is the cheap gate in front of all of this: a rule
with a context only participates when the world's stored values for the
context atoms clear the activation threshold.  Screening reads, it
never proves; an expensive derivation chain cannot hide inside a
context check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .calculus import (
    CertaintyInterval,
    ConflictPolicy,
    TNormFamily,
    TOTAL_IGNORANCE,
    aggregate,
    antecedent_eval,
    consensus,
    detach,
)
from .cbr import format_path, precedent_support
from .errors import DepthExceededError, UnboundRoleError
from .knowledge import (
    Atom,
    KnowledgeBase,
    World,
    assert_evidence,
    derivation_order,
    lookup,
    predicate_dependencies,
    substitute,
)

__all__ = [
    "QueryConfig",
    "ProofNode",
    "QueryResult",
    "GoalDependencies",
    "QuerySession",
    "screen",
    "prove",
    "forward_saturate",
    "explain",
    "proof_to_dict",
    "result_to_dict",
]

Asker = Callable[[Atom], Optional[CertaintyInterval]]


@dataclass(slots=True)
class QueryConfig:
    """Knobs for one query run.

    ``context_threshold`` is the activation level a rule's context must
    reach; ``conflict_policy`` decides whether inverted intervals raise
    or degrade to ignorance; ``interactive`` allows prompting for
    askable facts; ``max_depth`` bounds recursion as a last-resort
    guard against knowledge bases that slipped past validation.
    """

    context_threshold: float = 0.5
    conflict_policy: ConflictPolicy = ConflictPolicy.STRICT
    interactive: bool = False
    max_depth: int = 64


@dataclass(slots=True)
class ProofNode:
    """One step of a derivation.

    kind is one of ``fact``, ``rule-instance``, ``case-instance``,
    ``precedent``, ``aggregation``.  provenance names the step's origin:
    a rule or case identifier, a taxonomy path, a fact's sources, or the
    aggregation family.  premise_interval and detached_interval are set
    on the instance kinds, where a premise conjunction was pushed
    through a strength.
    """

    goal: Atom
    kind: str
    result: CertaintyInterval
    provenance: str
    premise_interval: CertaintyInterval | None = None
    detached_interval: CertaintyInterval | None = None
    children: tuple["ProofNode", ...] = ()


@dataclass(slots=True)
class GoalDependencies:
    """What one sub-goal's evaluation read.

    atoms: stored atoms looked up (the goal's own fact slot, context
    atoms consulted during screening); subgoals: premises recursed
    into; identifiers: rules, cases, and precedent links that shaped
    the answer.
    """

    atoms: frozenset[Atom]
    subgoals: frozenset[Atom]
    identifiers: frozenset[str]


@dataclass(slots=True)
class QueryResult:
    goal: Atom
    interval: CertaintyInterval
    proof: ProofNode
    diagnostics: list[str]
    dependencies: dict[Atom, GoalDependencies]


@dataclass(slots=True)
class _Frame:
    atoms: set[Atom] = field(default_factory=set)
    subgoals: set[Atom] = field(default_factory=set)
    identifiers: set[str] = field(default_factory=set)


@dataclass(slots=True)
class _Entry:
    interval: CertaintyInterval
    node: ProofNode


def _context_passes(
    context: tuple[Atom, ...],
    world: World,
    config: QueryConfig,
    on_read: Callable[[Atom], None] | None = None,
    on_unbound: Callable[[UnboundRoleError], None] | None = None,
) -> bool:
    """Shared screening gate for rules and case templates.

    The most liberal conjunction (min) grades the joint context so the
    gate fails on the weakest atom alone.  A context the world cannot
    even bind means the rule is about some other situation: inactive.
    """
    if not context:
        return True
    values = []
    for atom in context:
        try:
            ground = substitute(atom, world.roles)
        except UnboundRoleError as err:
            if on_unbound is not None:
                on_unbound(err)
            return False
        if on_read is not None:
            on_read(ground)
        values.append(lookup(world, ground))
    joint = antecedent_eval(TNormFamily.T3, values)
    return joint.lower >= config.context_threshold


def screen(kb: KnowledgeBase, world: World, config: QueryConfig | None = None) -> set[str]:
    """Identifiers of the rules whose context admits this world."""
    config = config or QueryConfig()
    return {
        rule.identifier
        for rule in kb.rules.values()
        if _context_passes(rule.context, world, config)
    }


class QuerySession:
    """One reasoning pass over a fixed knowledge base and world.

    Sub-goal results are memoized within the session, so shared
    premises are proved once.  The memo and dependency dicts can be
    supplied by a caller (the revision tracker does) to persist results
    across sessions; they must then be invalidated on world updates by
    that caller.
    """

    def __init__(
        self,
        kb: KnowledgeBase,
        world: World,
        config: QueryConfig | None = None,
        asker: Asker | None = None,
        *,
        memo: dict[Atom, _Entry] | None = None,
        deps: dict[Atom, GoalDependencies] | None = None,
        use_memo: bool = True,
    ):
        self.kb = kb
        self.world = world
        self.config = config or QueryConfig()
        self.asker = asker
        self.diagnostics: list[str] = []
        self._memo = memo if memo is not None else {}
        self._deps = deps if deps is not None else {}
        self._use_memo = use_memo
        self._asked: set[Atom] = set()
        self._depth = 0

    def prove(self, goal: Atom) -> QueryResult:
        """Evaluate one goal; role variables are bound from the world."""
        goal = substitute(goal, self.world.roles)
        entry = self._evaluate(goal)
        if entry.node.kind == "fact" and entry.node.provenance == "unknown":
            note = f"no support for {goal}: answering with total ignorance"
            if note not in self.diagnostics:
                self.diagnostics.append(note)
        return QueryResult(
            goal=goal,
            interval=entry.interval,
            proof=entry.node,
            diagnostics=list(self.diagnostics),
            dependencies=self._reachable_deps(goal),
        )

    def evaluate(self, atom: Atom) -> CertaintyInterval:
        """Interval for one ground sub-goal (no result wrapper)."""
        return self._evaluate(atom).interval

    # -- internals ---------------------------------------------------

    def _evaluate(self, atom: Atom) -> _Entry:
        if self._use_memo and atom in self._memo:
            return self._memo[atom]
        if self._depth >= self.config.max_depth:
            raise DepthExceededError(
                f"derivation of {atom} exceeded depth {self.config.max_depth}; "
                "the knowledge base is probably cyclic"
            )
        frame = _Frame()
        self._depth += 1
        try:
            entry = self._derive(atom, frame)
        finally:
            self._depth -= 1
        self._deps[atom] = GoalDependencies(
            atoms=frozenset(frame.atoms),
            subgoals=frozenset(frame.subgoals),
            identifiers=frozenset(frame.identifiers),
        )
        if self._use_memo:
            self._memo[atom] = entry
        return entry

    def _derive(self, atom: Atom, frame: _Frame) -> _Entry:
        world = self.world
        config = self.config

        fact = world.facts.get(atom)
        if fact is None and self._may_ask(atom):
            answer = self.asker(atom)
            self._asked.add(atom)
            if answer is not None:
                assert_evidence(world, atom, answer, "user", config.conflict_policy)
                fact = world.facts.get(atom)
        frame.atoms.add(atom)

        paths: list[ProofNode] = []
        families: list[TNormFamily] = []

        for rule in self.kb.rules.values():
            if rule.consequent.predicate != atom.predicate:
                continue
            try:
                consequent = substitute(rule.consequent, world.roles)
            except UnboundRoleError:
                continue
            if consequent != atom:
                continue
            if not _context_passes(
                rule.context,
                world,
                config,
                on_read=frame.atoms.add,
                on_unbound=lambda err, r=rule: self._note(
                    f"rule {r.identifier} inactive: {err}"
                ),
            ):
                continue
            child_nodes = []
            premise_values = []
            for antecedent in rule.antecedents:
                premise = substitute(antecedent, world.roles)
                frame.subgoals.add(premise)
                sub = self._evaluate(premise)
                child_nodes.append(sub.node)
                premise_values.append(sub.interval)
            joint = antecedent_eval(rule.family, premise_values)
            detached = detach(rule.family, rule.sufficiency, rule.necessity, joint)
            frame.identifiers.add(rule.identifier)
            families.append(rule.family)
            paths.append(
                ProofNode(
                    goal=atom,
                    kind="rule-instance",
                    result=detached,
                    provenance=rule.identifier,
                    premise_interval=joint,
                    detached_interval=detached,
                    children=tuple(child_nodes),
                )
            )

        link = self.kb.precedent_links.get(atom.predicate)
        if link is not None:
            local: dict[Atom, _Entry] = {}

            def case_evaluate(a: Atom) -> CertaintyInterval:
                frame.subgoals.add(a)
                entry = self._evaluate(a)
                local[a] = entry
                return entry.interval

            def case_context_fetch(a: Atom) -> CertaintyInterval:
                frame.atoms.add(a)
                return lookup(world, a)

            support = precedent_support(
                self.kb,
                world,
                atom,
                config,
                evaluate=case_evaluate,
                fetch=case_context_fetch,
                diagnostics=self.diagnostics,
            )
            case_nodes = []
            for m in support.matches:
                frame.identifiers.add(m.template.identifier)
                case_nodes.append(
                    ProofNode(
                        goal=atom,
                        kind="case-instance",
                        result=m.relevance,
                        provenance=m.template.identifier,
                        premise_interval=m.match,
                        detached_interval=m.relevance,
                        children=tuple(local[a].node for a in m.premise_atoms),
                    )
                )
            frame.identifiers.add("precedent:" + format_path(link.path))
            families.append(link.family)
            paths.append(
                ProofNode(
                    goal=atom,
                    kind="precedent",
                    result=support.interval,
                    provenance=format_path(link.path),
                    children=tuple(case_nodes),
                )
            )

        fact_node = None
        if fact is not None:
            fact_node = ProofNode(
                goal=atom,
                kind="fact",
                result=fact.effective,
                provenance="+".join(fact.sources()),
            )

        if not paths:
            if fact_node is None:
                node = ProofNode(
                    goal=atom, kind="fact", result=TOTAL_IGNORANCE, provenance="unknown"
                )
                return _Entry(TOTAL_IGNORANCE, node)
            return _Entry(fact.effective, fact_node)

        family = TNormFamily.most_conservative(families)
        derived = aggregate(
            family,
            [p.result for p in paths],
            config.conflict_policy,
            subject=str(atom),
            diagnostics=self.diagnostics,
        )
        children = list(paths)
        if fact_node is not None:
            # The stored fact joins as one more independent source.
            final = consensus(
                [derived, fact.effective],
                config.conflict_policy,
                labels=["derived support", f"stored fact ({fact_node.provenance})"],
                subject=str(atom),
                diagnostics=self.diagnostics,
            )
            children.append(fact_node)
        else:
            final = derived
        node = ProofNode(
            goal=atom,
            kind="aggregation",
            result=final,
            provenance=family.label,
            children=tuple(children),
        )
        return _Entry(final, node)

    def _may_ask(self, atom: Atom) -> bool:
        return (
            self.config.interactive
            and self.asker is not None
            and atom.predicate in self.world.askables
            and atom not in self._asked
        )

    def _note(self, message: str) -> None:
        if message not in self.diagnostics:
            self.diagnostics.append(message)

    def _reachable_deps(self, goal: Atom) -> dict[Atom, GoalDependencies]:
        out: dict[Atom, GoalDependencies] = {}
        stack = [goal]
        while stack:
            atom = stack.pop()
            if atom in out:
                continue
            deps = self._deps.get(atom)
            if deps is None:
                continue
            out[atom] = deps
            stack.extend(deps.subgoals)
        return out


def prove(
    kb: KnowledgeBase,
    world: World,
    goal: Atom,
    config: QueryConfig | None = None,
    asker: Asker | None = None,
) -> QueryResult:
    """One-shot backward query; see QuerySession for repeated use."""
    return QuerySession(kb, world, config, asker).prove(goal)


def _derivable_goals(kb: KnowledgeBase, world: World) -> list[Atom]:
    """Every ground atom some rule or linked template can conclude here."""
    goals: set[Atom] = set()
    for rule in kb.rules.values():
        try:
            goals.add(substitute(rule.consequent, world.roles))
        except UnboundRoleError:
            continue
    for link in kb.precedent_links.values():
        for template in kb.case_library.templates_at(link.path):
            if template.consequent.predicate != link.target_predicate:
                continue
            try:
                goals.add(substitute(template.consequent, world.roles))
            except UnboundRoleError:
                continue
    return sorted(goals, key=str)


def forward_saturate(
    kb: KnowledgeBase,
    world: World,
    config: QueryConfig | None = None,
) -> dict[Atom, CertaintyInterval]:
    """Evaluate every derivable ground conclusion, premises first.

    Processing follows the dependency order of the predicates, and all
    goals share one memoized session, so each sub-derivation runs once.
    The result maps each derivable atom to the same interval a backward
    query for it would return.
    """
    session = QuerySession(kb, world, config)
    rank = {pred: i for i, pred in enumerate(derivation_order(kb))}
    goals = _derivable_goals(kb, world)
    goals.sort(key=lambda a: (rank.get(a.predicate, -1), str(a)))
    return {goal: session.evaluate(goal) for goal in goals}


def explain(result: QueryResult) -> str:
    """Render a proof as an indented text tree, one node per line."""
    lines: list[str] = []

    def walk(node: ProofNode, depth: int) -> None:
        pad = "  " * depth
        iv = str(node.result)
        if node.kind == "fact":
            lines.append(f"{pad}fact {node.goal} = {iv} via {node.provenance}")
        elif node.kind == "rule-instance":
            lines.append(
                f"{pad}rule-instance {node.provenance}: "
                f"premise {node.premise_interval} -> {iv}"
            )
        elif node.kind == "case-instance":
            lines.append(
                f"{pad}case-instance {node.provenance}: "
                f"match {node.premise_interval} -> {iv}"
            )
        elif node.kind == "precedent":
            lines.append(f"{pad}precedent {node.provenance} = {iv}")
        else:
            lines.append(f"{pad}aggregation {node.goal} = {iv} under {node.provenance}")
        for child in node.children:
            walk(child, depth + 1)

    walk(result.proof, 0)
    for note in result.diagnostics:
        lines.append(f"note: {note}")
    return "\n".join(lines)


def proof_to_dict(node: ProofNode) -> dict:
    out: dict = {
        "kind": node.kind,
        "goal": str(node.goal),
        "result": [node.result.lower, node.result.upper],
        "provenance": node.provenance,
    }
    if node.premise_interval is not None:
        out["premise"] = [node.premise_interval.lower, node.premise_interval.upper]
    if node.detached_interval is not None:
        out["detached"] = [node.detached_interval.lower, node.detached_interval.upper]
    if node.children:
        out["children"] = [proof_to_dict(c) for c in node.children]
    return out


def result_to_dict(result: QueryResult) -> dict:
    return {
        "goal": str(result.goal),
        "interval": [result.interval.lower, result.interval.upper],
        "diagnostics": list(result.diagnostics),
        "proof": proof_to_dict(result.proof),
    }
