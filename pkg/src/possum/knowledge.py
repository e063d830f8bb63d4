"""Knowledge model: atoms, rules, worlds, and the knowledge base.

A knowledge base is generic: rules and case templates mention role
variables (``?raider``).  A world instantiates it: roles get bound to
constants, facts carry per-source evidence intervals, and askable
predicates mark what the user may be prompted for.  The same knowledge
base can be run against many worlds.

Facts keep every source's interval separately and reconcile them into
one effective interval by consensus at assertion time; inference later
combines *derived* support by aggregation.  Keeping the two combination
steps at these two moments is a deliberate layering: source disagreement
is a property of the evidence and surfaces immediately, path
reinforcement is a property of the reasoning and surfaces per query.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import TYPE_CHECKING, Iterable, Mapping

from .calculus import CertaintyInterval, ConflictPolicy, TNormFamily, TOTAL_IGNORANCE, consensus
from .errors import DomainError, UnboundRoleError

if TYPE_CHECKING:
    from .cbr import CaseLibrary, PrecedentLink

__all__ = [
    "Atom",
    "Fact",
    "Rule",
    "World",
    "KnowledgeBase",
    "ValidationReport",
    "substitute",
    "assert_evidence",
    "retract_evidence",
    "lookup",
    "predicate_dependencies",
    "validate",
]


def is_role_variable(token: str) -> bool:
    return token.startswith("?")


@dataclass(frozen=True, slots=True)
class Atom:
    """A predicate applied to zero or more arguments.

    Arguments are plain symbols; those starting with ``?`` are role
    variables awaiting a world binding.  Atoms are immutable and usable
    as dict keys.
    """

    predicate: str
    arguments: tuple[str, ...] = ()

    def variables(self) -> frozenset[str]:
        return frozenset(a for a in self.arguments if is_role_variable(a))

    def is_ground(self) -> bool:
        return not any(is_role_variable(a) for a in self.arguments)

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate,) + self.arguments) + ")"


def substitute(atom: Atom, roles: Mapping[str, str]) -> Atom:
    """Replace role variables by their bindings.

    Raises UnboundRoleError on the first variable with no binding; a
    partially bound atom is never returned.
    """
    if atom.is_ground():
        return atom
    out = []
    for arg in atom.arguments:
        if is_role_variable(arg):
            try:
                out.append(roles[arg])
            except KeyError:
                raise UnboundRoleError(arg, str(atom)) from None
        else:
            out.append(arg)
    return Atom(atom.predicate, tuple(out))


@dataclass(slots=True)
class Fact:
    """Evidence about one ground atom, kept per source."""

    atom: Atom
    evidence: dict[str, CertaintyInterval]
    effective: CertaintyInterval

    def sources(self) -> list[str]:
        return sorted(self.evidence)


@dataclass(frozen=True, slots=True)
class Rule:
    """A qualified implication.

    ``context`` gates whether the rule participates at all in a given
    world; ``antecedents`` are the premises evaluated once it does.
    ``sufficiency`` grades how far a confirmed premise confirms the
    conclusion, ``necessity`` how far a refuted premise refutes it (a
    hard logical rule is sufficiency 1, necessity 0).  ``family`` picks
    the conjunction used for both the premises and the detachment.
    ``rule_class`` is an optional taxonomy path used for bookkeeping.
    """

    identifier: str
    context: tuple[Atom, ...]
    antecedents: tuple[Atom, ...]
    consequent: Atom
    sufficiency: float
    necessity: float
    family: TNormFamily
    rule_class: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.antecedents:
            raise DomainError(f"rule {self.identifier} has no antecedents")


@dataclass(slots=True)
class World:
    """One concrete situation a knowledge base is applied to."""

    identifier: str
    roles: dict[str, str] = field(default_factory=dict)
    facts: dict[Atom, Fact] = field(default_factory=dict)
    askables: set[str] = field(default_factory=set)
    epoch: int = 0
    diagnostics: list[str] = field(default_factory=list)

    def copy(self) -> "World":
        """Independent deep copy; used for what-if exploration."""
        twin = World(
            identifier=self.identifier,
            roles=dict(self.roles),
            askables=set(self.askables),
            epoch=self.epoch,
            diagnostics=list(self.diagnostics),
        )
        for atom, fact in self.facts.items():
            twin.facts[atom] = Fact(atom, dict(fact.evidence), fact.effective)
        return twin


def assert_evidence(
    world: World,
    atom: Atom,
    interval: CertaintyInterval,
    source: str,
    policy: ConflictPolicy = ConflictPolicy.STRICT,
) -> bool:
    """Record one source's interval for a fact and re-reconcile.

    Returns True when the fact's effective interval actually changed
    (the world epoch advances only then).  Under strict policy a source
    conflict raises before anything is mutated.
    """
    if not atom.is_ground():
        raise DomainError(f"cannot assert evidence for non-ground atom {atom}")
    existing = world.facts.get(atom)
    evidence = dict(existing.evidence) if existing else {}
    evidence[source] = interval
    labels = sorted(evidence)
    effective = consensus(
        [evidence[s] for s in labels],
        policy,
        labels=labels,
        subject=str(atom),
        diagnostics=world.diagnostics,
    )
    # Compute-then-commit: a strict conflict above leaves the world untouched.
    if existing is None:
        world.facts[atom] = Fact(atom, evidence, effective)
        world.epoch += 1
        return True
    changed = effective != existing.effective
    existing.evidence = evidence
    existing.effective = effective
    if changed:
        world.epoch += 1
    return changed


def retract_evidence(
    world: World,
    atom: Atom,
    source: str,
    policy: ConflictPolicy = ConflictPolicy.STRICT,
) -> bool:
    """Withdraw one source's interval; drops the fact when none remain."""
    fact = world.facts.get(atom)
    if fact is None or source not in fact.evidence:
        return False
    evidence = dict(fact.evidence)
    del evidence[source]
    if not evidence:
        del world.facts[atom]
        world.epoch += 1
        return True
    labels = sorted(evidence)
    effective = consensus(
        [evidence[s] for s in labels],
        policy,
        labels=labels,
        subject=str(atom),
        diagnostics=world.diagnostics,
    )
    changed = effective != fact.effective
    fact.evidence = evidence
    fact.effective = effective
    if changed:
        world.epoch += 1
    return changed


def lookup(world: World, atom: Atom) -> CertaintyInterval:
    """Effective interval for an atom; total ignorance when unrecorded."""
    fact = world.facts.get(atom)
    return fact.effective if fact is not None else TOTAL_IGNORANCE


@dataclass
class KnowledgeBase:
    """Rules plus the case library and its precedent links."""

    rules: dict[str, Rule] = field(default_factory=dict)
    case_library: "CaseLibrary | None" = None
    precedent_links: dict[str, "PrecedentLink"] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.case_library is None:
            from .cbr import CaseLibrary

            self.case_library = CaseLibrary()

    def rules_concluding(self, predicate: str) -> list[Rule]:
        return [r for r in self.rules.values() if r.consequent.predicate == predicate]


def predicate_dependencies(kb: KnowledgeBase) -> dict[str, set[str]]:
    """Which predicates each predicate's derivation reads as premises.

    Rule consequents depend on their antecedent predicates; a predicate
    carrying a precedent link additionally depends on the premises of
    every case template the link can instantiate.  Context atoms are
    excluded: screening reads stored values only and never recurses.
    """
    deps: dict[str, set[str]] = {}
    for rule in kb.rules.values():
        bucket = deps.setdefault(rule.consequent.predicate, set())
        bucket.update(a.predicate for a in rule.antecedents)
    for link in kb.precedent_links.values():
        bucket = deps.setdefault(link.target_predicate, set())
        for template in kb.case_library.templates_at(link.path):
            if template.consequent.predicate == link.target_predicate:
                bucket.update(a.predicate for a in template.antecedents)
    return deps


def derivation_order(kb: KnowledgeBase) -> list[str]:
    """All predicates in dependency order, premises before conclusions.

    Raises CycleError (from graphlib) on a cyclic knowledge base; run
    ``validate`` first for a reported rather than raised answer.
    """
    deps = predicate_dependencies(kb)
    return list(TopologicalSorter(deps).static_order())


@dataclass(slots=True)
class ValidationReport:
    """Everything that would make a knowledge base unsafe to query.

    An empty report (``ok()``) means every derivation terminates and
    all numeric fields are in range.
    """

    cycles: list[list[str]] = field(default_factory=list)
    range_errors: list[str] = field(default_factory=list)
    role_errors: list[str] = field(default_factory=list)
    path_errors: list[str] = field(default_factory=list)

    def ok(self) -> bool:
        return not (self.cycles or self.range_errors or self.role_errors or self.path_errors)

    def messages(self) -> list[str]:
        out = []
        for cycle in self.cycles:
            out.append("derivation cycle: " + " -> ".join(cycle))
        out.extend(self.range_errors)
        out.extend(self.role_errors)
        out.extend(self.path_errors)
        return out


def _check_strength(owner: str, name: str, value: float, sink: list[str]) -> None:
    if not isinstance(value, (int, float)) or not 0.0 <= float(value) <= 1.0:
        sink.append(f"{owner}: {name} {value!r} outside [0, 1]")


def validate(kb: KnowledgeBase) -> ValidationReport:
    """Static safety check for a knowledge base.

    Reports derivation cycles (including those routed through precedent
    links), sufficiency/necessity values outside the unit interval,
    case-template variables missing from the template's role list, and
    taxonomy paths that were never declared.
    """
    report = ValidationReport()

    for rule in kb.rules.values():
        owner = f"rule {rule.identifier}"
        _check_strength(owner, "sufficiency", rule.sufficiency, report.range_errors)
        _check_strength(owner, "necessity", rule.necessity, report.range_errors)

    library = kb.case_library
    for template in library.templates.values():
        owner = f"case {template.identifier}"
        _check_strength(owner, "sufficiency", template.sufficiency, report.range_errors)
        _check_strength(owner, "necessity", template.necessity, report.range_errors)
        declared = set(template.roles)
        used: set[str] = set()
        for atom in template.context + template.antecedents + (template.consequent,):
            used |= atom.variables()
        for var in sorted(used - declared):
            report.role_errors.append(f"{owner}: role {var} is not declared")
        if not library.has_path(template.path):
            report.path_errors.append(
                f"{owner}: path {'/'.join(template.path)} is not in the taxonomy"
            )

    for link in kb.precedent_links.values():
        if not library.has_path(link.path):
            report.path_errors.append(
                f"precedent for {link.target_predicate}: "
                f"path {'/'.join(link.path)} is not in the taxonomy"
            )

    try:
        derivation_order(kb)
    except CycleError as err:
        # graphlib reports the cycle as [a, ..., a].
        cycle = [str(node) for node in err.args[1]]
        report.cycles.append(cycle)
    return report
