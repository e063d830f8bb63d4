"""Hierarchical case library and precedent matching.

Cases are stored as *templates*: parameterised rules filed under a
taxonomy path, carrying the same sufficiency/necessity grading as
ordinary rules.  A precedent differs from a rule only in how it is
found (by searching a subtree of the taxonomy) and in how its premises
are read (as the profile of a past decided situation to be compared
against the present one).  Once matched, a template instantiates into
a rule-shaped support path and flows through the same detachment and
aggregation arithmetic as everything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Iterable

from .calculus import (
    CertaintyInterval,
    TNormFamily,
    TOTAL_IGNORANCE,
    aggregate,
    antecedent_eval,
    detach,
)
from .errors import DomainError, UnboundRoleError, UnknownPathError
from .knowledge import Atom, World, lookup, substitute

if TYPE_CHECKING:
    from .engine import QueryConfig

__all__ = [
    "CaseTemplate",
    "CaseLibrary",
    "PrecedentLink",
    "MatchResult",
    "PrecedentSupport",
    "parse_path",
    "format_path",
    "retrieve",
    "match_case",
    "precedent_support",
    "case_similarity",
]

Path = tuple[str, ...]
Evaluator = Callable[[Atom], CertaintyInterval]


def parse_path(text: str) -> Path:
    """Split ``defense/anti-trust`` into its segments."""
    parts = tuple(p for p in text.strip().split("/") if p)
    if not parts:
        raise DomainError(f"empty taxonomy path {text!r}")
    return parts


def format_path(path: Path) -> str:
    return "/".join(path) if path else "/"


@dataclass(frozen=True, slots=True)
class CaseTemplate:
    """A decided case, generalised over its role variables."""

    identifier: str
    path: Path
    roles: tuple[str, ...]
    context: tuple[Atom, ...]
    antecedents: tuple[Atom, ...]
    consequent: Atom
    sufficiency: float
    necessity: float
    family: TNormFamily

    def __post_init__(self) -> None:
        if not self.antecedents:
            raise DomainError(f"case {self.identifier} has no premises")


@dataclass(frozen=True, slots=True)
class PrecedentLink:
    """Marks a predicate as arguable from precedent.

    When the engine proves a goal with this predicate it searches the
    library subtree under ``path`` and combines the matching templates'
    contributions with ``family``'s dual conorm.  At most one link per
    predicate.
    """

    target_predicate: str
    path: Path
    family: TNormFamily


@dataclass(slots=True)
class CaseLibrary:
    """Case templates filed under declared taxonomy paths."""

    paths: set[Path] = field(default_factory=set)
    templates: dict[str, CaseTemplate] = field(default_factory=dict)

    def declare_path(self, path: Path) -> None:
        self.paths.add(tuple(path))

    def add(self, template: CaseTemplate) -> None:
        if template.identifier in self.templates:
            raise DomainError(f"duplicate case identifier {template.identifier}")
        self.templates[template.identifier] = template

    def has_path(self, path: Path) -> bool:
        """True for the root, any declared path, and any ancestor of one."""
        if not path:
            return True
        return any(declared[: len(path)] == tuple(path) for declared in self.paths)

    def templates_at(self, path: Path) -> list[CaseTemplate]:
        """Templates filed at or below a node, ordered by (path, identifier)."""
        node = tuple(path)
        found = [t for t in self.templates.values() if t.path[: len(node)] == node]
        found.sort(key=lambda t: (t.path, t.identifier))
        return found


@dataclass(slots=True)
class MatchResult:
    """How one template lines up against the current world."""

    template: CaseTemplate
    premise_atoms: tuple[Atom, ...]
    premise_values: tuple[CertaintyInterval, ...]
    match: CertaintyInterval
    relevance: CertaintyInterval


@dataclass(slots=True)
class PrecedentSupport:
    """Combined contribution of every matching precedent."""

    interval: CertaintyInterval
    matches: list[MatchResult]


def _screened_in(
    template: CaseTemplate,
    world: World,
    config: "QueryConfig",
    fetch: Evaluator,
) -> bool:
    # Context screening is a shallow lookup, never a proof, and uses the
    # most liberal conjunction so one missing context atom is what kills
    # the template, not the interaction of several weak ones.
    if not template.context:
        return True
    values = []
    for atom in template.context:
        try:
            ground = substitute(atom, world.roles)
        except UnboundRoleError:
            return False
        values.append(fetch(ground))
    joint = antecedent_eval(TNormFamily.T3, values)
    return joint.lower >= config.context_threshold


def retrieve(
    library: CaseLibrary,
    path: Path | str,
    world: World,
    config: "QueryConfig | None" = None,
    *,
    fetch: Evaluator | None = None,
) -> list[CaseTemplate]:
    """Templates under a taxonomy node that pass context screening.

    Retrieval at an ancestor node sees a superset of what any of its
    descendants sees.  An undeclared path is an error rather than an
    empty answer, so typos do not read as absent knowledge.
    """
    if isinstance(path, str):
        path = parse_path(path)
    if not library.has_path(path):
        raise UnknownPathError(f"taxonomy path {format_path(path)} is not declared")
    if config is None:
        from .engine import QueryConfig

        config = QueryConfig()
    if fetch is None:
        fetch = lambda atom: lookup(world, atom)
    return [t for t in library.templates_at(path) if _screened_in(t, world, config, fetch)]


def match_case(
    template: CaseTemplate,
    world: World,
    evaluate: Evaluator | None = None,
) -> MatchResult:
    """Line a template up against the world and grade the fit.

    Premises are instantiated with the world's role bindings and then
    evaluated; the evaluator defaults to a plain fact lookup but the
    engine passes its own sub-goal prover, so premises may themselves
    be derived.  The match interval conjoins the premise evaluations;
    relevance detaches it through the template's strength.
    """
    if evaluate is None:
        evaluate = lambda atom: lookup(world, atom)
    atoms = tuple(substitute(a, world.roles) for a in template.antecedents)
    values = tuple(evaluate(a) for a in atoms)
    match = antecedent_eval(template.family, values)
    relevance = detach(template.family, template.sufficiency, template.necessity, match)
    return MatchResult(template, atoms, values, match, relevance)


def precedent_support(
    kb,
    world: World,
    goal: Atom,
    config: "QueryConfig | None" = None,
    *,
    evaluate: Evaluator | None = None,
    fetch: Evaluator | None = None,
    diagnostics: list[str] | None = None,
) -> PrecedentSupport:
    """Combined support for a goal from its precedent link.

    Retrieves the link's subtree, keeps the templates whose instantiated
    consequent is the goal, matches each, and aggregates the relevance
    intervals under the link's family.  No matching template is not an
    error: the result is total ignorance plus a diagnostic, mirroring
    how an unknown fact reads.
    """
    if config is None:
        from .engine import QueryConfig

        config = QueryConfig()
    link = kb.precedent_links.get(goal.predicate)
    if link is None:
        raise DomainError(f"predicate {goal.predicate} has no precedent link")
    matches: list[MatchResult] = []
    for template in retrieve(kb.case_library, link.path, world, config, fetch=fetch):
        try:
            consequent = substitute(template.consequent, world.roles)
        except UnboundRoleError:
            continue
        if consequent != goal:
            continue
        try:
            matches.append(match_case(template, world, evaluate))
        except UnboundRoleError as err:
            if diagnostics is not None:
                diagnostics.append(f"case {template.identifier} skipped: {err}")
    if not matches:
        if diagnostics is not None:
            diagnostics.append(
                f"no precedent support for {goal} under {format_path(link.path)}"
            )
        return PrecedentSupport(TOTAL_IGNORANCE, [])
    combined = aggregate(
        link.family,
        [m.relevance for m in matches],
        config.conflict_policy,
        subject=f"precedent support for {goal}",
        diagnostics=diagnostics,
    )
    return PrecedentSupport(combined, matches)


def case_similarity(a: MatchResult, b: MatchResult) -> float:
    """Similarity of two match profiles: 1 - mean midpoint distance.

    Profiles must align premise for premise, so this compares two
    instantiations of templates with equally many premises (typically
    the same template in different worlds).
    """
    if len(a.premise_values) != len(b.premise_values):
        raise DomainError(
            f"profiles of unequal length: {len(a.premise_values)} vs {len(b.premise_values)}"
        )
    gaps = [
        abs(x.midpoint() - y.midpoint())
        for x, y in zip(a.premise_values, b.premise_values)
    ]
    return 1.0 - sum(gaps) / len(gaps)
