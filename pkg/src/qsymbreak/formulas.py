"""Boolean formula trees: construction, evaluation, substitution, equivalence.

Formulas are immutable dataclass trees over integer variable ids (1-based,
matching DIMACS numbering). The folding constructors (neg, conj, disj,
implies, iff, xor) perform constant propagation, so substituting a variable
removes it from the tree syntactically, not just semantically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import CapExceededError, MissingAssignmentError

EQUIVALENCE_VAR_CAP = 20


class Formula:
    """Base class of formula tree nodes. Supports &, | and ~ as connectives."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return conj((self, other))

    def __or__(self, other: Formula) -> Formula:
        return disj((self, other))

    def __invert__(self) -> Formula:
        return neg(self)


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True, slots=True)
class Var(Formula):
    id: int

    def __post_init__(self):
        if self.id < 1:
            raise ValueError(f"variable id must be >= 1, got {self.id}")


@dataclass(frozen=True, slots=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True, slots=True)
class Or(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Xor(Formula):
    left: Formula
    right: Formula


def neg(f: Formula) -> Formula:
    if isinstance(f, Const):
        return Const(not f.value)
    if isinstance(f, Not):
        return f.child
    return Not(f)


def conj(items: Iterable[Formula]) -> Formula:
    """N-ary conjunction with constant folding and one-level flattening."""
    parts: list[Formula] = []
    for item in items:
        if isinstance(item, Const):
            if not item.value:
                return FALSE
            continue
        if isinstance(item, And):
            parts.extend(item.children)
        else:
            parts.append(item)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))


def disj(items: Iterable[Formula]) -> Formula:
    """N-ary disjunction with constant folding and one-level flattening."""
    parts: list[Formula] = []
    for item in items:
        if isinstance(item, Const):
            if item.value:
                return TRUE
            continue
        if isinstance(item, Or):
            parts.extend(item.children)
        else:
            parts.append(item)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(tuple(parts))


def implies(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Const):
        return b if a.value else TRUE
    if isinstance(b, Const):
        return TRUE if b.value else neg(a)
    return Implies(a, b)


def iff(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Const):
        return b if a.value else neg(b)
    if isinstance(b, Const):
        return a if b.value else neg(a)
    if a == b:
        return TRUE
    return Iff(a, b)


def xor(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Const):
        return neg(b) if a.value else b
    if isinstance(b, Const):
        return neg(a) if b.value else a
    if a == b:
        return FALSE
    return Xor(a, b)


def literal(lit: int) -> Formula:
    """Formula for a signed DIMACS literal: 3 -> x3, -3 -> not x3."""
    if lit == 0:
        raise ValueError("literal 0 is not a variable")
    return Var(lit) if lit > 0 else Not(Var(-lit))


def clauses_to_formula(clauses: Iterable[Iterable[int]]) -> Formula:
    """CNF clause list (signed int literals) as a conjunction of disjunctions."""
    return conj(disj(literal(l) for l in clause) for clause in clauses)


def cubes_to_formula(cubes: Iterable[Iterable[int]]) -> Formula:
    """DNF cube list (signed int literals) as a disjunction of conjunctions."""
    return disj(conj(literal(l) for l in cube) for cube in cubes)


def evaluate(formula: Formula, assignment: Mapping[int, bool]) -> bool:
    """Truth value of the formula under a total assignment (var id -> bool)."""
    if isinstance(formula, Const):
        return formula.value
    if isinstance(formula, Var):
        try:
            return assignment[formula.id]
        except KeyError:
            raise MissingAssignmentError(formula.id) from None
    if isinstance(formula, Not):
        return not evaluate(formula.child, assignment)
    if isinstance(formula, And):
        return all(evaluate(c, assignment) for c in formula.children)
    if isinstance(formula, Or):
        return any(evaluate(c, assignment) for c in formula.children)
    if isinstance(formula, Implies):
        return (not evaluate(formula.left, assignment)) or evaluate(formula.right, assignment)
    if isinstance(formula, Iff):
        return evaluate(formula.left, assignment) == evaluate(formula.right, assignment)
    if isinstance(formula, Xor):
        return evaluate(formula.left, assignment) != evaluate(formula.right, assignment)
    raise TypeError(f"not a formula node: {formula!r}")


def substitute(formula: Formula, partial: Mapping[int, bool]) -> Formula:
    """Replace assigned variables by constants and fold.

    The result contains no variable of the partial assignment's domain.
    """
    if isinstance(formula, Const):
        return formula
    if isinstance(formula, Var):
        if formula.id in partial:
            return TRUE if partial[formula.id] else FALSE
        return formula
    if isinstance(formula, Not):
        return neg(substitute(formula.child, partial))
    if isinstance(formula, And):
        return conj(substitute(c, partial) for c in formula.children)
    if isinstance(formula, Or):
        return disj(substitute(c, partial) for c in formula.children)
    if isinstance(formula, Implies):
        return implies(substitute(formula.left, partial), substitute(formula.right, partial))
    if isinstance(formula, Iff):
        return iff(substitute(formula.left, partial), substitute(formula.right, partial))
    if isinstance(formula, Xor):
        return xor(substitute(formula.left, partial), substitute(formula.right, partial))
    raise TypeError(f"not a formula node: {formula!r}")


def map_variables(formula: Formula, images: Mapping[int, Formula]) -> Formula:
    """Substitute whole formulas for variables. Unmapped variables stay."""
    if isinstance(formula, Const):
        return formula
    if isinstance(formula, Var):
        return images.get(formula.id, formula)
    if isinstance(formula, Not):
        return neg(map_variables(formula.child, images))
    if isinstance(formula, And):
        return conj(map_variables(c, images) for c in formula.children)
    if isinstance(formula, Or):
        return disj(map_variables(c, images) for c in formula.children)
    if isinstance(formula, Implies):
        return implies(map_variables(formula.left, images), map_variables(formula.right, images))
    if isinstance(formula, Iff):
        return iff(map_variables(formula.left, images), map_variables(formula.right, images))
    if isinstance(formula, Xor):
        return xor(map_variables(formula.left, images), map_variables(formula.right, images))
    raise TypeError(f"not a formula node: {formula!r}")


def variables(formula: Formula) -> frozenset[int]:
    """Set of variable ids occurring in the formula."""
    out: set[int] = set()
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.id)
        elif isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or)):
            stack.extend(node.children)
        elif isinstance(node, (Implies, Iff, Xor)):
            stack.append(node.left)
            stack.append(node.right)
    return frozenset(out)


def all_assignments(var_ids: Iterable[int]) -> Iterator[dict[int, bool]]:
    """All total assignments over the given variables, binary counting order."""
    ids = tuple(dict.fromkeys(var_ids))
    for values in itertools.product((False, True), repeat=len(ids)):
        yield dict(zip(ids, values))


def equivalent(
    phi: Formula,
    psi: Formula,
    vars: Iterable[int] | None = None,
    cap: int = EQUIVALENCE_VAR_CAP,
) -> bool:
    """Truth-table equivalence of two formulas over a shared variable set."""
    if vars is None:
        ids = sorted(variables(phi) | variables(psi))
    else:
        ids = sorted(dict.fromkeys(vars))
        missing = (variables(phi) | variables(psi)) - set(ids)
        if missing:
            raise ValueError(f"vars does not cover the formulas: missing {sorted(missing)}")
    if len(ids) > cap:
        raise CapExceededError(f"equivalence check over {len(ids)} variables exceeds cap {cap}")
    for sigma in all_assignments(ids):
        if evaluate(phi, sigma) != evaluate(psi, sigma):
            return False
    return True
