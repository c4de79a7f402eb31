"""QDIMACS parsing and serialization, plus the DNF cube sidecar format.

The parser is tolerant the way real-world QDIMACS consumers are: clause
counts in the header are advisory (mismatch warns instead of failing), free
matrix variables are bound by a synthetic outermost existential block and
flagged, and clauses may span lines. The serializer is deterministic, so
parse/serialize round-trips are byte-stable.

The DNF sidecar format is project-defined since QDIMACS has no cube
standard: header ``p dnf <vars> <cubes>``, QDIMACS quantifier lines, then
one cube per line terminated by 0.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable

from .errors import QdimacsParseError, ValidationError
from .formulas import Formula, clauses_to_formula

EXISTS = "e"
FORALL = "a"


class QdimacsWarning(UserWarning):
    """Recoverable oddity in QDIMACS/DNF input (kept, but worth flagging)."""


def other_quantifier(q: str) -> str:
    return FORALL if q == EXISTS else EXISTS


def normalize_clause(lits: Iterable[int]) -> tuple[int, ...] | None:
    """Sort and deduplicate a clause/cube; None when it contains l and -l."""
    unique = set(lits)
    if any(-l in unique for l in unique):
        return None
    return tuple(sorted(unique, key=lambda l: (abs(l), l < 0)))


@dataclass(frozen=True, slots=True)
class QuantifierBlock:
    quantifier: str
    variables: tuple[int, ...]

    def __post_init__(self):
        if self.quantifier not in (EXISTS, FORALL):
            raise ValidationError(f"quantifier must be 'e' or 'a', got {self.quantifier!r}")
        if not self.variables:
            raise ValidationError("quantifier block must be nonempty")
        if any(v < 1 for v in self.variables):
            raise ValidationError("variable ids must be positive")
        if len(set(self.variables)) != len(self.variables):
            raise ValidationError("duplicate variable within a block")


@dataclass(frozen=True)
class Prefix:
    blocks: tuple[QuantifierBlock, ...] = ()

    def __post_init__(self):
        seen: set[int] = set()
        for i, block in enumerate(self.blocks):
            if i and block.quantifier == self.blocks[i - 1].quantifier:
                raise ValidationError("adjacent blocks share a quantifier; merge them")
            overlap = seen.intersection(block.variables)
            if overlap:
                raise ValidationError(f"variable {min(overlap)} quantified twice")
            seen.update(block.variables)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, Iterable[int]]]) -> "Prefix":
        """Build a prefix, merging adjacent same-quantifier groups."""
        merged: list[tuple[str, list[int]]] = []
        for q, vs in pairs:
            vs = list(vs)
            if not vs:
                continue
            if merged and merged[-1][0] == q:
                merged[-1][1].extend(vs)
            else:
                merged.append((q, vs))
        return cls(tuple(QuantifierBlock(q, tuple(vs)) for q, vs in merged))

    @cached_property
    def variables(self) -> tuple[int, ...]:
        return tuple(v for block in self.blocks for v in block.variables)

    @cached_property
    def _positions(self) -> dict[int, tuple[int, int]]:
        # var -> (block index, prefix position)
        out: dict[int, tuple[int, int]] = {}
        pos = 0
        for bi, block in enumerate(self.blocks):
            for v in block.variables:
                out[v] = (bi, pos)
                pos += 1
        return out

    @property
    def n(self) -> int:
        return len(self.variables)

    def quantifier_of(self, var: int) -> str:
        return self.blocks[self.block_index_of(var)].quantifier

    def block_index_of(self, var: int) -> int:
        try:
            return self._positions[var][0]
        except KeyError:
            raise ValidationError(f"variable {var} is not quantified") from None

    def position_of(self, var: int) -> int:
        try:
            return self._positions[var][1]
        except KeyError:
            raise ValidationError(f"variable {var} is not quantified") from None

    def flipped(self) -> "Prefix":
        """Same blocks with every quantifier swapped."""
        return Prefix(
            tuple(QuantifierBlock(other_quantifier(b.quantifier), b.variables) for b in self.blocks)
        )


@dataclass(frozen=True)
class QbfInstance:
    prefix: Prefix
    clauses: tuple[tuple[int, ...], ...]
    comments: tuple[str, ...] = field(default=(), compare=False)
    free_vars: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        quantified = set(self.prefix.variables)
        for clause in self.clauses:
            for l in clause:
                if abs(l) not in quantified:
                    raise ValidationError(
                        f"matrix variable {abs(l)} is not quantified (instance must be closed)"
                    )

    @property
    def n_vars(self) -> int:
        return max(self.prefix.variables, default=0)

    @cached_property
    def matrix_vars(self) -> frozenset[int]:
        return frozenset(abs(l) for clause in self.clauses for l in clause)

    @property
    def unused_vars(self) -> tuple[int, ...]:
        """Quantified variables that never occur in the matrix."""
        return tuple(v for v in self.prefix.variables if v not in self.matrix_vars)

    def to_formula(self) -> Formula:
        return clauses_to_formula(self.clauses)


def _read_text(source: str | bytes | IO) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _parse_header(text: str, kind: str):
    """Common token walk for 'p cnf' and 'p dnf' files.

    Returns (comments, pairs, terms, declared_vars, declared_terms).
    """
    comments: list[str] = []
    pairs: list[tuple[str, list[int]]] = []
    terms: list[tuple[int, ...] | None] = []
    declared: tuple[int, int] | None = None
    seen_clause = False
    quantified: set[int] = set()
    current: list[int] = []
    current_start = (1, 1)

    for lineno, raw in enumerate(_read_text(text).splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].lstrip())
            continue
        if line.startswith("p"):
            fields = line.split()
            if declared is not None:
                raise QdimacsParseError("duplicate problem line", lineno)
            if len(fields) != 4 or fields[1] != kind:
                raise QdimacsParseError(f"expected 'p {kind} <vars> <{kind_word(kind)}>'", lineno)
            try:
                declared = (int(fields[2]), int(fields[3]))
            except ValueError:
                raise QdimacsParseError("problem line counts must be integers", lineno) from None
            if declared[0] < 0 or declared[1] < 0:
                raise QdimacsParseError("problem line counts must be nonnegative", lineno)
            continue
        if line[0] in (EXISTS, FORALL):
            # quantifier line: 'a' or 'e' followed by variable ids and 0
            if declared is None:
                raise QdimacsParseError("quantifier line before problem line", lineno)
            if seen_clause or current:
                raise QdimacsParseError("quantifier line after first clause", lineno)
            body = line[1:].split()
            try:
                ids = [int(tok) for tok in body]
            except ValueError:
                raise QdimacsParseError("quantifier line contains a non-integer", lineno) from None
            if not ids or ids[-1] != 0:
                raise QdimacsParseError("quantifier line must end with 0", lineno)
            ids = ids[:-1]
            if any(v == 0 for v in ids):
                raise QdimacsParseError("variable 0 inside quantifier line", lineno)
            if any(v < 0 for v in ids):
                raise QdimacsParseError("negative variable in quantifier line", lineno)
            if not ids:
                raise QdimacsParseError("empty quantifier block", lineno)
            for v in ids:
                if v in quantified:
                    raise QdimacsParseError(f"variable {v} quantified twice", lineno)
                quantified.add(v)
            pairs.append((line[0], ids))
            continue
        # clause/cube tokens, possibly spanning lines
        if declared is None:
            raise QdimacsParseError("clause before problem line", lineno)
        col = 1
        for tok in raw.split():
            start_col = raw.index(tok, col - 1) + 1
            col = start_col + len(tok)
            try:
                lit = int(tok)
            except ValueError:
                raise QdimacsParseError(f"unexpected token {tok!r}", lineno, start_col) from None
            if lit == 0 and tok != "0":
                raise QdimacsParseError("variable 0 in clause body", lineno, start_col)
            if lit == 0:
                terms.append(normalize_clause(current))
                current = []
                seen_clause = True
            else:
                if not current:
                    current_start = (lineno, start_col)
                current.append(lit)

    if declared is None:
        raise QdimacsParseError("missing problem line", 1)
    if current:
        warnings.warn(
            QdimacsWarning(
                f"unterminated final {kind_word(kind, singular=True)} at line "
                f"{current_start[0]} (missing 0); kept"
            )
        )
        terms.append(normalize_clause(current))
    return comments, pairs, terms, declared


def kind_word(kind: str, singular: bool = False) -> str:
    word = "clauses" if kind == "cnf" else "cubes"
    return word[:-1] if singular else word


def parse_qdimacs(source: str | bytes | IO) -> QbfInstance:
    """Parse QDIMACS text into a normalized, closed instance.

    Free matrix variables are bound by a synthetic outermost existential
    block and reported in ``free_vars``. Header count mismatches warn.
    """
    comments, pairs, raw_clauses, declared = _parse_header(source, "cnf")
    seen = {v for _, ids in pairs for v in ids}

    clauses: list[tuple[int, ...]] = []
    dropped = 0
    for clause in raw_clauses:
        if clause is None:
            dropped += 1
        else:
            clauses.append(clause)
    if dropped:
        warnings.warn(QdimacsWarning(f"dropped {dropped} tautological clause(s)"))

    matrix_vars = {abs(l) for clause in clauses for l in clause}
    free = tuple(sorted(matrix_vars - seen))
    if free:
        pairs = [(EXISTS, list(free))] + pairs
        warnings.warn(QdimacsWarning(f"free variables bound existentially: {list(free)}"))

    declared_vars, declared_clauses = declared
    max_var = max(max(matrix_vars, default=0), max(seen, default=0))
    if declared_vars < max_var:
        warnings.warn(
            QdimacsWarning(f"header declares {declared_vars} variables but {max_var} appear")
        )
    if declared_clauses != len(raw_clauses):
        warnings.warn(
            QdimacsWarning(
                f"header declares {declared_clauses} clauses but {len(raw_clauses)} appear"
            )
        )

    prefix = Prefix.from_pairs(pairs)
    return QbfInstance(
        prefix=prefix,
        clauses=tuple(clauses),
        comments=tuple(comments),
        free_vars=free,
    )


def serialize_qdimacs(instance: QbfInstance) -> str:
    """Deterministic QDIMACS text for a normalized instance."""
    out = io.StringIO()
    for comment in instance.comments:
        out.write(f"c {comment}\n" if comment else "c\n")
    out.write(f"p cnf {instance.n_vars} {len(instance.clauses)}\n")
    for block in instance.prefix.blocks:
        out.write(f"{block.quantifier} {' '.join(map(str, block.variables))} 0\n")
    for clause in instance.clauses:
        out.write(" ".join(map(str, clause + (0,))) + "\n")
    return out.getvalue()


def serialize_dnf(prefix: Prefix, cubes: Iterable[tuple[int, ...]]) -> str:
    """DNF sidecar text: cube disjunction under the given prefix."""
    cubes = tuple(cubes)
    quantified = set(prefix.variables)
    for cube in cubes:
        for l in cube:
            if abs(l) not in quantified:
                raise ValidationError(f"cube variable {abs(l)} is not quantified")
    out = io.StringIO()
    out.write(f"p dnf {max(prefix.variables, default=0)} {len(cubes)}\n")
    for block in prefix.blocks:
        out.write(f"{block.quantifier} {' '.join(map(str, block.variables))} 0\n")
    for cube in cubes:
        out.write(" ".join(map(str, cube + (0,))) + "\n")
    return out.getvalue()


def parse_dnf(source: str | bytes | IO) -> tuple[Prefix, tuple[tuple[int, ...], ...]]:
    """Parse the DNF sidecar format back into (prefix, cubes)."""
    comments, pairs, raw_cubes, declared = _parse_header(source, "dnf")
    del comments
    prefix = Prefix.from_pairs(pairs)
    quantified = set(prefix.variables)

    cubes: list[tuple[int, ...]] = []
    dropped = 0
    for cube in raw_cubes:
        if cube is None:
            dropped += 1
            continue
        for l in cube:
            if abs(l) not in quantified:
                raise QdimacsParseError(f"cube variable {abs(l)} is not quantified", 1)
        cubes.append(cube)
    if dropped:
        warnings.warn(QdimacsWarning(f"dropped {dropped} contradictory cube(s)"))
    if declared[1] != len(raw_cubes):
        warnings.warn(
            QdimacsWarning(f"header declares {declared[1]} cubes but {len(raw_cubes)} appear")
        )
    return prefix, tuple(cubes)
