"""Lex-leader symmetry breakers and their CNF/DNF Tseitin encodings.

Given admissible signed permutations ``g`` of a prefix, the existential
lex-leader breaker is

    psi = AND over existential positions i, AND over g:
          (AND_{j<i} (x_j <-> g(x_j)))  ->  (x_i -> g(x_i))

which keeps, from every semantic orbit of existential strategies, the
ones that play lexicographically minimal assignments.  The universal
breaker is the negation of the existential breaker built for the flipped
prefix.

The clausal encoding introduces a chain of fresh variables ``y_0..y_k``
per generator, where ``y_j`` means "the play agrees with its image on
the first j variables": a unit clause asserts ``y_0``, implication
clauses ``(~y_{i-1} | ~x_i | g(x_i))`` enforce the breaker at
existential positions, and per-position pairs extend the chain, either
recycling the implication (existential positions) or testing equality
directly (universal positions).  The chain is truncated after the last
position that has an implication clause, and tautologies and duplicates
are dropped.  Negating every clause turns the encoding into the cube
list of the universal breaker.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from .errors import ValidationError
from .formulas import (
    And,
    Formula,
    Not,
    Or,
    clauses_to_formula,
    conj,
    cubes_to_formula,
    iff,
    implies,
    literal,
)
from .groups import SignedPermutation, check_admissible
from .qdimacs import EXISTS, FORALL, Prefix, QbfInstance, normalize_clause
from .strategies import (
    EXISTENTIAL,
    UNIVERSAL,
    ENUMERATION_CAP,
    semantic_orbits,
    strategy_value,
)

AUGMENT_MODES = ("conjoin-cnf", "attach-dnf", "combined")


def _checked_generators(prefix: Prefix, generators) -> tuple[SignedPermutation, ...]:
    out: list[SignedPermutation] = []
    for g in generators:
        if not isinstance(g, SignedPermutation):
            raise ValidationError(
                "breakers require signed permutations; generator images must be literals"
            )
        report = check_admissible(g, prefix)
        if not report.ok:
            raise ValidationError(
                "inadmissible generator: " + "; ".join(m for _, m in report.violations)
            )
        if g not in out:
            out.append(g)
    return tuple(out)


def select_group_elements(
    generators, product_length: int = 1
) -> tuple[SignedPermutation, ...]:
    """Pick the group elements to instantiate in a breaker.

    With ``product_length=1`` (the default) these are the given
    generators themselves, deduplicated and with identities dropped.
    Larger values add all distinct products of up to that many
    generators, in breadth-first word order.
    """
    if product_length < 1:
        raise ValidationError("product_length must be at least 1")
    gens: list[SignedPermutation] = []
    for g in generators:
        if g not in gens:
            gens.append(g)
    if len({g.domain for g in gens}) > 1:
        raise ValidationError("generators act on different variable sets")
    collected: list[SignedPermutation] = []
    seen: set[SignedPermutation] = set()
    queue: list[tuple[SignedPermutation, int]] = [(g, 1) for g in gens]
    while queue:
        word, length = queue.pop(0)
        if word in seen:
            continue
        seen.add(word)
        if not word.is_identity:
            collected.append(word)
        if length < product_length:
            queue.extend((word.compose(g), length + 1) for g in gens)
    return tuple(collected)


@dataclass(frozen=True)
class BreakerFormula:
    """A lex-leader breaker at the formula level.

    ``parts`` holds one conjunct per instantiated group element; the
    universal variant stores the conjuncts built for the flipped prefix
    and realizes their negation.
    """

    polarity: str
    parts: tuple[Formula, ...]
    generators: tuple[SignedPermutation, ...]

    def __post_init__(self):
        if self.polarity not in (EXISTS, FORALL):
            raise ValidationError(f"bad polarity {self.polarity!r}")

    @cached_property
    def formula(self) -> Formula:
        core = conj(self.parts)
        return core if self.polarity == EXISTS else Not(core)


def _element_conjunct(prefix: Prefix, g: SignedPermutation) -> Formula:
    terms: list[Formula] = []
    equalities: list[Formula] = []
    for v in prefix.variables:
        image = g.image(v)
        if prefix.quantifier_of(v) == EXISTS and image != v:
            consequent = implies(literal(v), literal(image))
            if equalities:
                terms.append(implies(conj(tuple(equalities)), consequent))
            else:
                terms.append(consequent)
        if image != v:
            equalities.append(iff(literal(v), literal(image)))
    return conj(tuple(terms))


def lex_leader_formula(
    prefix: Prefix, generators, product_length: int = 1
) -> BreakerFormula:
    """Build the existential lex-leader breaker for the given generators.

    One conjunct per selected group element; conjuncts exist only for
    existential positions, while the equality guards range over all
    earlier positions.  Equality guards and implications whose image
    equals the variable are trivially true and omitted.  An empty
    selection yields the constant-true breaker.
    """
    elements = select_group_elements(
        _checked_generators(prefix, generators), product_length
    )
    parts = tuple(_element_conjunct(prefix, g) for g in elements)
    return BreakerFormula(EXISTS, parts, elements)


def universal_lex_leader_formula(
    prefix: Prefix, generators, product_length: int = 1
) -> BreakerFormula:
    """Build the universal breaker: the negated existential breaker of
    the flipped prefix."""
    base = lex_leader_formula(prefix.flipped(), generators, product_length)
    return BreakerFormula(FORALL, base.parts, base.generators)


@dataclass(frozen=True)
class EncodedBreaker:
    """Clausal (or cube-level) Tseitin encoding of a lex-leader breaker.

    ``terms`` are clauses when ``polarity`` is existential and cubes when
    universal.  ``aux_slots`` records, for every fresh chain variable,
    the original-prefix block index after which it is quantified (-1
    puts it in front of the first block).  ``prefix`` is the extended
    prefix with the chain variables inserted.
    """

    polarity: str
    terms: tuple[tuple[int, ...], ...]
    aux_vars: tuple[int, ...]
    aux_slots: tuple[tuple[int, int], ...]
    prefix: Prefix
    original_prefix: Prefix
    generators: tuple[SignedPermutation, ...]

    @property
    def clauses(self) -> tuple[tuple[int, ...], ...]:
        if self.polarity != EXISTS:
            raise ValidationError("universal encodings carry cubes, not clauses")
        return self.terms

    @property
    def cubes(self) -> tuple[tuple[int, ...], ...]:
        if self.polarity != FORALL:
            raise ValidationError("existential encodings carry clauses, not cubes")
        return self.terms


def _chain_for_generator(
    prefix: Prefix, g: SignedPermutation, next_aux: int, compress_identity: bool
) -> tuple[list[tuple[int, ...]], list[tuple[int, int]], int]:
    """Emit the clause chain for one generator.

    Returns (clauses, [(aux, slot)], aux_used).  Chain positions are the
    prefix variables in order, or only the moved ones when
    ``compress_identity`` is set.  Nothing is emitted when no implication
    clause survives, and the chain stops at the last position that has
    one, so unused chain variables are never created.
    """
    if compress_identity:
        positions = [v for v in prefix.variables if g.image(v) != v]
    else:
        positions = list(prefix.variables)
    implication_ranks = [
        rank
        for rank, v in enumerate(positions)
        if prefix.quantifier_of(v) == EXISTS and g.image(v) != v
    ]
    if not implication_ranks:
        return [], [], 0
    last = max(implication_ranks)
    aux = [next_aux + k for k in range(last + 1)]

    clauses: list[tuple[int, ...]] = [(aux[0],)]
    for rank in implication_ranks:
        v = positions[rank]
        clause = normalize_clause((-aux[rank], -v, g.image(v)))
        assert clause is not None
        clauses.append(clause)
    for rank in range(1, last + 1):
        v = positions[rank - 1]
        image = g.image(v)
        y_prev, y_cur = aux[rank - 1], aux[rank]
        if prefix.quantifier_of(v) == EXISTS:
            pair = ((y_cur, -y_prev, -v), (y_cur, -y_prev, image))
        else:
            pair = ((y_cur, -y_prev, -v, -image), (y_cur, -y_prev, v, image))
        for raw in pair:
            clause = normalize_clause(raw)
            if clause is not None:
                clauses.append(clause)

    slots = [(aux[0], -1)]
    for rank in range(1, last + 1):
        slots.append((aux[rank], prefix.block_index_of(positions[rank - 1])))
    return clauses, slots, last + 1


def _dedup(terms: list[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    for t in terms:
        if t not in seen:
            seen.add(t)
            out.append(t)
    return tuple(out)


def _extended_prefix(prefix: Prefix, slot_items) -> Prefix:
    """Insert aux variables after their slots; -1 means before everything.

    ``slot_items`` is an iterable of (aux, slot, quantifier).
    """
    per_slot: dict[int, list[tuple[int, str]]] = defaultdict(list)
    for aux, slot, q in slot_items:
        per_slot[slot].append((aux, q))
    for items in per_slot.values():
        items.sort()
    pairs: list[tuple[str, tuple[int, ...]]] = []
    for aux, q in per_slot.get(-1, ()):
        pairs.append((q, (aux,)))
    for bi, block in enumerate(prefix.blocks):
        pairs.append((block.quantifier, block.variables))
        for aux, q in per_slot.get(bi, ()):
            pairs.append((q, (aux,)))
    return Prefix.from_pairs(pairs)


def _fresh_start(prefix: Prefix, start_var: int | None) -> int:
    top = max(prefix.variables, default=0)
    if start_var is None:
        return top + 1
    if start_var <= top:
        raise ValidationError(
            f"start_var {start_var} collides with prefix variables (max {top})"
        )
    return start_var


def encode_existential_cnf(
    prefix: Prefix,
    generators,
    start_var: int | None = None,
    compress_identity: bool = False,
) -> EncodedBreaker:
    """Encode the existential lex-leader breaker as clauses.

    Fresh chain variables are allocated sequentially from ``start_var``
    (default: one past the largest prefix variable), per generator, and
    quantified existentially right after the block of the position they
    guard.  ``compress_identity`` drops fixed positions from the chains
    entirely, giving smaller but differently shaped encodings.
    """
    gens = _checked_generators(prefix, generators)
    next_aux = _fresh_start(prefix, start_var)
    all_clauses: list[tuple[int, ...]] = []
    slots: list[tuple[int, int]] = []
    for g in gens:
        clauses, gslots, used = _chain_for_generator(
            prefix, g, next_aux, compress_identity
        )
        all_clauses.extend(clauses)
        slots.extend(gslots)
        next_aux += used
    aux_vars = tuple(aux for aux, _ in slots)
    extended = _extended_prefix(prefix, ((a, s, EXISTS) for a, s in slots))
    return EncodedBreaker(
        EXISTS, _dedup(all_clauses), aux_vars, tuple(slots), extended, prefix, gens
    )


def encode_universal_dnf(
    prefix: Prefix,
    generators,
    start_var: int | None = None,
    compress_identity: bool = False,
) -> EncodedBreaker:
    """Encode the universal lex-leader breaker as cubes.

    Structurally this is the existential encoding for the flipped
    prefix, negated clause by clause; the chain variables are quantified
    universally at the same insertion points of the original prefix.
    """
    gens = _checked_generators(prefix, generators)
    flipped = prefix.flipped()
    next_aux = _fresh_start(prefix, start_var)
    cubes: list[tuple[int, ...]] = []
    slots: list[tuple[int, int]] = []
    for g in gens:
        clauses, gslots, used = _chain_for_generator(
            flipped, g, next_aux, compress_identity
        )
        cubes.extend(tuple(-lit for lit in clause) for clause in clauses)
        slots.extend(gslots)
        next_aux += used
    aux_vars = tuple(aux for aux, _ in slots)
    extended = _extended_prefix(prefix, ((a, s, FORALL) for a, s in slots))
    return EncodedBreaker(
        FORALL, _dedup(cubes), aux_vars, tuple(slots), extended, prefix, gens
    )


def _split_pair(encoded) -> tuple[EncodedBreaker, EncodedBreaker]:
    try:
        first, second = encoded
    except (TypeError, ValueError):
        raise ValidationError(
            "combined mode needs a pair of encodings (existential, universal)"
        ) from None
    by_polarity = {e.polarity: e for e in (first, second)}
    if set(by_polarity) != {EXISTS, FORALL}:
        raise ValidationError(
            "combined mode needs one existential and one universal encoding"
        )
    return by_polarity[EXISTS], by_polarity[FORALL]


def _check_target(instance: QbfInstance, encoded: EncodedBreaker) -> None:
    if encoded.original_prefix != instance.prefix:
        raise ValidationError("encoding was built for a different prefix")


def augment_instance(
    instance: QbfInstance, encoded, mode: str = "conjoin-cnf"
) -> tuple[QbfInstance, tuple[Prefix, tuple[tuple[int, ...], ...]] | None]:
    """Attach an encoded breaker to an instance.

    ``conjoin-cnf`` appends the clauses of an existential encoding and
    extends the prefix; the sidecar slot of the result is None.
    ``attach-dnf`` extends the prefix with the universal chain variables
    and returns the cube list as a DNF sidecar ``(prefix, cubes)``.
    ``combined`` does both at once given a pair of encodings with
    disjoint chain variables; the returned instance and sidecar share
    one merged prefix.
    """
    if mode == "conjoin-cnf":
        if not isinstance(encoded, EncodedBreaker) or encoded.polarity != EXISTS:
            raise ValidationError("conjoin-cnf needs an existential encoding")
        _check_target(instance, encoded)
        out = QbfInstance(
            prefix=encoded.prefix,
            clauses=instance.clauses + encoded.clauses,
            comments=instance.comments,
        )
        return out, None
    if mode == "attach-dnf":
        if not isinstance(encoded, EncodedBreaker) or encoded.polarity != FORALL:
            raise ValidationError("attach-dnf needs a universal encoding")
        _check_target(instance, encoded)
        out = QbfInstance(
            prefix=encoded.prefix, clauses=instance.clauses, comments=instance.comments
        )
        return out, (encoded.prefix, encoded.cubes)
    if mode == "combined":
        existential, universal = _split_pair(encoded)
        _check_target(instance, existential)
        _check_target(instance, universal)
        overlap = set(existential.aux_vars) & set(universal.aux_vars)
        if overlap:
            raise ValidationError(
                f"encodings share chain variables {sorted(overlap)}"
            )
        merged = _extended_prefix(
            instance.prefix,
            [(a, s, EXISTS) for a, s in existential.aux_slots]
            + [(a, s, FORALL) for a, s in universal.aux_slots],
        )
        out = QbfInstance(
            prefix=merged,
            clauses=instance.clauses + existential.clauses,
            comments=instance.comments,
        )
        return out, (merged, universal.cubes)
    raise ValidationError(f"unknown augment mode {mode!r}; pick one of {AUGMENT_MODES}")


def augmented_formula(
    instance: QbfInstance,
    existential: EncodedBreaker | None = None,
    universal: EncodedBreaker | None = None,
) -> tuple[Prefix, Formula]:
    """Express an augmentation as a prefix and one matrix formula.

    Produces ``((phi | cubes) & clauses)`` over the extended prefix, for
    feeding the brute-force truth oracle; either encoding may be absent.
    """
    phi: Formula = clauses_to_formula(instance.clauses)
    slot_items: list[tuple[int, int, str]] = []
    if universal is not None:
        if universal.polarity != FORALL:
            raise ValidationError("universal argument must be a universal encoding")
        _check_target(instance, universal)
        phi = Or((phi, cubes_to_formula(universal.cubes)))
        slot_items += [(a, s, FORALL) for a, s in universal.aux_slots]
    if existential is not None:
        if existential.polarity != EXISTS:
            raise ValidationError("existential argument must be an existential encoding")
        _check_target(instance, existential)
        phi = And((phi, clauses_to_formula(existential.clauses)))
        slot_items += [(a, s, EXISTS) for a, s in existential.aux_slots]
    if existential is not None and universal is not None:
        overlap = set(existential.aux_vars) & set(universal.aux_vars)
        if overlap:
            raise ValidationError(f"encodings share chain variables {sorted(overlap)}")
    return _extended_prefix(instance.prefix, slot_items), phi


@dataclass(frozen=True)
class BreakerReport:
    """Outcome of an orbit-coverage verification."""

    ok: bool
    polarity: str
    orbit_count: int
    covered: int
    uncovered: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.ok


def verify_breaker(
    prefix: Prefix,
    generators,
    psi,
    cap: int = ENUMERATION_CAP,
    polarity: str | None = None,
) -> BreakerReport:
    """Check that ``psi`` breaks symmetry without losing any orbit.

    For an existential breaker, every semantic orbit of existential
    strategies under the generated group must contain a strategy on
    whose plays ``psi`` always holds; the universal dual asks for a
    universal strategy with some play falsifying it.  ``psi`` may be a
    :class:`BreakerFormula` (the polarity is taken from it) or a plain
    formula (existential unless ``polarity`` says otherwise).
    """
    if isinstance(psi, BreakerFormula):
        formula = psi.formula
        pol = psi.polarity if polarity is None else polarity
    else:
        formula = psi
        pol = EXISTS if polarity is None else polarity
    if pol not in (EXISTS, FORALL):
        raise ValidationError(f"bad polarity {pol!r}")
    role = EXISTENTIAL if pol == EXISTS else UNIVERSAL
    target = pol == EXISTS
    orbits = semantic_orbits(prefix, list(generators), cap=cap, role=role)
    uncovered = tuple(
        k
        for k, orbit in enumerate(orbits)
        if not any(
            strategy_value((prefix, formula), s) == target for s in orbit
        )
    )
    return BreakerReport(
        not uncovered, pol, len(orbits), len(orbits) - len(uncovered), uncovered
    )
