"""CNF data model shared by every solver.

Literals are signed integers in the DIMACS convention: ``v`` is the positive
literal of variable ``v`` and ``-v`` its negation.  Clauses are normalized
tuples of literals and formulas are immutable, so they can be handed to
worker processes as-is.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

Literal = int
Clause = tuple[int, ...]


def neg(lit: Literal) -> Literal:
    return -lit


def lit_var(lit: Literal) -> int:
    return lit if lit > 0 else -lit


def make_clause(literals: Iterable[Literal]) -> Optional[Clause]:
    """Normalize a clause: drop duplicates (keeping first occurrence order).

    Returns ``None`` for a tautology, which callers drop.  Raises on an empty
    clause or a zero literal.
    """
    seen: dict[int, None] = {}
    for lit in literals:
        lit = int(lit)
        if lit == 0:
            raise ValueError("0 is not a literal")
        if -lit in seen:
            return None
        seen[lit] = None
    if not seen:
        raise ValueError("empty clause")
    return tuple(seen)


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause in formula")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(
                        f"literal {lit} out of range for {self.num_vars} variables"
                    )

    @classmethod
    def build(cls, num_vars: int, clauses: Iterable[Iterable[Literal]]) -> "Formula":
        """Construct a formula, normalizing clauses and dropping tautologies."""
        normalized = []
        for raw in clauses:
            clause = make_clause(raw)
            if clause is not None:
                normalized.append(clause)
        return cls(num_vars, tuple(normalized))

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    @property
    def max_clause_len(self) -> int:
        return max((len(c) for c in self.clauses), default=0)


class Assignment:
    """Partial truth assignment over variables ``1..num_vars``.

    Values are ``True``, ``False`` or ``None`` (unassigned).
    """

    __slots__ = ("values",)

    def __init__(self, num_vars: int, values: Optional[Sequence[Optional[bool]]] = None):
        if values is None:
            self.values: list[Optional[bool]] = [None] * (num_vars + 1)
        else:
            if len(values) != num_vars + 1:
                raise ValueError("values must have length num_vars + 1")
            self.values = list(values)

    @classmethod
    def from_literals(cls, num_vars: int, literals: Iterable[Literal]) -> "Assignment":
        a = cls(num_vars)
        for lit in literals:
            a.set_literal(lit)
        return a

    @property
    def num_vars(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, var: int) -> Optional[bool]:
        return self.values[var]

    def __setitem__(self, var: int, value: Optional[bool]) -> None:
        if var < 1:
            raise IndexError(var)
        self.values[var] = value

    def __eq__(self, other) -> bool:
        return isinstance(other, Assignment) and self.values == other.values

    def __repr__(self) -> str:
        return f"Assignment({self.to_literals()})"

    def copy(self) -> "Assignment":
        return Assignment(self.num_vars, self.values)

    def set_literal(self, lit: Literal) -> None:
        """Make ``lit`` true."""
        self.values[lit_var(lit)] = lit > 0

    def lit_value(self, lit: Literal) -> Optional[bool]:
        v = self.values[lit_var(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    def is_total(self) -> bool:
        return all(v is not None for v in self.values[1:])

    def to_literals(self) -> list[Literal]:
        return [v if val else -v for v, val in enumerate(self.values) if v and val is not None]

    def completed(self, default: bool = False) -> "Assignment":
        """Copy with every unassigned variable set to ``default``."""
        return Assignment(
            self.num_vars,
            [None] + [default if v is None else v for v in self.values[1:]],
        )


def evaluate(f: Formula, a: Assignment) -> Optional[int]:
    """Index of the first violated clause under total assignment ``a``.

    Returns ``None`` when every clause is satisfied.
    """
    if a.num_vars < f.num_vars or not all(
        a.values[v] is not None for v in range(1, f.num_vars + 1)
    ):
        raise ValueError("evaluate requires a total assignment")
    vals = a.values
    for idx, clause in enumerate(f.clauses):
        for lit in clause:
            if vals[lit] if lit > 0 else not vals[-lit]:
                break
        else:
            return idx
    return None


def satisfies(f: Formula, a: Assignment) -> bool:
    return evaluate(f, a) is None


def reduce(f: Formula, a: Assignment) -> Optional[Formula]:
    """Simplify ``f`` under ``a``; ``None`` signals a conflict (empty clause)."""
    vals = a.values
    out = []
    for clause in f.clauses:
        kept = []
        for lit in clause:
            v = vals[lit if lit > 0 else -lit]
            if v is None:
                kept.append(lit)
            elif v == (lit > 0):
                break
        else:
            if not kept:
                return None
            out.append(tuple(kept))
    return Formula(f.num_vars, tuple(out))


def unit_literals(f: Formula) -> list[Literal]:
    return list(dict.fromkeys(c[0] for c in f.clauses if len(c) == 1))


def is_2cnf(f: Formula) -> bool:
    return all(len(c) <= 2 for c in f.clauses)


def literal_weights(f: Formula) -> dict[Literal, Fraction]:
    """Each occurrence of a literal in a clause of length s contributes 1/s.

    Positive and negative literals are weighted separately.  Literals that do
    not occur are absent from the result (weight 0).
    """
    weights: dict[Literal, Fraction] = {}
    for clause in f.clauses:
        share = Fraction(1, len(clause))
        for lit in clause:
            weights[lit] = weights.get(lit, 0) + share
    return weights
