"""Boolean concept classes and the structural operations on them.

Covers literals, terms (conjunctions), clauses (disjunctions), CNF formulas,
monotone conjunctions and decision lists, all immutable and evaluable, plus
the two constructions the robustness analysis leans on:

* ``disagreement_cnfs``: the disagreement region of two decision lists as a
  family of variable-indexed CNFs whose satisfying sets partition it.
* ``maximal_disjoint_clauses`` / ``restrict``: a maximal variable-disjoint
  clause set of a CNF and the partial-assignment restrictions that rewrite
  the formula as a disjoint disjunction over assignments of those variables.

A plain text format (DIMACS-style for CNF, one ``term -> bit`` line per
decision-list item) is provided for the CLI and fixtures; see
``format_concept`` / ``parse_concept``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import ValidationError
from .hypercube import Point, PointSet, _full_mask, coordinate_mask


@dataclass(frozen=True, slots=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self) -> None:
        if self.var < 0:
            raise ValidationError(f"variable index must be >= 0, got {self.var}")

    def inverted(self) -> "Literal":
        return Literal(self.var, not self.negated)

    def satisfied_bits(self, bits: int) -> bool:
        return bool(bits >> self.var & 1) != self.negated

    def __str__(self) -> str:
        return f"~x{self.var}" if self.negated else f"x{self.var}"


def pos(var: int) -> Literal:
    return Literal(var, False)


def neg(var: int) -> Literal:
    return Literal(var, True)


def _canonical_literals(literals: Iterable[Literal], kind: str) -> tuple[Literal, ...]:
    lits = tuple(sorted(set(literals), key=lambda l: (l.var, l.negated)))
    seen: set[int] = set()
    for l in lits:
        if l.var in seen:
            raise ValidationError(f"variable x{l.var} appears twice in {kind}")
        seen.add(l.var)
    return lits


def _masks(literals: Sequence[Literal]) -> tuple[int, int]:
    p = n = 0
    for l in literals:
        if l.negated:
            n |= 1 << l.var
        else:
            p |= 1 << l.var
    return p, n


@dataclass(frozen=True)
class Term:
    """A conjunction of literals; the empty term is the constant true."""

    literals: tuple[Literal, ...] = ()
    _pos: int = field(init=False, repr=False, compare=False)
    _neg: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        lits = _canonical_literals(self.literals, "term")
        object.__setattr__(self, "literals", lits)
        p, n = _masks(lits)
        object.__setattr__(self, "_pos", p)
        object.__setattr__(self, "_neg", n)

    @property
    def width(self) -> int:
        return len(self.literals)

    @property
    def is_true(self) -> bool:
        return not self.literals

    def max_var(self) -> int:
        return max((l.var for l in self.literals), default=-1)

    def satisfied_bits(self, bits: int) -> bool:
        return (bits & self._pos) == self._pos and (bits & self._neg) == 0

    def __str__(self) -> str:
        return " & ".join(map(str, self.literals)) if self.literals else "true"


@dataclass(frozen=True)
class Clause:
    """A disjunction of literals; the empty clause is the constant false.

    Tautological clauses (a variable and its negation) are rejected up
    front: they would poison the variable-disjointness bookkeeping and a
    CNF never needs them.
    """

    literals: tuple[Literal, ...] = ()
    _pos: int = field(init=False, repr=False, compare=False)
    _neg: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        lits = _canonical_literals(self.literals, "clause")
        object.__setattr__(self, "literals", lits)
        p, n = _masks(lits)
        object.__setattr__(self, "_pos", p)
        object.__setattr__(self, "_neg", n)

    @property
    def width(self) -> int:
        return len(self.literals)

    @property
    def is_false(self) -> bool:
        return not self.literals

    def variables(self) -> frozenset[int]:
        return frozenset(l.var for l in self.literals)

    def max_var(self) -> int:
        return max((l.var for l in self.literals), default=-1)

    def satisfied_bits(self, bits: int) -> bool:
        return (bits & self._pos) != 0 or (bits & self._neg) != self._neg

    def __str__(self) -> str:
        return " | ".join(map(str, self.literals)) if self.literals else "false"


@dataclass(frozen=True)
class CnfFormula:
    """A conjunction of clauses; ``k`` bounds the clause width.

    ``k`` may be declared wider than the widest clause (a 2-CNF with only
    unit clauses is still a 2-CNF); by default it is the observed maximum.
    An empty clause list is the constant true, a formula containing an
    empty clause is unsatisfiable.
    """

    n: int
    clauses: tuple[Clause, ...] = ()
    k: int = -1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"formula dimension must be >= 1, got {self.n}")
        clauses = tuple(self.clauses)
        object.__setattr__(self, "clauses", clauses)
        width = max((c.width for c in clauses), default=0)
        if self.k == -1:
            object.__setattr__(self, "k", width)
        elif self.k < width:
            raise ValidationError(f"clause of width {width} exceeds declared k={self.k}")
        for c in clauses:
            if c.max_var() >= self.n:
                raise ValidationError(f"clause {c} references variable outside n={self.n}")

    @property
    def is_constant_false(self) -> bool:
        return any(c.is_false for c in self.clauses)

    def evaluate_bits(self, bits: int) -> int:
        for c in self.clauses:
            if not c.satisfied_bits(bits):
                return 0
        return 1

    def __str__(self) -> str:
        return " & ".join(f"({c})" for c in self.clauses) if self.clauses else "true"


def constant_false(n: int, k: int = -1) -> CnfFormula:
    """The canonical unsatisfiable formula: a single empty clause."""
    return CnfFormula(n, (Clause(),), k)


@dataclass(frozen=True)
class MonotoneConjunction:
    """A conjunction of positive literals; empty set of variables is true."""

    n: int
    vars: tuple[int, ...] = ()
    _mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.n}")
        vs = tuple(sorted(set(self.vars)))
        if vs and (vs[0] < 0 or vs[-1] >= self.n):
            raise ValidationError(f"variables {vs} out of range for n={self.n}")
        object.__setattr__(self, "vars", vs)
        mask = 0
        for v in vs:
            mask |= 1 << v
        object.__setattr__(self, "_mask", mask)

    @property
    def width(self) -> int:
        return len(self.vars)

    def evaluate_bits(self, bits: int) -> int:
        return 1 if (bits & self._mask) == self._mask else 0

    def __str__(self) -> str:
        return " & ".join(f"x{v}" for v in self.vars) if self.vars else "true"


@dataclass(frozen=True)
class DecisionList:
    """Ordered (term, bit) pairs with a constant-true default last.

    Output on x is the bit of the first satisfied term; the final true term
    guarantees totality.  Term width is bounded by ``k``.
    """

    n: int
    k: int
    items: tuple[tuple[Term, int], ...]

    def __post_init__(self) -> None:
        items = tuple((t, int(v)) for t, v in self.items)
        object.__setattr__(self, "items", items)
        if self.n < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.n}")
        if self.k < 0:
            raise ValidationError(f"width bound must be >= 0, got {self.k}")
        if not items:
            raise ValidationError("decision list must be non-empty")
        if not items[-1][0].is_true:
            raise ValidationError("last decision-list item must have the constant-true term")
        for t, v in items:
            if t.width > self.k:
                raise ValidationError(f"term {t} wider than k={self.k}")
            if t.max_var() >= self.n:
                raise ValidationError(f"term {t} references variable outside n={self.n}")
            if v not in (0, 1):
                raise ValidationError(f"output bit must be 0 or 1, got {v}")

    def evaluate_bits(self, bits: int) -> int:
        for term, v in self.items:
            if term.satisfied_bits(bits):
                return v
        raise AssertionError("unreachable: default term is constant true")

    def __str__(self) -> str:
        return "; ".join(f"{t} -> {v}" for t, v in self.items)


Concept = Union[Literal, Term, Clause, CnfFormula, MonotoneConjunction, DecisionList]


def evaluate(c: Concept, x: Point) -> int:
    """Value of concept c at point x (dimension-checked)."""
    n = getattr(c, "n", None)
    if n is not None and n != x.n:
        raise ValidationError(f"dimension mismatch: concept n={n}, point n={x.n}")
    if isinstance(c, (Literal, Term, Clause)):
        mv = c.var if isinstance(c, Literal) else c.max_var()
        if mv >= x.n:
            raise ValidationError(f"concept references variable x{mv} outside n={x.n}")
        return 1 if c.satisfied_bits(x.bits) else 0
    return c.evaluate_bits(x.bits)


def _clause_indicator(c: Clause, n: int) -> int:
    bits = 0
    full = _full_mask(n)
    for l in c.literals:
        m = coordinate_mask(n, l.var)
        bits |= (full ^ m) if l.negated else m
    return bits


def _term_indicator(t: Term, n: int) -> int:
    full = _full_mask(n)
    bits = full
    for l in t.literals:
        m = coordinate_mask(n, l.var)
        bits &= (full ^ m) if l.negated else m
    return bits


def satisfying_set(c: Concept, n: int | None = None) -> PointSet:
    """Exact indicator of {x : c(x) = 1}, built by bitset algebra.

    ``n`` is required for bare literals/terms/clauses (they carry no
    dimension) and otherwise must agree with the concept's own.
    """
    own = getattr(c, "n", None)
    if own is not None:
        if n is not None and n != own:
            raise ValidationError(f"dimension mismatch: concept n={own}, requested n={n}")
        n = own
    if n is None:
        raise ValidationError("dimension required for a concept without one")
    full = _full_mask(n)
    if isinstance(c, Literal):
        c = Term((c,))
    if isinstance(c, Term):
        if c.max_var() >= n:
            raise ValidationError("term references variable outside dimension")
        return PointSet(n, _term_indicator(c, n))
    if isinstance(c, Clause):
        if c.max_var() >= n:
            raise ValidationError("clause references variable outside dimension")
        return PointSet(n, _clause_indicator(c, n))
    if isinstance(c, CnfFormula):
        bits = full
        for clause in c.clauses:
            bits &= _clause_indicator(clause, n)
            if not bits:
                break
        return PointSet(n, bits)
    if isinstance(c, MonotoneConjunction):
        bits = full
        for v in c.vars:
            bits &= coordinate_mask(n, v)
        return PointSet(n, bits)
    if isinstance(c, DecisionList):
        remaining = full
        out = 0
        for term, v in c.items:
            hit = remaining & _term_indicator(term, n)
            if v:
                out |= hit
            remaining &= ~hit
            if not remaining:
                break
        return PointSet(n, out)
    raise ValidationError(f"unsupported concept type: {type(c).__name__}")


def negation_clause(term: Term) -> Clause:
    """De Morgan image of a term: one clause, empty (false) for the true term."""
    return Clause(tuple(l.inverted() for l in term.literals))


def disagreement_cnfs(c: DecisionList, h: DecisionList) -> list[tuple[int, int, CnfFormula]]:
    """CNFs pinning the first-activated items of c and h where outputs differ.

    For item indices (i, j) with c's bit != h's bit, the emitted formula
    forces: no earlier term of c fires, term i fires, no earlier term of h
    fires, term j fires.  Each negated term contributes one clause, each
    literal of the firing terms a unit clause, so widths stay within
    max(c.k, h.k).  Over all emitted pairs the satisfying sets are pairwise
    disjoint and union to {x : c(x) != h(x)}.  Pairs whose formula is
    unsatisfiable are emitted too; downstream mass sums treat them as zero.
    """
    if c.n != h.n:
        raise ValidationError(f"dimension mismatch: {c.n} != {h.n}")
    n = c.n
    neg_c = [negation_clause(t) for t, _ in c.items]
    neg_h = [negation_clause(t) for t, _ in h.items]
    out: list[tuple[int, int, CnfFormula]] = []
    for i, (ti, vi) in enumerate(c.items):
        units_i = [Clause((l,)) for l in ti.literals]
        for j, (tj, vj) in enumerate(h.items):
            if vi == vj:
                continue
            clauses = neg_c[:i] + units_i + neg_h[:j] + [Clause((l,)) for l in tj.literals]
            out.append((i, j, CnfFormula(n, tuple(clauses))))
    return out


def maximal_disjoint_clauses(phi: CnfFormula) -> tuple[tuple[int, ...], frozenset[int]]:
    """Greedy first-fit maximal set of pairwise variable-disjoint clauses.

    Returns (clause indices, union of their variables).  Maximality, not
    maximum size, is all the downstream analysis needs, and first-fit in
    clause order is deterministic and linear.
    """
    chosen: list[int] = []
    used: set[int] = set()
    for idx, clause in enumerate(phi.clauses):
        vs = clause.variables()
        if vs & used:
            continue
        chosen.append(idx)
        used |= vs
    return tuple(chosen), frozenset(used)


@dataclass(frozen=True)
class PartialAssignment:
    """An immutable map from variable indices to bits."""

    bindings: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(v), int(b)) for v, b in self.bindings))
        object.__setattr__(self, "bindings", pairs)
        seen: set[int] = set()
        for v, b in pairs:
            if v < 0:
                raise ValidationError(f"variable index must be >= 0, got {v}")
            if b not in (0, 1):
                raise ValidationError(f"assigned bit must be 0 or 1, got {b}")
            if v in seen:
                raise ValidationError(f"variable x{v} bound twice")
            seen.add(v)

    @classmethod
    def from_dict(cls, d: Mapping[int, int]) -> "PartialAssignment":
        return cls(tuple(d.items()))

    @property
    def variables(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.bindings)

    def get(self, var: int) -> int | None:
        for v, b in self.bindings:
            if v == var:
                return b
        return None

    def as_dict(self) -> dict[int, int]:
        return dict(self.bindings)


def enumerate_assignments(variables: Iterable[int]) -> Iterator[PartialAssignment]:
    """All 2^s assignments of the given variables, in fixed pattern order."""
    vs = sorted(set(variables))
    for pattern in range(1 << len(vs)):
        yield PartialAssignment(tuple((v, (pattern >> i) & 1) for i, v in enumerate(vs)))


def restrict(phi: CnfFormula, a: PartialAssignment) -> CnfFormula:
    """The restriction of phi under a, conjoined with unit clauses fixing a.

    Satisfied clauses are dropped and falsified literals removed; a clause
    falsified outright collapses the whole result to the canonical
    constant-false formula.  When ``a`` assigns the variables of a maximal
    disjoint clause set, every surviving non-unit clause has lost at least
    one literal, so the non-unit part is a (k-1)-CNF.
    """
    for v, _ in a.bindings:
        if v >= phi.n:
            raise ValidationError(f"assignment binds x{v} outside n={phi.n}")
    bound = a.as_dict()
    new_clauses: list[Clause] = []
    for clause in phi.clauses:
        keep: list[Literal] = []
        satisfied = False
        for lit in clause.literals:
            b = bound.get(lit.var)
            if b is None:
                keep.append(lit)
            elif lit.satisfied_bits(b << lit.var):
                satisfied = True
                break
        if satisfied:
            continue
        if not keep:
            return constant_false(phi.n)
        new_clauses.append(Clause(tuple(keep)))
    for v, b in a.bindings:
        new_clauses.append(Clause((Literal(v, negated=(b == 0)),)))
    return CnfFormula(phi.n, tuple(new_clauses))


# ---------------------------------------------------------------------------
# Text format: DIMACS-style CNF, `term -> bit` decision lists, monotone
# conjunctions as a header plus one line of variables.  Variables are
# 1-based in files, negative means negated.

def format_concept(c: Concept) -> str:
    if isinstance(c, CnfFormula):
        lines = [f"p cnf {c.n} {len(c.clauses)}"]
        for clause in c.clauses:
            nums = [(-l.var - 1 if l.negated else l.var + 1) for l in clause.literals]
            lines.append(" ".join(str(v) for v in nums) + (" 0" if nums else "0"))
        return "\n".join(lines) + "\n"
    if isinstance(c, DecisionList):
        lines = [f"p dl {c.n} {c.k}"]
        for term, v in c.items:
            if term.is_true:
                lines.append(f"true -> {v}")
            else:
                nums = [(-l.var - 1 if l.negated else l.var + 1) for l in term.literals]
                lines.append(" ".join(str(x) for x in nums) + f" -> {v}")
        return "\n".join(lines) + "\n"
    if isinstance(c, MonotoneConjunction):
        body = " ".join(str(v + 1) for v in c.vars)
        return f"p mconj {c.n}\n{body}\n"
    raise ValidationError(f"no text format for {type(c).__name__}")


def _parse_signed(tokens: Sequence[str], n: int, where: str) -> list[Literal]:
    lits = []
    for tok in tokens:
        try:
            v = int(tok)
        except ValueError:
            raise ValidationError(f"{where}: not an integer: {tok!r}") from None
        if v == 0:
            raise ValidationError(f"{where}: variable 0 is invalid (1-based)")
        var = abs(v) - 1
        if var >= n:
            raise ValidationError(f"{where}: variable {abs(v)} exceeds n={n}")
        lits.append(Literal(var, negated=v < 0))
    return lits


def parse_concept(text: str) -> Concept:
    """Parse the text format; the ``p`` header line selects the kind."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("c")]
    if not lines or not lines[0].startswith("p "):
        raise ValidationError("line 1: missing 'p' header")
    header = lines[0].split()
    if len(header) < 3:
        raise ValidationError(f"line 1: malformed header {lines[0]!r}")
    kind = header[1]
    try:
        n = int(header[2])
    except ValueError:
        raise ValidationError(f"line 1: bad dimension {header[2]!r}") from None

    if kind == "cnf":
        clauses = []
        for ln_no, ln in enumerate(lines[1:], start=2):
            toks = ln.split()
            if toks and toks[-1] == "0":
                toks = toks[:-1]
            elif toks == ["0"]:
                toks = []
            clauses.append(Clause(tuple(_parse_signed(toks, n, f"line {ln_no}"))))
        return CnfFormula(n, tuple(clauses))

    if kind == "dl":
        if len(header) < 4:
            raise ValidationError("line 1: decision-list header needs 'p dl <n> <k>'")
        k = int(header[3])
        items = []
        for ln_no, ln in enumerate(lines[1:], start=2):
            if "->" not in ln:
                raise ValidationError(f"line {ln_no}: expected 'term -> bit'")
            left, right = ln.rsplit("->", 1)
            bit = right.strip()
            if bit not in ("0", "1"):
                raise ValidationError(f"line {ln_no}: output bit must be 0 or 1")
            left = left.strip()
            if left == "true":
                term = Term()
            else:
                term = Term(tuple(_parse_signed(left.split(), n, f"line {ln_no}")))
            items.append((term, int(bit)))
        return DecisionList(n, k, tuple(items))

    if kind == "mconj":
        body = lines[1].split() if len(lines) > 1 else []
        vars_: list[int] = []
        for tok in body:
            v = int(tok)
            if v <= 0 or v > n:
                raise ValidationError(f"line 2: variable {v} out of range")
            vars_.append(v - 1)
        return MonotoneConjunction(n, tuple(vars_))

    raise ValidationError(f"line 1: unknown concept kind {kind!r}")
