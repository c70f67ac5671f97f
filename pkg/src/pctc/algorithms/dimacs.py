"""DIMACS CNF front end."""

from dataclasses import dataclass

from ..errors import DimacsSyntaxError, HeaderMismatch

__all__ = ["CnfFormula", "parse_dimacs", "read_dimacs"]


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of clauses over variables ``1..n_vars``.

    Assignments are ``n_vars``-bit integers with ``x1`` as the most
    significant bit, matching the WITNESS register's bit order.
    """

    n_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(lit) for lit in clause) for clause in self.clauses)
        if self.n_vars < 1:
            raise ValueError("a formula needs at least one variable")
        for clause in clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} out of range for {self.n_vars} variables")
        object.__setattr__(self, "clauses", clauses)

    def value(self, assignment, var):
        return (assignment >> (self.n_vars - var)) & 1

    def __call__(self, assignment):
        return all(
            any(self.value(assignment, abs(lit)) == (lit > 0) for lit in clause) for clause in self.clauses
        )

    def models(self):
        """Satisfying assignments by truth-table enumeration."""
        return [w for w in range(2**self.n_vars) if self(w)]

    def to_dimacs(self):
        lines = [f"p cnf {self.n_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, clause + (0,))) for clause in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text):
    """Parse DIMACS CNF text.

    Clauses may span lines and must each end with ``0``. A line starting with
    ``%`` ends the clause section (SATLIB convention).
    """
    n_vars = n_clauses = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if n_vars is not None:
                raise DimacsSyntaxError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsSyntaxError(f"malformed problem line {line!r}", lineno)
            try:
                n_vars, n_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsSyntaxError(f"malformed problem line {line!r}", lineno) from None
            if n_vars < 1 or n_clauses < 0:
                raise DimacsSyntaxError("problem line needs positive variable count", lineno)
            continue
        if n_vars is None:
            raise DimacsSyntaxError("clause before problem line", lineno)
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsSyntaxError(f"invalid literal {token!r}", lineno) from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > n_vars:
                raise DimacsSyntaxError(f"variable {abs(lit)} exceeds declared count {n_vars}", lineno)
            else:
                current.append(lit)
    if n_vars is None:
        raise DimacsSyntaxError("missing problem line")
    if current:
        raise DimacsSyntaxError("last clause is not terminated by 0")
    if len(clauses) != n_clauses:
        raise HeaderMismatch(f"header declares {n_clauses} clauses, found {len(clauses)}")
    return CnfFormula(n_vars, tuple(clauses))


def read_dimacs(path):
    with open(path) as fh:
        return parse_dimacs(fh.read())
