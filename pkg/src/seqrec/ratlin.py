"""Exact linear algebra over the rationals.

Everything here is exact: coefficients are Python Fractions backed by
unbounded integers, elimination never rounds, and a reported solution
satisfies every equation identically.  Inconsistent systems come back with
the indices of the input rows whose combination eliminates to 0 = nonzero,
so callers can cite which samples refuted a claim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Union[int, Fraction]


def as_fraction(x: Rat) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class LinearSystem:
    """A finite list of equations ``sum_j coeffs[j] * x_j = rhs`` over Q."""

    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    num_unknowns: int

    def __post_init__(self):
        if self.num_unknowns < 0:
            raise ValueError("num_unknowns must be >= 0")
        for i, (coeffs, _) in enumerate(self.rows):
            if len(coeffs) != self.num_unknowns:
                raise ValueError(
                    f"row {i} has {len(coeffs)} coefficients, expected {self.num_unknowns}"
                )

    @staticmethod
    def build(rows: Iterable[tuple[Sequence[Rat], Rat]], num_unknowns: int) -> "LinearSystem":
        packed = tuple(
            (tuple(as_fraction(c) for c in coeffs), as_fraction(rhs))
            for coeffs, rhs in rows
        )
        return LinearSystem(packed, num_unknowns)

    def residuals(self, solution: Sequence[Rat]) -> list[Fraction]:
        """rhs - coeffs . solution per row; all zero iff `solution` solves the system."""
        sol = [as_fraction(x) for x in solution]
        return [
            rhs - sum((c * x for c, x in zip(coeffs, sol)), Fraction(0))
            for coeffs, rhs in self.rows
        ]


@dataclass(frozen=True)
class Unique:
    solution: tuple[Fraction, ...]


@dataclass(frozen=True)
class Affine:
    """Solution set ``particular + span(nullspace)``.

    `particular` has every free variable pinned to zero; `free_cols` lists
    which columns those are (one nullspace basis vector per free column).
    """

    particular: tuple[Fraction, ...]
    nullspace: tuple[tuple[Fraction, ...], ...]
    free_cols: tuple[int, ...]


@dataclass(frozen=True)
class Inconsistent:
    """`witness_rows`: input rows combined by elimination into 0 = nonzero."""

    witness_rows: tuple[int, ...]


SolveResult = Union[Unique, Affine, Inconsistent]


def solve_exact(system: LinearSystem) -> SolveResult:
    """Gauss-Jordan elimination with exact rationals.

    Returns Unique(x) when the solution is unique, Affine(...) when the
    system is underdetermined, and Inconsistent(rows) when no solution
    exists.  The witness rows come from the provenance of the first
    contradictory eliminated row (a pivot trace, not necessarily a minimal
    infeasible subset).  An empty system is Affine with the full space as
    null space.
    """
    n = system.num_unknowns
    m = len(system.rows)
    coeffs = [list(c) for c, _ in system.rows]
    rhs = [b for _, b in system.rows]
    # provenance[i]: multipliers of the original rows making up working row i
    prov: list[dict[int, Fraction]] = [{i: Fraction(1)} for i in range(m)]

    pivot_of_col: dict[int, int] = {}
    row = 0
    for col in range(n):
        if row == m:
            break
        pr = next((i for i in range(row, m) if coeffs[i][col] != 0), None)
        if pr is None:
            continue
        if pr != row:
            coeffs[row], coeffs[pr] = coeffs[pr], coeffs[row]
            rhs[row], rhs[pr] = rhs[pr], rhs[row]
            prov[row], prov[pr] = prov[pr], prov[row]
        p = coeffs[row][col]
        if p != 1:
            coeffs[row] = [c / p for c in coeffs[row]]
            rhs[row] = rhs[row] / p
            prov[row] = {j: mult / p for j, mult in prov[row].items()}
        prow = coeffs[row]
        for i in range(m):
            if i == row:
                continue
            f = coeffs[i][col]
            if f == 0:
                continue
            coeffs[i] = [ci - f * cr for ci, cr in zip(coeffs[i], prow)]
            rhs[i] = rhs[i] - f * rhs[row]
            pi = prov[i]
            for j, mult in prov[row].items():
                pi[j] = pi.get(j, Fraction(0)) - f * mult
        pivot_of_col[col] = row
        row += 1

    for i in range(row, m):
        if rhs[i] != 0:
            witness = tuple(sorted(j for j, mult in prov[i].items() if mult != 0))
            return Inconsistent(witness)

    particular = [Fraction(0)] * n
    for col, r_i in pivot_of_col.items():
        particular[col] = rhs[r_i]
    free_cols = tuple(c for c in range(n) if c not in pivot_of_col)
    if not free_cols:
        return Unique(tuple(particular))
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for col, r_i in pivot_of_col.items():
            vec[col] = -coeffs[r_i][fc]
        basis.append(tuple(vec))
    return Affine(tuple(particular), tuple(basis), free_cols)
