"""Exact multivariate polynomial arithmetic over the rationals.

Everything symbolic in this package reduces to "this polynomial is
identically zero", so coefficients are exact rationals
(:class:`fractions.Fraction`) and polynomials are kept in canonical form:
structural equality is mathematical equality.

Polynomials live over a fixed, ordered :class:`VarSet`; exponent vectors are
dense tuples of the same length as the variable list.  The sizes in this
project are tiny (at most 14 variables, a few hundred terms), so no sparse
cleverness is attempted.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction

Coeff = Union[int, Fraction]


class VarSet:
    """An ordered, immutable set of variable names.

    The order is fixed for the lifetime of every polynomial built over it;
    exponent vectors index into this order.
    """

    __slots__ = ("names", "_index")

    def __init__(self, *names: str):
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names!r}")
        self.names: tuple[str, ...] = tuple(names)
        self._index = {n: i for i, n in enumerate(names)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}; have {self.names}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarSet{self.names!r}"


class VarSetMismatch(ValueError):
    """Raised when combining polynomials over different variable sets."""


def _as_fraction(c: Coeff) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")


class Poly:
    """A multivariate polynomial with exact rational coefficients.

    Immutable; all operations return new instances in canonical form
    (no stored zero coefficients).
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: VarSet, terms: Mapping[tuple[int, ...], Coeff]):
        n = len(vars)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in terms.items():
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} has wrong length for {vars}")
            f = _as_fraction(c)
            if f:
                clean[tuple(exps)] = f
        self.vars = vars
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(vars: VarSet) -> "Poly":
        return Poly(vars, {})

    @staticmethod
    def const(vars: VarSet, c: Coeff) -> "Poly":
        return Poly(vars, {(0,) * len(vars): c})

    @staticmethod
    def var(vars: VarSet, name: str) -> "Poly":
        exps = [0] * len(vars)
        exps[vars.index(name)] = 1
        return Poly(vars, {tuple(exps): Fraction(1)})

    @staticmethod
    def variables(vars: VarSet) -> tuple["Poly", ...]:
        """All variables of ``vars``, in order, as polynomials."""
        return tuple(Poly.var(vars, n) for n in vars.names)

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_value(self) -> Fraction:
        """The value of a degree-<=0 polynomial; error otherwise."""
        if self.total_degree() > 0:
            raise ValueError(f"not a constant: {self}")
        return self.coefficient((0,) * len(self.vars))

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.vars != other.vars:
            raise VarSetMismatch(f"cannot mix {self.vars} and {other.vars}")

    def _coerce(self, other: Union["Poly", Coeff]) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.vars, other)

    def __add__(self, other: Union["Poly", Coeff]) -> "Poly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Poly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Union["Poly", Coeff]) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Coeff) -> "Poly":
        return (-self) + other

    def __mul__(self, other: Union["Poly", Coeff]) -> "Poly":
        other = self._coerce(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Poly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(self.vars, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    # -- calculus ----------------------------------------------------------

    def diff(self, name: str) -> "Poly":
        """Exact partial derivative with respect to ``name``."""
        i = self.vars.index(name)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            e2 = e[:i] + (k - 1,) + e[i + 1 :]
            terms[e2] = terms.get(e2, Fraction(0)) + c * k
        return Poly(self.vars, terms)

    def substitute(self, bindings: Mapping[str, Union["Poly", Coeff]]) -> "Poly":
        """Simultaneous substitution of polynomials for variables.

        Replacement polynomials must live over the same VarSet; unbound
        variables are left alone.
        """
        if not bindings:
            return self
        repl: dict[int, Poly] = {}
        for name, p in bindings.items():
            i = self.vars.index(name)
            repl[i] = self._coerce(p)
        result = Poly.zero(self.vars)
        for e, c in self.terms.items():
            term = Poly.const(self.vars, c)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                base = repl.get(i)
                if base is None:
                    mono = [0] * len(self.vars)
                    mono[i] = k
                    term = term * Poly(self.vars, {tuple(mono): Fraction(1)})
                else:
                    term = term * base**k
            result = result + term
        return result

    def eval(self, point: Mapping[str, Union[Coeff, float]]):
        """Evaluate at a point binding every variable.

        Exact (Fraction) for rational points, IEEE double if any binding
        is a float.
        """
        values = []
        for name in self.vars.names:
            if name not in point:
                raise KeyError(f"unbound variable {name!r}")
            values.append(point[name])
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    def rename(self, target: VarSet, mapping: Mapping[str, str]) -> "Poly":
        """Transport this polynomial to another VarSet via a name map.

        Variables not in ``mapping`` keep their names; every (mapped) name
        must exist in ``target``.
        """
        terms: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            e2 = [0] * len(target)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                name = self.vars.names[i]
                e2[target.index(mapping.get(name, name))] += k
            key = tuple(e2)
            terms[key] = terms.get(key, Fraction(0)) + c
        return Poly(target, terms)

    # -- display -----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in graded-lexicographic order (high degree first)."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(self.vars.names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        s = parts[0]
        for p in parts[1:]:
            s += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return s

    def __repr__(self) -> str:
        return f"Poly({self})"


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------


class InconsistentSystem(ValueError):
    """Raised when an inhomogeneous linear system has no solution."""


class LinearSystem:
    """A rectangular exact linear system ``A x = b``."""

    def __init__(self, matrix: Sequence[Sequence[Coeff]], rhs: Sequence[Coeff] | None = None):
        self.matrix = [[_as_fraction(c) for c in row] for row in matrix]
        ncols = {len(row) for row in self.matrix}
        if len(ncols) > 1:
            raise ValueError("ragged matrix")
        self.ncols = ncols.pop() if ncols else 0
        if rhs is None:
            rhs = [0] * len(self.matrix)
        if len(rhs) != len(self.matrix):
            raise ValueError("rhs length does not match row count")
        self.rhs = [_as_fraction(c) for c in rhs]

    @property
    def nrows(self) -> int:
        return len(self.matrix)


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices).

    First-nonzero pivoting: exact arithmetic needs no scaling heuristics.
    """
    rows = [row[:] for row in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def matrix_rank(matrix: Sequence[Sequence[Coeff]]) -> int:
    rows = [[_as_fraction(c) for c in row] for row in matrix]
    if not rows:
        return 0
    _, pivots = _rref(rows)
    return len(pivots)


def solve_nullspace(sys: LinearSystem) -> list[list[Fraction]]:
    """Exact rational basis of the solution space of ``A x = 0``.

    Returns an empty list for a trivial nullspace.  The system must be
    homogeneous.
    """
    if any(sys.rhs):
        raise ValueError("nullspace is defined for homogeneous systems; rhs must be 0")
    if sys.nrows == 0 or sys.ncols == 0:
        return [
            [Fraction(1) if j == i else Fraction(0) for j in range(sys.ncols)]
            for i in range(sys.ncols)
        ]
    rows, pivots = _rref(sys.matrix)
    pivot_set = set(pivots)
    free = [c for c in range(sys.ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [Fraction(0)] * sys.ncols
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -rows[r][f]
        basis.append(vec)
    return basis


def solve_linear(sys: LinearSystem) -> list[Fraction]:
    """One exact solution of ``A x = b``; raises if the system is inconsistent."""
    aug = [row + [b] for row, b in zip(sys.matrix, sys.rhs)]
    if not aug:
        return [Fraction(0)] * sys.ncols
    rows, pivots = _rref(aug)
    if sys.ncols in pivots:
        raise InconsistentSystem("no exact solution exists")
    x = [Fraction(0)] * sys.ncols
    for r, p in enumerate(pivots):
        x[p] = rows[r][-1]
    return x


def poly_span_rank(polys: Iterable[Poly]) -> int:
    """Rank of a family of polynomials as vectors of coefficients."""
    polys = list(polys)
    monomials = sorted({e for p in polys for e in p.terms})
    matrix = [[p.coefficient(e) for e in monomials] for p in polys]
    return matrix_rank(matrix)
