"""Lie-algebraic and Poisson-geometric structure of the 5D system.

The phase space carries a modified Lie-Poisson tensor: the linear part comes
from the structure constants of a five-dimensional nilpotent matrix algebra,
the constant part from a 2-cocycle that is not a coboundary.  Every structural
claim (Jacobi identity, Casimir, the Hamiltonian vector field reproducing the
dynamics, the algebra isomorphisms) is certified by exact polynomial
arithmetic here.

Brackets are computed through the tensor and exact gradients; the pairwise
coordinate relations are test assertions, not definitions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import model
from .model import VARS5, InvariantId, SystemId
from .polyring import (
    InconsistentSystem,
    LinearSystem,
    Poly,
    VarSet,
    solve_linear,
)
from .report import VerificationReport, report_from_residuals

Matrix = tuple[tuple[Fraction, ...], ...]

DIM = 5


def _mat(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(Fraction(c) for c in row) for row in rows)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, k = len(a), len(b[0]), len(b)
    return tuple(
        tuple(sum((a[i][r] * b[r][j] for r in range(k)), Fraction(0)) for j in range(m))
        for i in range(n)
    )


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def is_zero_matrix(a: Matrix) -> bool:
    return all(not c for row in a for c in row)


# The five-dimensional nilpotent algebra: [E2, E5] = E1, [E4, E5] = E3,
# all other basis brackets zero.
E_BASIS: tuple[Matrix, ...] = (
    _mat([[0, 0, -1, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
    _mat([[0, 0, 0, 0], [0, 0, -1, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
    _mat([[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
    _mat([[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]),
    _mat([[0, -1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
)

# Matrix realization of the symmetry algebra of the Euler-Lagrange system:
# [A1, A2] = A2, [A1, A3] = -A3, all other brackets zero.
A_BASIS: tuple[Matrix, ...] = (
    _mat([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]),
    _mat([[0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
    _mat([[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
    _mat([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
)


@dataclass(frozen=True)
class StructureConstants:
    """Bracket data {u_i, u_j} = sum_k alpha[i][j][k] u_k + beta[i][j].

    Indices are 0-based; both tensors are antisymmetric in (i, j).
    """

    alpha: tuple[tuple[tuple[Fraction, ...], ...], ...]
    beta: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for i in range(DIM):
            for j in range(DIM):
                if self.beta[i][j] != -self.beta[j][i]:
                    raise ValueError(f"beta not antisymmetric at ({i},{j})")
                for k in range(DIM):
                    if self.alpha[i][j][k] != -self.alpha[j][i][k]:
                        raise ValueError(f"alpha not antisymmetric at ({i},{j},{k})")


@dataclass(frozen=True)
class Cocycle:
    """A constant antisymmetric bilinear form on the algebra, as a matrix."""

    matrix: Matrix

    def __post_init__(self):
        for i in range(DIM):
            for j in range(DIM):
                if self.matrix[i][j] != -self.matrix[j][i]:
                    raise ValueError(f"cocycle matrix not antisymmetric at ({i},{j})")

    def __call__(self, i: int, j: int) -> Fraction:
        return self.matrix[i][j]


@dataclass(frozen=True)
class PoissonTensor:
    """A 5x5 antisymmetric matrix of polynomials over the 5D phase space."""

    entries: tuple[tuple[Poly, ...], ...]

    def entry(self, i: int, j: int) -> Poly:
        """Entry by 1-based coordinate indices."""
        return self.entries[i - 1][j - 1]


def mb_structure_constants() -> StructureConstants:
    """The nonzero brackets {u1,u2}=1, {u2,u5}=u1, {u3,u4}=1, {u4,u5}=u3."""
    alpha = [[[Fraction(0)] * DIM for _ in range(DIM)] for _ in range(DIM)]
    beta = [[Fraction(0)] * DIM for _ in range(DIM)]
    # linear parts: {u2,u5}=u1, {u4,u5}=u3  (0-based: (1,4)->0, (3,4)->2)
    for i, j, k in ((1, 4, 0), (3, 4, 2)):
        alpha[i][j][k] = Fraction(1)
        alpha[j][i][k] = Fraction(-1)
    # constant parts: {u1,u2}=1, {u3,u4}=1
    for i, j in ((0, 1), (2, 3)):
        beta[i][j] = Fraction(1)
        beta[j][i] = Fraction(-1)
    return StructureConstants(
        alpha=tuple(tuple(tuple(r) for r in m) for m in alpha),
        beta=tuple(tuple(r) for r in beta),
    )


def mb_cocycle() -> Cocycle:
    """The constant part of the bracket as a 2-cocycle matrix."""
    return Cocycle(matrix=mb_structure_constants().beta)


def assemble_modified_lie_poisson(sc: StructureConstants, theta: Cocycle) -> PoissonTensor:
    """Tensor with entries pi_ij = sum_k alpha[i][j][k] u_k + theta_ij."""
    coords = Poly.variables(VARS5)
    rows = []
    for i in range(DIM):
        row = []
        for j in range(DIM):
            p = Poly.const(VARS5, theta.matrix[i][j])
            for k in range(DIM):
                c = sc.alpha[i][j][k]
                if c:
                    p = p + c * coords[k]
            row.append(p)
        rows.append(tuple(row))
    return PoissonTensor(entries=tuple(rows))


@lru_cache(maxsize=None)
def mb_poisson_tensor() -> PoissonTensor:
    return assemble_modified_lie_poisson(mb_structure_constants(), mb_cocycle())


def flip_entry_sign(pi: PoissonTensor, i: int, j: int, antisymmetric: bool = False) -> PoissonTensor:
    """Mutation helper: flip the sign of entry (i, j), 1-based.

    With ``antisymmetric=True`` the partner entry (j, i) is flipped too, so
    the mutation survives the antisymmetry check and must be caught by the
    Jacobi / Casimir / vector-field certificates instead.
    """
    rows = [list(r) for r in pi.entries]
    rows[i - 1][j - 1] = -rows[i - 1][j - 1]
    if antisymmetric and i != j:
        rows[j - 1][i - 1] = -rows[j - 1][i - 1]
    return PoissonTensor(entries=tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# Brackets and residuals
# ---------------------------------------------------------------------------


def poisson_bracket(f: Poly, g: Poly, pi: PoissonTensor | None = None) -> Poly:
    """{f, g} = (grad f)^T pi (grad g), exactly."""
    pi = pi or mb_poisson_tensor()
    if f.vars != VARS5 or g.vars != VARS5:
        raise ValueError("poisson_bracket arguments must live over the 5D phase space")
    df = [f.diff(n) for n in VARS5.names]
    dg = [g.diff(n) for n in VARS5.names]
    total = Poly.zero(VARS5)
    for i in range(DIM):
        if df[i].is_zero:
            continue
        for j in range(DIM):
            entry = pi.entries[i][j]
            if entry.is_zero or dg[j].is_zero:
                continue
            total = total + df[i] * entry * dg[j]
    return total


def jacobi_residual(i: int, j: int, k: int, pi: PoissonTensor | None = None) -> Poly:
    """Cyclic Jacobi sum for coordinate functions u_i, u_j, u_k (1-based)."""
    if not (1 <= i < j < k <= DIM):
        raise ValueError(f"need 1 <= i < j < k <= {DIM}, got ({i},{j},{k})")
    pi = pi or mb_poisson_tensor()
    coords = Poly.variables(VARS5)
    ui, uj, uk = coords[i - 1], coords[j - 1], coords[k - 1]
    return (
        poisson_bracket(poisson_bracket(ui, uj, pi), uk, pi)
        + poisson_bracket(poisson_bracket(uj, uk, pi), ui, pi)
        + poisson_bracket(poisson_bracket(uk, ui, pi), uj, pi)
    )


def all_jacobi_residuals(pi: PoissonTensor | None = None) -> dict[tuple[int, int, int], Poly]:
    pi = pi or mb_poisson_tensor()
    return {
        (i, j, k): jacobi_residual(i, j, k, pi)
        for i in range(1, DIM + 1)
        for j in range(i + 1, DIM + 1)
        for k in range(j + 1, DIM + 1)
    }


def ham_vector_field(pi: PoissonTensor, h: Poly) -> tuple[Poly, ...]:
    """The vector field pi * grad(h), componentwise."""
    dh = [h.diff(n) for n in VARS5.names]
    return tuple(
        sum((pi.entries[i][j] * dh[j] for j in range(DIM)), Poly.zero(VARS5))
        for i in range(DIM)
    )


def casimir_residual(pi: PoissonTensor | None = None) -> tuple[Poly, ...]:
    """pi * grad(C) for the distinguished function C; zero iff C is a Casimir."""
    pi = pi or mb_poisson_tensor()
    return ham_vector_field(pi, model.invariant_symbolic(InvariantId.C))


def antisymmetry_residuals(pi: PoissonTensor) -> list[Poly]:
    """Entries of pi + pi^T; all zero iff the tensor is antisymmetric."""
    return [
        pi.entries[i][j] + pi.entries[j][i] for i in range(DIM) for j in range(i, DIM)
    ]


# ---------------------------------------------------------------------------
# Matrix algebra checks
# ---------------------------------------------------------------------------


class CommutatorOutsideSpan(ValueError):
    """A basis commutator does not lie in the span of the basis."""

    def __init__(self, i: int, j: int, witness: Matrix):
        self.indices = (i, j)
        self.witness = witness
        super().__init__(f"[B{i},B{j}] is outside the span of the basis: {witness}")


def matrix_commutator_table(basis: Sequence[Matrix]) -> dict[tuple[int, int], tuple[Fraction, ...]]:
    """Expand every [B_i, B_j], i < j (1-based), in the given basis.

    The expansion is an exact linear solve over the 16 matrix entries;
    failure to expand raises with the offending commutator as witness.
    """
    flat_basis = [[m[r][c] for r in range(4) for c in range(4)] for m in basis]
    columns = list(zip(*flat_basis))  # 16 rows, len(basis) cols
    table = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            comm = commutator(basis[i], basis[j])
            rhs = [comm[r][c] for r in range(4) for c in range(4)]
            try:
                coeffs = solve_linear(LinearSystem(columns, rhs))
            except InconsistentSystem:
                raise CommutatorOutsideSpan(i + 1, j + 1, comm) from None
            table[(i + 1, j + 1)] = tuple(coeffs)
    return table


def _phi_matrix(v: Sequence[Poly], vars: VarSet) -> tuple[tuple[Poly, ...], ...]:
    # components of v are (alpha, beta, gamma, delta, theta)
    zero = Poly.zero(vars)
    a, b, g, d, th = v
    return (
        (zero, -th, -a, g),
        (zero, zero, -b, d),
        (zero, zero, zero, zero),
        (zero, zero, zero, zero),
    )


def vector_product(a: Sequence[Poly], b: Sequence[Poly]) -> tuple[Poly, ...]:
    """The product on R^5 carried over from the matrix bracket."""
    zero = Poly.zero(a[0].vars)
    return (a[1] * b[4] - b[1] * a[4], zero, a[3] * b[4] - b[3] * a[4], zero, zero)


def iso_check_Phi() -> VerificationReport:
    """Certify that the coordinate map into the matrix algebra is a Lie
    algebra isomorphism: Phi(a x b) = [Phi(a), Phi(b)] for symbolic a, b."""
    started = time.perf_counter()
    vars = VarSet(*[f"a{i}" for i in range(1, 6)], *[f"b{i}" for i in range(1, 6)])
    a = [Poly.var(vars, f"a{i}") for i in range(1, 6)]
    b = [Poly.var(vars, f"b{i}") for i in range(1, 6)]
    ma, mb = _phi_matrix(a, vars), _phi_matrix(b, vars)
    lhs = _phi_matrix(vector_product(a, b), vars)
    prod1 = [
        [
            sum((ma[i][k] * mb[k][j] for k in range(4)), Poly.zero(vars))
            for j in range(4)
        ]
        for i in range(4)
    ]
    prod2 = [
        [
            sum((mb[i][k] * ma[k][j] for k in range(4)), Poly.zero(vars))
            for j in range(4)
        ]
        for i in range(4)
    ]
    residuals = [
        lhs[i][j] - (prod1[i][j] - prod2[i][j]) for i in range(4) for j in range(4)
    ]
    return report_from_residuals("iso-Phi", residuals, started=started)


def cocycle_check(theta: Cocycle | None = None) -> VerificationReport:
    """Certify the 2-cocycle identity on all basis triples plus the
    non-coboundary witness [E1,E2] = 0 with theta(E1,E2) = 1."""
    started = time.perf_counter()
    theta = theta or mb_cocycle()
    sc = mb_structure_constants()

    def theta_bracket(i: int, j: int, k: int) -> Fraction:
        # theta([E_i, E_j], E_k) expanded through the structure constants
        return sum(
            (sc.alpha[i][j][m] * theta.matrix[m][k] for m in range(DIM)), Fraction(0)
        )

    failures: list[str] = []
    for i in range(DIM):
        for j in range(i + 1, DIM):
            for k in range(j + 1, DIM):
                s = theta_bracket(i, j, k) + theta_bracket(j, k, i) + theta_bracket(k, i, j)
                if s:
                    failures.append(f"cocycle identity ({i+1},{j+1},{k+1}): {s}")
    witness_comm = commutator(E_BASIS[0], E_BASIS[1])
    if not is_zero_matrix(witness_comm):
        failures.append(f"[E1,E2] != 0: {witness_comm}")
    if theta.matrix[0][1] != 1:
        failures.append(f"theta(E1,E2) = {theta.matrix[0][1]} != 1")
    elapsed = (time.perf_counter() - started) * 1e3
    return VerificationReport(
        check="cocycle",
        status="pass" if not failures else "fail",
        residuals=failures,
        witnesses={
            "commutator_E1_E2": "0" if is_zero_matrix(witness_comm) else "nonzero",
            "theta_E1_E2": str(theta.matrix[0][1]),
        },
        elapsed_ms=elapsed,
    )
