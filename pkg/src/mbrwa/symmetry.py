"""Lie point symmetries of the Euler-Lagrange system and their transport.

The pipeline follows the classical symmetry machinery for second-order ODE
systems: prolong a point-field ansatz to second order, act on the equations,
substitute the accelerations from the equations themselves, and demand that
the residuals vanish identically in the jet variables.  The determining
equations are generated mechanically from the prolongation formulas, never
transcribed; the hand-written relations live in the test suite as a
regression check on the generator.

Velocity-dependent or non-polynomial symmetry coefficients are out of scope.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from . import model
from .model import HALF, InvariantId, SystemId
from .polyring import LinearSystem, Poly, VarSet, matrix_rank, solve_nullspace

BASE_NAMES = ("t", "q1", "q2", "q3")
JET_EXTRA = ("qd1", "qd2", "qd3", "qdd1", "qdd2", "qdd3")
PARAM_NAMES = ("alpha", "beta", "gamma", "delta")

BASE_VARS = VarSet(*BASE_NAMES)
BASE_VARS_P = VarSet(*BASE_NAMES, *PARAM_NAMES)

X5_NAMES = ("t", "x1", "y1", "x2", "y2", "z")


class NotInSymmetryFamily(ValueError):
    """The vector field is not of the four-parameter symmetry form."""


@dataclass(frozen=True)
class SymParams:
    """The four real parameters of the symmetry family."""

    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)
    gamma: Fraction = Fraction(0)
    delta: Fraction = Fraction(0)


@dataclass(frozen=True)
class JetVectorField:
    """A point-symmetry candidate: xi d/dt + sum eta_i d/dq_i.

    Coefficients are polynomials in (t, q1, q2, q3), optionally with extra
    symbolic parameter variables, but never velocities.
    """

    xi: Poly
    eta: tuple[Poly, Poly, Poly]

    def __post_init__(self):
        vars = self.xi.vars
        if vars.names[:4] != BASE_NAMES:
            raise ValueError(f"base variables must start with {BASE_NAMES}")
        for e in self.eta:
            if e.vars != vars:
                raise ValueError("xi and eta must share one variable set")

    @property
    def vars(self) -> VarSet:
        return self.xi.vars

    def components(self) -> tuple[Poly, ...]:
        return (self.xi,) + self.eta


@dataclass(frozen=True)
class ProlongedField:
    """A jet field with its velocity and acceleration coefficients."""

    base: JetVectorField
    vel_coeffs: tuple[Poly, Poly, Poly]
    acc_coeffs: tuple[Poly, ...]  # empty for order 1


@dataclass(frozen=True)
class VectorField:
    """A vector field as one coefficient polynomial per variable.

    Parameter variables carried in the VarSet simply get zero coefficients.
    """

    vars: VarSet
    components: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.components) != len(self.vars):
            raise ValueError("one component per variable required")
        for c in self.components:
            if c.vars != self.vars:
                raise ValueError("components must live over the field's VarSet")

    def component(self, name: str) -> Poly:
        return self.components[self.vars.index(name)]

    def apply(self, f: Poly) -> Poly:
        """Directional derivative of f along this field."""
        total = Poly.zero(self.vars)
        for name, comp in zip(self.vars.names, self.components):
            if not comp.is_zero:
                total = total + comp * f.diff(name)
        return total

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)


def lie_bracket_fields(u: VectorField, v: VectorField) -> VectorField:
    """[u, v]_k = u(v_k) - v(u_k), exactly, over a shared VarSet."""
    if u.vars != v.vars:
        raise ValueError("lie bracket requires a shared VarSet")
    return VectorField(
        vars=u.vars,
        components=tuple(u.apply(vk) - v.apply(uk) for uk, vk in zip(u.components, v.components)),
    )


# ---------------------------------------------------------------------------
# Jet space plumbing
# ---------------------------------------------------------------------------


def jet_vars(base: VarSet) -> VarSet:
    """Extend a (t, q, params) VarSet with velocities and accelerations."""
    params = base.names[4:]
    return VarSet(*BASE_NAMES, *JET_EXTRA, *params)


def _lift(p: Poly, target: VarSet) -> Poly:
    return p.rename(target, {})


def total_derivative(f: Poly) -> Poly:
    """Total time derivative on the second-order jet space.

    D_t f = df/dt + qd_i df/dq_i + qdd_i df/dqd_i; parameter variables are
    constants.
    """
    vars = f.vars
    total = f.diff("t")
    for i in (1, 2, 3):
        total = total + Poly.var(vars, f"qd{i}") * f.diff(f"q{i}")
        total = total + Poly.var(vars, f"qdd{i}") * f.diff(f"qd{i}")
    return total


def prolong(u: JetVectorField, order: Literal[1, 2]) -> ProlongedField:
    """First or second prolongation of a point field, as exact polynomials.

    vel_i = D_t(eta_i) - D_t(xi) qd_i, and
    acc_i = D_t(vel_i) - D_t(xi) qdd_i
          = D_t^2(eta_i) - D_t^2(xi) qd_i - 2 D_t(xi) qdd_i.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    jv = jet_vars(u.vars)
    xi = _lift(u.xi, jv)
    eta = [_lift(e, jv) for e in u.eta]
    dxi = total_derivative(xi)
    vel = tuple(
        total_derivative(eta[i]) - dxi * Poly.var(jv, f"qd{i+1}") for i in range(3)
    )
    acc: tuple[Poly, ...] = ()
    if order == 2:
        acc = tuple(
            total_derivative(vel[i]) - dxi * Poly.var(jv, f"qdd{i+1}") for i in range(3)
        )
    return ProlongedField(base=u, vel_coeffs=vel, acc_coeffs=acc)


def _el_equations(jv: VarSet) -> tuple[Poly, Poly, Poly]:
    """The three second-order equations as jet-space residuals."""
    q1, q2 = Poly.var(jv, "q1"), Poly.var(jv, "q2")
    qd1, qd2, qd3 = (Poly.var(jv, f"qd{i}") for i in (1, 2, 3))
    qdd1, qdd2, qdd3 = (Poly.var(jv, f"qdd{i}") for i in (1, 2, 3))
    return (
        qdd1 - q1 * qd3,
        qdd2 - q2 * qd3,
        qdd3 + q1 * qd1 + q2 * qd2,
    )


def _acceleration_bindings(jv: VarSet) -> dict[str, Poly]:
    """Accelerations solved from the equations of motion."""
    q1, q2 = Poly.var(jv, "q1"), Poly.var(jv, "q2")
    qd1, qd2, qd3 = (Poly.var(jv, f"qd{i}") for i in (1, 2, 3))
    return {
        "qdd1": q1 * qd3,
        "qdd2": q2 * qd3,
        "qdd3": -(q1 * qd1 + q2 * qd2),
    }


def determining_residuals(u: JetVectorField) -> tuple[Poly, Poly, Poly]:
    """Act with the second prolongation on the equations and substitute the
    accelerations; the field is a symmetry iff all three residuals vanish
    identically in (t, q, qd)."""
    jv = jet_vars(u.vars)
    pr = prolong(u, 2)
    xi = _lift(u.xi, jv)
    eta = [_lift(e, jv) for e in u.eta]
    bindings = _acceleration_bindings(jv)
    residuals = []
    for eq in _el_equations(jv):
        acted = xi * eq.diff("t")
        for i in range(3):
            acted = acted + eta[i] * eq.diff(f"q{i+1}")
            acted = acted + pr.vel_coeffs[i] * eq.diff(f"qd{i+1}")
            acted = acted + pr.acc_coeffs[i] * eq.diff(f"qdd{i+1}")
        residuals.append(acted.substitute(bindings))
    return tuple(residuals)


# ---------------------------------------------------------------------------
# The symmetry family and its basis
# ---------------------------------------------------------------------------


def family_field(p: SymParams) -> JetVectorField:
    """The four-parameter symmetry field with rational parameter values."""
    t, q1, q2, q3 = Poly.variables(BASE_VARS)[:4]
    return JetVectorField(
        xi=-p.alpha * t + Poly.const(BASE_VARS, p.beta),
        eta=(
            p.alpha * q1 + p.gamma * q2,
            -p.gamma * q1 + p.alpha * q2,
            p.alpha * q3 + Poly.const(BASE_VARS, p.delta),
        ),
    )


def symbolic_family_field() -> JetVectorField:
    """The family with the four parameters as extra symbolic variables."""
    vs = BASE_VARS_P
    t, q1, q2, q3 = (Poly.var(vs, n) for n in BASE_NAMES)
    al, be, ga, de = (Poly.var(vs, n) for n in PARAM_NAMES)
    return JetVectorField(
        xi=-al * t + be,
        eta=(al * q1 + ga * q2, -ga * q1 + al * q2, al * q3 + de),
    )


def symmetry_basis() -> tuple[JetVectorField, ...]:
    """The four basis symmetries: scaling, time translation, q3 translation,
    rotation in the (q1, q2) plane."""
    return (
        family_field(SymParams(alpha=Fraction(1))),
        family_field(SymParams(beta=Fraction(1))),
        family_field(SymParams(delta=Fraction(1))),
        family_field(SymParams(gamma=Fraction(1))),
    )


def flip_family_coefficient(u: JetVectorField, slot: str, var: str) -> JetVectorField:
    """Mutation helper: negate every term of one coefficient that contains
    the named base variable.

    ``slot`` is one of xi, eta1, eta2, eta3.  Used to confirm that the
    determining-equation certificates actually notice a wrong coefficient.
    """
    slots = {"xi": 0, "eta1": 1, "eta2": 2, "eta3": 3}
    idx = slots[slot]
    comp = u.components()[idx]
    i = comp.vars.index(var)
    terms = {e: (-c if e[i] else c) for e, c in comp.terms.items()}
    mutated = Poly(comp.vars, terms)
    comps = list(u.components())
    comps[idx] = mutated
    return JetVectorField(xi=comps[0], eta=tuple(comps[1:]))


def lie_bracket(u: JetVectorField, v: JetVectorField) -> JetVectorField:
    """Bracket of two point fields on (t, q) space."""
    if u.vars != v.vars:
        raise ValueError("lie bracket requires a shared VarSet")
    uf = VectorField(vars=u.vars, components=_pad_components(u.components(), u.vars))
    vf = VectorField(vars=v.vars, components=_pad_components(v.components(), v.vars))
    w = lie_bracket_fields(uf, vf)
    return JetVectorField(xi=w.components[0], eta=tuple(w.components[1:4]))


def _pad_components(comps: Sequence[Poly], vars: VarSet) -> tuple[Poly, ...]:
    zero = Poly.zero(vars)
    return tuple(comps) + (zero,) * (len(vars) - len(comps))


def field_coefficient_vector(u: JetVectorField, max_degree: int) -> list[Fraction]:
    """Flatten a field into coefficients over all (t, q) monomials of total
    degree <= max_degree, slot by slot (xi, eta1, eta2, eta3)."""
    monos = _monomials(max_degree)
    vec: list[Fraction] = []
    for comp in u.components():
        if comp.total_degree() > max_degree:
            raise ValueError("coefficient degree exceeds the requested cap")
        for m in monos:
            vec.append(comp.coefficient(m + (0,) * (len(comp.vars) - 4)))
    return vec


def _monomials(max_degree: int) -> list[tuple[int, int, int, int]]:
    monos = [
        e
        for e in itertools.product(range(max_degree + 1), repeat=4)
        if sum(e) <= max_degree
    ]
    monos.sort(key=lambda e: (sum(e), e))
    return monos


def solve_determining(max_degree: int = 2) -> list[JetVectorField]:
    """Exact nullspace of the determining equations for a polynomial ansatz
    of total degree <= max_degree in (t, q).

    Coefficients of each independent jet monomial give one homogeneous linear
    equation per monomial; the returned basis is deterministic.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    monos = _monomials(max_degree)
    columns: list[tuple[int, tuple[int, ...]]] = [
        (slot, m) for slot in range(4) for m in monos
    ]
    # Residuals are linear in (xi, eta): assemble column by column from
    # single-monomial unit fields.
    residual_columns = []
    for slot, m in columns:
        mono_poly = Poly(BASE_VARS, {m: Fraction(1)})
        zero = Poly.zero(BASE_VARS)
        comps = [zero, zero, zero, zero]
        comps[slot] = mono_poly
        u = JetVectorField(xi=comps[0], eta=tuple(comps[1:]))
        residual_columns.append(determining_residuals(u))
    row_keys = sorted(
        {
            (eq_idx, e)
            for col in residual_columns
            for eq_idx, r in enumerate(col)
            for e in r.terms
        }
    )
    matrix = [
        [col[eq_idx].coefficient(e) for col in residual_columns]
        for eq_idx, e in row_keys
    ]
    basis_vectors = solve_nullspace(LinearSystem(matrix))
    fields = []
    for vec in basis_vectors:
        comps = []
        for slot in range(4):
            terms = {}
            for j, m in enumerate(monos):
                c = vec[slot * len(monos) + j]
                if c:
                    terms[m] = c
            comps.append(Poly(BASE_VARS, terms))
        fields.append(JetVectorField(xi=comps[0], eta=tuple(comps[1:])))
    return fields


def spans_match(
    fields: Sequence[JetVectorField],
    reference: Sequence[JetVectorField],
    max_degree: int,
) -> bool:
    """Whether two families of point fields span the same linear space."""
    a = [field_coefficient_vector(u, max_degree) for u in fields]
    b = [field_coefficient_vector(u, max_degree) for u in reference]
    ra, rb, rab = matrix_rank(a), matrix_rank(b), matrix_rank(a + b)
    return ra == rb == rab


# ---------------------------------------------------------------------------
# Variational symmetries and Noether charges
# ---------------------------------------------------------------------------


def _lagrangian_on(jv: VarSet) -> Poly:
    lag = model.invariant_symbolic(InvariantId.L)
    return lag.rename(jv, {})


def variational_residual(u: JetVectorField) -> Poly:
    """pr1(u) L + L D_t(xi); zero iff u is a variational symmetry."""
    jv = jet_vars(u.vars)
    pr = prolong(u, 1)
    lag = _lagrangian_on(jv)
    xi = _lift(u.xi, jv)
    eta = [_lift(e, jv) for e in u.eta]
    acted = xi * lag.diff("t")
    for i in range(3):
        acted = acted + eta[i] * lag.diff(f"q{i+1}")
        acted = acted + pr.vel_coeffs[i] * lag.diff(f"qd{i+1}")
    return acted + lag * total_derivative(xi)


@dataclass(frozen=True)
class NoetherCharge:
    """A conserved quantity on (q, p) with its symbolic conservation check."""

    poly: Poly
    conservation_residual: Poly

    @property
    def conserved(self) -> bool:
        return self.conservation_residual.is_zero


def _charge_from_coeffs(beta: Poly | Fraction, gamma, delta, vars: VarSet) -> NoetherCharge:
    h = model.invariant_symbolic(InvariantId.HTILDE).rename(vars, {})
    j = model.invariant_symbolic(InvariantId.JTILDE).rename(vars, {})
    c = model.invariant_symbolic(InvariantId.CTILDE).rename(vars, {})
    charge = -beta * h - gamma * j + delta * c
    field = [f.rename(vars, {}) for f in model.rhs_symbolic(SystemId.HAM6)]
    residual = Poly.zero(vars)
    for name, comp in zip(model.VARS6.names, field):
        residual = residual + charge.diff(name) * comp
    return NoetherCharge(poly=charge, conservation_residual=residual)


def noether_charge(p: SymParams) -> NoetherCharge:
    """The charge -beta*Htilde - gamma*Jtilde + delta*Ctilde of a variational
    symmetry (alpha must be zero)."""
    if p.alpha != 0:
        raise ValueError("only the alpha = 0 members are variational; no Noether charge")
    return _charge_from_coeffs(p.beta, p.gamma, p.delta, model.VARS6)


def noether_charge_symbolic() -> NoetherCharge:
    """The charge with (beta, gamma, delta) as symbolic variables."""
    vars = VarSet(*model.VARS6.names, "beta", "gamma", "delta")
    be, ga, de = (Poly.var(vars, n) for n in ("beta", "gamma", "delta"))
    return _charge_from_coeffs(be, ga, de, vars)


# ---------------------------------------------------------------------------
# Push-forwards onto the cotangent side and the 5D system
# ---------------------------------------------------------------------------


def extract_family_params(u: JetVectorField) -> tuple[Poly, Poly, Poly, Poly]:
    """Recover (alpha, beta, gamma, delta) from a field of the family form.

    The coefficients may be polynomials in parameter variables but must be
    free of (t, q); raises NotInSymmetryFamily otherwise.
    """
    vars = u.vars

    def base_free(p: Poly) -> bool:
        return all(
            all(e[vars.index(n)] == 0 for n in BASE_NAMES) for e in p.terms
        )

    t, q1, q2, q3 = (Poly.var(vars, n) for n in BASE_NAMES)
    alpha = -u.xi.diff("t")
    beta = u.xi + alpha * t
    gamma = u.eta[0].diff("q2")
    delta = u.eta[2] - alpha * q3
    if not all(base_free(p) for p in (alpha, beta, gamma, delta)):
        raise NotInSymmetryFamily("coefficients are not constant/parameter valued")
    expected = (
        -alpha * t + beta,
        alpha * q1 + gamma * q2,
        -gamma * q1 + alpha * q2,
        alpha * q3 + delta,
    )
    if tuple(u.components()) != expected:
        raise NotInSymmetryFamily("field does not match the four-parameter form")
    return alpha, beta, gamma, delta


def pushforward(u: JetVectorField, target: Literal["FL", "PHI"]) -> VectorField:
    """Transport a family field to (t, q, p) via the fiber map (target="FL"),
    or further onto the extended 5D space (target="PHI").

    Restricted to the four-parameter family: projectability onto the 5D
    space is not guaranteed outside it.
    """
    extract_family_params(u)  # membership check
    cotangent = _pushforward_fl(u)
    if target == "FL":
        return cotangent
    if target == "PHI":
        return _pushforward_phi(cotangent)
    raise ValueError(f"unknown push-forward target {target!r}")


def _pushforward_fl(u: JetVectorField) -> VectorField:
    params = u.vars.names[4:]
    big = VarSet(*BASE_NAMES, *JET_EXTRA, "p1", "p2", "p3", *params)
    target = VarSet("t", "q1", "q2", "q3", "p1", "p2", "p3", *params)
    pr = prolong(u, 1)
    q1, q2 = Poly.var(big, "q1"), Poly.var(big, "q2")
    eta = [_lift(e, big) for e in u.eta]
    vel = [v.rename(big, {}) for v in pr.vel_coeffs]
    # momentum coefficients: transport p_i(q, qdot) along the prolonged field
    p_coeffs = [vel[0], vel[1], vel[2] + q1 * eta[0] + q2 * eta[1]]
    qd_bindings = {
        "qd1": Poly.var(big, "p1"),
        "qd2": Poly.var(big, "p2"),
        "qd3": Poly.var(big, "p3") - HALF * (q1**2 + q2**2),
    }
    comps: dict[str, Poly] = {"t": _lift(u.xi, big)}
    for i in range(3):
        comps[f"q{i+1}"] = eta[i]
        comps[f"p{i+1}"] = p_coeffs[i].substitute(qd_bindings)
    zero = Poly.zero(target)
    return VectorField(
        vars=target,
        components=tuple(
            comps[n].rename(target, {}) if n in comps else zero for n in target.names
        ),
    )


def _pushforward_phi(v: VectorField) -> VectorField:
    params = v.vars.names[7:]
    big = VarSet(*v.vars.names, "x1", "y1", "x2", "y2", "z")
    target = VarSet(*X5_NAMES, *params)
    x1, x2 = Poly.var(big, "x1"), Poly.var(big, "x2")
    bindings = {
        "q1": x1,
        "p1": Poly.var(big, "y1"),
        "q2": x2,
        "p2": Poly.var(big, "y2"),
        "p3": Poly.var(big, "z") + HALF * (x1**2 + x2**2),
    }

    def transport(p: Poly) -> Poly:
        out = p.rename(big, {}).substitute(bindings)
        if any(e[big.index("q3")] for e in out.terms):
            raise NotInSymmetryFamily("field does not project: q3 survives transport")
        return out.rename(target, {})

    q1c, q2c = v.component("q1"), v.component("q2")
    zq = v.component("p3") - Poly.var(v.vars, "q1") * q1c - Poly.var(v.vars, "q2") * q2c
    comps = {
        "t": transport(v.component("t")),
        "x1": transport(q1c),
        "y1": transport(v.component("p1")),
        "x2": transport(q2c),
        "y2": transport(v.component("p2")),
        "z": transport(zq),
    }
    zero = Poly.zero(target)
    return VectorField(
        vars=target,
        components=tuple(comps.get(n, zero) for n in target.names),
    )


def family_pushforward_symbolic() -> VectorField:
    """The pushed-forward 5D field with symbolic (alpha, beta, gamma)."""
    return pushforward(symbolic_family_field(), "PHI")


# ---------------------------------------------------------------------------
# Symmetries of the first-order 5D system
# ---------------------------------------------------------------------------


def _dynamics_field(vars: VarSet) -> VectorField:
    """The extended autonomous field d/dt + sum F_i d/dx_i on (t, x)."""
    rhs = [f.rename(vars, {}) for f in model.rhs_symbolic(SystemId.MB5)]
    comps = {"t": Poly.const(vars, 1)}
    for name, f in zip(model.VARS5.names, rhs):
        comps[name] = f
    zero = Poly.zero(vars)
    return VectorField(vars=vars, components=tuple(comps.get(n, zero) for n in vars.names))


def first_order_symmetry_residual(x: VectorField) -> tuple[Poly, ...]:
    """Lie-point-symmetry residuals of the 5D first-order system.

    For each state coordinate: D_t(eta_k) - F_k D_t(xi) - X(F_k), with
    every velocity replaced by F; all five vanish iff x is a symmetry.
    """
    vars = x.vars
    dyn = _dynamics_field(vars)
    xi = x.component("t")

    def dt(f: Poly) -> Poly:
        # total derivative along solutions: d/dt + F_j d/dx_j
        return dyn.apply(f)

    residuals = []
    for name in model.VARS5.names:
        fk = dyn.component(name)
        eta_k = x.component(name)
        acted = Poly.zero(vars)
        acted = acted + xi * fk.diff("t")
        for xn in model.VARS5.names:
            acted = acted + x.component(xn) * fk.diff(xn)
        residuals.append(dt(eta_k) - fk * dt(xi) - acted)
    return tuple(residuals)


@dataclass(frozen=True)
class DynamicsCommutatorRecord:
    """Classification of a field against the extended dynamics field."""

    commutator: VectorField
    proportional: bool
    factor: Poly | None  # the constant c with [X, V] = c V, when proportional
    is_symmetry: bool  # [X, V] = 0
    is_conformal: bool  # [X, V] = c V, c constant
    is_master: bool  # [X, V] != 0 and [[X, V], V] = 0
    double_commutator_zero: bool


def dynamics_commutator(x: VectorField) -> DynamicsCommutatorRecord:
    """Compute [X, V] and classify: symmetry, conformal, master."""
    vars = x.vars
    dyn = _dynamics_field(vars)
    comm = lie_bracket_fields(x, dyn)
    # candidate factor from the d/dt component: [X,V]_t = c * 1
    factor = comm.component("t")
    state_names = ("t",) + model.VARS5.names
    constant = all(
        all(e[vars.index(n)] == 0 for n in state_names) for e in factor.terms
    )
    proportional = constant and all(
        (comm.component(n) - factor * dyn.component(n)).is_zero for n in state_names
    )
    double = lie_bracket_fields(comm, dyn)
    is_symmetry = comm.is_zero
    return DynamicsCommutatorRecord(
        commutator=comm,
        proportional=proportional,
        factor=factor if proportional else None,
        is_symmetry=is_symmetry,
        is_conformal=proportional,
        is_master=(not is_symmetry) and double.is_zero,
        double_commutator_zero=double.is_zero,
    )
