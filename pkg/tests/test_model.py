"""The three formulations, their invariants, and the connecting maps."""

import random
from fractions import Fraction

import pytest

from mbrwa import model
from mbrwa.model import (
    VARS5,
    VARS6,
    VARST6,
    InvariantId,
    State5,
    State6,
    SystemId,
    TangentState6,
)
from mbrwa.polyring import Poly


def rand_fractions(n, rng):
    return [Fraction(rng.randint(-20, 20), rng.randint(1, 10)) for _ in range(n)]


class TestRhs:
    def test_mb5_direct(self):
        assert model.rhs(SystemId.MB5, (1, 2, 3, 4, 5)) == (2, 5, 4, 15, -14)

    def test_mb5_equilibrium_line(self):
        for z0 in (-2, 0, Fraction(7, 3)):
            assert model.rhs(SystemId.MB5, (0, 0, 0, 0, z0)) == (0, 0, 0, 0, 0)

    def test_ham6_direct(self):
        qdot_pdot = model.rhs(SystemId.HAM6, (1, 0, 0, 0, 0, 1))
        assert qdot_pdot == (0, 0, Fraction(1, 2), Fraction(1, 2), 0, 0)

    def test_accepts_state_objects(self):
        s = State5(1, 2, 3, 4, 5)
        assert model.rhs(SystemId.MB5, s) == (2, 5, 4, 15, -14)

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            model.rhs(SystemId.MB5, (1, 2, 3))


class TestRhsSymbolic:
    def test_mb5_last_component(self):
        x1, y1, x2, y2, z = Poly.variables(VARS5)
        assert model.rhs_symbolic(SystemId.MB5)[4] == -x1 * y1 - x2 * y2

    def test_ham6_momentum_p3(self):
        assert model.rhs_symbolic(SystemId.HAM6)[5].is_zero

    def test_el6_first_acceleration(self):
        q1 = Poly.var(VARST6, "q1")
        qd3 = Poly.var(VARST6, "qd3")
        assert model.rhs_symbolic(SystemId.EL6)[3] == q1 * qd3

    def test_el6_is_first_order_form(self):
        # substituting the accelerations back into the second-order residuals
        # must give zero
        rhs = model.rhs_symbolic(SystemId.EL6)
        q1, q2, q3, qd1, qd2, qd3 = Poly.variables(VARST6)
        acc1, acc2, acc3 = rhs[3], rhs[4], rhs[5]
        assert (acc1 - q1 * qd3).is_zero
        assert (acc2 - q2 * qd3).is_zero
        assert (acc3 + q1 * qd1 + q2 * qd2).is_zero


class TestInvariants:
    def test_h_single_term(self):
        assert model.invariant(InvariantId.H, (0, 1, 0, 0, 0)) == Fraction(1, 2)

    def test_c_direct(self):
        assert model.invariant(InvariantId.C, (1, 0, 1, 0, 0)) == 1

    def test_j_symmetric_point(self):
        assert model.invariant(InvariantId.J, (1, 0, 1, 0, 0)) == 0

    def test_type_mismatch(self):
        with pytest.raises(ValueError):
            model.invariant(InvariantId.H, (1, 2, 3, 4, 5, 6))
        with pytest.raises(ValueError):
            model.invariant(InvariantId.HTILDE, (1, 2, 3, 4, 5))

    @pytest.mark.parametrize(
        "system,invariants",
        [
            (SystemId.MB5, (InvariantId.H, InvariantId.C, InvariantId.J)),
            (SystemId.HAM6, (InvariantId.HTILDE, InvariantId.CTILDE, InvariantId.JTILDE)),
        ],
    )
    def test_symbolic_conservation(self, system, invariants):
        # gradient contracted with the dynamics is the zero polynomial
        field = model.rhs_symbolic(system)
        names = model.system_vars(system).names
        for inv in invariants:
            f = model.invariant_symbolic(inv)
            ddt = Poly.zero(f.vars)
            for name, comp in zip(names, field):
                ddt = ddt + f.diff(name) * comp
            assert ddt.is_zero, inv


class TestPhi:
    def test_direct(self):
        assert model.phi(State6(1, 2, 3, 4, 5, 6)) == State5(1, 4, 2, 5, Fraction(7, 2))

    def test_zero_q(self):
        assert model.phi(State6(0, 0, 0, 0, 0, 11)) == State5(0, 0, 0, 0, 11)

    def test_intertwines_invariants_at_random_points(self):
        rng = random.Random(7)
        for _ in range(100):
            s = State6(*rand_fractions(6, rng))
            down = model.phi(s)
            assert model.invariant(InvariantId.H, down) == model.invariant(
                InvariantId.HTILDE, s
            )
            assert model.invariant(InvariantId.C, down) == s.p3
            assert model.invariant(InvariantId.J, down) == model.invariant(
                InvariantId.JTILDE, s
            )


class TestLegendre:
    def test_direct(self):
        assert model.legendre(TangentState6(1, 1, 0, 0, 0, 1)) == State6(1, 1, 0, 0, 0, 2)

    def test_inverse_pair_random(self):
        rng = random.Random(3)
        for _ in range(50):
            ts = TangentState6(*rand_fractions(6, rng))
            assert model.legendre_inv(model.legendre(ts)) == ts
            s = State6(*rand_fractions(6, rng))
            assert model.legendre(model.legendre_inv(s)) == s

    def test_energy_relation_symbolic(self):
        # Htilde after the fiber map equals sum(p_i qd_i) - L
        leg = dict(zip(VARS6.names, model.legendre_symbolic()))
        h = model.invariant_symbolic(InvariantId.HTILDE)
        composed = Poly.zero(VARST6)
        for e, c in h.terms.items():
            term = Poly.const(VARST6, c)
            for name, k in zip(VARS6.names, e):
                if k:
                    term = term * leg[name] ** k
            composed = composed + term
        qd = [Poly.var(VARST6, f"qd{i}") for i in (1, 2, 3)]
        energy = sum(
            (p * v for p, v in zip(model.legendre_symbolic()[3:], qd)),
            Poly.zero(VARST6),
        )
        lag = model.invariant_symbolic(InvariantId.L)
        assert (composed - (energy - lag)).is_zero


class TestJacobianRank:
    def test_at_origin(self):
        assert model.jacobian_rank_phi(State6(0, 0, 0, 0, 0, 0)) == 5

    def test_at_nonzero_q(self):
        assert model.jacobian_rank_phi(State6(1, 2, 3, 0, 0, 0)) == 5

    def test_random_samples(self):
        rng = random.Random(11)
        for _ in range(25):
            s = State6(*[rng.uniform(-5, 5) for _ in range(6)])
            assert model.jacobian_rank_phi(s) == 5


def test_compiled_rhs_matches_symbolic():
    import numpy as np

    rng = random.Random(5)
    for system in SystemId:
        fast = model.rhs_compiled(system)
        for _ in range(10):
            point = [rng.uniform(-2, 2) for _ in range(model.system_dim(system))]
            exact = model.rhs(system, point)
            assert np.allclose(fast(np.array(point)), [float(v) for v in exact], rtol=1e-15)
