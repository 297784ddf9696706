"""Poisson tensor, cocycle, and matrix algebra certificates."""

from fractions import Fraction

import pytest

from mbrwa import model, poisson
from mbrwa.model import VARS5, InvariantId, SystemId
from mbrwa.polyring import Poly

X1, Y1, X2, Y2, Z = Poly.variables(VARS5)
PI = poisson.mb_poisson_tensor()


class TestBracket:
    def test_canonical_pairs(self):
        assert poisson.poisson_bracket(X1, Y1) == 1
        assert poisson.poisson_bracket(X2, Y2) == 1

    def test_linear_pairs(self):
        assert poisson.poisson_bracket(Y1, Z) == X1
        assert poisson.poisson_bracket(Y2, Z) == X2

    def test_vanishing_pairs(self):
        coords = Poly.variables(VARS5)
        nonzero = {(0, 1), (1, 4), (2, 3), (3, 4)}
        for i in range(5):
            for j in range(i + 1, 5):
                b = poisson.poisson_bracket(coords[i], coords[j])
                if (i, j) in nonzero:
                    assert not b.is_zero
                else:
                    assert b.is_zero, (i, j)

    def test_antisymmetry_of_tensor(self):
        assert all(r.is_zero for r in poisson.antisymmetry_residuals(PI))

    def test_involution_of_constants(self):
        h = model.invariant_symbolic(InvariantId.H)
        c = model.invariant_symbolic(InvariantId.C)
        j = model.invariant_symbolic(InvariantId.J)
        assert poisson.poisson_bracket(h, c).is_zero
        assert poisson.poisson_bracket(h, j).is_zero
        assert poisson.poisson_bracket(c, j).is_zero


class TestJacobi:
    @pytest.mark.parametrize("triple", [(1, 2, 5), (2, 4, 5)])
    def test_selected_triples(self, triple):
        assert poisson.jacobi_residual(*triple).is_zero

    def test_all_ten_triples(self):
        residuals = poisson.all_jacobi_residuals()
        assert len(residuals) == 10
        assert all(r.is_zero for r in residuals.values())

    def test_index_validation(self):
        with pytest.raises(ValueError):
            poisson.jacobi_residual(2, 1, 3)
        with pytest.raises(ValueError):
            poisson.jacobi_residual(1, 2, 6)


class TestCasimir:
    def test_all_components_zero(self):
        assert all(r.is_zero for r in poisson.casimir_residual())

    def test_h_is_not_a_casimir(self):
        field = poisson.ham_vector_field(PI, model.invariant_symbolic(InvariantId.H))
        assert any(not f.is_zero for f in field)


class TestHamVectorField:
    def test_h_gives_the_dynamics(self):
        field = poisson.ham_vector_field(PI, model.invariant_symbolic(InvariantId.H))
        assert field == model.rhs_symbolic(SystemId.MB5)

    def test_c_gives_zero(self):
        field = poisson.ham_vector_field(PI, model.invariant_symbolic(InvariantId.C))
        assert all(f.is_zero for f in field)

    def test_j_field(self):
        # direct expansion of pi * grad(J)
        field = poisson.ham_vector_field(PI, model.invariant_symbolic(InvariantId.J))
        assert field == (-X2, -Y2, X1, Y1, Poly.zero(VARS5))


class TestAssembly:
    def test_displayed_entries(self):
        assert PI.entry(2, 5) == X1
        assert PI.entry(4, 5) == X2
        assert PI.entry(1, 2) == 1
        assert PI.entry(3, 4) == 1
        assert PI.entry(1, 3).is_zero

    def test_linear_entries_have_degree_at_most_one(self):
        for row in PI.entries:
            for p in row:
                assert p.total_degree() <= 1

    def test_structure_constant_antisymmetry_enforced(self):
        sc = poisson.mb_structure_constants()
        bad_beta = tuple(
            tuple(Fraction(1) for _ in range(5)) for _ in range(5)
        )
        with pytest.raises(ValueError):
            poisson.StructureConstants(alpha=sc.alpha, beta=bad_beta)


class TestMatrixAlgebra:
    def test_e_basis_table(self):
        table = poisson.matrix_commutator_table(poisson.E_BASIS)
        zero = (Fraction(0),) * 5
        for (i, j), coeffs in table.items():
            if (i, j) == (2, 5):
                assert coeffs == (1, 0, 0, 0, 0)
            elif (i, j) == (4, 5):
                assert coeffs == (0, 0, 1, 0, 0)
            else:
                assert coeffs == zero, (i, j)

    def test_e1_e3_commute(self):
        assert poisson.is_zero_matrix(
            poisson.commutator(poisson.E_BASIS[0], poisson.E_BASIS[2])
        )

    def test_a_basis_table(self):
        table = poisson.matrix_commutator_table(poisson.A_BASIS)
        assert table[(1, 2)] == (0, 1, 0, 0)
        assert table[(1, 3)] == (0, 0, -1, 0)
        for key in ((1, 4), (2, 3), (2, 4), (3, 4)):
            assert table[key] == (0, 0, 0, 0)

    def test_outside_span_is_an_error_with_witness(self):
        # two matrices whose commutator leaves their span
        a = poisson._mat([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
        b = poisson._mat([[0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
        with pytest.raises(poisson.CommutatorOutsideSpan) as exc:
            poisson.matrix_commutator_table([a, b])
        assert not poisson.is_zero_matrix(exc.value.witness)


class TestIsoPhi:
    def test_symbolic_residual_zero(self):
        report = poisson.iso_check_Phi()
        assert report.passed, report.residuals

    def test_concrete_pair(self):
        # (0,1,0,0,0) x (0,0,0,0,1) = (1,0,0,0,0), whose matrix image is E1
        vars = VARS5  # any 5-variable set works for constants
        a = [Poly.const(vars, c) for c in (0, 1, 0, 0, 0)]
        b = [Poly.const(vars, c) for c in (0, 0, 0, 0, 1)]
        prod = poisson.vector_product(a, b)
        assert [p.constant_value() for p in prod] == [1, 0, 0, 0, 0]

    def test_self_product_vanishes(self):
        a = [Poly.const(VARS5, c) for c in (3, 1, 4, 1, 5)]
        assert all(p.is_zero for p in poisson.vector_product(a, a))


class TestCocycle:
    def test_report_passes(self):
        report = poisson.cocycle_check()
        assert report.passed, report.residuals
        assert report.witnesses["theta_E1_E2"] == "1"

    def test_non_coboundary_witness(self):
        assert poisson.is_zero_matrix(
            poisson.commutator(poisson.E_BASIS[0], poisson.E_BASIS[1])
        )
        assert poisson.mb_cocycle().matrix[0][1] == 1

    def test_tampered_cocycle_fails(self):
        theta = poisson.mb_cocycle().matrix
        rows = [list(r) for r in theta]
        # theta(E1,E3) != 0 breaks the identity on the triple (2,3,5)
        rows[0][2] = Fraction(1)
        rows[2][0] = Fraction(-1)
        report = poisson.cocycle_check(poisson.Cocycle(matrix=tuple(map(tuple, rows))))
        assert not report.passed


class TestMutationSensitivity:
    def test_single_entry_flip_breaks_antisymmetry(self):
        mutated = poisson.flip_entry_sign(PI, 1, 2)
        assert any(not r.is_zero for r in poisson.antisymmetry_residuals(mutated))

    def test_antisymmetric_flip_breaks_jacobi_or_dynamics(self):
        mutated = poisson.flip_entry_sign(PI, 2, 5, antisymmetric=True)
        jac_bad = any(
            not r.is_zero for r in poisson.all_jacobi_residuals(mutated).values()
        )
        field = poisson.ham_vector_field(mutated, model.invariant_symbolic(InvariantId.H))
        dyn_bad = field != model.rhs_symbolic(SystemId.MB5)
        assert jac_bad or dyn_bad
