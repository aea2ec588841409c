import pytest
from hypothesis import given, settings, strategies as st

from tiltlab.cyclotomic import (
    CycloField,
    MismatchedFieldError,
    cyclotomic_polynomial,
    euler_phi,
)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(5) == (1, 1, 1, 1, 1)
    assert cyclotomic_polynomial(9) == (1, 0, 0, 1, 0, 0, 1)
    assert cyclotomic_polynomial(15) == (1, -1, 0, 1, -1, 1, 0, -1, 1)


def test_euler_phi():
    assert [euler_phi(n) for n in (3, 5, 7, 9, 15)] == [2, 4, 6, 6, 8]


def test_root_of_unity_identities():
    for ell in (3, 5, 7, 9):
        F = CycloField(ell)
        z = F.zeta
        assert z * F.zeta_power(ell - 1) == F.one
        # Phi_ell(zeta) = 0 amounts to the reduction being canonical
        acc = F.zero
        for c, k in zip(cyclotomic_polynomial(ell), range(ell)):
            acc = acc + F.zeta_power(k) * F.scalar(c)
        assert acc.is_zero()


def test_sum_of_cube_roots():
    F = CycloField(3)
    assert F.zeta + F.zeta_power(2) == F.scalar(-1)


def test_field_inverse_example():
    F = CycloField(5)
    a = F.one + F.zeta
    assert a * a.inverse() == F.one


def test_inverse_of_zero_raises():
    F = CycloField(3)
    with pytest.raises(ZeroDivisionError):
        F.zero.inverse()


def test_mismatched_ell_raises():
    a = CycloField(3).one
    b = CycloField(5).one
    with pytest.raises(MismatchedFieldError):
        a + b


def test_invalid_ell():
    with pytest.raises(ValueError):
        CycloField(4)
    with pytest.raises(ValueError):
        CycloField(1)


def test_quantum_integers():
    for ell in (3, 5, 7):
        F = CycloField(ell)
        assert F.quantum_integer(1) == F.one
        assert F.quantum_integer(ell).is_zero()
        assert F.quantum_integer(-2) == -F.quantum_integer(2)


def test_quantum_binomial_by_brute_laurent_sum():
    # [4 choose 1] = [4] = z^3 + z + z^-1 + z^-3, evaluated exactly
    F = CycloField(3)
    brute = (
        F.zeta_power(3) + F.zeta_power(1) + F.zeta_power(-1) + F.zeta_power(-3)
    )
    assert F.quantum_binomial(4, 1) == brute == F.quantum_integer(4)


def test_quantum_binomial_bounds():
    F = CycloField(3)
    with pytest.raises(ValueError):
        F.quantum_binomial(3, -1)
    with pytest.raises(ValueError):
        F.quantum_binomial(2, 3)


def test_lucas_nonvanishing_below_ell():
    for ell in (3, 5, 7):
        F = CycloField(ell)
        for n in range(ell):
            for k in range(n + 1):
                assert not F.quantum_binomial(n, k).is_zero(), (ell, n, k)


def _scalars(ell):
    F = CycloField(ell)
    coeff = st.integers(min_value=-4, max_value=4)
    return st.builds(
        lambda cs: F.from_coeffs(cs),
        st.lists(coeff, min_size=F.phi, max_size=F.phi),
    )


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5]).flatmap(lambda e: st.tuples(_scalars(e), _scalars(e), _scalars(e))))
def test_field_axioms(triple):
    a, b, c = triple
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inverse() == a.field.one


def test_binomial_k_operator_value_matches_lucas():
    # qbinom(m, t) at the root of unity for t < ell, via the operator formula
    F = CycloField(5)
    for m in range(0, 10):
        for t in range(1, 5):
            v = F.binomial_k_operator_value(m, 0, t)
            assert v == F.quantum_binomial(m, t) if m >= t else v is not None
