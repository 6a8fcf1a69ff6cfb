import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from rindler_teleport.fock import (
    CompositionError,
    ContractViolation,
    DensityOp,
    FockKet,
    ModeSpec,
    apply_ladder,
    eigenvalues_hermitian,
    fidelity_pure,
    make_ket,
    outer,
    partial_trace,
    reduced_density,
    tensor,
)
from rindler_teleport.rindler import squeeze, squeezed_vacuum, thermal_vacuum

Q = ModeSpec(2, "q")
A, B = ModeSpec(2, "A"), ModeSpec(2, "B")


def test_make_ket_vacuum():
    k = make_ket([Q], {(0,): 1})
    assert k.vector.tolist() == [1, 0]
    assert k.is_normalized()


def test_make_ket_superposition():
    alpha, beta = 0.6, 0.8j
    k = make_ket([Q], {(0,): alpha, (1,): beta})
    np.testing.assert_array_equal(k.vector, [alpha, beta])
    assert k.is_normalized()


def test_make_ket_out_of_range_names_mode():
    with pytest.raises(IndexError, match="'q'"):
        make_ket([Q], {(5,): 1})


def test_ket_is_immutable():
    k = make_ket([Q], {(0,): 1})
    with pytest.raises(ValueError):
        k.amplitudes[0] = 2


def test_tensor_basis_and_bilinearity():
    z = tensor(make_ket([A], {(0,): 1}), make_ket([B], {(0,): 1}))
    assert z.amplitudes[0, 0] == 1 and np.count_nonzero(z.amplitudes) == 1
    a, b = 0.6, 0.8
    k = tensor(make_ket([A], {(0,): a, (1,): b}), make_ket([B], {(1,): 1}))
    expected = make_ket([A, B], {(0, 1): a, (1, 1): b})
    np.testing.assert_array_equal(k.amplitudes, expected.amplitudes)
    assert k.labels == ("A", "B")


def test_tensor_rejects_shared_label():
    r = ModeSpec(3, "RegionI")
    with pytest.raises(CompositionError):
        tensor(make_ket([r], {(0,): 1}), make_ket([r], {(1,): 1}))


def test_outer():
    np.testing.assert_array_equal(outer(make_ket([Q], {(0,): 1})).matrix, np.diag([1, 0]))
    h = 1 / math.sqrt(2)
    np.testing.assert_allclose(outer(make_ket([Q], {(0,): h, (1,): h})).matrix, np.full((2, 2), 0.5), atol=1e-15)
    with pytest.raises(ContractViolation):
        outer(make_ket([Q], {(0,): 2}))


def bell():
    h = 1 / math.sqrt(2)
    return make_ket([ModeSpec(2, "RegionI"), ModeSpec(2, "RegionII")], {(0, 0): h, (1, 1): h})


def test_partial_trace_bell():
    red = partial_trace(outer(bell()), {"RegionI"})
    np.testing.assert_allclose(red.matrix, np.diag([0.5, 0.5]), atol=1e-15)
    assert red.labels == ("RegionI",)


def test_partial_trace_keep_all_is_identity():
    rho = outer(bell())
    np.testing.assert_array_equal(partial_trace(rho, {"RegionI", "RegionII"}).matrix, rho.matrix)


def test_partial_trace_unknown_label():
    with pytest.raises(IndexError):
        partial_trace(outer(bell()), {"RegionIII"})


def test_partial_trace_of_squeezed_vacuum_is_thermal():
    p = squeeze(0.8)
    vac = squeezed_vacuum(p, 40).ket
    red = partial_trace(outer(vac), {"RegionI"})
    assert np.max(np.abs(red.matrix - thermal_vacuum(p, 40).matrix)) <= 1e-12


def test_reduced_density_matches_partial_trace():
    rng = np.random.default_rng(3)
    modes = [ModeSpec(2, "a"), ModeSpec(3, "b"), ModeSpec(4, "c")]
    v = rng.normal(size=24) + 1j * rng.normal(size=24)
    k, _ = FockKet(modes, v).normalized()
    for keep in ({"a"}, {"b"}, {"c"}, {"a", "c"}, {"b", "c"}):
        np.testing.assert_allclose(reduced_density(k, keep).matrix, partial_trace(outer(k), keep).matrix, atol=1e-14)


def test_ladder_basic():
    m = ModeSpec(5, "m")
    up, lost = apply_ladder(make_ket([m], {(0,): 1}), "m", "create")
    np.testing.assert_array_equal(up.vector, [0, 1, 0, 0, 0])
    assert lost == 0
    down, lost = apply_ladder(make_ket([m], {(0,): 1}), "m", "annihilate")
    assert down.norm() == 0 and lost == 0


def test_ladder_truncation_reports_loss():
    m = ModeSpec(5, "m")
    out, lost = apply_ladder(make_ket([m], {(4,): 0.3}), "m", "create")
    assert out.norm() == 0
    assert lost == pytest.approx(0.3, rel=1e-15)


def test_ladder_unknown_mode():
    with pytest.raises(IndexError):
        apply_ladder(make_ket([Q], {(0,): 1}), "nope", "create")


@given(st.integers(0, 2**32 - 1), st.integers(2, 8))
def test_ladder_commutator_below_cutoff(seed, cutoff):
    rng = np.random.default_rng(seed)
    m = ModeSpec(cutoff, "m")
    v = rng.normal(size=cutoff) + 1j * rng.normal(size=cutoff)
    v[-1] = 0  # [b, b^dag] = 1 only holds away from the top level
    k = FockKet((m,), v)
    ba, _ = apply_ladder(apply_ladder(k, "m", "create")[0], "m", "annihilate")
    ab, _ = apply_ladder(apply_ladder(k, "m", "annihilate")[0], "m", "create")
    np.testing.assert_allclose((ba - ab).vector, k.vector, atol=1e-12)


def test_eigenvalues():
    np.testing.assert_allclose(eigenvalues_hermitian(DensityOp((Q,), np.diag([0.5, 0.5]))), [0.5, 0.5])
    lam = eigenvalues_hermitian(outer(bell()))
    np.testing.assert_allclose(lam, [1, 0, 0, 0], atol=1e-15)


def test_eigenvalues_thermal_are_geometric():
    p = squeeze(1.0)
    q = math.tanh(1.0) ** 2
    lam = eigenvalues_hermitian(thermal_vacuum(p, 40))
    expected = np.array([(1 - q) * q**n for n in range(40)])
    expected /= expected.sum()
    np.testing.assert_allclose(lam, expected, atol=1e-15)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(ContractViolation):
        eigenvalues_hermitian(DensityOp((Q,), [[0.5, 0.1], [0.0, 0.5]]))


def test_tridiagonal_fast_path_agrees_with_dense():
    rng = np.random.default_rng(0)
    n = 30
    d = rng.random(n)
    off = rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1)
    m = np.diag(d).astype(complex) + np.diag(off, -1) + np.diag(off.conj(), 1)
    rho = DensityOp((ModeSpec(n, "x"),), m)
    np.testing.assert_allclose(eigenvalues_hermitian(rho), np.linalg.eigvalsh(m)[::-1], atol=1e-12)


def test_fidelity_pure():
    z, o = make_ket([Q], {(0,): 1}), make_ket([Q], {(1,): 1})
    assert fidelity_pure(z, outer(z)) == 1
    assert fidelity_pure(z, outer(o)) == 0
    r = 0.7
    n = 40
    target = make_ket([ModeSpec(n, "RegionI")], {(0,): 1})
    f = fidelity_pure(target, thermal_vacuum(squeeze(r), n))
    assert f == pytest.approx(1 / math.cosh(r) ** 2, rel=1e-12)


def test_fidelity_mode_mismatch():
    with pytest.raises(CompositionError):
        fidelity_pure(make_ket([Q], {(0,): 1}), outer(make_ket([A], {(0,): 1})))


# -- properties ----------------------------------------------------------------

dims = st.lists(st.integers(1, 4), min_size=1, max_size=3).filter(lambda d: np.prod(d) <= 64)


def random_density(rng, d, rank=None):
    rank = rank or d
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


@settings(max_examples=150, deadline=None)
@given(dims, st.integers(0, 2**32 - 1), st.data())
def test_partial_trace_preserves_trace_and_psd(ds, seed, data):
    rng = np.random.default_rng(seed)
    modes = tuple(ModeSpec(d, f"m{i}") for i, d in enumerate(ds))
    rho = DensityOp(modes, random_density(rng, int(np.prod(ds)), rank=int(rng.integers(1, np.prod(ds) + 1))))
    keep = data.draw(st.sets(st.sampled_from([m.label for m in modes]), min_size=1))
    red = partial_trace(rho, keep)
    assert abs(red.trace() - 1) <= 1e-12
    assert red.hermiticity_error() <= 1e-12
    assert eigenvalues_hermitian(red)[-1] >= -1e-10


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_product_state_traces_back_to_factors(da, db, seed):
    rng = np.random.default_rng(seed)
    ra, rb = random_density(rng, da), random_density(rng, db)
    rho = DensityOp((ModeSpec(da, "a"), ModeSpec(db, "b")), np.kron(ra, rb))
    assert np.max(np.abs(partial_trace(rho, {"a"}).matrix - ra)) <= 1e-12
    assert np.max(np.abs(partial_trace(rho, {"b"}).matrix - rb)) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_outer_of_normalized_ket_has_unit_spectrum(d, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    k, _ = FockKet((ModeSpec(d, "x"),), v).normalized()
    lam = eigenvalues_hermitian(outer(k))
    assert lam[0] == pytest.approx(1, abs=1e-12)
    np.testing.assert_allclose(lam[1:], 0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 16), st.integers(0, 2**32 - 1))
def test_eigenvalues_unitarily_invariant(d, seed):
    rng = np.random.default_rng(seed)
    m = random_density(rng, d)
    u = unitary_group.rvs(d, random_state=rng)
    a = eigenvalues_hermitian(DensityOp((ModeSpec(d, "x"),), m))
    rot = u @ m @ u.conj().T
    rot = (rot + rot.conj().T) / 2
    b = eigenvalues_hermitian(DensityOp((ModeSpec(d, "x"),), rot))
    np.testing.assert_allclose(a, b, atol=1e-12)
    assert abs(a.sum() - 1) <= 1e-9
