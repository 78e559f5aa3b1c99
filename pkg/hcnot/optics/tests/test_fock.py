import itertools

from math import sqrt, factorial

import numpy as np
import pytest

from hcnot.optics.utilities.fock import (
    ModeBasis,
    ModeLabel,
    FockState,
    PureState,
    ModeUnitary,
    PatternError,
    DimensionError,
    evolve,
    permanent,
    fock_basis,
    project_pattern,
    reduce_to_qubits,
    detection_probability,
)
from hcnot.optics.utilities.elements import bs5050
from hcnot.optics.utilities.qubits import BELL_STATES


def random_unitary(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def small_basis(n_modes):
    return ModeBasis(ModeBasis.standard(1).labels[:n_modes])


def single(label):
    return {label: 1.0}


def brute_force_permanent(m):
    n = m.shape[0]
    return sum(
        np.prod([m[i, s[i]] for i in range(n)]) for s in itertools.permutations(range(n))
    )


def test_permanent_examples():
    assert permanent([[2.5 - 1j]]) == pytest.approx(2.5 - 1j)
    assert permanent(np.eye(3)) == pytest.approx(1)
    assert permanent([[1, 1], [1, 1]]) == pytest.approx(2)
    assert permanent(np.zeros((0, 0))) == 1


def test_permanent_matches_permutation_sum():
    rng = np.random.default_rng(7)
    for n in range(1, 7):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        assert abs(permanent(m) - brute_force_permanent(m)) < 1e-9


def test_permanent_rejects_non_square():
    with pytest.raises(DimensionError):
        permanent(np.ones((2, 3)))


def test_mode_ordering_is_spatial_polarization_internal():
    labels = ModeBasis.standard(2).labels
    assert len(labels) == 16
    assert labels[0] == ModeLabel("c", "H", 0)
    assert labels[1] == ModeLabel("c", "H", 1)
    assert labels[2] == ModeLabel("c", "V", 0)
    assert labels[4] == ModeLabel("t", "H", 0)
    assert labels[-1] == ModeLabel("a2", "V", 1)
    shuffled = ModeBasis(list(reversed(labels)))
    assert shuffled.labels == labels


def test_single_photon_on_beam_splitter():
    basis = ModeBasis([ModeLabel("c", "H"), ModeLabel("t", "H")])
    state = PureState(basis, {(1, 0): 1.0})
    out = evolve(state, bs5050(basis, "c", "t"))
    assert out.amplitude((1, 0)) == pytest.approx(1 / sqrt(2))
    assert out.amplitude((0, 1)) == pytest.approx(1j / sqrt(2))


def test_identical_photons_bunch():
    basis = ModeBasis([ModeLabel("c", "H"), ModeLabel("t", "H")])
    out = evolve(PureState(basis, {(1, 1): 1.0}), bs5050(basis, "c", "t"))
    assert abs(out.amplitude((1, 1))) < 1e-12
    assert out.norm_squared == pytest.approx(1)


def test_orthogonal_internal_labels_do_not_interfere():
    basis = ModeBasis(
        [ModeLabel(s, "H", k) for s in ("c", "t") for k in range(2)]
    )
    state = PureState.from_creation_product(
        basis, [single(ModeLabel("c", "H", 0)), single(ModeLabel("t", "H", 1))]
    )
    out = evolve(state, bs5050(basis, "c", "t"))
    probability, _ = project_pattern(out, {basis.group("c"): 1, basis.group("t"): 1})
    assert probability == pytest.approx(0.5)


@pytest.mark.parametrize("seed", range(5))
def test_norm_photon_number_and_composition(seed):
    rng = np.random.default_rng(seed)
    basis = small_basis(4)
    amplitudes = rng.normal(size=20) + 1j * rng.normal(size=20)
    amplitudes /= np.linalg.norm(amplitudes)
    state = PureState(basis, dict(zip(fock_basis(4, 3), amplitudes)))
    u1 = ModeUnitary(basis, random_unitary(4, rng))
    u2 = ModeUnitary(basis, random_unitary(4, rng))

    once = evolve(state, u1)
    assert once.norm_squared == pytest.approx(1, abs=1e-9)
    assert all(f.total_photons == 3 for f in once.terms)

    twice = evolve(once, u2)
    composed = evolve(state, u1.compose(u2))
    for occ in fock_basis(4, 3):
        assert abs(twice.amplitude(occ) - composed.amplitude(occ)) < 1e-9


def test_evolve_matches_creation_operator_expansion():
    rng = np.random.default_rng(2024)
    n_cases = 0
    for _ in range(8):
        for n_modes in range(1, 5):
            basis = small_basis(n_modes)
            u = ModeUnitary(basis, random_unitary(n_modes, rng))
            for n_photons in range(1, 4):
                for occ in fock_basis(n_modes, n_photons):
                    state = PureState(basis, {occ: 1.0})
                    labels = [basis.labels[i] for i in FockState(occ).mode_list()]
                    columns = [
                        {basis.labels[r]: u.matrix[r, basis.index(label)]
                         for r in range(n_modes)}
                        for label in labels
                    ]
                    norm = sqrt(np.prod([factorial(n) for n in occ]))
                    oracle = PureState.from_creation_product(basis, columns, 1 / norm)
                    result = evolve(state, u)
                    for out in fock_basis(n_modes, n_photons):
                        assert abs(result.amplitude(out) - oracle.amplitude(out)) < 1e-9
                    n_cases += 1
    assert n_cases >= 500


def test_evolve_rejects_other_basis():
    state = PureState.vacuum(small_basis(2))
    with pytest.raises(DimensionError):
        evolve(state, ModeUnitary.identity(small_basis(3)))


def test_unitary_rejects_wrong_shape_and_non_unitary():
    with pytest.raises(DimensionError):
        ModeUnitary(small_basis(2), np.eye(3))
    with pytest.raises(ValueError):
        ModeUnitary(small_basis(2), [[1, 1], [0, 1]])


def psi_minus_ancilla(basis):
    h1, v1 = ModeLabel("a1", "H"), ModeLabel("a1", "V")
    h2, v2 = ModeLabel("a2", "H"), ModeLabel("a2", "V")
    return PureState.from_creation_product(
        basis, [single(h1), single(v2)], 1 / sqrt(2)
    ) + PureState.from_creation_product(basis, [single(v1), single(h2)], -1 / sqrt(2))


def test_project_pattern_on_bell_state():
    basis = ModeBasis.standard(1)
    state = psi_minus_ancilla(basis)
    probability, conditional = project_pattern(state, {basis.group("a1", "H"): 1})
    assert probability == pytest.approx(0.5)
    assert conditional.norm_squared == pytest.approx(1)


def test_vacuum_pattern_has_zero_probability():
    basis = ModeBasis.standard(1)
    state = PureState.from_creation_product(
        basis, [single(label) for label in basis.labels[:4]]
    )
    groups = {basis.group(s): 0 for s in ("c", "t", "a1", "a2")}
    probability, conditional = project_pattern(state, groups)
    assert probability == 0
    assert conditional.terms == {}


def test_exhaustive_patterns_sum_to_one():
    basis = ModeBasis.standard(1)
    state = evolve(psi_minus_ancilla(basis), bs5050(basis, "a1", "a2"))
    groups = [basis.group(s, p) for s in ("a1", "a2") for p in ("H", "V")]
    total = 0.0
    for counts in itertools.product(range(3), repeat=4):
        total += project_pattern(state, dict(zip(groups, counts)))[0]
    assert total == pytest.approx(1, abs=1e-9)


def test_overlapping_groups_are_rejected():
    basis = ModeBasis.standard(1)
    with pytest.raises(PatternError):
        project_pattern(
            PureState.vacuum(basis), {basis.group("c"): 0, basis.group("c", "H"): 0}
        )


def test_reduce_product_state():
    basis = ModeBasis.standard(1)
    state = PureState.from_creation_product(
        basis, [single(ModeLabel("c", "H")), single(ModeLabel("t", "V"))]
    )
    rho = reduce_to_qubits(state, ["c", "t"])
    expected = np.zeros((4, 4))
    expected[1, 1] = 1
    assert np.allclose(rho, expected, atol=1e-12)


def test_reduce_bell_state():
    basis = ModeBasis.standard(1)
    state = PureState.from_creation_product(
        basis, [single(ModeLabel("c", "H")), single(ModeLabel("t", "H"))], 1 / sqrt(2)
    ) + PureState.from_creation_product(
        basis, [single(ModeLabel("c", "V")), single(ModeLabel("t", "V"))], 1 / sqrt(2)
    )
    rho = reduce_to_qubits(state, ["c", "t"])
    phi = BELL_STATES["phi+"]
    assert np.real(phi.conj() @ rho @ phi) == pytest.approx(1, abs=1e-9)


def test_which_path_label_reduces_purity():
    basis = ModeBasis.standard(2)
    state = PureState.from_creation_product(
        basis, [single(ModeLabel("c", "H", 0)), single(ModeLabel("t", "H", 0))],
        1 / sqrt(2),
    ) + PureState.from_creation_product(
        basis, [single(ModeLabel("c", "V", 0)), single(ModeLabel("t", "V", 1))],
        1 / sqrt(2),
    )
    rho = reduce_to_qubits(state, ["c", "t"])
    assert np.trace(rho).real == pytest.approx(1)
    assert np.min(np.linalg.eigvalsh(rho)) > -1e-9
    assert np.real(np.trace(rho @ rho)) == pytest.approx(0.5)


def test_reduce_requires_one_photon_per_mode():
    basis = ModeBasis.standard(1)
    state = PureState.from_creation_product(
        basis, [single(ModeLabel("c", "H")), single(ModeLabel("c", "V"))]
    )
    with pytest.raises(PatternError):
        reduce_to_qubits(state, ["c", "t"])


def test_detection_probability_with_losses():
    basis = ModeBasis.standard(1)
    state = PureState.from_creation_product(
        basis, [single(ModeLabel("c", "H")), single(ModeLabel("c", "H"))]
    ).normalized()
    assert detection_probability(state, [basis.group("c")], 0.5) == pytest.approx(0.75)
    assert detection_probability(state, [basis.group("t")], 0.5) == 0


def test_pure_state_serialization():
    basis = ModeBasis.standard(1)
    state = psi_minus_ancilla(basis)
    restored = PureState.from_dict(state.as_dict())
    assert restored.basis == basis
    assert abs(restored.overlap(state) - 1) < 1e-12
