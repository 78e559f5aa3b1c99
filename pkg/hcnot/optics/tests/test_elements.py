import numpy as np
import pytest

from hcnot.optics.utilities.fock import (
    ModeBasis,
    ModeLabel,
    PureState,
    evolve,
    project_pattern,
)
from hcnot.optics.utilities.qubits import KETS
from hcnot.optics.utilities.elements import (
    ElementSpec,
    phase,
    pbs_hv,
    bs5050,
    coupler,
    waveplate,
    rotated_pbs,
    herald_circuit,
    analysis_rotation,
    build_cnot_circuit,
)

BASIS = ModeBasis.standard(1)


def column(unitary, spatial, polarization, internal=0):
    """Image of a single photon as a {label: amplitude} dict."""
    col = unitary.matrix[:, unitary.basis.index(ModeLabel(spatial, polarization, internal))]
    return {
        label: amp for label, amp in zip(unitary.basis.labels, col) if abs(amp) > 1e-12
    }


def jones_output(unitary, spatial, vector, destination=None):
    """
    Polarization amplitudes in ``destination`` (default: the input mode) for a
    photon prepared in ``spatial`` with polarization ``vector``.
    """
    destination = destination or spatial
    out = np.zeros(2, dtype=complex)
    for p, amp in zip("HV", vector):
        for label, value in column(unitary, spatial, p).items():
            if label.spatial == destination:
                out["HV".index(label.polarization)] += amp * value
    return out


@pytest.mark.parametrize(
    "unitary",
    [
        pbs_hv(BASIS, "a1", "c"),
        pbs_hv(BASIS, "a1", "c", "free_space", leakage=0.02),
        rotated_pbs(BASIS, "a2", "t"),
        bs5050(BASIS, "c", "t"),
        waveplate(BASIS, "c", "QWP", 0.3),
        phase(BASIS, "t", 1.1),
        coupler(BASIS, "c", "t", 0.3, 0.8),
        build_cnot_circuit(ModeBasis.standard(2)),
    ],
)
def test_elements_are_unitary(unitary):
    m = unitary.matrix
    assert np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=1e-10)


def test_chip_pbs_transfers_h_and_keeps_v():
    u = pbs_hv(BASIS, "a1", "c")
    assert column(u, "a1", "H") == {ModeLabel("c", "H"): pytest.approx(1j)}
    assert column(u, "a1", "V") == {ModeLabel("a1", "V"): pytest.approx(1)}


def test_free_space_pbs_swaps_roles():
    u = pbs_hv(BASIS, "a1", "c", "free_space")
    assert column(u, "a1", "V") == {ModeLabel("c", "V"): pytest.approx(1j)}
    assert column(u, "a1", "H") == {ModeLabel("a1", "H"): pytest.approx(1)}


def test_diagonal_photon_splits_on_pbs():
    u = pbs_hv(BASIS, "a1", "c")
    state = PureState.from_creation_product(
        BASIS,
        [{ModeLabel("a1", "H"): KETS["D"][0], ModeLabel("a1", "V"): KETS["D"][1]}],
    )
    out = evolve(state, u)
    probability, _ = project_pattern(out, {BASIS.group("c", "H"): 1})
    assert probability == pytest.approx(0.5)


def test_leaky_pbs_sends_leakage_to_wrong_port():
    u = pbs_hv(BASIS, "a1", "c", leakage=1 / 51).matrix
    h_a1, v_a1 = BASIS.index(ModeLabel("a1", "H")), BASIS.index(ModeLabel("a1", "V"))
    v_c = BASIS.index(ModeLabel("c", "V"))
    assert abs(u[h_a1, h_a1]) ** 2 == pytest.approx(1 / 51)
    assert abs(u[v_c, v_a1]) ** 2 == pytest.approx(1 / 51)


def test_waveplates():
    hwp = waveplate(BASIS, "c", "HWP", np.pi / 8)
    assert np.allclose(jones_output(hwp, "c", KETS["H"]), KETS["D"])
    hwp0 = waveplate(BASIS, "c", "HWP", 0.0)
    assert np.allclose(jones_output(hwp0, "c", KETS["V"]), -KETS["V"])
    qwp = waveplate(BASIS, "c", "QWP", np.pi / 4)
    assert abs(np.vdot(KETS["R"], jones_output(qwp, "c", KETS["H"]))) == pytest.approx(1)
    with pytest.raises(ValueError):
        waveplate(BASIS, "c", "XWP", 0.1)


def test_rotated_pbs_acts_on_diagonal_basis():
    u = rotated_pbs(BASIS, "a2", "t")
    assert np.allclose(jones_output(u, "t", KETS["D"], "a2"), 1j * KETS["D"])
    assert np.allclose(jones_output(u, "t", KETS["D"]), 0)
    assert np.allclose(jones_output(u, "a2", KETS["A"]), KETS["A"])


def test_rotated_pbs_preserves_two_photon_statistics():
    def distribution(unitary, polarization_vector):
        forms = [
            {ModeLabel(m, p): a for p, a in zip("HV", polarization_vector)}
            for m in ("a2", "t")
        ]
        out = evolve(PureState.from_creation_product(BASIS, forms), unitary)
        return [
            project_pattern(out, {BASIS.group("a2"): n, BASIS.group("t"): 2 - n})[0]
            for n in range(3)
        ]

    plain = distribution(pbs_hv(BASIS, "a2", "t"), KETS["H"])
    rotated = distribution(rotated_pbs(BASIS, "a2", "t"), KETS["D"])
    assert np.allclose(plain, rotated, atol=1e-12)


def test_bs5050_splits_evenly():
    u = bs5050(BASIS, "c", "t")
    for p in "HV":
        amplitudes = column(u, "c", p)
        assert [abs(a) ** 2 for a in amplitudes.values()] == pytest.approx([0.5, 0.5])


def test_cnot_circuit_routes_control_h_into_first_ancilla_mode():
    u = build_cnot_circuit()
    assert u.matrix.shape == (8, 8)
    image = column(u, "c", "H")
    assert list(image) == [ModeLabel("a1", "H")]


def test_circuit_acts_trivially_on_internal_labels():
    basis = ModeBasis.standard(2)
    u = herald_circuit(2)
    for i, li in enumerate(basis.labels):
        for j, lj in enumerate(basis.labels):
            if li.internal != lj.internal:
                assert u.matrix[i, j] == 0


def test_analysis_rotation_maps_basis_states_to_h_and_v():
    for name, (first, second) in (("DA", "DA"), ("LR", "LR"), ("HV", "HV")):
        u = analysis_rotation(BASIS, "a1", name)
        assert abs(jones_output(u, "a1", KETS[first])[0]) == pytest.approx(1)
        assert abs(jones_output(u, "a1", KETS[second])[1]) == pytest.approx(1)


def test_element_spec_validation():
    with pytest.raises(ValueError):
        ElementSpec("HWP", ("c", "t"))
    with pytest.raises(ValueError):
        ElementSpec("PBS_HV", ("c",))
    with pytest.raises(ValueError):
        pbs_hv(BASIS, "c", "c")
    spec = ElementSpec("BS5050", ("c", "t"))
    assert np.allclose(spec.to_unitary(BASIS).matrix, bs5050(BASIS, "c", "t").matrix)
    assert ElementSpec.from_dict(spec.as_dict()).acts_on == ("c", "t")
