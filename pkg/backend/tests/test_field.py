import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.errors import ConventionDriftError
from app.field import service as field_service
from app.field.schemas import FieldConfig, Regime
from app.field.service import hamiltonian_at, instantaneous_eigenbasis, lab_hamiltonian, level_energies
from app.spin.service import SPIN_THREE_HALVES, wigner_rotation


@pytest.fixture
def config():
    return FieldConfig(c=50.0, b=2.0, omega=1.0, theta=1.0)


def test_config_derived_quantities(config):
    assert config.x == pytest.approx(2.0)
    assert config.period == pytest.approx(2 * math.pi)
    assert config.to_json_dict() == {"c": 50.0, "b": 2.0, "omega": 1.0, "theta_rad": 1.0}


def test_config_accepts_json_alias():
    assert FieldConfig(**{"c": 1, "omega": 2, "theta_rad": 0.5}).theta == 0.5


@pytest.mark.parametrize(
    "bad",
    [
        {"c": 0.0, "omega": 1.0, "theta": 1.0},
        {"c": 1.0, "b": -0.1, "omega": 1.0, "theta": 1.0},
        {"c": 1.0, "omega": 0.0, "theta": 1.0},
        {"c": 1.0, "omega": 1.0, "theta": 3.2},
    ],
)
def test_config_rejects_out_of_range(bad):
    with pytest.raises(ValidationError):
        FieldConfig(**bad)


def test_config_is_immutable(config):
    with pytest.raises(ValidationError):
        config.b = 3.0


def test_adiabatic_threshold_default_and_env(monkeypatch):
    config = FieldConfig(c=100.0, omega=1.0, theta=1.0)
    assert config.is_adiabatic()
    assert not config.is_adiabatic(threshold=1e-3)
    monkeypatch.setenv("GEOPHASE_ADIABATIC_RATIO_THRESHOLD", "1e-3")
    assert not config.is_adiabatic()


def test_non_abelian_regime_drops_field(config):
    assert lab_hamiltonian(config, Regime.NON_ABELIAN).b == 0.0
    assert lab_hamiltonian(config, Regime.ABELIAN).b == 2.0


def test_hamiltonian_is_hermitian_with_fixed_spectrum(config):
    h = lab_hamiltonian(config)
    expected = np.sort(level_energies(h))
    for t in np.linspace(0, config.period, 7):
        hm = hamiltonian_at(h, t)
        assert np.allclose(hm, hm.conj().T)
        assert np.allclose(np.linalg.eigvalsh(hm), expected, atol=1e-10)


def test_level_energies_in_m_order(config):
    energies = level_energies(lab_hamiltonian(config))
    m = np.array([1.5, 0.5, -0.5, -1.5])
    assert np.allclose(energies, 50.0 * (m**2 - 1.25) - 2.0 * m)


def test_hamiltonian_accepts_time_arrays(config):
    h = lab_hamiltonian(config)
    times = np.linspace(0, 1, 4)
    stack = hamiltonian_at(h, times)
    assert stack.shape == (4, 4, 4)
    assert np.allclose(stack[3], hamiltonian_at(h, times[3]))


@pytest.mark.parametrize("b", [0.0, 2.0])
def test_eigenbasis_follows_wigner_frame(b):
    config = FieldConfig(c=50.0, b=b, omega=1.0, theta=1.0)
    h = lab_hamiltonian(config)
    t = 0.9
    basis = instantaneous_eigenbasis(h, t)
    hm = hamiltonian_at(h, t)
    assert np.allclose(hm @ basis.vectors, basis.vectors * basis.energies, atol=1e-9)
    assert np.allclose(basis.vectors.conj().T @ basis.vectors, np.eye(4), atol=1e-12)
    assert np.allclose(basis.energies, level_energies(h), atol=1e-9)
    frame = wigner_rotation(SPIN_THREE_HALVES, 1.0, t).matrix
    overlaps = np.abs(np.sum(frame.conj() * basis.vectors, axis=0))
    assert np.allclose(overlaps, 1.0, atol=1e-9)


def test_hamiltonian_repeats_every_drive_period(config):
    h = lab_hamiltonian(config)
    times = np.linspace(0.0, config.period, 17)
    assert np.allclose(hamiltonian_at(h, times + config.period), hamiltonian_at(h, times), atol=1e-9 * config.c)


def test_eigenbasis_rejects_frame_that_drifted(monkeypatch, config):
    def tilted(j, theta, phi):
        return wigner_rotation(j, theta + 0.5, phi)

    monkeypatch.setattr(field_service, "wigner_rotation", tilted)
    with pytest.raises(ConventionDriftError) as info:
        instantaneous_eigenbasis(lab_hamiltonian(config), 0.3)
    assert info.value.overlap < 0.99
