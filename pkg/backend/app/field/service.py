"""
Laboratory-frame Hamiltonians of a spin 3/2 in a rotating field-gradient
(plus co-rotating magnetic field):

    H(t) = c·(S_{z'}² − S²/3) − b·S_{z'},   S_{z'} = S·n(θ, ωt)

Only the reduced quadrupole form is built; the ∂E_z/∂z prefactor is folded
into c.
"""
import logging

import numpy as np

from app.config import get_settings
from app.errors import ConventionDriftError
from app.field.schemas import EigenBasis, FieldConfig, LabHamiltonian, Regime
from app.spin.service import SPIN_THREE_HALVES, rotated_sz, spin_operators, wigner_rotation
from utils.linalg import freeze

logger = logging.getLogger(__name__)

M_LABELS = ("+3/2", "+1/2", "-1/2", "-3/2")


def lab_hamiltonian(config: FieldConfig, regime: Regime = Regime.ABELIAN) -> LabHamiltonian:
    return LabHamiltonian(config=config, regime=regime)


def hamiltonian_at(h: LabHamiltonian, t):
    """H(t); a 1-d array of times gives a (n, 4, 4) stack."""
    ops = spin_operators(SPIN_THREE_HALVES)
    cfg = h.config
    sz_rot = rotated_sz(ops, cfg.theta, cfg.omega * np.asarray(t, dtype=float))
    quadrupole = sz_rot @ sz_rot - ops.s_squared / 3
    return cfg.c * quadrupole - h.b * sz_rot


def level_energies(h: LabHamiltonian) -> np.ndarray:
    """Eigenvalues in m order: c(m² − 5/4) − b·m. They do not depend on t."""
    m = spin_operators(SPIN_THREE_HALVES).m_values
    return h.config.c * (m**2 - 5 / 4) - h.b * m


def instantaneous_eigenbasis(h: LabHamiltonian, t: float) -> EigenBasis:
    """Eigenpairs of H(t) matched to the Wigner-rotated basis.

    Each Wigner column is projected on the eigenspace it belongs to, which
    fixes both the order (m = +3/2 … −3/2) and the phase even when levels are
    degenerate. Sorting eigenvalues would not.
    """
    settings = get_settings()
    hm = hamiltonian_at(h, t)
    evals, evecs = np.linalg.eigh(hm)
    frame = wigner_rotation(SPIN_THREE_HALVES, h.config.theta, h.config.omega * t).matrix
    tol = 1e-9 * max(1.0, float(np.max(np.abs(evals))))

    energies = np.empty(4)
    vectors = np.empty((4, 4), dtype=complex)
    for k, label in enumerate(M_LABELS):
        w = frame[:, k]
        expected = float(np.real(np.vdot(w, hm @ w)))
        block = evecs[:, np.abs(evals - expected) < tol]
        v = block @ (block.conj().T @ w)
        overlap = float(np.linalg.norm(v))
        if overlap < settings.overlap_threshold:
            raise ConventionDriftError(label, overlap, settings.overlap_threshold)
        v /= overlap
        v *= np.exp(-1j * np.angle(np.vdot(w, v)))
        vectors[:, k] = v
        energies[k] = expected
    return EigenBasis(t=float(t), energies=freeze(energies), vectors=freeze(vectors))
