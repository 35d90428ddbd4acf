"""Small dense linear-algebra helpers shared by the services."""
import math

import numpy as np


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, ord="fro"))


def unitarity_error(u: np.ndarray) -> float:
    """‖U†U − I‖ in the Frobenius norm."""
    return frobenius(u.conj().T @ u - np.eye(u.shape[0]))


def freeze(a: np.ndarray) -> np.ndarray:
    """Mark an array read-only so value objects holding it stay immutable."""
    a.setflags(write=False)
    return a


def wrap_phase(phase: float) -> tuple[float, int]:
    """Split a phase into its value in (−π, π] and the number of 2π windings removed."""
    winding = math.ceil((phase - math.pi) / (2 * math.pi))
    wrapped = phase - 2 * math.pi * winding
    return wrapped, winding
