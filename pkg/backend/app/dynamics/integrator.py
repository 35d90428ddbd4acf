"""
Fixed-step fourth-order Runge–Kutta for matrix equations U̇ = A(t)·U.

A(t) is requested in batches on the half-step grid, so the Python loop only
does the 4×4 (or 2×2) products. Checkpoints of U are kept every
``record_every`` steps, always including t = 0 and t = t_final.
"""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

logger = logging.getLogger(__name__)

Generator = Callable[[np.ndarray], np.ndarray]

_CHUNK = 8192


@dataclass(frozen=True)
class Trajectory:
    u: np.ndarray
    times: np.ndarray
    snapshots: np.ndarray


def rk4_propagate(
    generator: Generator,
    dim: int,
    t_final: float,
    steps: int,
    record_every: int | None = None,
) -> Trajectory:
    dt = t_final / steps
    u = np.eye(dim, dtype=complex)
    times = [0.0]
    snapshots = [u.copy()]

    for start in range(0, steps, _CHUNK):
        count = min(_CHUNK, steps - start)
        grid = (start + 0.5 * np.arange(2 * count + 1)) * dt
        a = generator(grid) * dt
        for i in range(count):
            a0, am, a1 = a[2 * i], a[2 * i + 1], a[2 * i + 2]
            k1 = a0 @ u
            k2 = am @ (u + 0.5 * k1)
            k3 = am @ (u + 0.5 * k2)
            k4 = a1 @ (u + k3)
            u = u + (k1 + 2.0 * (k2 + k3) + k4) / 6.0
            step = start + i + 1
            if record_every and step % record_every == 0 and step != steps:
                times.append(step * dt)
                snapshots.append(u.copy())

    times.append(t_final)
    snapshots.append(u.copy())
    return Trajectory(u=u, times=np.array(times), snapshots=np.array(snapshots))
