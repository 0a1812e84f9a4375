"""Polar sample grids on the unit disk."""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class GridSpec:
    nr: int = 200
    ntheta: int = 256
    r_max: float = 0.999

    def __post_init__(self):
        if self.nr < 2 or self.ntheta < 3 or not 0 < self.r_max < 1:
            raise DomainError(f"invalid grid {self}")

    def radii(self):
        return np.linspace(0.0, self.r_max, self.nr)

    def angles(self):
        return 2 * np.pi * np.arange(self.ntheta) / self.ntheta

    def points(self):
        """Array of shape ``(nr, ntheta)``; row 0 is the origin repeated."""
        return self.radii()[:, None] * np.exp(1j * self.angles())[None, :]

    def to_json(self):
        return {"nr": self.nr, "ntheta": self.ntheta, "rmax": self.r_max}

    @classmethod
    def parse(cls, text, r_max=0.999):
        """``"NRxNT"`` as used on the command line."""
        try:
            nr, nt = (int(p) for p in text.lower().split("x"))
        except ValueError:
            raise DomainError(f"grid must look like 200x256, got {text!r}") from None
        return cls(nr, nt, r_max)


def worker_count():
    value = os.environ.get("SCHWARZLIFT_THREADS")
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def map_rows(fn, points, workers=None):
    """Apply the vectorized ``fn`` to row blocks of ``points`` and restack.

    Rows are independent, so with more than one worker the blocks are
    evaluated on a thread pool (numpy releases the GIL in the heavy loops).
    """
    workers = worker_count() if workers is None else workers
    if workers <= 1 or points.shape[0] < 2 * workers:
        return fn(points)
    blocks = np.array_split(points, workers, axis=0)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(fn, blocks))
    return np.concatenate(parts, axis=0)
