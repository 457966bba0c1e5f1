"""Deterministic, splittable random sampling for dataset generation.

Every random quantity in a dataset is drawn from a counter-based stream keyed
by (master seed, parameter-point identifier, realization index, stage tag).
Identical keys always replay the identical stream regardless of execution
order or worker count, which is what makes parallel sweeps reproducible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .model import TWO_PI, _degree_floor

STAGES = (
    "unipartite-placement",
    "unipartite-edges",
    "bipartite-placement",
    "bipartite-edges",
    "centroids",
    "labels",
    "splits",
)

_SEP = "\x1f"  # unit separator; forbidden inside identifiers
_MAX_SEED = 2**64


@dataclass(frozen=True)
class SeedSpec:
    """Address of one random stream within a dataset's seed space."""

    master_seed: int
    identifier: str
    realization: int
    stage: str

    def __post_init__(self) -> None:
        if not (0 <= self.master_seed < _MAX_SEED):
            raise ValueError(f"master_seed must fit in 64 unsigned bits, got {self.master_seed}")
        if self.realization < 0:
            raise ValueError(f"realization must be >= 0, got {self.realization}")
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}; expected one of {STAGES}")
        if _SEP in self.identifier:
            raise ValueError("identifier must not contain the 0x1f separator byte")

    def _key(self, salt: str = "") -> int:
        text = _SEP.join(
            (str(self.master_seed), self.identifier, str(self.realization), self.stage, salt)
        )
        digest = hashlib.blake2b(text.encode("utf-8"), digest_size=16).digest()
        return int.from_bytes(digest, "little")

    def generator(self, salt: str = "") -> Generator:
        """Fresh generator for this stream; salt separates draws within a stage."""
        return Generator(Philox(key=self._key(salt)))

    def row_generator(self, row: int, salt: str = "") -> Generator:
        """Generator for one row of a keyed grid of draws.

        Row r is the stream at counter r << 64, so consuming fewer or more
        draws in other rows can never shift this row's sequence. Generation
        loops key each entity's draws by its own index this way, making edge
        sets independent of evaluation order and worker count.
        """
        if row < 0:
            raise ValueError(f"row must be >= 0, got {row}")
        return Generator(Philox(key=self._key(salt), counter=row << 64))


def sample_power_law_kappas(count: int, gamma: float, mean_degree: float, stream: SeedSpec,
                            substream: str = "") -> np.ndarray:
    """Draw hidden degrees from the bounded Pareto-tail density.

    Inverse-transform sampling of rho(kappa) = (gamma-1) * floor**(gamma-1)
    * kappa**(-gamma) on [floor, inf), where floor = ((gamma-2)/(gamma-1))
    * mean_degree makes the distribution mean equal mean_degree. substream
    separates independent draws that share one stage (for example node and
    feature hidden degrees).
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if not gamma > 2.0:
        raise ValueError(f"gamma must be > 2, got {gamma}")
    if not mean_degree > 0.0:
        raise ValueError(f"mean_degree must be positive, got {mean_degree}")
    floor = _degree_floor(gamma, mean_degree)
    u = stream.generator("power-law-kappas:" + substream).random(count)
    return floor * (1.0 - u) ** (-1.0 / (gamma - 1.0))


def sample_angles(count: int, stream: SeedSpec, substream: str = "") -> np.ndarray:
    """Draw independent uniform angular coordinates in [0, 2*pi)."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    return stream.generator("angles:" + substream).random(count) * TWO_PI


def kappas_from_sequence(degrees, floor: float) -> np.ndarray:
    """Use an observed degree sequence as hidden degrees, clamped up to floor.

    Order is preserved so entity identities survive the round trip.
    """
    arr = np.asarray(degrees, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("degree sequence is empty")
    if arr.ndim != 1:
        raise ValueError("degree sequence must be 1-d")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("all degrees must be positive and finite")
    return np.maximum(arr, floor)


def read_degree_sequence(path) -> np.ndarray:
    """Read one degree per line; lines starting with '#' and blanks are skipped."""
    values = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                values.append(float(text))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: not a number: {text!r}") from exc
    if not values:
        raise ValueError(f"{path}: no degree values found")
    return np.asarray(values, dtype=np.float64)
