"""Random test inputs: contractions with prescribed defect index and Blaschke zero sets."""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

__all__ = ["random_contraction", "random_zeros", "random_unimodular"]


def random_contraction(dim: int, defect: int, rng: np.random.Generator, max_singular: float = 0.9) -> np.ndarray:
    """``V diag(s) W`` with Haar unitaries and ``defect`` singular values in ``[0, max_singular]``, the rest 1."""
    if not 0 <= defect <= dim:
        raise ValueError("need 0 <= defect <= dim")
    s = np.ones(dim)
    s[:defect] = rng.uniform(0.0, max_singular, defect)
    V = unitary_group.rvs(dim, random_state=rng) if dim > 1 else np.exp(2j * np.pi * rng.uniform(size=(1, 1)))
    W = unitary_group.rvs(dim, random_state=rng) if dim > 1 else np.exp(2j * np.pi * rng.uniform(size=(1, 1)))
    return (V * s) @ W


def random_zeros(count: int, rng: np.random.Generator, max_modulus: float = 0.8, min_gap: float = 0.05) -> np.ndarray:
    """Zeros drawn uniformly from the disk of radius ``max_modulus``, pairwise at least ``min_gap`` apart."""
    out: list[complex] = []
    while len(out) < count:
        z = max_modulus * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if all(abs(z - w) >= min_gap for w in out):
            out.append(complex(z))
    return np.array(out)


def random_unimodular(count: int, rng: np.random.Generator) -> np.ndarray:
    return np.exp(2j * np.pi * rng.uniform(size=count))
