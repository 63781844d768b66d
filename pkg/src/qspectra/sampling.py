"""Deterministic random generators for matrices, vectors and spectra.

Used by the property-suite runner and the test suites; everything is driven
by a ``numpy.random.Generator`` so a fixed seed reproduces runs bit for bit.
"""

from __future__ import annotations

import math

import numpy as np

from .qlinalg import QMatrix, QVector
from .quaternion import E1, Quaternion, imaginary_unit

__all__ = [
    "random_quaternion",
    "random_unit",
    "random_qvector",
    "random_qmatrix",
    "random_spectral_qmatrix",
    "random_admissible_point",
]


def random_quaternion(rng: np.random.Generator, scale: float = 1.0) -> Quaternion:
    return Quaternion(*(rng.standard_normal(4) * scale))


def random_unit(rng: np.random.Generator) -> Quaternion:
    while True:
        direction = rng.standard_normal(3)
        norm = float(np.linalg.norm(direction))
        if norm > 1e-3:
            return imaginary_unit(*direction)


def random_qvector(rng: np.random.Generator, n: int, scale: float = 1.0) -> QVector:
    return QVector(rng.standard_normal((n, 4)) * scale)


def random_qmatrix(rng: np.random.Generator, n: int, scale: float = 1.0) -> QMatrix:
    return QMatrix(rng.standard_normal((n, n, 4)) * scale / math.sqrt(4.0 * n))


def _well_conditioned(rng: np.random.Generator, n: int, spread: float = 0.3):
    """Random similarity ``W`` close to the identity, with its inverse."""
    while True:
        w = QMatrix.identity(n) + random_qmatrix(rng, n, scale=spread)
        m = w.embed()
        if np.linalg.cond(m) < 8.0:
            w_inv = QMatrix.unembed(np.linalg.inv(m), check=True, tol=1e-8)
            return w, w_inv


def _separated_spheres(rng: np.random.Generator, count: int, min_sep: float = 0.45):
    spheres = []
    while len(spheres) < count:
        u = float(rng.uniform(-1.6, 1.6))
        v = 0.0 if rng.uniform() < 0.3 else float(rng.uniform(0.5, 1.6))
        if all(math.hypot(u - a, v - b) > min_sep for a, b in spheres):
            spheres.append((u, v))
    return spheres


def random_spectral_qmatrix(
    rng: np.random.Generator,
    n: int,
    diagonalizable: bool = True,
    conjugate: bool = True,
):
    """Matrix with well separated spectral spheres, by construction.

    Starts from a (block-)diagonal model with one quaternionic eigenvalue per
    slot (mixing imaginary units within one sphere is allowed) and then
    conjugates by a well conditioned random similarity.

    With ``diagonalizable=False`` one nilpotent ladder is coupled per
    multi-slot sphere.  Defective eigenvalues computed through a QR iteration
    generically lose half the working digits unless the embedding is exactly
    triangular, so defective models keep every entry in the reference plane
    and are never conjugated; anything else lands (by design) in the
    conditioning guard of the decomposition pipeline.

    Returns ``(T, spheres)`` with the ``(u, v)`` ground truth.
    """
    k = int(rng.integers(1, min(n, 3) + 1))
    spheres = _separated_spheres(rng, k)
    sizes = [1] * k
    for _ in range(n - k):
        sizes[int(rng.integers(0, k))] += 1
    if not diagonalizable:
        conjugate = False

    blocks = []
    for (u, v), size in zip(spheres, sizes):
        entries = np.zeros((size, size, 4))
        units = []
        for idx in range(size):
            unit = random_unit(rng) if (v > 0.0 and diagonalizable) else E1
            units.append(unit)
            lam = Quaternion.from_axial(u, v, unit)
            entries[idx, idx] = [lam.w, lam.x, lam.y, lam.z]
        if not diagonalizable and size >= 2 and rng.uniform() < 0.75:
            # one Jordan coupling; it must commute with the diagonal, so the
            # two slots share an imaginary unit
            lam = Quaternion.from_axial(u, v, units[0])
            entries[1, 1] = [lam.w, lam.x, lam.y, lam.z]
            entries[0, 1] = [1.0, 0.0, 0.0, 0.0]
        blocks.append(QMatrix(entries))
    model = QMatrix.block_diagonal(blocks)
    if not conjugate:
        return model, spheres
    w, w_inv = _well_conditioned(rng, n)
    return w @ model @ w_inv, spheres


def random_admissible_point(rng: np.random.Generator, spectrum,
                            scale: float, min_dist: float) -> Quaternion:
    """Quaternion at a safe distance from every spectral sphere."""
    while True:
        q = random_quaternion(rng, scale)
        if spectrum.nearest_distance(q.real, q.imag_norm()) > min_dist:
            return q
