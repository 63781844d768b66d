"""Quaternionic vectors and matrices as right-linear operators on H^n.

The computational kernel is the complex embedding.  Fix the reference unit
e1 and write every quaternion as ``q = a + b e2`` with ``a, b`` in the
complex plane spanned by ``1, e1``.  A vector splits entrywise as
``v = v1 + e2 v2`` and a matrix entry as ``t = t1 + t2 e2``; the matrix of
the induced complex-linear operator on C^(2n) is then

    embed(T) = [[A, -B], [conj(B), conj(A)]],   A = Tw + i Tx,  B = Ty + i Tz,

acting on charts ``chart(v) = (v1; v2)`` with ``v1 = vw + i vx`` and
``v2 = vy - i vz``.  The chart is an isometry, ``embed`` is a real-algebra
homomorphism, and right multiplication by a scalar of the reference plane
becomes ordinary complex scalar multiplication.  The spectrum of ``embed(T)``
is the trace of the S-spectrum of ``T`` in the reference plane, which is how
all eigenvalue work is delegated to LAPACK.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import Tolerances, resolve
from .errors import ConsistencyError, DomainError, NumericalError, SingularityError
from .quaternion import Quaternion, SpectralSphere

__all__ = [
    "QVector",
    "QMatrix",
    "SpectrumInfo",
    "complex_eigenvalues",
    "s_spectrum",
    "solve",
    "operator_norm",
    "null_space",
    "qdot",
    "gram_schmidt",
    "column_basis",
    "restrict_operator",
    "hausdorff_distance",
]

_COMPONENTS = 4


def _hamilton(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Componentwise Hamilton product of (..., 4) arrays (broadcasting)."""
    aw, ax, ay, az = (a[..., k] for k in range(4))
    bw, bx, by, bz = (b[..., k] for k in range(4))
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def _as_component_array(q: Quaternion) -> np.ndarray:
    return np.array([q.w, q.x, q.y, q.z], dtype=float)


class QVector:
    """Element of H^n with the right scalar action ``(v * a)_k = v_k * a``."""

    __slots__ = ("data",)

    def __init__(self, data):
        if isinstance(data, QVector):
            arr = data.data.copy()
        elif isinstance(data, np.ndarray):
            arr = np.asarray(data, dtype=float).copy()
        else:
            arr = np.array([_as_component_array(q) for q in data], dtype=float)
        if arr.ndim != 2 or arr.shape[1] != _COMPONENTS:
            raise DomainError(f"vector storage must have shape (n, 4), got {arr.shape}")
        arr.flags.writeable = False
        self.data = arr

    # --- construction ---------------------------------------------------------
    @staticmethod
    def zeros(n: int) -> "QVector":
        return QVector(np.zeros((n, _COMPONENTS)))

    @staticmethod
    def basis(n: int, k: int) -> "QVector":
        arr = np.zeros((n, _COMPONENTS))
        arr[k, 0] = 1.0
        return QVector(arr)

    @staticmethod
    def from_chart(chart: np.ndarray) -> "QVector":
        chart = np.asarray(chart, dtype=complex).reshape(-1)
        if chart.size % 2 != 0:
            raise DomainError("chart vector must have even length")
        n = chart.size // 2
        c, d = chart[:n], chart[n:]
        arr = np.stack([c.real, c.imag, d.real, -d.imag], axis=-1)
        return QVector(arr)

    @staticmethod
    def from_json(data) -> "QVector":
        return QVector([Quaternion.from_json(entry) for entry in data])

    def to_json(self):
        return [[*row] for row in self.data.tolist()]

    # --- structure ------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, k: int) -> Quaternion:
        return Quaternion(*self.data[k])

    def __iter__(self):
        for k in range(self.n):
            yield self[k]

    def chart(self) -> np.ndarray:
        c = self.data[:, 0] + 1j * self.data[:, 1]
        d = self.data[:, 2] - 1j * self.data[:, 3]
        return np.concatenate([c, d])

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    # --- algebra --------------------------------------------------------------
    def __add__(self, other: "QVector") -> "QVector":
        return QVector(self.data + other.data)

    def __sub__(self, other: "QVector") -> "QVector":
        return QVector(self.data - other.data)

    def __neg__(self) -> "QVector":
        return QVector(-self.data)

    def __mul__(self, a) -> "QVector":
        """Right scalar action ``v * a``."""
        if isinstance(a, (int, float)):
            return QVector(self.data * float(a))
        return QVector(_hamilton(self.data, _as_component_array(a)))

    def left_mul(self, a: Quaternion) -> "QVector":
        """Componentwise left multiplication ``(a v)_k = a v_k``."""
        return QVector(_hamilton(_as_component_array(a), self.data))

    def __repr__(self):
        return f"QVector({[self[k] for k in range(self.n)]})"


class QMatrix:
    """n x n quaternionic matrix acting on H^n by ``(T v)_k = sum_l T_kl v_l``."""

    __slots__ = ("data", "_norm", "_embed")

    def __init__(self, data):
        if isinstance(data, QMatrix):
            arr = data.data.copy()
        elif isinstance(data, np.ndarray):
            arr = np.asarray(data, dtype=float).copy()
        else:
            arr = np.array(
                [[_as_component_array(q) for q in row] for row in data], dtype=float
            )
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != _COMPONENTS:
            raise DomainError(f"matrix storage must have shape (n, n, 4), got {arr.shape}")
        arr.flags.writeable = False
        self.data = arr
        self._norm = None
        self._embed = None

    # --- construction ---------------------------------------------------------
    @staticmethod
    def zeros(n: int) -> "QMatrix":
        return QMatrix(np.zeros((n, n, _COMPONENTS)))

    @staticmethod
    def identity(n: int) -> "QMatrix":
        arr = np.zeros((n, n, _COMPONENTS))
        arr[np.arange(n), np.arange(n), 0] = 1.0
        return QMatrix(arr)

    @staticmethod
    def diagonal(entries) -> "QMatrix":
        entries = list(entries)
        n = len(entries)
        arr = np.zeros((n, n, _COMPONENTS))
        for k, q in enumerate(entries):
            arr[k, k] = _as_component_array(q)
        return QMatrix(arr)

    @staticmethod
    def scalar(n: int, a: Quaternion) -> "QMatrix":
        """Diagonal matrix ``a I``; as an operator, left multiplication by ``a``."""
        return QMatrix.diagonal([a] * n)

    @staticmethod
    def block_diagonal(blocks) -> "QMatrix":
        blocks = list(blocks)
        n = sum(b.n for b in blocks)
        arr = np.zeros((n, n, _COMPONENTS))
        at = 0
        for b in blocks:
            arr[at:at + b.n, at:at + b.n] = b.data
            at += b.n
        return QMatrix(arr)

    @staticmethod
    def from_columns(columns) -> "QMatrix":
        columns = list(columns)
        arr = np.stack([col.data for col in columns], axis=1)
        return QMatrix(arr)

    @staticmethod
    def from_json(data) -> "QMatrix":
        try:
            n = int(data["n"])
            entries = data["entries"]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"matrix JSON must carry 'n' and 'entries': {exc}")
        if len(entries) != n or any(len(row) != n for row in entries):
            raise DomainError("matrix JSON entries must form an n x n grid")
        return QMatrix([[Quaternion.from_json(q) for q in row] for row in entries])

    def to_json(self):
        return {"n": self.n, "entries": [[list(e) for e in row] for row in self.data.tolist()]}

    # --- structure ------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __getitem__(self, idx) -> Quaternion:
        k, l = idx
        return Quaternion(*self.data[k, l])

    def column(self, l: int) -> QVector:
        return QVector(self.data[:, l, :])

    def embed(self) -> np.ndarray:
        """Complex 2n x 2n matrix of the operator on C^(2n); cached."""
        if self._embed is None:
            a = self.data[..., 0] + 1j * self.data[..., 1]
            b = self.data[..., 2] + 1j * self.data[..., 3]
            top = np.concatenate([a, -b], axis=1)
            bottom = np.concatenate([b.conj(), a.conj()], axis=1)
            m = np.concatenate([top, bottom], axis=0)
            m.flags.writeable = False
            self._embed = m
        return self._embed

    @staticmethod
    def unembed(m: np.ndarray, check: bool = True, tol: float = 1e-9) -> "QMatrix":
        """Inverse of ``embed``; verifies the conjugation block symmetry."""
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
            raise DomainError(f"embedded matrix must be square of even size, got {m.shape}")
        n = m.shape[0] // 2
        a, b = m[:n, :n], -m[:n, n:]
        if check:
            scale = max(1.0, float(np.linalg.norm(m, ord=np.inf)))
            defect = max(
                float(np.abs(m[n:, :n] - b.conj()).max(initial=0.0)),
                float(np.abs(m[n:, n:] - a.conj()).max(initial=0.0)),
            )
            if defect > tol * scale:
                raise ConsistencyError(
                    f"matrix is not quaternionic: block symmetry defect {defect:.3e} "
                    f"exceeds {tol:.1e} * {scale:.3e}"
                )
        arr = np.stack([a.real, a.imag, b.real, b.imag], axis=-1)
        return QMatrix(arr)

    def norm(self) -> float:
        """Operator 2-norm (spectral norm of the embedding; chart is isometric)."""
        if self._norm is None:
            self._norm = float(np.linalg.norm(self.embed(), 2))
        return self._norm

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.data))

    # --- algebra --------------------------------------------------------------
    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self.data + other.data)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self.data - other.data)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.data)

    def __mul__(self, a: float) -> "QMatrix":
        if not isinstance(a, (int, float)):
            raise TypeError("use right_scalar/left_scalar for quaternion scalars")
        return QMatrix(self.data * float(a))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, QVector):
            prod = _hamilton(self.data, other.data[np.newaxis, :, :])
            return QVector(prod.sum(axis=1))
        if isinstance(other, QMatrix):
            a, b = self.data, other.data
            aw, ax, ay, az = (a[..., k] for k in range(4))
            bw, bx, by, bz = (b[..., k] for k in range(4))
            return QMatrix(np.stack(
                [
                    aw @ bw - ax @ bx - ay @ by - az @ bz,
                    aw @ bx + ax @ bw + ay @ bz - az @ by,
                    aw @ by - ax @ bz + ay @ bw + az @ bx,
                    aw @ bz + ax @ by - ay @ bx + az @ bw,
                ],
                axis=-1,
            ))
        return NotImplemented

    def right_scalar(self, a) -> "QMatrix":
        """Entrywise ``T_kl * a``, i.e. the matrix product ``T @ (a I)``."""
        if isinstance(a, (int, float)):
            return self * float(a)
        return QMatrix(_hamilton(self.data, _as_component_array(a)))

    def left_scalar(self, a) -> "QMatrix":
        """Entrywise ``a * T_kl`` = (a I) @ T; the operator ``v -> a (T v)``."""
        if isinstance(a, (int, float)):
            return self * float(a)
        return QMatrix(_hamilton(_as_component_array(a), self.data))

    def conjugate_entries(self, h: Quaternion) -> "QMatrix":
        """Apply the algebra automorphism ``q -> h^-1 q h`` to every entry."""
        if abs(h) == 0.0:
            raise DomainError("cannot conjugate entries by zero")
        hinv = _as_component_array(h.inverse())
        harr = _as_component_array(h)
        return QMatrix(_hamilton(_hamilton(hinv, self.data), harr))

    def power(self, k: int) -> "QMatrix":
        if k < 0:
            raise DomainError("negative matrix powers are not supported")
        result = QMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return result

    def __repr__(self):
        return f"QMatrix(n={self.n})"


# --- eigenvalues and spectra ----------------------------------------------------


def complex_eigenvalues(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a dense complex matrix, algebraic multiplicity included.

    Backed by LAPACK (balancing, Hessenberg reduction, shifted QR); a failed
    sweep surfaces as ``NumericalError`` with basic diagnostics attached.
    """
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise NumericalError(
            f"eigenvalue iteration did not converge: {exc}; "
            f"dim={m.shape[0]}, norm={np.linalg.norm(m):.3e}"
        )


@dataclass(frozen=True)
class SpectrumInfo:
    """Finite S-spectrum: spheres with spherical multiplicities (summing to n)."""

    spheres: tuple  # of (SpectralSphere, int)

    def __iter__(self):
        return iter(self.spheres)

    def __len__(self):
        return len(self.spheres)

    @property
    def sphere_list(self):
        return [sphere for sphere, _ in self.spheres]

    def trace_points(self) -> np.ndarray:
        """Points ``u +/- i v`` in the reference plane, without multiplicity."""
        pts = []
        for sphere, _ in self.spheres:
            pts.append(complex(sphere.u, sphere.v))
            if sphere.v > 0.0:
                pts.append(complex(sphere.u, -sphere.v))
        return np.array(pts, dtype=complex)

    def max_radius(self) -> float:
        return max((s.radius for s, _ in self.spheres), default=0.0)

    def min_separation(self) -> float:
        spheres = self.sphere_list
        best = math.inf
        for i in range(len(spheres)):
            for j in range(i + 1, len(spheres)):
                best = min(best, spheres[i].distance(spheres[j]))
        return best

    def nearest_distance(self, u: float, v: float) -> float:
        return min((s.distance_to(u, v) for s, _ in self.spheres), default=math.inf)

    def to_json(self):
        return {
            "spheres": [
                {"u": s.u, "v": s.v, "mult": m} for s, m in self.spheres
            ]
        }

    @staticmethod
    def from_json(data) -> "SpectrumInfo":
        return SpectrumInfo(tuple(
            (SpectralSphere(float(e["u"]), float(e["v"])), int(e["mult"]))
            for e in data["spheres"]
        ))


def _cluster_points(points: np.ndarray, tol: float):
    """Single-linkage clustering of (u, v) rows at distance <= tol.

    Connected components keep near-degenerate groups together symmetrically,
    which a greedy running-mean scheme does not guarantee.  Returns
    ``(sum_u, sum_v, count)`` triples.
    """
    count = len(points)
    parent = list(range(count))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(count):
        for j in range(i + 1, count):
            if math.hypot(points[i][0] - points[j][0],
                          points[i][1] - points[j][1]) <= tol:
                parent[find(i)] = find(j)

    clusters = {}
    for i in range(count):
        root = find(i)
        su, sv, c = clusters.get(root, (0.0, 0.0, 0))
        clusters[root] = (su + points[i][0], sv + points[i][1], c + 1)
    return list(clusters.values())


def _conjugation_pairs(eigs: np.ndarray, gate: float) -> np.ndarray:
    """Match every eigenvalue with a conjugate partner; return (u, v) rows.

    The spectrum of a quaternionic embedding is closed under conjugation; the
    computed multiset satisfies this only up to roundoff (up to sqrt(eps) for
    defective eigenvalues), so the symmetry is restored structurally: process
    eigenvalues by descending |Im|, pair each with the nearest remaining
    candidate of its conjugate, and average the pair into one sphere point.
    """
    count = eigs.size
    if count % 2 != 0:  # pragma: no cover - embeddings always have even size
        raise ConsistencyError("embedded spectrum has odd size")
    order = np.argsort(-np.abs(eigs.imag), kind="stable")
    used = np.zeros(count, dtype=bool)
    points = []
    for idx in order:
        if used[idx]:
            continue
        used[idx] = True
        target = eigs[idx].conjugate()
        best, best_dist = -1, math.inf
        for j in range(count):
            if used[j]:
                continue
            dist = abs(eigs[j] - target)
            if dist < best_dist:
                best, best_dist = j, dist
        if best < 0 or best_dist > gate:
            raise ConsistencyError(
                f"embedded eigenvalues are not conjugation-closed: no partner "
                f"for {eigs[idx]:.6g} within {gate:.3e} (nearest {best_dist:.3e})"
            )
        used[best] = True
        mu = eigs[best]
        points.append(((eigs[idx].real + mu.real) / 2.0,
                       (abs(eigs[idx].imag) + abs(mu.imag)) / 2.0))
    return np.array(points)


def s_spectrum(t: QMatrix, tol: Tolerances | None = None) -> SpectrumInfo:
    """S-spectrum of ``t`` as clustered spheres ``(u, v)`` with multiplicities.

    The eigenvalues of the embedding are paired under conjugation (failing
    loudly if no partner exists within a hundred cluster tolerances), the pair
    points are snapped to the real axis below the cluster tolerance and then
    clustered by single linkage; the spherical multiplicity is the number of
    pairs per cluster.
    """
    tol = resolve(tol)
    eigs = complex_eigenvalues(t.embed())
    scale = max(1.0, t.norm())
    tol_cluster = tol.cluster_rel * scale

    points = _conjugation_pairs(eigs, 100.0 * tol_cluster)
    points[points[:, 1] < tol_cluster, 1] = 0.0
    clusters = _cluster_points(points, tol_cluster)

    spheres = []
    for su, sv, count in clusters:
        v = sv / count
        if v < tol_cluster:
            v = 0.0
        spheres.append((SpectralSphere(su / count, v), count))
    spheres.sort(key=lambda it: (it[0].u, it[0].v))
    return SpectrumInfo(tuple(spheres))


def operator_norm(t: QMatrix) -> float:
    return t.norm()


def solve(t: QMatrix, b: QVector, tol: Tolerances | None = None) -> QVector:
    """Solve ``T x = b`` through the complex embedding, with a residual check."""
    tol = resolve(tol)
    m = t.embed()
    cond = _condition_estimate(m)
    if not np.isfinite(cond) or cond > tol.cond_cap:
        raise SingularityError(
            f"matrix is singular or too ill conditioned (estimate {cond:.3e})"
        )
    x = QVector.from_chart(np.linalg.solve(m, b.chart()))
    residual = (t @ x - b).norm()
    bound = tol.solve * max(b.norm(), 1e-300)
    if residual > bound * max(1.0, cond / 1e6):
        raise NumericalError(
            f"solve residual {residual:.3e} exceeds contract {bound:.3e}"
        )
    return x


def _condition_estimate(m: np.ndarray) -> float:
    try:
        return float(np.linalg.cond(m, 2))
    except np.linalg.LinAlgError:  # pragma: no cover
        return math.inf


def null_space(t: QMatrix, tol: Tolerances | None = None):
    """Basis (as charts, uncharted to QVectors) of ``ker T`` by SVD threshold."""
    tol = resolve(tol)
    m = t.embed()
    u, s, vh = np.linalg.svd(m)
    cutoff = tol.rank_rel * max(1.0, float(s[0]) if s.size else 0.0)
    kernel = [vh[k].conj() for k in range(s.size) if s[k] <= cutoff]
    return [QVector.from_chart(vec) for vec in kernel]


def qdot(u: QVector, v: QVector) -> Quaternion:
    """Quaternionic inner product ``sum_k conj(u_k) v_k`` (right-linear in v)."""
    uc = u.data.copy()
    uc[:, 1:] *= -1.0
    return Quaternion(*_hamilton(uc, v.data).sum(axis=0))


def gram_schmidt(vectors, tol: Tolerances | None = None):
    """Right-linear Gram-Schmidt; drops vectors below the rank threshold."""
    tol = resolve(tol)
    basis = []
    scale = max((v.norm() for v in vectors), default=1.0)
    for v in vectors:
        w = v
        for u in basis:
            w = w - u * qdot(u, w)
        nrm = w.norm()
        if nrm > tol.rank_rel * max(1.0, scale):
            basis.append(w * (1.0 / nrm))
    return basis


def column_basis(t: QMatrix, tol: Tolerances | None = None):
    """Orthonormal quaternionic basis of the column space of ``t``."""
    return gram_schmidt([t.column(k) for k in range(t.n)], tol)


def restrict_operator(t: QMatrix, basis) -> QMatrix:
    """Matrix of ``t`` on the invariant span of an orthonormal basis."""
    r = len(basis)
    entries = [[qdot(basis[i], t @ basis[j]) for j in range(r)] for i in range(r)]
    return QMatrix(entries)


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two finite nonempty point sets in C."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.size == 0 or b.size == 0:
        raise DomainError("hausdorff distance needs nonempty sets")
    d_ab = max(float(np.abs(b - p).min()) for p in a)
    d_ba = max(float(np.abs(a - p).min()) for p in b)
    return max(d_ab, d_ba)
