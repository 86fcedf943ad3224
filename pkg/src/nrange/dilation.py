"""Defect analysis of matrix contractions and their minimal unitary dilations.

A contraction ``T`` on ``C^m`` whose defect spaces both have dimension ``n``
admits unitary dilations on ``C^m (+) C^n``.  They are all obtained from the
partial isometry ``[[T, 0], [D_T, 0]]`` by choosing a unitary map from its
kernel onto its cokernel.  This module builds that partial isometry, the
dilations attached to a choice of ``Omega``, and dilations with prescribed
eigenvalues on the unit circle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    AlreadyFull,
    BadMultiplicities,
    MalformedInput,
    NoIntersection,
    NotAContraction,
    NotUnitaryOmega,
    SingularSolve,
    TargetInSpectrum,
    UnequalDefects,
)

__all__ = [
    "RANK_TOL",
    "ARC_TOL",
    "DefectData",
    "PartialIsometry",
    "Dilation",
    "as_matrix",
    "defect_data",
    "build_tilde",
    "dilation_from_omega",
    "extend_toward_eigenvalue",
    "extension_vectors",
    "dilation_with_eigenvalues",
    "hull_meets_range",
    "kernel_dim",
    "unitary_eig",
    "eigenvalue_multiplicity",
]

RANK_TOL = 1e-8
ARC_TOL = 1e-6


def as_matrix(T) -> np.ndarray:
    """Return ``T`` as a square complex array, rejecting anything else."""
    A = np.array(T, dtype=complex)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise MalformedInput(f"expected a nonempty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise MalformedInput("matrix has non-finite entries")
    return A


def _fix_phases(V: np.ndarray) -> np.ndarray:
    # make the largest-modulus entry of every column real and positive
    V = V.copy()
    for j in range(V.shape[1]):
        k = np.argmax(np.abs(V[:, j]))
        if abs(V[k, j]) > 0:
            V[:, j] *= abs(V[k, j]) / V[k, j]
    return V


def _projector_basis(P: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis for the range of an orthogonal projector of rank ``dim``."""
    if dim == 0:
        return np.zeros((P.shape[0], 0), dtype=complex)
    w, V = np.linalg.eigh((P + P.conj().T) / 2)
    return _fix_phases(V[:, ::-1][:, :dim])


def kernel_dim(M: np.ndarray, rank_tol: float = RANK_TOL) -> int:
    """Dimension of ``ker M``: singular values at most ``rank_tol * max(1, s_max)``."""
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0:
        return M.shape[1]
    cut = rank_tol * max(1.0, s[0])
    return int(M.shape[1] - np.count_nonzero(s > cut))


@dataclass(frozen=True)
class DefectData:
    defect_op: np.ndarray
    defect_basis: np.ndarray
    index: int


def defect_data(T, rank_tol: float = RANK_TOL) -> DefectData:
    """Defect operator ``(I - T*T)^{1/2}``, an orthonormal basis of its range, and its rank.

    The square root is taken through a Hermitian eigendecomposition with
    negative eigenvalues clamped to zero.  The index counts eigenvalues of
    ``I - T*T`` above ``rank_tol`` (the identity sets the scale).
    """
    T = as_matrix(T)
    norm = np.linalg.norm(T, 2)
    if norm > 1 + rank_tol:
        raise NotAContraction(f"operator norm {norm!r} exceeds 1")
    m = T.shape[0]
    M = np.eye(m) - T.conj().T @ T
    w, V = np.linalg.eigh((M + M.conj().T) / 2)
    w = np.clip(w, 0.0, None)
    D = (V * np.sqrt(w)) @ V.conj().T
    keep = w > rank_tol
    basis = _fix_phases(V[:, keep][:, ::-1])
    return DefectData(defect_op=D, defect_basis=basis, index=int(keep.sum()))


@dataclass(frozen=True)
class PartialIsometry:
    """A partial isometry together with orthonormal bases of ``ker A`` and ``ker A*``."""

    matrix: np.ndarray
    ker_basis: np.ndarray
    coker_basis: np.ndarray

    @property
    def d(self) -> int:
        return self.ker_basis.shape[1]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, A: np.ndarray, tol: float = 1e-8) -> "PartialIsometry":
        """Certify ``A`` as a partial isometry with equal kernel and cokernel dimensions."""
        A = np.asarray(A, dtype=complex)
        N = A.shape[0]
        Q = A.conj().T @ A
        R = A @ A.conj().T
        scale = tol * max(1, N)
        if np.linalg.norm(Q @ Q - Q, 2) > scale or np.linalg.norm(R @ R - R, 2) > scale:
            raise SingularSolve("matrix is not a partial isometry within tolerance")
        d_ker = int(round(N - np.trace(Q).real))
        d_coker = int(round(N - np.trace(R).real))
        if d_ker != d_coker:
            raise UnequalDefects(f"dim ker = {d_ker} but dim ker* = {d_coker}")
        I = np.eye(N)
        return cls(A, _projector_basis(I - Q, d_ker), _projector_basis(I - R, d_coker))


@dataclass(frozen=True)
class Dilation:
    """A unitary ``U`` on ``C^(base_dim + n)`` compressing to ``U[:base_dim, :base_dim]``."""

    U: np.ndarray
    base_dim: int
    omega: np.ndarray
    targets: tuple = field(default=())

    @property
    def n(self) -> int:
        return self.U.shape[0] - self.base_dim

    @property
    def contraction(self) -> np.ndarray:
        return self.U[: self.base_dim, : self.base_dim]

    def unitarity_residual(self) -> float:
        N = self.U.shape[0]
        return float(np.linalg.norm(self.U.conj().T @ self.U - np.eye(N), 2))

    def compression_residual(self, T) -> float:
        return float(np.linalg.norm(self.contraction - as_matrix(T), 2))


def build_tilde(T, dd: DefectData | None = None, rank_tol: float = RANK_TOL) -> PartialIsometry:
    """The partial isometry ``[[T, 0], [B* D_T, 0]]`` on ``C^m (+) C^n``.

    ``B`` maps the standard basis of ``C^n`` onto ``dd.defect_basis``.  The
    kernel is the added summand ``0 (+) C^n``.  For unitary ``T`` (``n = 0``)
    the result is ``T`` itself with ``d = 0``.
    """
    T = as_matrix(T)
    if dd is None:
        dd = defect_data(T, rank_tol)
    dd_star = defect_data(T.conj().T, rank_tol)
    if dd.index != dd_star.index:
        raise UnequalDefects(f"defect indices {dd.index} and {dd_star.index} differ")
    m, n = T.shape[0], dd.index
    A = np.zeros((m + n, m + n), dtype=complex)
    A[:m, :m] = T
    A[m:, :m] = dd.defect_basis.conj().T @ dd.defect_op
    rec = PartialIsometry.from_matrix(A, tol=max(rank_tol, 1e-10))
    if rec.d != n:
        raise UnequalDefects(f"constructed partial isometry has d = {rec.d}, expected {n}")
    ker = np.zeros((m + n, n), dtype=complex)
    ker[m:, :] = np.eye(n)
    return PartialIsometry(A, ker, rec.coker_basis)


def _check_unitary(W: np.ndarray, tol: float, err=NotUnitaryOmega):
    W = np.asarray(W, dtype=complex)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise err(f"expected a square matrix, got shape {W.shape}")
    if W.size and np.linalg.norm(W.conj().T @ W - np.eye(W.shape[0]), 2) > tol:
        raise err("matrix is not unitary within tolerance")
    return W


def dilation_from_omega(tilde: PartialIsometry, omega, tol: float = 1e-10) -> Dilation:
    """``U = A`` on ``(ker A)^perp`` and ``ker_basis v -> coker_basis (omega v)``."""
    omega = np.asarray(omega, dtype=complex).reshape(tilde.d, -1) if tilde.d else np.zeros((0, 0))
    omega = _check_unitary(omega, tol)
    if omega.shape[0] != tilde.d:
        raise NotUnitaryOmega(f"omega must be {tilde.d}x{tilde.d}")
    U = tilde.matrix + tilde.coker_basis @ omega @ tilde.ker_basis.conj().T
    return Dilation(U=U, base_dim=tilde.dim - tilde.d, omega=omega)


def _unimodular(lam) -> complex:
    lam = complex(lam)
    if abs(abs(lam) - 1) > 1e-10:
        raise ValueError(f"{lam!r} is not on the unit circle")
    return lam / abs(lam)


def extension_vectors(A: PartialIsometry, lam, rank_tol: float = RANK_TOL):
    """Vectors defining the one-step extension of ``A`` toward ``lam``.

    Returns ``(y, y_star, shared)``.  When ``shared`` is true, ``y == y_star``
    is a unit vector in ``ker A`` and ``ker A*``.  Otherwise ``y`` and
    ``y_star`` are unit vectors in ``ker A`` and ``ker A*`` whose unnormalized
    versions satisfy ``(A - lam) x = y + y_star`` and have equal norms.
    """
    lam = _unimodular(lam)
    N, d = A.dim, A.d
    K, C = A.ker_basis, A.coker_basis
    u, s, vh = np.linalg.svd(K.conj().T @ C)
    if s[0] > 1 - 1e-8:
        h = K @ u[:, 0] + C @ vh[0].conj()
        h /= np.linalg.norm(h)
        return h, h, True
    # eigenvectors at a unimodular lam reduce A; solve on their complement
    shifted = A.matrix - lam * np.eye(N)
    E = scipy.linalg.null_space(shifted, rcond=rank_tol)
    Q = A.matrix.conj().T @ A.matrix - E @ E.conj().T
    P = _projector_basis(Q, N - d - E.shape[1])
    M = np.hstack([shifted @ P, -K, -C])
    Z = scipy.linalg.null_space(M, rcond=rank_tol)
    off = P.shape[1]
    Za = Z[off : off + d, :]
    if Za.size == 0:
        raise SingularSolve("no solution with a kernel component")
    _, sa, vha = np.linalg.svd(Za)
    if sa[0] < rank_tol:
        raise SingularSolve("kernel component of the solution vanishes numerically")
    sol = Z @ vha[0].conj()
    y = K @ sol[off : off + d]
    ys = C @ sol[off + d :]
    ny, nys = np.linalg.norm(y), np.linalg.norm(ys)
    if abs(ny - nys) > 1e-6 * max(ny, nys):
        raise SingularSolve(f"|y| = {ny} and |y*| = {nys} should agree")
    return y / ny, ys / nys, False


def extend_toward_eigenvalue(A: PartialIsometry, lam, rank_tol: float = RANK_TOL,
                             require_deficient: bool = True) -> PartialIsometry:
    """Extend ``A`` by one kernel dimension so that ``lam`` gains one eigenvector.

    If ``ker A`` and ``ker A*`` share a unit vector ``h`` the extension sends
    ``h`` to ``lam h``.  Otherwise a solution of ``(A - lam) x = y + y*`` with
    ``x`` orthogonal to ``ker A``, ``y`` in ``ker A`` and ``y*`` in ``ker A*``
    is found, and the extension sends ``y`` to ``-lam y*``.  Among the
    solutions the one with the largest ``ker A`` component is used.

    With ``require_deficient`` the classical hypothesis
    ``dim ker(A - lam) < d`` is enforced.  Without it the step also works when
    that dimension is already ``>= d``: eigenvectors at a unimodular ``lam``
    span a reducing subspace, and the construction runs on its complement.
    """
    lam = _unimodular(lam)
    N, d = A.dim, A.d
    I = np.eye(N)
    k = kernel_dim(A.matrix - lam * I, rank_tol)
    if d == 0 or (require_deficient and k >= d):
        raise AlreadyFull(f"dim ker(A - lam) = {k} is not below d = {d}")
    y, ys, shared = extension_vectors(A, lam, rank_tol)
    if shared:
        A1 = A.matrix + lam * np.outer(y, y.conj())
    else:
        A1 = A.matrix - lam * np.outer(ys, y.conj())

    out = PartialIsometry.from_matrix(A1, tol=max(rank_tol, 1e-10))
    if out.d != d - 1 or kernel_dim(A1 - lam * I, rank_tol) != k + 1:
        raise SingularSolve("extension did not add an eigenvector at lam")
    return out


def dilation_with_eigenvalues(T, targets, rank_tol: float = RANK_TOL,
                              spectrum_tol: float = 1e-8) -> Dilation:
    """Unitary ``n``-dilation in which each ``lam_j`` has multiplicity at least ``n_j``.

    ``targets`` is a sequence of ``(lam_j, n_j)`` with distinct unimodular
    ``lam_j`` outside the spectrum of ``T`` and ``sum n_j`` equal to the
    defect index.  When the running multiplicity count already exceeds the
    step number, the first kernel vector is paired with the first cokernel
    vector.
    """
    T = as_matrix(T)
    tilde = build_tilde(T, rank_tol=rank_tol)
    n = tilde.d
    lams = [_unimodular(lam) for lam, _ in targets]
    mults = [int(mj) for _, mj in targets]
    if any(mj < 1 for mj in mults) or sum(mults) != n:
        raise BadMultiplicities(f"multiplicities {mults} must be positive and sum to {n}")
    for i in range(len(lams)):
        for j in range(i):
            if abs(lams[i] - lams[j]) < spectrum_tol:
                raise BadMultiplicities("target eigenvalues must be distinct")
    eigT = np.linalg.eigvals(T)
    for lam in lams:
        if np.min(np.abs(eigT - lam)) <= spectrum_tol:
            raise TargetInSpectrum(f"{lam!r} lies in the spectrum of T")

    W = tilde
    I = np.eye(W.dim)
    for step in range(n):
        dims = [kernel_dim(W.matrix - lam * I, rank_tol) for lam in lams]
        count = sum(min(mj, dj) for mj, dj in zip(mults, dims))
        if count > step:
            A1 = W.matrix + np.outer(W.coker_basis[:, 0], W.ker_basis[:, 0].conj())
            W = PartialIsometry.from_matrix(A1, tol=max(rank_tol, 1e-10))
        else:
            j = next(i for i, (mj, dj) in enumerate(zip(mults, dims)) if dj < mj)
            W = extend_toward_eigenvalue(W, lams[j], rank_tol, require_deficient=False)
    omega = tilde.coker_basis.conj().T @ W.matrix @ tilde.ker_basis
    return Dilation(U=W.matrix, base_dim=T.shape[0], omega=omega,
                    targets=tuple(zip(lams, mults)))


def unitary_eig(U: np.ndarray):
    """Eigenvalues and orthonormal eigenvectors of a unitary (normal) matrix via Schur form."""
    S, Z = scipy.linalg.schur(np.asarray(U, dtype=complex), output="complex")
    return np.diag(S).copy(), Z


def eigenvalue_multiplicity(U: np.ndarray, lam, arc_tol: float = ARC_TOL) -> int:
    """Number of eigenvalues of the unitary ``U`` within ``arc_tol`` arc distance of ``lam``."""
    ev = np.linalg.eigvals(U)
    return int(np.count_nonzero(np.abs(np.angle(ev * np.conj(lam))) <= arc_tol))


def hull_meets_range(dil: Dilation, eigpicks, tol: float = 1e-8) -> complex:
    """Return ``<T xi, xi>`` for a unit ``xi`` in the span of ``n + 1`` eigenvectors of ``U``.

    ``eigpicks`` is a sequence of ``(eigenvalue, eigenvector)`` pairs.  Such a
    span always meets the base space, and the returned point lies in the
    convex hull of the chosen eigenvalues.
    """
    vecs = np.column_stack([np.asarray(v, dtype=complex) for _, v in eigpicks])
    m, n = dil.base_dim, dil.n
    if vecs.shape != (m + n, n + 1):
        raise MalformedInput(f"need {n + 1} eigenvectors of length {m + n}")
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    if np.linalg.svd(vecs, compute_uv=False)[-1] < tol:
        raise NoIntersection("eigenvectors are linearly dependent")
    _, _, vh = np.linalg.svd(vecs[m:, :])
    xi = vecs @ vh[-1].conj()
    norm = np.linalg.norm(xi)
    if np.linalg.norm(xi[m:]) > tol * norm:
        raise NoIntersection("span of the eigenvectors misses the base space")
    x = xi[:m] / np.linalg.norm(xi[:m])
    return complex(x.conj() @ dil.contraction @ x)
