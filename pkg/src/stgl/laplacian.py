"""The spatio-temporal graph Laplacian: assembly, eigenproblem, eigenvector tags.

The coupled system lives on M copies of the vertex set. A is the symmetric
block-tridiagonal matrix of cross-covariances, B the diagonal matrix of
(doubled interior) covariances, and C = B^{-1} A the row-stochastic matrix
whose dominant eigenvectors carry the cluster structure. L = I - C.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.linalg import eigh
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import ConvergenceFailure, StglError
from .operators import OperatorSequence

# Largest system solved by a full dense symmetric decomposition; beyond this
# a restarted Lanczos iteration is used.
DENSE_EIG_CUTOFF = 5000

DEFAULT_TAU = 0.05

# Eigenvalues above this are surfaced by default; negative ones correspond to
# negatively correlated functions and are filtered.
NEGATIVE_EIG_CUTOFF = -1e-12


@dataclass(frozen=True)
class SpatioTemporalSystem:
    """Assembled block matrices of the coupled eigenproblem.

    ``A`` is Mn x Mn sparse symmetric, ``B_diag`` the positive diagonal of B,
    and ``C`` the row-stochastic matrix B^{-1} A stored sparse.
    """

    n: int
    M: int
    A: sparse.csr_array = field(repr=False)
    B_diag: np.ndarray = field(repr=False)
    C: sparse.csr_array = field(repr=False)

    @property
    def size(self):
        return self.M * self.n

    @property
    def B(self):
        return sparse.dia_array((self.B_diag[None, :], [0]), shape=self.A.shape)

    @property
    def L(self):
        """The spatio-temporal graph Laplacian I - C."""
        return sparse.csr_array(sparse.identity(self.size, format="csr") - self.C)

    def symmetrized(self):
        """B^{-1/2} A B^{-1/2}: symmetric, with the same spectrum as C."""
        d = sparse.dia_array((1.0 / np.sqrt(self.B_diag)[None, :], [0]),
                             shape=self.A.shape)
        H = sparse.csr_array(d @ self.A @ d)
        asym = abs(H - H.T)
        if asym.nnz and asym.data.max() > 1e-12:
            raise StglError("symmetrized system is not symmetric")
        return sparse.csr_array((H + H.T) * 0.5)


@dataclass(frozen=True)
class SpectralEmbedding:
    """Dominant eigenpairs of C, folded into per-view slices and tagged.

    Eigenvalues are sorted descending; eigenvectors (columns of ``vectors``)
    are B-orthonormal. ``folded[i]`` reshapes eigenvector i to M x n, and
    ``tags[i]`` is one of "constant", "temporal", "spatial".
    """

    n: int
    M: int
    eigenvalues: np.ndarray
    vectors: np.ndarray = field(repr=False)
    folded: tuple = field(repr=False)
    tags: tuple
    tau: float = DEFAULT_TAU

    def __len__(self):
        return len(self.eigenvalues)


def assemble_system(ops: OperatorSequence) -> SpatioTemporalSystem:
    """Build A, B and C from the per-view operators.

    C is assembled twice, once as B^{-1} A from the covariance blocks and
    once directly from the Koopman and reweighted Perron-Frobenius blocks;
    the two routes must agree entrywise to 1e-12.
    """
    n, M = ops.n, ops.M
    mus = ops.densities

    cross = []  # C_t(t+1) = D_{mu_t} S_t for t = 1..M-1
    for t in range(M - 1):
        scale = sparse.dia_array((mus[t][None, :], [0]), shape=(n, n))
        cross.append(sparse.csr_array(scale @ ops.transitions[t]))

    blocks_A = [[None] * M for _ in range(M)]
    for t in range(M - 1):
        blocks_A[t][t + 1] = cross[t]
        blocks_A[t + 1][t] = cross[t].T
    A = sparse.csr_array(sparse.block_array(blocks_A, format="csr"))

    weights = np.ones(M)
    weights[1:-1] = 2.0
    B_diag = np.concatenate([w * mu for w, mu in zip(weights, mus)])

    inv_b = sparse.dia_array((1.0 / B_diag[None, :], [0]), shape=A.shape)
    C_cov = sparse.csr_array(inv_b @ A)

    blocks_C = [[None] * M for _ in range(M)]
    for t in range(M - 1):
        koop = sparse.csr_array(ops.transitions[t])
        inv_mu = sparse.dia_array((1.0 / mus[t + 1][None, :], [0]), shape=(n, n))
        pf = sparse.csr_array(inv_mu @ ops.transitions[t].T @
                              sparse.dia_array((mus[t][None, :], [0]), shape=(n, n)))
        blocks_C[t][t + 1] = koop if t == 0 else koop * 0.5
        blocks_C[t + 1][t] = pf if t == M - 2 else pf * 0.5
    C_op = sparse.csr_array(sparse.block_array(blocks_C, format="csr"))

    diff = abs(C_cov - C_op)
    if diff.nnz and diff.data.max() > 1e-12:
        raise StglError(f"covariance and transfer-operator routes disagree "
                        f"by {diff.data.max():.3e}")
    return SpatioTemporalSystem(n=n, M=M, A=A, B_diag=B_diag, C=C_op)


def _fix_signs(vecs):
    """Flip eigenvector columns so the first non-negligible entry is positive."""
    for j in range(vecs.shape[1]):
        v = vecs[:, j]
        nz = np.flatnonzero(np.abs(v) > 1e-12 * np.abs(v).max())
        if nz.size and v[nz[0]] < 0:
            vecs[:, j] = -v
    return vecs


def _order_eigenpairs(vals, vecs, descending):
    """Sort by eigenvalue, breaking exact ties lexicographically."""
    order = np.argsort(-vals if descending else vals, kind="stable")
    vals, vecs = vals[order], _fix_signs(vecs[:, order])
    i = 0
    while i < len(vals):
        j = i + 1
        while j < len(vals) and vals[j] == vals[i]:
            j += 1
        if j - i > 1:
            sub = sorted(range(i, j), key=lambda c: tuple(vecs[:, c]))
            vals[i:j] = vals[sub]
            vecs[:, i:j] = vecs[:, sub]
        i = j
    return vals, vecs


def symmetric_eigenpairs(H, k, *, largest=True, dense_cutoff=DENSE_EIG_CUTOFF):
    """The k extreme eigenpairs of a symmetric matrix, deterministically ordered.

    Dense decomposition up to ``dense_cutoff``, restarted Lanczos beyond.
    Largest mode returns eigenvalues descending, smallest mode ascending.
    """
    N = H.shape[0]
    k = min(k, N)
    if N <= dense_cutoff or k >= N - 1:
        Hd = H.toarray() if sparse.issparse(H) else np.asarray(H)
        lo, hi = (N - k, N - 1) if largest else (0, k - 1)
        vals, vecs = eigh(Hd, subset_by_index=(lo, hi))
    else:
        try:
            vals, vecs = eigsh(H, k=k, which="LA" if largest else "SA")
        except ArpackNoConvergence as err:
            raise ConvergenceFailure(
                f"Lanczos iteration converged {len(err.eigenvalues)} of {k} "
                f"eigenpairs", converged=len(err.eigenvalues), requested=k,
            ) from err
    return _order_eigenpairs(vals, vecs, descending=largest)


def fold_eigenvector(v, n, M):
    """Reshape an Mn vector into M per-view slices of length n."""
    v = np.asarray(v)
    if v.shape != (M * n,):
        raise ValueError(f"expected vector of length {M * n}, got {v.shape}")
    return v.reshape(M, n).copy()


def classify_folded(folded, tau=DEFAULT_TAU):
    """Tag one folded eigenvector as constant, temporal or spatial.

    Temporal means every view slice is constant (within-slice spread below
    tau times the overall spread) while the per-view constants differ.
    """
    flat = folded.ravel()
    overall = flat.std()
    rms = np.sqrt(np.mean(flat ** 2))
    if overall <= tau * rms:
        return "constant"
    if np.all(folded.std(axis=1) <= tau * overall):
        return "temporal"
    return "spatial"


def classify_eigenvectors(embedding: SpectralEmbedding, tau=None):
    """Recompute the per-eigenvector tags, optionally at a different tau."""
    tau = embedding.tau if tau is None else tau
    return tuple(classify_folded(f, tau) for f in embedding.folded)


def eigendecompose(system: SpatioTemporalSystem, k_request, *, tau=DEFAULT_TAU,
                   full_spectrum=False,
                   dense_cutoff=DENSE_EIG_CUTOFF) -> SpectralEmbedding:
    """The k_request largest eigenpairs of C, solved in symmetric form.

    Solves B^{-1/2} A B^{-1/2} y = lambda y and maps back v = B^{-1/2} y, so
    eigenvalues are real and eigenvectors B-orthonormal. Unless
    ``full_spectrum`` is set, only nonnegative eigenvalues are surfaced, so
    fewer than k_request pairs may be returned.
    """
    N = system.size
    if not 1 <= k_request <= N:
        raise ValueError(f"k_request must be in [1, {N}], got {k_request}")
    H = system.symmetrized()
    vals, vecs = symmetric_eigenpairs(H, k_request, largest=True,
                                      dense_cutoff=dense_cutoff)
    if not full_spectrum:
        keep = vals >= NEGATIVE_EIG_CUTOFF
        vals, vecs = vals[keep], vecs[:, keep]
    vecs = vecs / np.sqrt(system.B_diag)[:, None]
    folded = tuple(fold_eigenvector(vecs[:, j], system.n, system.M)
                   for j in range(vecs.shape[1]))
    tags = tuple(classify_folded(f, tau) for f in folded)
    return SpectralEmbedding(n=system.n, M=system.M, eigenvalues=vals,
                             vectors=vecs, folded=folded, tags=tags, tau=tau)


def laplacian_spectrum(system: SpatioTemporalSystem) -> np.ndarray:
    """All eigenvalues of L = I - C, ascending; contained in [0, 2] and
    symmetric about 1."""
    Hd = system.symmetrized().toarray()
    vals = np.linalg.eigvalsh(Hd)
    return np.sort(1.0 - vals)


def coupling_graph(system: SpatioTemporalSystem) -> sparse.csr_array:
    """Adjacency of the static coupling graph on Mn vertices.

    Vertex (t, i) maps to index t*n + i. The graph is undirected (A is
    symmetric) even when the underlying snapshots are directed, and has no
    edges inside a view layer.
    """
    return sparse.csr_array(system.A)
