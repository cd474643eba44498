"""Truncated multi-mode bosonic Fock space and the fiber Hamiltonians.

A desk-scale caricature of the quantized field: one scalar polarization
component, M discrete modes (omega_j, W_j, q_j) with couplings
g_j = sqrt(W_j / omega_j), occupation numbers truncated by
sum_j n_j <= N_tot.  On that basis

    H_f = sum_j omega_j n_j           (diagonal)
    P_f = sum_j q_j n_j               (diagonal; q_j are free scan labels)
    A   = sum_j g_j (a_j + a_j^T) / sqrt(2)

and the interpolating fiber Hamiltonian

    H_kappa(p, eps) = (1/2)(p - eps P_f - kappa A)^2 + kappa^2 H_f,

with eps = 0 the dipole fiber and eps = 1 the full fiber.  The weights W_j
match the PointMasses convention of the formfactor module, so all continuum
cross-checks line up: the exact ground energy of (1/2) A^2 + H_f is the
rank-one Bogoliubov value (1/2) sum_i (sqrt(mu_i) - omega_i) with mu_i the
eigenvalues of diag(omega^2) + v v^T, v_j = sqrt(W_j).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh, expm
from scipy.sparse.linalg import eigsh

from .errors import BasisSizeError, NumericalError

BASIS_SIZE_GUARD = 200_000
DENSE_DIM_LIMIT = 2000


@dataclass(frozen=True)
class Mode:
    omega: float
    weight: float
    momentum: float = 0.0

    def __post_init__(self):
        if not (self.omega > 0.0 and math.isfinite(self.omega)):
            raise ValueError(f"mode frequency must be positive, got {self.omega}")
        if not (self.weight >= 0.0 and math.isfinite(self.weight)):
            raise ValueError(f"mode weight must be nonnegative, got {self.weight}")

    @property
    def coupling(self) -> float:
        return math.sqrt(self.weight / self.omega)


def as_modes(modes) -> tuple[Mode, ...]:
    out = []
    for m in modes:
        if isinstance(m, Mode):
            out.append(m)
        else:
            out.append(Mode(*m))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class FockBasis:
    """Occupation-number basis {n : sum n_j <= N_tot} with a total order."""

    modes: tuple[Mode, ...]
    n_tot: int
    states: np.ndarray = field(repr=False)      # (dim, M) int array
    index: dict = field(repr=False)             # tuple(n) -> position

    @property
    def dim(self) -> int:
        return self.states.shape[0]

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def position(self, occupation) -> int:
        return self.index[tuple(int(v) for v in occupation)]

    def vacuum_index(self) -> int:
        return self.position((0,) * self.n_modes)

    def annihilator(self, j: int) -> sp.csr_matrix:
        """a_j in the truncated basis: a_j |n> = sqrt(n_j) |n - e_j>."""
        rows, cols, data = [], [], []
        for pos, state in enumerate(self.states):
            nj = state[j]
            if nj == 0:
                continue
            lowered = state.copy()
            lowered[j] -= 1
            rows.append(self.index[tuple(lowered)])
            cols.append(pos)
            data.append(math.sqrt(nj))
        return sp.csr_matrix((data, (rows, cols)), shape=(self.dim, self.dim))


def build_basis(modes, n_tot: int) -> FockBasis:
    """Enumerate multi-indices with total occupation <= n_tot.

    The dimension is C(M + n_tot, M); a hard guard rejects requests past
    200000 states before any enumeration happens.
    """
    modes = as_modes(modes)
    M = len(modes)
    if M < 1:
        raise ValueError("need at least one mode")
    if n_tot < 1:
        raise ValueError(f"need n_tot >= 1, got {n_tot}")
    dim = math.comb(M + n_tot, M)
    if dim > BASIS_SIZE_GUARD:
        raise BasisSizeError(
            f"basis would hold {dim} states, over the {BASIS_SIZE_GUARD} guard")
    states = np.zeros((dim, M), dtype=np.int64)
    pos = 0
    # multisets of size k over M modes <-> occupations with sum k
    for k in range(n_tot + 1):
        for combo in combinations_with_replacement(range(M), k):
            for j in combo:
                states[pos, j] += 1
            pos += 1
    assert pos == dim
    index = {tuple(int(v) for v in s): i for i, s in enumerate(states)}
    return FockBasis(modes=modes, n_tot=n_tot, states=states, index=index)


@dataclass(frozen=True, eq=False)
class FiberOperators:
    """Matrices of H_f, P_f, A and N on a FockBasis, plus the dressing generator."""

    basis: FockBasis
    Hf: sp.csr_matrix = field(repr=False)
    Pf: sp.csr_matrix = field(repr=False)
    A: sp.csr_matrix = field(repr=False)
    N: sp.csr_matrix = field(repr=False)
    shift_generator: sp.csr_matrix = field(repr=False)
    couplings: tuple[float, ...] = ()

    @property
    def dim(self) -> int:
        return self.basis.dim

    def delta_m(self) -> float:
        return math.fsum(m.weight / m.omega**2 for m in self.basis.modes)

    def m_eff(self) -> float:
        return 1.0 + self.delta_m()

    def half_A2_plus_Hf(self) -> sp.csr_matrix:
        return (0.5 * (self.A @ self.A) + self.Hf).tocsr()


def build_operators(basis: FockBasis) -> FiberOperators:
    occ = basis.states.astype(float)
    omegas = np.array([m.omega for m in basis.modes])
    qs = np.array([m.momentum for m in basis.modes])
    Hf = sp.diags(occ @ omegas).tocsr()
    Pf = sp.diags(occ @ qs).tocsr()
    Nop = sp.diags(occ.sum(axis=1)).tocsr()
    dim = basis.dim
    A = sp.csr_matrix((dim, dim))
    G = sp.csr_matrix((dim, dim))
    for j, mode in enumerate(basis.modes):
        a = basis.annihilator(j)
        g = mode.coupling
        A = A + g / math.sqrt(2.0) * (a + a.T)
        # -i p Pi~ = (p / sqrt(2)) sum_j (g_j/omega_j) (a_j^T - a_j): real antisymmetric
        G = G + g / (mode.omega * math.sqrt(2.0)) * (a.T - a)
    return FiberOperators(basis=basis, Hf=Hf, Pf=Pf, A=A.tocsr(), N=Nop,
                          shift_generator=G.tocsr(),
                          couplings=tuple(m.coupling for m in basis.modes))


def fiber_hamiltonian(ops: FiberOperators, kappa: float, p: float,
                      eps: float) -> sp.csr_matrix:
    """H_kappa(p, eps) = (1/2)(p - eps P_f - kappa A)^2 + kappa^2 H_f."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"interpolation parameter must lie in [0, 1], got {eps}")
    dim = ops.dim
    B = (p * sp.identity(dim) - eps * ops.Pf - kappa * ops.A).tocsr()
    H = 0.5 * (B @ B) + kappa**2 * ops.Hf
    return H.tocsr()


def ground_energy(matrix, tol: float = 1e-9) -> float:
    """Smallest eigenvalue: dense for dim <= 2000, else Lanczos with a
    residual check at ``tol``."""
    dim = matrix.shape[0]
    if dim <= DENSE_DIM_LIMIT:
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
        vals = eigh(dense, eigvals_only=True, subset_by_index=[0, 0])
        return float(vals[0])
    A = matrix.tocsr() if sp.issparse(matrix) else sp.csr_matrix(matrix)
    try:
        vals, vecs = eigsh(A, k=1, which="SA", maxiter=20000)
    except Exception as exc:
        raise NumericalError(f"Lanczos eigensolver failed: {exc}") from exc
    lam = float(vals[0])
    v = vecs[:, 0]
    residual = float(np.linalg.norm(A @ v - lam * v))
    if residual > tol * max(1.0, abs(lam)):
        raise NumericalError(
            f"eigensolver residual {residual:.3e} exceeds {tol:.0e}")
    return lam


def bogoliubov_energy(modes) -> float:
    """Exact ground energy of (1/2) A^2 + H_f for the discrete measure:

        (1/2) sum_i (sqrt(mu_i) - omega_i),

    mu_i the eigenvalues of diag(omega_j^2) + v v^T with v_j = sqrt(W_j).
    Independent of any truncation; the continuum-side counterpart is the
    energy-module ground_energy at the same PointMasses measure.
    """
    modes = as_modes(modes)
    if not modes:
        return 0.0
    omegas = np.array([m.omega for m in modes])
    v = np.sqrt(np.array([m.weight for m in modes]))
    mu = np.linalg.eigvalsh(np.diag(omegas**2) + np.outer(v, v))
    mu = np.clip(mu, 0.0, None)
    return 0.5 * float(np.sum(np.sqrt(mu) - omegas))


def conjugation_residual(ops: FiberOperators, kappa: float, p: float) -> float:
    """Operator-norm defect of the dressing identity on low occupations.

    U_p = exp(p G / (kappa m_eff)) with G the stored antisymmetric generator;
    exactly (untruncated) U_p^{-1} H_dip,kappa U_p = p^2/(2 m_eff)
    + kappa^2 ((1/2) A^2 + H_f).  The residual is measured on states with
    total occupation <= N_tot / 2 and shrinks as the truncation grows.
    """
    if kappa <= 0:
        raise ValueError("the dressing needs kappa > 0")
    m_star = ops.m_eff()
    dim = ops.dim
    if dim > DENSE_DIM_LIMIT:
        raise NumericalError(f"dense dressing needs dim <= {DENSE_DIM_LIMIT}, got {dim}")
    U = expm((p / (kappa * m_star)) * ops.shift_generator.toarray())
    H_dip = fiber_hamiltonian(ops, kappa, p, eps=0.0).toarray()
    target = (p * p / (2.0 * m_star)) * np.eye(dim) \
        + kappa**2 * ops.half_A2_plus_Hf().toarray()
    R = U.T @ H_dip @ U - target
    low = ops.basis.states.sum(axis=1) <= ops.basis.n_tot // 2
    sub = R[np.ix_(low, low)]
    return float(np.linalg.norm(sub, 2))


def wcl_scan(ops: FiberOperators, kappa_list, p_list, eps: float,
             reference_energy: float | None = None) -> list[dict]:
    """Rows of the weak-coupling gap study E_kappa(p) - E_kappa(0).

    The gap target is p^2 / (2 m_eff_disc); E0_dev compares E_kappa(0)
    against kappa^2 times the Bogoliubov value (not the truncated ground
    energy, so the column isolates weak-coupling error from truncation
    error).
    """
    kappa_list = list(kappa_list)
    p_list = list(p_list)
    if not kappa_list or not p_list:
        raise ValueError("kappa_list and p_list must be nonempty")
    if reference_energy is None:
        reference_energy = bogoliubov_energy(ops.basis.modes)
    m_disc = ops.m_eff()
    rows = []
    for kappa in kappa_list:
        e0 = ground_energy(fiber_hamiltonian(ops, kappa, 0.0, eps))
        for p in p_list:
            ep = e0 if p == 0.0 else ground_energy(fiber_hamiltonian(ops, kappa, p, eps))
            gap = ep - e0
            target = p * p / (2.0 * m_disc)
            rows.append({
                "kappa": kappa, "p": p, "epsilon": eps,
                "E_p": ep, "E_0": e0, "gap": gap, "target": target,
                "gap_dev": gap - target,
                "E0_dev": e0 - kappa**2 * reference_energy,
            })
    return rows


def diamagnetic_check(ops: FiberOperators, kappa: float, p_list,
                      eps: float = 1.0, allowance: float = 1e-6) -> list[dict]:
    """Monitor E_kappa(0) <= E_kappa(p) up to the truncation allowance.

    Violations are reported (flagged, never raised) and attributed to the
    truncation plus eigensolver residual.
    """
    e0 = ground_energy(fiber_hamiltonian(ops, kappa, 0.0, eps))
    rows = []
    for p in p_list:
        ep = e0 if p == 0.0 else ground_energy(fiber_hamiltonian(ops, kappa, p, eps))
        excess = e0 - ep
        rows.append({
            "kappa": kappa, "p": p, "epsilon": eps,
            "E_0": e0, "E_p": ep, "excess": excess,
            "ok": excess <= allowance,
        })
    return rows


def _dense_semigroup(H: np.ndarray, T: float, shift: float) -> np.ndarray:
    """exp(-T (H - shift)) by symmetric eigendecomposition."""
    lam, Q = np.linalg.eigh(H)
    expo = np.clip(-T * (lam - shift), -745.0, 50.0)
    return (Q * np.exp(expo)) @ Q.T


def semigroup_wcl_residual(ops: FiberOperators, kappa: float, p: float,
                           T: float) -> float:
    """Operator norm of exp(-T(H_kappa(p) - kappa^2 E_disc))
    - P_g exp(-T (p - P_f)^2 / (2 m_eff_disc)).

    E_disc is the Bogoliubov value and P_g projects on the ground
    eigenvector of (1/2) A^2 + H_f; dense matrix exponentials, so the
    dimension must stay at or below 2000.
    """
    dim = ops.dim
    if dim > DENSE_DIM_LIMIT:
        raise NumericalError(
            f"dense exponentials need dim <= {DENSE_DIM_LIMIT}, got {dim}")
    e_disc = bogoliubov_energy(ops.basis.modes)
    H = fiber_hamiltonian(ops, kappa, p, eps=1.0).toarray()
    left = _dense_semigroup(H, T, kappa**2 * e_disc)

    half = ops.half_A2_plus_Hf().toarray()
    lam, Q = np.linalg.eigh(half)
    ground_vec = Q[:, 0]
    P_g = np.outer(ground_vec, ground_vec)
    pf_diag = ops.Pf.diagonal()
    free = np.exp(np.clip(-T * (p - pf_diag) ** 2 / (2.0 * ops.m_eff()),
                          -745.0, 50.0))
    target = P_g * free[None, :]   # P_g @ diag(free)
    return float(np.linalg.norm(left - target, 2))
