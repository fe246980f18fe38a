"""Correlation and mixedness measures for two-qubit X states.

All entropies are in bits and use 0 log 0 = 0.  Discord is one-sided with
the measurement on qubit B.  The closed forms (``qd_cc`` and friends) are
checked against :func:`qd_oracle`, a brute-force search over projective
measurements that works from the full 4x4 matrix.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .qstate import XState, as_x_state, x_eigenvalues

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class CorrelationRecord:
    eof: float
    concurrence: float
    qd: float
    cc: float
    mutual_info: float
    gmqd: float
    linear_entropy: float

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def binary_entropy(x):
    """h(x) = -x log2 x - (1-x) log2(1-x), clamped to [0, 1] first."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    out = np.zeros_like(x)
    inner = (x > 0) & (x < 1)
    xi = x[inner]
    out[inner] = -xi * np.log2(xi) - (1 - xi) * np.log2(1 - xi)
    return out[()] if out.ndim == 0 else out


def shannon(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def concurrence(x: XState) -> float:
    c = max(
        0.0,
        abs(x.c14) - np.sqrt(max(x.p2 * x.p3, 0.0)),
        abs(x.c23) - np.sqrt(max(x.p1 * x.p4, 0.0)),
    )
    return 2.0 * c


def eof_from_concurrence(c: float) -> float:
    c = min(max(c, 0.0), 1.0)
    return float(binary_entropy((1 + np.sqrt(1 - c * c)) / 2))


def eof(x: XState) -> float:
    """Entanglement of formation from the X-state concurrence."""
    return eof_from_concurrence(concurrence(x))


def _qd_cc_branches(x: XState):
    lam = x_eigenvalues(x)
    s_a = binary_entropy(x.p1 + x.p2)
    s_b = binary_entropy(x.p1 + x.p3)
    tau = (1 + np.sqrt((1 - 2 * (x.p3 + x.p4)) ** 2 + 4 * (abs(x.c14) + abs(x.c23)) ** 2)) / 2
    d1 = binary_entropy(tau)
    d2 = shannon(x.populations) - s_b
    minus_s = -shannon(lam)
    q = (s_b + minus_s + d1, s_b + minus_s + d2)
    cc = (s_a - d1, s_a - d2)
    return q, cc


def qd_cc(x: XState) -> tuple[float, float]:
    """Quantum discord and classical correlations (measurement on B).

    Both candidate measurements are evaluated: one in the x-y plane (D1)
    and sigma_z (D2).
    """
    q, cc = _qd_cc_branches(x)
    return float(min(q)), float(max(cc))


def mutual_information(x: XState) -> float:
    s_a = binary_entropy(x.p1 + x.p2)
    s_b = binary_entropy(x.p1 + x.p3)
    return float(s_a + s_b - shannon(x_eigenvalues(x)))


def pauli_tensor(rho):
    """Bloch vectors of A and B and the 3x3 correlation tensor T[i, j] = <s_i s_j>."""
    rho = np.asarray(rho, dtype=complex)
    eye = np.eye(2)
    a = np.array([np.trace(rho @ np.kron(s, eye)).real for s in PAULI])
    b = np.array([np.trace(rho @ np.kron(eye, s)).real for s in PAULI])
    t = np.array([[np.trace(rho @ np.kron(si, sj)).real for sj in PAULI] for si in PAULI])
    return a, b, t


def gmqd(x: XState) -> float:
    """Geometric discord with B measured, scaled so Bell states give 1/2."""
    _, b, t = pauli_tensor(x.to_matrix())
    k = np.outer(b, b) + t.T @ t
    val = (b @ b + np.sum(t * t) - np.linalg.eigvalsh(k)[-1]) / 4
    return float(max(val, 0.0))


def linear_entropy(x: XState) -> float:
    purity = np.sum(x.populations**2) + 2 * abs(x.c14) ** 2 + 2 * abs(x.c23) ** 2
    return float(4 / 3 * (1 - purity))


def measure_all(x: XState) -> CorrelationRecord:
    c = concurrence(x)
    qd, cc = qd_cc(x)
    return CorrelationRecord(
        eof=eof_from_concurrence(c),
        concurrence=c,
        qd=qd,
        cc=cc,
        mutual_info=mutual_information(x),
        gmqd=gmqd(x),
        linear_entropy=linear_entropy(x),
    )


def measure_matrix(rho) -> CorrelationRecord:
    """:func:`measure_all` for an X-structured 4x4 matrix."""
    return measure_all(as_x_state(rho))


# --- brute-force oracle -------------------------------------------------------


def _eig2_entropy(m):
    """Entropy of a stack of 2x2 Hermitian PSD matrices (unit trace)."""
    tr = (m[..., 0, 0] + m[..., 1, 1]).real
    det = (m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]).real
    disc = np.sqrt(np.clip(tr * tr / 4 - det, 0.0, None))
    return binary_entropy(np.clip(tr / 2 + disc, 0.0, 1.0))


def _vn_entropy(rho) -> float:
    return shannon(np.clip(np.linalg.eigvalsh(rho), 0.0, None))


class _MeasuredEntropy:
    """Conditional entropy S(A | projective measurement on B) on Bloch angles."""

    def __init__(self, rho4):
        # rho4 indices (a, b, a', b'); contract (b, b') against P[b', b] by matmul
        self.kernel = rho4.transpose(0, 2, 3, 1).reshape(4, 4)

    def __call__(self, theta, phi):
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        n = np.stack(
            [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
        )
        ndotsigma = np.einsum("...k,kij->...ij", n, np.stack(PAULI))
        total = np.zeros(theta.shape)
        for sign in (1.0, -1.0):
            proj = 0.5 * (np.eye(2) + sign * ndotsigma)
            cond = (proj.reshape(*theta.shape, 4) @ self.kernel.T).reshape(*theta.shape, 2, 2)
            prob = (cond[..., 0, 0] + cond[..., 1, 1]).real
            safe = np.where(prob > 1e-15, prob, 1.0)
            ent = _eig2_entropy(cond / safe[..., None, None])
            total += np.where(prob > 1e-15, prob * ent, 0.0)
        return total


def qd_oracle(
    x: XState,
    grid: int = 64,
    refine_iters: int = 40,
    measured: str = "B",
    n_starts: int = 4,
) -> float:
    """Discord by direct search over projective measurements on one qubit.

    A ``grid`` x ``2*grid`` mesh of Bloch angles (theta in [0, pi], phi in
    [0, 2 pi)) is scanned, then the ``n_starts`` best mesh points are each
    polished by a shrinking 5x5 stencil for ``refine_iters`` rounds (factor
    0.6 per round).  Independent of the closed forms: mutual information
    and the measured conditional entropy both come from the dense matrix.
    """
    if grid < 32:
        raise ValueError("grid must be >= 32")
    if measured not in ("A", "B"):
        raise ValueError("measured must be 'A' or 'B'")
    rho = x.to_matrix()
    rho4 = rho.reshape(2, 2, 2, 2)
    if measured == "A":
        rho4 = rho4.transpose(1, 0, 3, 2)
    rho_a = np.einsum("abcb->ac", rho4)  # unmeasured party
    rho_b = np.einsum("abad->bd", rho4)  # measured party
    s_ab = _vn_entropy(rho)
    s_a = _vn_entropy(rho_a)
    s_b = _vn_entropy(rho_b)
    cond = _MeasuredEntropy(rho4)

    thetas = np.linspace(0.0, np.pi, grid)
    phis = np.linspace(0.0, 2 * np.pi, 2 * grid, endpoint=False)
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    vals = cond(tg, pg)
    order = np.argsort(vals, axis=None, kind="stable")[:n_starts]

    d_theta = thetas[1] - thetas[0]
    d_phi = phis[1] - phis[0]
    offsets = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
    best = float(vals.flat[order[0]])
    for idx in order:
        i, j = np.unravel_index(idx, vals.shape)
        th, ph, cur = thetas[i], phis[j], float(vals[i, j])
        st, sp = d_theta, d_phi
        for _ in range(refine_iters):
            tt, pp = np.meshgrid(th + st * offsets, ph + sp * offsets, indexing="ij")
            local = cond(tt, pp)
            k = np.argmin(local)
            if local.flat[k] < cur:
                cur = float(local.flat[k])
                th, ph = tt.flat[k], pp.flat[k]
            st *= 0.6
            sp *= 0.6
        best = min(best, cur)
    cc = s_a - best
    return float(s_a + s_b - s_ab - cc)
