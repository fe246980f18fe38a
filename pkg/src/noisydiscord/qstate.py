"""Two-qubit states in the product basis |ee>, |eg>, |ge>, |gg>.

A density matrix is a plain 4x4 complex ``numpy`` array. States whose only
off-diagonal entries are rho_14 and rho_23 also have a compact
:class:`XState` view, which is what the closed-form correlation measures
and steady-state maps work with.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10
X_TOL = 1e-10

# indices of the entries that must vanish for an X state (upper triangle)
_OFF_X = ((0, 1), (0, 2), (1, 3), (2, 3))

BASIS = ("ee", "eg", "ge", "gg")


class DomainError(ValueError):
    """A state-family parameter lies outside its allowed range."""


class StructureError(ValueError):
    """A matrix is not a valid (X-structured) two-qubit density matrix."""


class Topology(str, Enum):
    GLOBAL = "global"
    LOCAL = "local"


@dataclass(frozen=True)
class HamiltonianParams:
    """Coherent part of the rotating-frame Hamiltonian (units of omega)."""

    delta0: float = 0.0
    omega0: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.delta0) and np.isfinite(self.omega0)):
            raise DomainError("delta0 and omega0 must be finite")

    @property
    def is_zero(self) -> bool:
        return self.delta0 == 0.0 and self.omega0 == 0.0


@dataclass(frozen=True)
class NoiseConfig:
    """White-noise strengths (units of omega) and how the fields act."""

    gamma_delta: float = 0.0
    gamma_omega: float = 0.0
    topology: Topology = Topology.GLOBAL

    def __post_init__(self):
        for name in ("gamma_delta", "gamma_omega"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be a finite number >= 0, got {value}")
        object.__setattr__(self, "topology", Topology(self.topology))

    @property
    def active(self) -> tuple[float, ...]:
        return tuple(g for g in (self.gamma_delta, self.gamma_omega) if g > 0)


@dataclass(frozen=True)
class XState:
    """Populations p1..p4 and coherences c14 = rho_14, c23 = rho_23."""

    p1: float
    p2: float
    p3: float
    p4: float
    c14: complex = 0j
    c23: complex = 0j

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "p4"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "c14", complex(self.c14))
        object.__setattr__(self, "c23", complex(self.c23))

    @property
    def populations(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.p3, self.p4])

    def check(self) -> "XState":
        p = self.populations
        if abs(p.sum() - 1.0) > TRACE_TOL:
            raise StructureError(f"populations sum to {p.sum()!r}, not 1")
        if p.min() < -TRACE_TOL:
            raise StructureError(f"negative population {p.min()!r}")
        if abs(self.c14) ** 2 > self.p1 * self.p4 + 1e-12:
            raise StructureError("|c14|^2 exceeds p1*p4")
        if abs(self.c23) ** 2 > self.p2 * self.p3 + 1e-12:
            raise StructureError("|c23|^2 exceeds p2*p3")
        return self

    def to_matrix(self) -> np.ndarray:
        rho = np.diag(self.populations).astype(complex)
        rho[0, 3] = self.c14
        rho[3, 0] = np.conj(self.c14)
        rho[1, 2] = self.c23
        rho[2, 1] = np.conj(self.c23)
        return rho


def check_density_matrix(rho) -> np.ndarray:
    """Return ``rho`` as a complex array, raising StructureError if invalid."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise StructureError(f"expected a 4x4 matrix, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITIAN_TOL:
        raise StructureError(f"not Hermitian (defect {herm:.3g})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise StructureError(f"trace is {tr!r}, not 1")
    lo = np.linalg.eigvalsh(rho).min()
    if lo < PSD_TOL:
        raise StructureError(f"not positive semidefinite (min eigenvalue {lo:.3g})")
    return rho


def _projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def make_product(which: str) -> np.ndarray:
    """Projector onto one of the basis states ``ee``, ``eg``, ``ge``, ``gg``."""
    try:
        k = BASIS.index(which)
    except ValueError:
        raise DomainError(f"unknown product state {which!r}; choose from {BASIS}") from None
    rho = np.zeros((4, 4), dtype=complex)
    rho[k, k] = 1.0
    return rho


BELL_NAMES = ("psi_plus", "psi_minus", "phi_plus", "phi_minus")


def make_bell(which: str) -> np.ndarray:
    """Bell projector. Psi couples |ee>,|gg>; Phi couples |eg>,|ge>."""
    # unnormalized; the projector is outer(v, v) / 2 so entries stay exact
    vectors = {
        "psi_plus": [1, 0, 0, 1],
        "psi_minus": [1, 0, 0, -1],
        "phi_plus": [0, 1, 1, 0],
        "phi_minus": [0, 1, -1, 0],
    }
    if which not in vectors:
        raise DomainError(f"unknown Bell state {which!r}; choose from {BELL_NAMES}")
    return _projector(vectors[which]) / 2


ALPHA_FAMILIES = ("phi_alpha_plus", "psi_alpha_plus", "psi_alpha_minus")


def make_alpha_state(which: str, alpha: float) -> np.ndarray:
    """Bell-like pure state alpha|x> + sqrt(1-alpha^2)|y>, 0 <= alpha <= 1.

    ``phi_alpha_plus`` uses |eg>, |ge>; ``psi_alpha_plus`` and
    ``psi_alpha_minus`` use |ee>, +/-|gg>.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    beta = np.sqrt(1.0 - alpha**2)
    if which == "phi_alpha_plus":
        psi = [0, alpha, beta, 0]
    elif which == "psi_alpha_plus":
        psi = [alpha, 0, 0, beta]
    elif which == "psi_alpha_minus":
        psi = [alpha, 0, 0, -beta]
    else:
        raise DomainError(f"unknown alpha family {which!r}; choose from {ALPHA_FAMILIES}")
    return _projector(psi)


def make_beta_state(beta: float) -> np.ndarray:
    """beta |Psi+><Psi+| + (1 - beta) |Phi+><Phi+|."""
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must lie in [0, 1], got {beta}")
    return beta * make_bell("psi_plus") + (1.0 - beta) * make_bell("phi_plus")


def make_c_class(sign: str, c: complex) -> np.ndarray:
    """(|Phi+-><Phi+-| + |ee><ee| + |gg><gg|)/3 + c|ee><gg| + h.c.

    Positive semidefinite exactly when |c| <= 1/3; c = 0 is rejected since
    the family is defined for a nonzero |ee><gg| coherence.
    """
    if sign not in ("plus", "minus"):
        raise DomainError(f"sign must be 'plus' or 'minus', got {sign!r}")
    c = complex(c)
    if c == 0 or abs(c) > 1 / 3 + 1e-15:
        raise DomainError(f"need 0 < |c| <= 1/3, got |c| = {abs(c)}")
    bell = make_bell("phi_plus" if sign == "plus" else "phi_minus")
    rho = (bell + make_product("ee") + make_product("gg")) / 3
    rho[0, 3] += c
    rho[3, 0] += np.conj(c)
    return rho


def make_werner(epsilon: float) -> np.ndarray:
    """(1 - epsilon)/4 I + epsilon |Phi-><Phi-|, valid for -1/3 <= epsilon <= 1."""
    if not -1 / 3 - 1e-15 <= epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in [-1/3, 1], got {epsilon}")
    return (1.0 - epsilon) / 4 * np.eye(4, dtype=complex) + epsilon * make_bell("phi_minus")


def off_x_leakage(rho) -> float:
    rho = np.asarray(rho)
    return max(max(abs(rho[i, j]), abs(rho[j, i])) for i, j in _OFF_X)


def as_x_state(rho) -> XState:
    """Compact view of an X-structured density matrix.

    Raises StructureError when any entry outside the X pattern exceeds 1e-10.
    """
    rho = np.asarray(rho, dtype=complex)
    leak = off_x_leakage(rho)
    if leak > X_TOL:
        raise StructureError(f"matrix is not X-structured (off-X element {leak:.3g})")
    d = rho.diagonal().real
    return XState(d[0], d[1], d[2], d[3], rho[0, 3], rho[1, 2])


def x_eigenvalues(x: XState) -> np.ndarray:
    """Spectrum of an X state from its two 2x2 blocks, sorted descending."""
    m14, r14 = (x.p1 + x.p4) / 2, np.hypot((x.p1 - x.p4) / 2, abs(x.c14))
    m23, r23 = (x.p2 + x.p3) / 2, np.hypot((x.p2 - x.p3) / 2, abs(x.c23))
    return np.sort([m14 + r14, m14 - r14, m23 + r23, m23 - r23])[::-1]


def random_x_state(rng: np.random.Generator) -> XState:
    """Random valid X state; positive by construction.

    Populations are flat on the simplex, coherence magnitudes uniform up to
    the PSD bound and phases uniform.
    """
    p = rng.dirichlet(np.ones(4))
    m14 = rng.uniform(0, np.sqrt(p[0] * p[3]))
    m23 = rng.uniform(0, np.sqrt(p[1] * p[2]))
    ph14, ph23 = rng.uniform(0, 2 * np.pi, size=2)
    return XState(p[0], p[1], p[2], p[3], m14 * np.exp(1j * ph14), m23 * np.exp(1j * ph23))
