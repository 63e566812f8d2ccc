"""Qubit-qudit (2 x d) density operators and state generators.

Basis convention: the first tensor factor is the qubit, with |0> = (1, 0)^t
and |1> = (0, 1)^t.  Row index ``a * d + j`` of the 2d x 2d matrix refers to
|a> tensor |j>, so a state splits into d x d blocks

    rho = [[a, b], [b^dag, c]],  a = <0|rho|0>, b = <0|rho|1>, c = <1|rho|1>,

and the partial transpose on the qubit maps (a, b, c) -> (a, b^dag, c).

States may be stored unnormalized; classification routines normalize by the
trace internally.  All values are immutable (the stored matrix is marked
read-only), so states can be shared and certificates replayed safely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg
from .errors import (
    BadDimensions,
    BadParameter,
    NotNormalized,
    NotPsd,
    SingularTransform,
)


@dataclass(frozen=True)
class QubitQuditState:
    """A 2 x d density operator, possibly unnormalized."""

    d: int
    rho: np.ndarray
    normalized: bool = False

    def trace(self) -> float:
        return float(self.rho.trace().real)

    def norm(self) -> float:
        return linalg.frob(self.rho)


class BlockView(NamedTuple):
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray


def _freeze(m: np.ndarray) -> np.ndarray:
    out = np.array(m, dtype=complex)
    out.flags.writeable = False
    return out


def _state(d: int, rho: np.ndarray, normalized: bool = False) -> QubitQuditState:
    """Internal constructor that skips validation (used for derived matrices)."""
    return QubitQuditState(d=d, rho=_freeze(rho), normalized=normalized)


def make_state(d: int, entries, normalized: bool = False,
               tol: float = linalg.PSD_RTOL) -> QubitQuditState:
    """Validate and wrap a 2d x 2d matrix as a qubit-qudit state.

    Checks dimensions, finiteness, hermiticity, positivity, and (when
    ``normalized``) unit trace.
    """
    if d < 1:
        raise BadDimensions(f"qudit dimension must be >= 1, got {d}")
    rho = linalg.as_matrix(entries)
    if rho.shape != (2 * d, 2 * d):
        raise BadDimensions(f"expected shape {(2 * d, 2 * d)}, got {rho.shape}")
    report = linalg.psd_check(rho, tol)
    if not report.is_psd:
        raise NotPsd(f"state has negative eigenvalue {report.min_eig:g}")
    if normalized and abs(rho.trace().real - 1.0) > max(tol * linalg.frob(rho), tol):
        raise NotNormalized(f"trace {rho.trace().real!r} is not 1")
    return _state(d, rho, normalized)


def blocks(s: QubitQuditState) -> BlockView:
    """The (a, b, c) block view; a + c is the reduced qudit operator."""
    d = s.d
    return BlockView(
        a=s.rho[:d, :d].copy(),
        b=s.rho[:d, d:].copy(),
        c=s.rho[d:, d:].copy(),
    )


def join_blocks(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Assemble [[a, b], [b^dag, c]]."""
    return np.block([[a, b], [b.conj().T, c]])


def partial_transpose_matrix(rho: np.ndarray, d: int) -> np.ndarray:
    """Partial transpose on the qubit factor of a raw 2d x 2d matrix."""
    out = np.array(rho, dtype=complex)
    out[:d, d:] = rho[:d, d:].conj().T
    out[d:, :d] = rho[d:, :d].conj().T
    return out


def partial_transpose(s: QubitQuditState) -> QubitQuditState:
    """Partial transpose on the qubit: blocks (a, b, c) -> (a, b^dag, c).

    The result is hermitian with the same trace but is NOT validated for
    positivity; a negative eigenvalue certifies entanglement of the input.
    """
    return _state(s.d, partial_transpose_matrix(s.rho, s.d), s.normalized)


def local_qudit_transform(s: QubitQuditState, v,
                          cutoff: float = linalg.RANK_CUTOFF) -> QubitQuditState:
    """Congruence (1 (x) v)^dag rho (1 (x) v) with invertible v on the qudit.

    Preserves positivity and the strong-PPT property; the result is returned
    unnormalized.
    """
    v = linalg.as_matrix(v)
    if v.shape != (s.d, s.d):
        raise BadDimensions(f"transform must be {s.d} x {s.d}, got {v.shape}")
    sigma = np.linalg.svd(v, compute_uv=False)
    if sigma[-1] <= cutoff * sigma[0]:
        raise SingularTransform("qudit transform is singular within tolerance")
    a, b, c = blocks(s)
    vh = v.conj().T
    return _state(s.d, join_blocks(vh @ a @ v, vh @ b @ v, vh @ c @ v))


def maximally_mixed(d: int) -> QubitQuditState:
    """The normalized maximally mixed 2 x d state."""
    return _state(d, np.eye(2 * d, dtype=complex) / (2 * d), normalized=True)


# ---------------------------------------------------------------------------
# Reference states
# ---------------------------------------------------------------------------

def sppt_counterexample_2x3() -> QubitQuditState:
    """A 2 x 3 PPT (hence separable) state that is not strong-PPT.

    All four of a, c, and the two Schur complements c - b^dag a^-1 b and
    c - b a^-1 b^dag are positive definite, so the state and its partial
    transpose are positive definite, yet b^dag a^-1 b != b a^-1 b^dag.
    Entries are exact small integers; the trace is 21.

    CLI alias: ``rho1``.
    """
    a = np.array([[3, 0, 0], [0, 4, 2], [0, 2, 3]], dtype=complex)
    b = np.array([[0, 0, 0], [0, 0, 1], [1, -1, 0]], dtype=complex)
    c = np.array([[2, 1, -1], [1, 6, 1], [-1, 1, 3]], dtype=complex)
    return _state(3, join_blocks(a, b, c))


def sppt_counterexample_2x4() -> QubitQuditState:
    """The 2 x 3 counterexample embedded in 2 x 4 with one extra product level.

    The fourth qudit level carries weight 1 in the qubit-|0> block and 0 in
    the qubit-|1> block, so the state stays separable and PPT while still
    failing the strong-PPT condition.  Trace is 22.

    CLI alias: ``rho2``.
    """
    base = sppt_counterexample_2x3()
    a3, b3, c3 = blocks(base)
    a = np.zeros((4, 4), dtype=complex)
    b = np.zeros((4, 4), dtype=complex)
    c = np.zeros((4, 4), dtype=complex)
    a[:3, :3] = a3
    a[3, 3] = 1.0
    b[:3, :3] = b3
    c[:3, :3] = c3
    return _state(4, join_blocks(a, b, c))


class FamilyInstance(NamedTuple):
    state: QubitQuditState
    factors: "object"  # SpptFactors; typed loosely to avoid a module cycle
    meta: dict


def entangled_sppt_2x5(b: float) -> FamilyInstance:
    """The one-parameter family of entangled 2 x 5 strong-PPT states.

    For 0 < b < 1, build the factors

        x1 = diag(1, 1, 1, 1, 0),   x2 = 0,
        s  = shift-type matrix with couplings
             beta1 = sqrt((1-b)/(2b)) and beta2 = sqrt((1+b)/(2b)),

    and assemble rho = X^dag X.  The strong-PPT condition holds exactly
    because beta2^2 = 1 + beta1^2.  The qubit-|1> block has diagonal
    couplings gamma1 = (1+b)/(2b) and off-diagonal gamma2 = beta1 * beta2
    = sqrt(1-b^2)/(2b); hermiticity forces the real root here, which the
    metadata records.  The state is supported on the first four qudit
    levels and its core is a bound entangled 2 x 4 state of Horodecki type,
    so the full state is entangled despite being strong-PPT.

    CLI alias: ``rho0``.
    """
    from .sppt import SpptFactors, assemble_state

    if not 0.0 < b < 1.0:
        raise BadParameter(f"parameter b must lie strictly in (0, 1), got {b}")
    beta1 = np.sqrt((1.0 - b) / (2.0 * b))
    beta2 = np.sqrt((1.0 + b) / (2.0 * b))
    x1 = np.diag([1.0, 1.0, 1.0, 1.0, 0.0]).astype(complex)
    s = np.zeros((5, 5), dtype=complex)
    s[0, 1] = 1.0
    s[0, 4] = beta1
    s[1, 2] = 1.0
    s[2, 3] = 1.0
    s[3, 4] = beta2
    s[4, 0] = beta2
    s[4, 3] = beta1
    x2 = np.zeros((5, 5), dtype=complex)
    factors = SpptFactors(x1=x1, s=s, x2=x2)
    state = assemble_state(factors)
    meta = {
        "b": b,
        "beta1": float(beta1),
        "beta2": float(beta2),
        "gamma1": (1.0 + b) / (2.0 * b),
        "gamma2": float(beta1 * beta2),
        "gamma2_note": (
            "gamma2 = sqrt(1-b^2)/(2b) = beta1*beta2; the assembled state is "
            "hermitian only with this real root (an imaginary value here "
            "would not arise from X^dag X)"
        ),
    }
    return FamilyInstance(state=state, factors=factors, meta=meta)


def horodecki_2x4(b: float) -> QubitQuditState:
    """The bound entangled 2 x 4 core of the 2 x 5 family, in closed form.

    Blocks: a = identity, b-block = the upper shift (ones on the first
    superdiagonal), and c carrying gamma1 = (1+b)/(2b) on levels 0 and 3
    with off-diagonal coupling gamma2 = sqrt(1-b^2)/(2b).  PPT for all
    0 < b < 1, with both Schur complements rank-1 and singular, yet no
    product vector |e, f> lies in the range of rho with |e*, f> in the
    range of the partial transpose, so the state is entangled.

    CLI alias: ``horodecki``.
    """
    if not 0.0 < b < 1.0:
        raise BadParameter(f"parameter b must lie strictly in (0, 1), got {b}")
    gamma1 = (1.0 + b) / (2.0 * b)
    gamma2 = np.sqrt(1.0 - b * b) / (2.0 * b)
    a = np.eye(4, dtype=complex)
    bb = np.zeros((4, 4), dtype=complex)
    bb[0, 1] = bb[1, 2] = bb[2, 3] = 1.0
    c = np.array(
        [
            [gamma1, 0.0, 0.0, gamma2],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [gamma2, 0.0, 0.0, gamma1],
        ],
        dtype=complex,
    )
    return _state(4, join_blocks(a, bb, c))


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

def _random_unit(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def _shift_with_defect(delta: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """A k x k matrix whose commutator defect m m^dag - m^dag m equals delta.

    Diagonalize the traceless hermitian target, then use a weighted shift:
    with descending eigenvalues the prefix sums are nonnegative, and a
    superdiagonal of weights sqrt(prefix sums) telescopes to the desired
    diagonal defect.  Random phases and a random scalar shift keep the
    sample from being special.
    """
    k = delta.shape[0]
    values, w = np.linalg.eigh(delta)
    values = values[::-1]
    w = w[:, ::-1]
    prefix = np.maximum(np.cumsum(values)[:-1], 0.0)
    core = np.zeros((k, k), dtype=complex)
    for j in range(k - 1):
        core[j, j + 1] = np.sqrt(prefix[j]) * np.exp(2j * np.pi * rng.uniform())
    core += (rng.normal() + 1j * rng.normal()) * np.eye(k)
    return w @ core @ w.conj().T


def random_sppt(d: int, rank: int, normal_s: bool = True, seed: int = 0,
                with_tail: bool = False):
    """Draw a random strong-PPT instance, returning ``(state, factors)``.

    ``x1`` has the prescribed rank.  With ``normal_s`` the middle factor is
    a random unitary conjugation of a random complex diagonal, which makes
    the strong-PPT condition hold for any x1.  Otherwise (requires
    rank < d) the condition is enforced on the support of x1 by
    construction: the off-support couplings are drawn freely and the
    on-support block is built to carry exactly the commutator defect they
    require.  ``with_tail`` adds a random full-rank x2, making the
    assembled state full rank.  Deterministic per seed.
    """
    if not 1 <= rank <= d:
        raise BadParameter(f"need 1 <= rank <= d, got rank={rank}, d={d}")
    rng = np.random.default_rng(seed)
    u = linalg.haar_unitary(d, rng)
    v = linalg.haar_unitary(d, rng)
    sigma = np.sort(rng.uniform(0.5, 1.5, size=rank))[::-1]
    x1 = u @ np.diag(np.concatenate([sigma, np.zeros(d - rank)])) @ v.conj().T

    if normal_s or rank == d:
        # For full-rank x1 the strong-PPT condition forces a normal s.
        w = linalg.haar_unitary(d, rng)
        eigs = rng.normal(size=d) + 1j * rng.normal(size=d)
        s = (w * eigs) @ w.conj().T
    else:
        m = d - rank
        s21 = rng.normal(size=(m, rank)) + 1j * rng.normal(size=(m, rank))
        s12 = rng.normal(size=(rank, m)) + 1j * rng.normal(size=(rank, m))
        # The commutator defect of the on-support block is traceless, so the
        # two couplings must carry equal weight.
        s12 *= np.sqrt(
            np.trace(s21.conj().T @ s21).real / np.trace(s12 @ s12.conj().T).real
        )
        delta = s21.conj().T @ s21 - s12 @ s12.conj().T
        s11 = _shift_with_defect(delta, rng)
        s_tilde = np.zeros((d, d), dtype=complex)
        s_tilde[:rank, :rank] = s11
        s_tilde[:rank, rank:] = s12
        s_tilde[rank:, :rank] = s21
        s_tilde[rank:, rank:] = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        s = u @ s_tilde @ u.conj().T

    if with_tail:
        x2 = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(d)
    else:
        x2 = np.zeros((d, d), dtype=complex)

    from .sppt import SpptFactors, assemble_state

    factors = SpptFactors(x1=x1, s=s, x2=x2)
    return assemble_state(factors), factors


def random_separable(d: int, n_terms: int | None = None, seed: int = 0):
    """A random convex mixture of product states, with its terms.

    Returns ``(state, terms)`` where ``terms`` is a list of
    ``(weight, e, f)`` with unit vectors e (qubit) and f (qudit).  The
    mixture is normalized.  When ``n_terms`` is None a count in [1, 2d] is
    drawn.
    """
    rng = np.random.default_rng(seed)
    if n_terms is None:
        n_terms = int(rng.integers(1, 2 * d + 1))
    if n_terms < 1:
        raise BadParameter("need at least one product term")
    weights = rng.uniform(0.2, 1.0, size=n_terms)
    weights /= weights.sum()
    rho = np.zeros((2 * d, 2 * d), dtype=complex)
    terms = []
    for w in weights:
        e = _random_unit(2, rng)
        f = _random_unit(d, rng)
        rho += w * np.kron(np.outer(e, e.conj()), np.outer(f, f.conj()))
        terms.append((float(w), e, f))
    return _state(d, rho, normalized=True), terms
