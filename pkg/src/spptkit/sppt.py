"""Strong-PPT factorizations: assembly, residual test, and the decision check.

A 2 x d state of the form rho = X^dag X with block upper-triangular

    X = [[x1, s @ x1], [0, x2]]

has blocks a = x1^dag x1, b = x1^dag s x1, c = x1^dag s^dag s x1 + x2^dag x2.
Its partial transpose equals Y^dag Y, Y = [[x1, s^dag @ x1], [0, x2]],
exactly when

    x1^dag s^dag s x1 = x1^dag s s^dag x1,                      (*)

and a state admitting such a factorization is called strong-PPT (SPPT).
Every SPPT state is PPT by construction; the converse fails.

For a PPT state with invertible a the factorization is essentially unique
(x1 = a^{1/2}, s the whitened b-block), so (*) reduces to the closed-form
criterion  b^dag a^-1 b = b a^-1 b^dag  and the check is exact.  With
singular a the state may still be SPPT through couplings into ker(a);
``sppt_check`` searches two canonical candidates for those couplings and
accepts only factorizations that replay (reassemble the state and satisfy
(*) within tolerance), reporting Undecided otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg, states
from .errors import DimensionMismatch, NotFullRank, NotPpt
from .states import QubitQuditState, blocks, join_blocks

SPPT_RTOL = 1e-9


@dataclass(frozen=True)
class SpptFactors:
    """The triple (x1, s, x2) of equal-size d x d matrices."""

    x1: np.ndarray
    s: np.ndarray
    x2: np.ndarray

    def __post_init__(self):
        for name in ("x1", "s", "x2"):
            m = linalg.as_matrix(getattr(self, name))
            if m.shape != self.x1.shape or m.shape[0] != m.shape[1]:
                raise DimensionMismatch("factors must be square and equal size")

    @property
    def d(self) -> int:
        return self.x1.shape[0]


@dataclass(frozen=True)
class SpptVerdict:
    """Outcome of ``sppt_check`` with the factorization actually tested.

    ``status`` is one of "Sppt", "NotSppt", "Undecided".  A "Sppt" verdict
    always carries factors whose residual and reassembly were verified, so
    it can be replayed independently.  "NotSppt" is only issued in the
    invertible-a regime, where the criterion is exact; there
    ``residual_matrix`` holds  b^dag a^-1 b - b a^-1 b^dag.
    """

    status: str
    residual: float
    factors: Optional[SpptFactors] = None
    note: str = ""
    residual_matrix: Optional[np.ndarray] = None


def assemble_state(f: SpptFactors) -> QubitQuditState:
    """rho = X^dag X for X = [[x1, s x1], [0, x2]]; PSD by construction."""
    a = f.x1.conj().T @ f.x1
    b = f.x1.conj().T @ f.s @ f.x1
    c = f.x1.conj().T @ f.s.conj().T @ f.s @ f.x1 + f.x2.conj().T @ f.x2
    rho = join_blocks(linalg.hermitianize(a), b, linalg.hermitianize(c))
    return states._state(f.d, rho)


def pt_witness_gram(f: SpptFactors) -> np.ndarray:
    """Y^dag Y for Y = [[x1, s^dag x1], [0, x2]].

    Equals the partial transpose of the assembled state exactly when the
    strong-PPT condition holds, which is what makes these states PPT.
    """
    d = f.d
    y = np.zeros((2 * d, 2 * d), dtype=complex)
    y[:d, :d] = f.x1
    y[:d, d:] = f.s.conj().T @ f.x1
    y[d:, d:] = f.x2
    return y.conj().T @ y


def sppt_residual(x1, s) -> float:
    """Frobenius norm of x1^dag (s^dag s - s s^dag) x1; zero iff SPPT holds."""
    x1 = linalg.as_matrix(x1)
    s = linalg.as_matrix(s)
    if x1.shape != s.shape or x1.shape[0] != x1.shape[1]:
        raise DimensionMismatch("x1 and s must be square and equal size")
    g = s.conj().T @ s - s @ s.conj().T
    return linalg.frob(x1.conj().T @ g @ x1)


def extract_factors_full_rank(s: QubitQuditState,
                              tol: float = SPPT_RTOL) -> SpptFactors:
    """Canonical factors of a PPT state with invertible a-block.

    x1 = a^{1/2}, s = a^{-1/2} b a^{-1/2}, x2 = (c - b^dag a^-1 b)^{1/2}.
    Raises NotFullRank when a is singular and NotPpt when either Schur
    complement fails positivity (the state or its partial transpose is not
    PSD).
    """
    a, b, c = blocks(s)
    if linalg.rank_of(a) < s.d:
        raise NotFullRank("the <0|rho|0> block is singular")
    values, vectors = np.linalg.eigh(linalg.hermitianize(a))
    a_half = (vectors * np.sqrt(values)) @ vectors.conj().T
    a_mhalf = (vectors * (1.0 / np.sqrt(values))) @ vectors.conj().T
    a_inv = (vectors * (1.0 / values)) @ vectors.conj().T
    schur = linalg.hermitianize(c - b.conj().T @ a_inv @ b)
    schur_pt = linalg.hermitianize(c - b @ a_inv @ b.conj().T)
    scale = max(s.norm(), 1e-300)
    for m in (schur, schur_pt):
        if np.linalg.eigvalsh(m).min() < -tol * scale:
            raise NotPpt("a Schur complement of the state is not PSD")
    # Clamp against the state scale: the Schur complement itself may be a
    # numerically zero matrix.
    w_s, v_s = np.linalg.eigh(schur)
    x2 = (v_s * np.sqrt(np.maximum(w_s, 0.0))) @ v_s.conj().T
    return SpptFactors(x1=a_half, s=a_mhalf @ b @ a_mhalf, x2=x2)


def _psd_factor_rows(p: np.ndarray, n_rows: int) -> np.ndarray:
    """G with n_rows rows and G^dag G = p, for PSD p of rank <= n_rows.

    Rows are sqrt(eigenvalue) * eigenvector^dag for the largest eigenvalues,
    zero-padded; negative noise eigenvalues are clamped.
    """
    r = p.shape[0]
    values, vectors = np.linalg.eigh(linalg.hermitianize(p))
    order = np.argsort(-values)
    g = np.zeros((n_rows, r), dtype=complex)
    for i in range(min(n_rows, r)):
        g[i, :] = np.sqrt(max(values[order[i]], 0.0)) * vectors[:, order[i]].conj()
    return g


def _check_singular_support(s: QubitQuditState, a, b, c, rank: int,
                            tol: float) -> SpptVerdict:
    """Decision attempt for singular a: search couplings into ker(a).

    Any factorization can be brought to x1 = a^{1/2}; the on-support block
    of s is then fixed by b, and the strong-PPT condition couples the two
    off-support Gram matrices P = s21^dag s21 and Q = s12 s12^dag through

        P - Q = s11 s11^dag - s11^dag s11 =: delta,

    while c must dominate the on-support part of x1^dag s^dag s x1.  Two
    candidates are tried: the positive part of delta (smallest coupling)
    and the Schur-complement upper bound (largest admissible coupling,
    which is exact when x2 = 0).  Each candidate must pass rank and
    positivity gates and is then verified by reassembly; failure of both
    leaves the existence question open, hence Undecided.
    """
    d = s.d
    m_dim = d - rank
    scale = max(s.norm(), 1e-300)
    if rank == 0:
        # a = 0 forces b = 0 (PSD), so rho = |1><1| (x) c: factor directly.
        if linalg.frob(b) > tol * scale:
            return SpptVerdict(status="Undecided", residual=linalg.frob(b),
                               note="a vanishes but b does not")
        x2 = linalg.sqrt_psd(linalg.hermitianize(c), tol=max(tol, 1e-8))
        zero = np.zeros((d, d), dtype=complex)
        return SpptVerdict(status="Sppt", residual=0.0,
                           factors=SpptFactors(x1=zero, s=zero, x2=x2),
                           note="a vanishes; the state is the qubit-|1> block")
    values, vectors = np.linalg.eigh(linalg.hermitianize(a))
    q = vectors[:, d - rank:]      # support of a (eigenvalues ascending)
    q_perp = vectors[:, :d - rank]

    proj = q @ q.conj().T
    b_loss = linalg.frob(b - proj @ b @ proj)
    if b_loss > tol * scale:
        return SpptVerdict(
            status="Undecided",
            residual=b_loss,
            note="b-block has content outside the support of a; the canonical "
                 "factorization cannot reproduce it",
        )

    a_s = q.conj().T @ a @ q
    w_a, v_a = np.linalg.eigh(linalg.hermitianize(a_s))
    a_half = (v_a * np.sqrt(w_a)) @ v_a.conj().T
    a_mhalf = (v_a * (1.0 / np.sqrt(w_a))) @ v_a.conj().T
    s11 = a_mhalf @ (q.conj().T @ b @ q) @ a_mhalf
    delta = linalg.hermitianize(s11 @ s11.conj().T - s11.conj().T @ s11)
    compressed_residual = linalg.frob(a_half @ delta @ a_half)

    # Slack of c against the on-support part, split along support/kernel.
    t11 = linalg.hermitianize(
        q.conj().T @ c @ q - a_half @ s11.conj().T @ s11 @ a_half
    )
    t12 = q.conj().T @ c @ q_perp
    t22 = linalg.hermitianize(q_perp.conj().T @ c @ q_perp)

    w_delta, v_delta = np.linalg.eigh(delta)
    delta_plus = (v_delta * np.maximum(w_delta, 0.0)) @ v_delta.conj().T
    t22_pinv = np.linalg.pinv(t22, rcond=1e-10)
    schur = linalg.hermitianize(t11 - t12 @ t22_pinv @ t12.conj().T)
    p_max = a_mhalf @ schur @ a_mhalf

    omega = np.hstack([q, q_perp])
    for p_cand in (delta_plus, p_max):
        p_h = linalg.hermitianize(p_cand)
        q_h = linalg.hermitianize(p_h - delta)
        w_p = np.linalg.eigvalsh(p_h)
        w_q = np.linalg.eigvalsh(q_h)
        sp = max(np.abs(w_p).max(), 1e-300)
        sq = max(np.abs(w_q).max(), 1e-300)
        if w_p.min() < -1e-8 * sp or w_q.min() < -1e-8 * sq:
            continue
        if int((w_p > 1e-8 * sp).sum()) > m_dim or int((w_q > 1e-8 * sq).sum()) > m_dim:
            continue
        s21 = _psd_factor_rows(p_h, m_dim)
        s12 = _psd_factor_rows(q_h, m_dim).conj().T
        s_tilde = np.zeros((d, d), dtype=complex)
        s_tilde[:rank, :rank] = s11
        s_tilde[:rank, rank:] = s12
        s_tilde[rank:, :rank] = s21
        s_full = omega @ s_tilde @ omega.conj().T
        x1 = q @ a_half @ q.conj().T
        inner = a_half @ (s11.conj().T @ s11 + s21.conj().T @ s21) @ a_half
        tail_sq = linalg.hermitianize(c - q @ inner @ q.conj().T)
        # Noise floor is set by the state scale; the reassembly check below
        # is the binding validation.
        if np.linalg.eigvalsh(tail_sq).min() < -1e-8 * scale:
            continue
        w_t, v_t = np.linalg.eigh(tail_sq)
        x2 = (v_t * np.sqrt(np.maximum(w_t, 0.0))) @ v_t.conj().T
        cand = SpptFactors(x1=x1, s=s_full, x2=x2)
        residual = sppt_residual(cand.x1, cand.s)
        rebuilt = assemble_state(cand)
        if residual <= tol * scale and linalg.frob(rebuilt.rho - s.rho) <= 10 * tol * scale:
            return SpptVerdict(
                status="Sppt",
                residual=residual,
                factors=cand,
                note=f"singular a (rank {rank}); factorization found by "
                     f"kernel-coupling search and verified by reassembly",
            )
    return SpptVerdict(
        status="Undecided",
        residual=compressed_residual,
        note=f"a is singular (rank {rank}) and the candidate kernel couplings "
             f"do not reproduce the state; existence of another factorization "
             f"is open (compressed-core residual {compressed_residual:.3e})",
    )


def sppt_check(s: QubitQuditState, tol: float = SPPT_RTOL) -> SpptVerdict:
    """Decide the strong-PPT property of a PPT state.

    Non-PPT input yields Undecided with note "NPT" (the property is defined
    within PPT states).  With invertible a the closed-form criterion decides
    exactly; with singular a a verified factorization gives Sppt, otherwise
    the verdict is Undecided, never NotSppt.
    """
    scale = max(s.norm(), 1e-300)
    pt = states.partial_transpose_matrix(s.rho, s.d)
    min_pt = float(np.linalg.eigvalsh(linalg.hermitianize(pt)).min())
    if min_pt < -tol * scale:
        return SpptVerdict(status="Undecided", residual=0.0,
                           note=f"NPT (partial transpose eigenvalue {min_pt:.3e})")

    a, b, c = blocks(s)
    rank = linalg.rank_of(a)
    if rank == s.d:
        values, vectors = np.linalg.eigh(linalg.hermitianize(a))
        a_inv = (vectors * (1.0 / values)) @ vectors.conj().T
        residual_matrix = b.conj().T @ a_inv @ b - b @ a_inv @ b.conj().T
        residual = linalg.frob(residual_matrix)
        if residual <= tol * scale:
            factors = extract_factors_full_rank(s, tol)
            return SpptVerdict(
                status="Sppt", residual=residual, factors=factors,
                note="invertible a; closed-form criterion",
                residual_matrix=residual_matrix,
            )
        return SpptVerdict(
            status="NotSppt", residual=residual,
            note="invertible a; closed-form criterion",
            residual_matrix=residual_matrix,
        )
    return _check_singular_support(s, a, b, c, rank, tol)
