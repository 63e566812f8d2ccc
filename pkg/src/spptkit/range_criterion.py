"""Product vectors in the range of a 2 x d state, and the range criterion.

A separable state must contain product vectors |e, f> in its range such
that the partially conjugated |e*, f> lies in the range of the partial
transpose.  Membership in a range is equivalent to orthogonality against
the kernel, so for a fixed qubit direction e both conditions are linear
in the qudit vector f: stacking the contracted kernel vectors of rho (with
e) and of rho^{T_A} (with e*) gives a constraint matrix M(e) whose smallest
"d-th" singular value

    mu(e) = min_{|f|=1} ||M(e) f||

vanishes exactly when a qualifying product vector exists at e.  The qubit
direction lives on the projective line, parametrized as e ~ (1, t) with
the point at infinity e = (0, 1), so a dense scan over t plus local
refinement either locates product vectors or - when every refined local
minimum stays above an exclusion threshold - produces numerical evidence
that none exist.  For a PPT state that evidence certifies entanglement;
the certificate is an explicit search record, not a mathematical proof.

Index convention: a kernel vector w of the 2d x 2d state is reshaped to a
2 x d array W with the qubit index first, so <w, e (x) f> = sum_{a,j}
conj(W[a, j]) e_a f_j and the constraint row for f is e contracted against
conj(W).  This convention is pinned by the pure-product recovery test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg, states
from .errors import NotPsd
from .states import QubitQuditState

DEFAULT_GRID = (720, 360)          # azimuthal x polar samples, plus t=0 and pole
EXCLUSION_THRESHOLD = 1e-6
KERNEL_CUTOFF = 1e-10
REFINE_TOL = 1e-12
REFINE_MAX_LEVELS = 60
_REFINE_EVAL_CAP = 20000
_CANDIDATE_TOL = 1e-8


@dataclass(frozen=True)
class ProductVector:
    """A candidate product vector with its two range residuals.

    ``residual_range`` is the norm of the projection of e (x) f onto the
    kernel of rho (distance to range membership); ``residual_pt_range`` is
    the same for e* (x) f against the partial transpose.  Both recompute
    from (e, f) alone, so certificates can be replayed.
    """

    e: np.ndarray
    f: np.ndarray
    residual_range: float
    residual_pt_range: float

    @property
    def combined_residual(self) -> float:
        return float(np.hypot(self.residual_range, self.residual_pt_range))


@dataclass(frozen=True)
class RangeSearchCertificate:
    """Record of a grid-plus-refinement search over the qubit direction."""

    grid_spec: dict
    worst_min_residual: float
    refined_minima: list
    conclusion: str                      # "FoundProductVector" or "NoneFound"
    found: list = field(default_factory=list)
    exclusion_threshold: float = EXCLUSION_THRESHOLD
    note: str = "range-criterion search certificate"


def kernel_basis(m, cutoff: float = KERNEL_CUTOFF) -> np.ndarray:
    """Orthonormal kernel basis (rows) of a PSD matrix.

    Spans the eigenvectors with eigenvalue at most ``cutoff`` times the
    largest eigenvalue.
    """
    m = linalg.as_matrix(m)
    values, vectors = np.linalg.eigh(linalg.hermitianize(m))
    scale = max(np.abs(values).max(), 1e-300)
    if values.min() < -max(cutoff, 1e-9) * scale:
        raise NotPsd(f"kernel_basis expects a PSD matrix, min eigenvalue {values.min():g}")
    return vectors[:, values <= cutoff * scale].T


@dataclass(frozen=True)
class _Constraints:
    """Precontracted kernel data of a state and its partial transpose."""

    d: int
    w_state: np.ndarray     # (k1, 2, d): conj of kernel vectors of rho
    w_pt: np.ndarray        # (k2, 2, d): conj of kernel vectors of rho^{T_A}

    @property
    def n_rows(self) -> int:
        return self.w_state.shape[0] + self.w_pt.shape[0]


def _constraints_of(s: QubitQuditState, cutoff: float) -> _Constraints:
    d = s.d
    ker = kernel_basis(s.rho, cutoff)
    ker_pt = kernel_basis(states.partial_transpose_matrix(s.rho, d), cutoff)
    return _Constraints(
        d=d,
        w_state=np.conj(ker.reshape(-1, 2, d)),
        w_pt=np.conj(ker_pt.reshape(-1, 2, d)),
    )


def _constraint_matrix(con: _Constraints, e: np.ndarray) -> np.ndarray:
    rows = []
    if con.w_state.shape[0]:
        rows.append(np.einsum("a,mad->md", e, con.w_state))
    if con.w_pt.shape[0]:
        rows.append(np.einsum("a,mad->md", np.conj(e), con.w_pt))
    if not rows:
        return np.zeros((0, con.d), dtype=complex)
    return np.concatenate(rows, axis=0)


def _mu_and_vector(con: _Constraints, e: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest constrained residual at e and the minimizing unit f."""
    m = _constraint_matrix(con, e)
    if m.shape[0] == 0:
        f = np.zeros(con.d, dtype=complex)
        f[0] = 1.0
        return 0.0, f
    u, sigma, vh = np.linalg.svd(m, full_matrices=True)
    if m.shape[0] < con.d:
        return 0.0, np.conj(vh[-1])
    return float(sigma[con.d - 1]), np.conj(vh[con.d - 1])


def _mu_batch(con: _Constraints, e_batch: np.ndarray) -> np.ndarray:
    """Vectorized mu over a batch of unit qubit vectors, shape (n, 2)."""
    d = con.d
    parts = []
    if con.w_state.shape[0]:
        parts.append(np.einsum("na,mad->nmd", e_batch, con.w_state))
    if con.w_pt.shape[0]:
        parts.append(np.einsum("na,mad->nmd", np.conj(e_batch), con.w_pt))
    if not parts:
        return np.zeros(len(e_batch))
    m = np.concatenate(parts, axis=1)
    if m.shape[1] < d:
        return np.zeros(len(e_batch))
    sv = np.linalg.svd(m, compute_uv=False)
    return sv[:, d - 1]


def _qubit_vector(param: complex, chart: str) -> np.ndarray:
    """Unit qubit vector for a chart point: 't' is (1, t), 'inv_t' is (s, 1)."""
    if chart == "t":
        v = np.array([1.0, param], dtype=complex)
    else:
        v = np.array([param, 1.0], dtype=complex)
    return v / np.linalg.norm(v)


def _grid_params(n_phi: int, n_theta: int) -> tuple[np.ndarray, np.ndarray]:
    """Stereographic grid over the qubit projective line.

    Polar samples avoid the exact poles (handled separately); returns the
    complex parameters t and the matching unit vectors.
    """
    theta = (np.arange(n_theta) + 0.5) * np.pi / n_theta
    phi = np.arange(n_phi) * 2.0 * np.pi / n_phi
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    t = (np.tan(tt / 2.0) * np.exp(1j * pp)).ravel()
    e = np.stack([np.ones_like(t), t], axis=1)
    e /= np.linalg.norm(e, axis=1, keepdims=True)
    return t, e


def _minimum_record(param: complex, chart: str, residual: float) -> dict:
    """Serializable record of a refined minimum; t is None at the pole."""
    if chart == "t":
        t = complex(param)
    elif param != 0:
        t = 1.0 / complex(param)
    else:
        t = None
    return {
        "chart": chart, "re": float(np.real(param)), "im": float(np.imag(param)),
        "t_re": None if t is None else float(t.real),
        "t_im": None if t is None else float(t.imag),
        "residual": residual,
    }


def _refine(con: _Constraints, param: complex, chart: str, step: float,
            tol: float = REFINE_TOL, max_levels: int = REFINE_MAX_LEVELS):
    """Derivative-free coordinate-shrink refinement of mu.

    Moves in the four axis directions while improving, halving the step
    when stuck; monotone by construction, so the refined residual never
    exceeds the seed value.  Switches chart when the parameter leaves the
    unit disk to keep steps well scaled near the pole.
    """
    best = _mu_batch(con, _qubit_vector(param, chart)[None, :])[0]
    evals = 1
    for _ in range(max_levels):
        if best <= tol or step <= 1e-14 or evals >= _REFINE_EVAL_CAP:
            break
        moved = True
        while moved and evals < _REFINE_EVAL_CAP:
            moved = False
            for dp in (step, -step, 1j * step, -1j * step):
                cand = param + dp
                val = _mu_batch(con, _qubit_vector(cand, chart)[None, :])[0]
                evals += 1
                if val < best:
                    best, param, moved = val, cand, True
            if abs(param) > 1.5:
                param = 1.0 / param
                chart = "inv_t" if chart == "t" else "t"
        step /= 2.0
    return param, chart, float(best)


def _local_minima_indices(mu_grid: np.ndarray) -> np.ndarray:
    """Grid points not exceeded by their 4-neighborhood (phi wraps)."""
    below = np.ones_like(mu_grid, dtype=bool)
    below &= mu_grid <= np.roll(mu_grid, 1, axis=1)
    below &= mu_grid <= np.roll(mu_grid, -1, axis=1)
    below[1:, :] &= mu_grid[1:, :] <= mu_grid[:-1, :]
    below[:-1, :] &= mu_grid[:-1, :] <= mu_grid[1:, :]
    return np.flatnonzero(below.ravel())


def _product_vector_at(s: QubitQuditState, con: _Constraints, e: np.ndarray,
                       f: np.ndarray) -> ProductVector:
    """Build a ProductVector with residuals recomputed from the definitions."""
    ef = np.kron(e, f)
    ef_conj = np.kron(np.conj(e), f)
    r1 = con.w_state.reshape(-1, 2 * s.d) @ ef if con.w_state.shape[0] else np.zeros(0)
    r2 = con.w_pt.reshape(-1, 2 * s.d) @ ef_conj if con.w_pt.shape[0] else np.zeros(0)
    return ProductVector(
        e=e.copy(), f=f.copy(),
        residual_range=float(np.linalg.norm(r1)),
        residual_pt_range=float(np.linalg.norm(r2)),
    )


_CANONICAL = (
    (0.0, "t"), (0.0, "inv_t"), (1.0, "t"), (-1.0, "t"), (1j, "t"), (-1j, "t"),
)


def product_vectors_in_range(s: QubitQuditState, grid: tuple[int, int] | None = None,
                             kernel_cutoff: float = KERNEL_CUTOFF,
                             max_candidates: int = 16,
                             candidate_tol: float = _CANDIDATE_TOL) -> list[ProductVector]:
    """Scan for product vectors |e, f> in range(rho) with |e*, f> in the
    partial-transpose range.

    For each qubit direction on the grid the qudit vector is solved exactly
    by a nullspace computation on the contracted kernel constraints; grid
    points seeding small residuals are refined locally.  Returns up to
    ``max_candidates`` vectors with combined residual at most
    ``candidate_tol``, best first.  A state with fewer independent kernel
    constraints than d (in particular any full-rank state) admits product
    vectors at every qubit direction; a capped selection at canonical
    directions is returned in that case.
    """
    con = _constraints_of(s, kernel_cutoff)
    found: list[ProductVector] = []
    if con.n_rows < s.d:
        for param, chart in _CANONICAL:
            e = _qubit_vector(param, chart)
            _, f = _mu_and_vector(con, e)
            found.append(_product_vector_at(s, con, e, f))
            if len(found) >= max_candidates:
                break
        return found

    n_phi, n_theta = grid or DEFAULT_GRID
    t, e_grid = _grid_params(n_phi, n_theta)
    mu = _mu_chunked(con, e_grid).reshape(n_theta, n_phi)
    seeds = _seed_points(mu, t.reshape(n_theta, n_phi), n_theta, limit=4 * max_candidates)
    seeds += [(0.0, "t", None), (0.0, "inv_t", None)]
    results = []
    for param, chart, step in seeds:
        param, chart, val = _refine(con, param, chart, step or 0.05)
        if val <= candidate_tol:
            e = _qubit_vector(param, chart)
            _, f = _mu_and_vector(con, e)
            results.append(_product_vector_at(s, con, e, f))
    results.sort(key=lambda pv: pv.combined_residual)
    deduped: list[ProductVector] = []
    for pv in results:
        if all(abs(abs(np.vdot(pv.e, q.e)) - 1.0) > 1e-6 or
               abs(abs(np.vdot(pv.f, q.f)) - 1.0) > 1e-6 for q in deduped):
            deduped.append(pv)
        if len(deduped) >= max_candidates:
            break
    return deduped


def _mu_chunked(con: _Constraints, e_grid: np.ndarray,
                chunk: int = 32768) -> np.ndarray:
    out = np.empty(len(e_grid))
    for i in range(0, len(e_grid), chunk):
        out[i:i + chunk] = _mu_batch(con, e_grid[i:i + chunk])
    return out


def _seed_points(mu: np.ndarray, t: np.ndarray, n_theta: int, limit: int):
    """Local minima of the grid landscape, best first, as refinement seeds."""
    idx = _local_minima_indices(mu)
    order = idx[np.argsort(mu.ravel()[idx])][:limit]
    theta_step = np.pi / n_theta
    seeds = []
    for flat in order:
        tv = t.ravel()[flat]
        chart = "t" if abs(tv) <= 1.0 else "inv_t"
        param = tv if chart == "t" else 1.0 / tv
        # local spacing of the stereographic grid at this latitude
        step = max(theta_step * (1.0 + abs(param) ** 2) / 2.0, 1e-4)
        seeds.append((param, chart, step))
    return seeds


def edge_check(s: QubitQuditState, grid: tuple[int, int] | None = None,
               exclusion_threshold: float = EXCLUSION_THRESHOLD,
               kernel_cutoff: float = KERNEL_CUTOFF,
               refine_limit: int = 32) -> RangeSearchCertificate:
    """Search for a product vector satisfying both range conditions.

    Concludes ``FoundProductVector`` as soon as a refined candidate drops
    to the exclusion threshold.  Concluding ``NoneFound`` requires the full
    grid: every local minimum of the landscape is refined and must stay
    above the threshold.  The result is a numerical search certificate;
    for PPT states a NoneFound conclusion is evidence of entanglement via
    the range criterion.
    """
    n_phi, n_theta = grid or DEFAULT_GRID
    con = _constraints_of(s, kernel_cutoff)
    grid_spec = {"n_phi": n_phi, "n_theta": n_theta,
                 "extra_points": ["t=0", "pole"], "kernel_cutoff": kernel_cutoff,
                 "kernel_dims": [int(con.w_state.shape[0]), int(con.w_pt.shape[0])]}

    if con.n_rows < s.d:
        e = _qubit_vector(0.0, "t")
        _, f = _mu_and_vector(con, e)
        pv = _product_vector_at(s, con, e, f)
        return RangeSearchCertificate(
            grid_spec=grid_spec, worst_min_residual=pv.combined_residual,
            refined_minima=[_minimum_record(0.0, "t", pv.combined_residual)],
            conclusion="FoundProductVector", found=[pv],
            exclusion_threshold=exclusion_threshold,
        )

    # Cheap pre-pass: a coarse scan usually locates product vectors of
    # separable states without paying for the full grid.
    coarse = (max(n_phi // 10, 36), max(n_theta // 10, 18))
    for pass_grid, is_final in ((coarse, False), ((n_phi, n_theta), True)):
        t, e_grid = _grid_params(*pass_grid)
        mu = _mu_chunked(con, e_grid).reshape(pass_grid[1], pass_grid[0])
        seeds = _seed_points(mu, t.reshape(pass_grid[1], pass_grid[0]),
                             pass_grid[1], limit=refine_limit)
        seeds += [(0.0, "t", 0.05), (0.0, "inv_t", 0.05)]
        minima = []
        found = []
        for param, chart, step in seeds:
            p, ch, val = _refine(con, param, chart, step or 0.05)
            minima.append(_minimum_record(p, ch, val))
            if val <= exclusion_threshold:
                e = _qubit_vector(p, ch)
                _, f = _mu_and_vector(con, e)
                found.append(_product_vector_at(s, con, e, f))
        if found:
            found.sort(key=lambda pv: pv.combined_residual)
            return RangeSearchCertificate(
                grid_spec=grid_spec,
                worst_min_residual=min(m["residual"] for m in minima),
                refined_minima=minima, conclusion="FoundProductVector",
                found=found, exclusion_threshold=exclusion_threshold,
            )
        if is_final:
            return RangeSearchCertificate(
                grid_spec=grid_spec,
                worst_min_residual=min(m["residual"] for m in minima),
                refined_minima=minima, conclusion="NoneFound",
                exclusion_threshold=exclusion_threshold,
            )
    raise AssertionError("unreachable")
