"""Rate-one quasi-orthogonal space-time block code for four transmit antennas.

Four symbols (x1, x2, x3, x4) are sent over four time slots as

    [  x1    x2    x3    x4  ]
    [ -x2*   x1*  -x4*   x3* ]
    [ -x3*  -x4*   x1*   x2* ]
    [  x4   -x3   -x2    x1  ]

(rows = time slots, columns = transmit antennas).  The Gram matrix C^H C is
(sum |x_k|^2) * I4 plus real interference confined to the symbol pairs
(1,4) and (2,3).  That structure splits the joint maximum-likelihood metric

    sum_m sum_t | r[t,m] - sum_n alpha[n,m] * C[t,n] |^2

into two independent pair metrics f14(x1, x4) and f23(x2, x3) whose sum
differs from the joint metric only by the candidate-independent constant
sum |r|^2.  Detection therefore costs 2 * |constellation|^2 metric
evaluations instead of |constellation|^4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .modem import Constellation

#: ml_detect_joint enumerates |constellation|^4 candidates; past this order
#: the search is considered unreasonable and rejected.
JOINT_ORDER_LIMIT = 8


@dataclass(frozen=True)
class DetectedBlock:
    """Result of detecting one space-time block.

    ``candidate_metrics[j, i]`` (when requested) is the minimum pair metric
    achieved with symbol slot j pinned to constellation point i, minimised
    over the partner symbol -- the max-log soft output consumed by
    :func:`qostbc.modem.demap_soft`.
    """

    indices: np.ndarray
    symbols: np.ndarray
    metric14: float
    metric23: float
    candidate_metrics: np.ndarray | None = None


def encode_block(block) -> np.ndarray:
    """Build the 4x4 codeword matrix for one block of four symbols."""
    x = np.asarray(block, dtype=np.complex128).ravel()
    if x.size != 4:
        raise ValueError("a block holds exactly four symbols")
    x1, x2, x3, x4 = x
    c = np.conj
    return np.array(
        [
            [x1, x2, x3, x4],
            [-c(x2), c(x1), -c(x4), c(x3)],
            [-c(x3), -c(x4), c(x1), c(x2)],
            [x4, -x3, -x2, x1],
        ]
    )


def encode_blocks(blocks: np.ndarray) -> np.ndarray:
    """Vectorised :func:`encode_block` for an (n_blocks, 4) symbol array."""
    x = np.asarray(blocks, dtype=np.complex128)
    if x.ndim != 2 or x.shape[1] != 4:
        raise ValueError("blocks must have shape (n_blocks, 4)")
    x1, x2, x3, x4 = x[:, 0], x[:, 1], x[:, 2], x[:, 3]
    c = np.conj
    rows = [
        np.stack([x1, x2, x3, x4], axis=1),
        np.stack([-c(x2), c(x1), -c(x4), c(x3)], axis=1),
        np.stack([-c(x3), -c(x4), c(x1), c(x2)], axis=1),
        np.stack([x4, -x3, -x2, x1], axis=1),
    ]
    return np.stack(rows, axis=1)


def _as_rx_matrix(arr, name: str) -> np.ndarray:
    a = np.asarray(arr, dtype=np.complex128)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[0] != 4:
        raise ValueError(f"{name} must have shape (4,) or (4, n_rx)")
    return a


def full_metric(r, gains, block) -> float:
    """Joint ML metric of one candidate block against the received samples."""
    rm = _as_rx_matrix(r, "r")
    am = _as_rx_matrix(gains, "gains")
    if rm.shape[1] != am.shape[1]:
        raise ValueError("r and gains disagree on the receive antenna count")
    cw = encode_block(block)
    return float(np.sum(np.abs(rm - cw @ am) ** 2))


def _pair_terms(rm: np.ndarray, am: np.ndarray):
    """Combining coefficients of the two pair metrics, summed over rx antennas.

    Returns (A, b1, b2, b3, b4, d14, d23) where the pair metrics are

        f14(xa, xb) = A*(|xa|^2 + |xb|^2) + 2*Re[b1*xa + b4*xb + d14*xa*conj(xb)]
        f23(xa, xb) = A*(|xa|^2 + |xb|^2) + 2*Re[b2*xa + b3*xb + d23*xa*conj(xb)]
    """
    a1, a2, a3, a4 = am[0], am[1], am[2], am[3]
    r1, r2, r3, r4 = rm[0], rm[1], rm[2], rm[3]
    cj = np.conj
    A = float(np.sum(np.abs(am) ** 2))
    b1 = np.sum(-a1 * cj(r1) - cj(a2) * r2 - cj(a3) * r3 - a4 * cj(r4))
    b4 = np.sum(-a4 * cj(r1) + cj(a3) * r2 + cj(a2) * r3 - a1 * cj(r4))
    b2 = np.sum(-a2 * cj(r1) + cj(a1) * r2 - cj(a4) * r3 + a3 * cj(r4))
    b3 = np.sum(-a3 * cj(r1) - cj(a4) * r2 + cj(a1) * r3 + a2 * cj(r4))
    d14 = np.sum(a1 * cj(a4) - cj(a2) * a3 - a2 * cj(a3) + cj(a1) * a4)
    d23 = np.sum(a2 * cj(a3) - cj(a1) * a4 - a1 * cj(a4) + cj(a2) * a3)
    return A, b1, b2, b3, b4, d14, d23


def pair_metric_f14(r, gains, x1: complex, x4: complex) -> float:
    """Decoupled metric of the (x1, x4) symbol pair."""
    rm = _as_rx_matrix(r, "r")
    am = _as_rx_matrix(gains, "gains")
    A, b1, _, _, b4, d14, _ = _pair_terms(rm, am)
    val = A * (abs(x1) ** 2 + abs(x4) ** 2) + 2.0 * np.real(
        b1 * x1 + b4 * x4 + d14 * x1 * np.conj(x4)
    )
    return float(val)


def pair_metric_f23(r, gains, x2: complex, x3: complex) -> float:
    """Decoupled metric of the (x2, x3) symbol pair."""
    rm = _as_rx_matrix(r, "r")
    am = _as_rx_matrix(gains, "gains")
    A, _, b2, b3, _, _, d23 = _pair_terms(rm, am)
    val = A * (abs(x2) ** 2 + abs(x3) ** 2) + 2.0 * np.real(
        b2 * x2 + b3 * x3 + d23 * x2 * np.conj(x3)
    )
    return float(val)


def _pair_grid(A, ba, bb, d, points: np.ndarray) -> np.ndarray:
    """Metric of every (point_a, point_b) candidate pair; shape (L, L)."""
    e = np.abs(points) ** 2
    lin_a = 2.0 * np.real(ba * points)
    lin_b = 2.0 * np.real(bb * points)
    cross = 2.0 * np.real(d * np.outer(points, np.conj(points)))
    return A * (e[:, None] + e[None, :]) + lin_a[:, None] + lin_b[None, :] + cross


def ml_detect(r, gains, c: Constellation, want_soft: bool = False) -> DetectedBlock:
    """Pairwise-decoupled ML detection of one block.

    Exhausts the |constellation|^2 grid of each pair metric; equal-metric
    candidates resolve to the lexicographically smallest index pair.
    """
    rm = _as_rx_matrix(r, "r")
    am = _as_rx_matrix(gains, "gains")
    if rm.shape[1] != am.shape[1]:
        raise ValueError("r and gains disagree on the receive antenna count")
    A, b1, b2, b3, b4, d14, d23 = _pair_terms(rm, am)
    P = c.points
    L = c.order
    g14 = _pair_grid(A, b1, b4, d14, P)
    g23 = _pair_grid(A, b2, b3, d23, P)
    f14 = int(np.argmin(g14))
    f23 = int(np.argmin(g23))
    i1, i4 = divmod(f14, L)
    i2, i3 = divmod(f23, L)
    soft = None
    if want_soft:
        soft = np.stack(
            [g14.min(axis=1), g23.min(axis=1), g23.min(axis=0), g14.min(axis=0)]
        )
    idx = np.array([i1, i2, i3, i4])
    return DetectedBlock(
        indices=idx,
        symbols=P[idx],
        metric14=float(g14.flat[f14]),
        metric23=float(g23.flat[f23]),
        candidate_metrics=soft,
    )


def ml_detect_joint(r, gains, c: Constellation) -> DetectedBlock:
    """Brute-force joint ML over all |constellation|^4 candidate blocks.

    Reference detector for equivalence checks; rejects constellations with
    more than ``JOINT_ORDER_LIMIT`` points.
    """
    if c.order > JOINT_ORDER_LIMIT:
        raise ValueError(
            f"joint search over {c.order}^4 candidates refused "
            f"(limit {JOINT_ORDER_LIMIT})"
        )
    rm = _as_rx_matrix(r, "r")
    am = _as_rx_matrix(gains, "gains")
    L = c.order
    idx = np.indices((L, L, L, L)).reshape(4, -1).T  # lexicographic order
    cands = c.points[idx]
    cw = encode_blocks(cands)  # (L^4, 4, 4)
    resid = rm[None, :, :] - cw @ am
    metrics = np.sum(np.abs(resid) ** 2, axis=(1, 2))
    best = int(np.argmin(metrics))
    i1, i2, i3, i4 = idx[best]
    x = c.points[idx[best]]
    return DetectedBlock(
        indices=idx[best].copy(),
        symbols=x,
        metric14=pair_metric_f14(rm, am, x[0], x[3]),
        metric23=pair_metric_f23(rm, am, x[1], x[2]),
    )


def detect_blocks(
    r: np.ndarray, gains: np.ndarray, c: Constellation, want_soft: bool = False
):
    """Vectorised pairwise ML detection of a batch of blocks.

    Parameters
    ----------
    r : (n_blocks, 4, n_rx) received samples
    gains : (n_blocks, 4, n_rx) path gains
    c : Constellation
    want_soft : also return per-symbol candidate metrics (max-log soft info)

    Returns
    -------
    indices : (n_blocks, 4) detected point indices
    soft : (n_blocks, 4, order) candidate metrics, or None
    """
    r = np.asarray(r, dtype=np.complex128)
    a = np.asarray(gains, dtype=np.complex128)
    if r.ndim != 3 or a.shape != r.shape or r.shape[1] != 4:
        raise ValueError("r and gains must both have shape (n_blocks, 4, n_rx)")
    cj = np.conj
    a1, a2, a3, a4 = (a[:, n, :] for n in range(4))
    r1, r2, r3, r4 = (r[:, t, :] for t in range(4))
    A = np.sum(np.abs(a) ** 2, axis=(1, 2))
    b1 = np.sum(-a1 * cj(r1) - cj(a2) * r2 - cj(a3) * r3 - a4 * cj(r4), axis=1)
    b4 = np.sum(-a4 * cj(r1) + cj(a3) * r2 + cj(a2) * r3 - a1 * cj(r4), axis=1)
    b2 = np.sum(-a2 * cj(r1) + cj(a1) * r2 - cj(a4) * r3 + a3 * cj(r4), axis=1)
    b3 = np.sum(-a3 * cj(r1) - cj(a4) * r2 + cj(a1) * r3 + a2 * cj(r4), axis=1)
    d14 = np.sum(a1 * cj(a4) - cj(a2) * a3 - a2 * cj(a3) + cj(a1) * a4, axis=1)
    d23 = np.sum(a2 * cj(a3) - cj(a1) * a4 - a1 * cj(a4) + cj(a2) * a3, axis=1)

    P = c.points
    L = c.order
    e = np.abs(P) ** 2
    pair_e = e[:, None] + e[None, :]
    ppc = np.outer(P, np.conj(P))

    def grids(ba, bb, d):
        lin_a = 2.0 * np.real(ba[:, None] * P[None, :])
        lin_b = 2.0 * np.real(bb[:, None] * P[None, :])
        cross = 2.0 * np.real(d[:, None, None] * ppc[None, :, :])
        return (
            A[:, None, None] * pair_e[None, :, :]
            + lin_a[:, :, None]
            + lin_b[:, None, :]
            + cross
        )

    g14 = grids(b1, b4, d14)
    g23 = grids(b2, b3, d23)
    n_blocks = r.shape[0]
    flat14 = g14.reshape(n_blocks, -1).argmin(axis=1)
    flat23 = g23.reshape(n_blocks, -1).argmin(axis=1)
    indices = np.empty((n_blocks, 4), dtype=np.int64)
    indices[:, 0], indices[:, 3] = np.divmod(flat14, L)
    indices[:, 1], indices[:, 2] = np.divmod(flat23, L)
    soft = None
    if want_soft:
        soft = np.stack(
            [g14.min(axis=2), g23.min(axis=2), g23.min(axis=1), g14.min(axis=1)],
            axis=1,
        )
    return indices, soft
