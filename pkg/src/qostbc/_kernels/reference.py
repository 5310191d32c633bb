"""Pure-NumPy forward-backward (log-MAP) kernel.

Fallback twin of the compiled ``_bcjr`` extension: same contract, same
numbers up to floating-point rounding.  The recursion is exact log-MAP --
every max* is ``max(a, b) + log1p(exp(-|a - b|))``, implemented here with
``np.logaddexp``.
"""

from __future__ import annotations

import numpy as np


def bcjr_posteriors(
    sys_llr: np.ndarray,
    par_llr: np.ndarray,
    apriori: np.ndarray,
    tail_sys: np.ndarray,
    tail_par: np.ndarray,
    next_state: np.ndarray,
    parity: np.ndarray,
    term_input: np.ndarray,
    term_parity: np.ndarray,
    term_next: np.ndarray,
) -> np.ndarray:
    """Posterior LLRs of the information bits of one constituent code.

    Inputs are channel LLRs (positive => bit 0) for the systematic and
    parity streams, a-priori LLRs for the information bits, and the LLRs of
    the termination tail.  Empty tail arrays mean the trellis end state is
    unknown (uniform); otherwise the backward pass is pinned to the zero
    state and walks the deterministic flush branches.
    """
    K = sys_llr.shape[0]
    S = next_state.shape[1]
    n_tail = tail_sys.shape[0]
    in_half = np.array([0.5, -0.5])  # 0.5 * (1 - 2u)
    par_half = 0.5 * (1.0 - 2.0 * parity)  # (2, S)

    alpha = np.full((K + 1, S), -np.inf)
    alpha[0, 0] = 0.0
    for k in range(K):
        g = in_half[:, None] * (apriori[k] + sys_llr[k]) + par_half * par_llr[k]
        nxt = np.full(S, -np.inf)
        np.logaddexp.at(nxt, next_state.ravel(), (alpha[k][None, :] + g).ravel())
        alpha[k + 1] = nxt - nxt.max()

    if n_tail:
        beta = np.full(S, -np.inf)
        beta[0] = 0.0
        t_in_half = 0.5 * (1.0 - 2.0 * term_input)
        t_par_half = 0.5 * (1.0 - 2.0 * term_parity)
        for j in range(n_tail - 1, -1, -1):
            g_t = t_in_half * tail_sys[j] + t_par_half * tail_par[j]
            beta = g_t + beta[term_next]
            beta -= beta.max()
    else:
        beta = np.zeros(S)

    posterior = np.empty(K)
    for k in range(K - 1, -1, -1):
        g = in_half[:, None] * (apriori[k] + sys_llr[k]) + par_half * par_llr[k]
        tot = alpha[k][None, :] + g + beta[next_state]
        posterior[k] = np.logaddexp.reduce(tot[0]) - np.logaddexp.reduce(tot[1])
        beta = np.logaddexp(
            g[0] + beta[next_state[0]], g[1] + beta[next_state[1]]
        )
        beta -= beta.max()
    return posterior
