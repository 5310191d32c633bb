# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled forward-backward (log-MAP) kernel.

Twin of qostbc._kernels.reference.bcjr_posteriors.  The trellis is tiny
(4 states for the memory-2 code) but the recursion is sequential in time,
which is exactly what the interpreter is slow at -- hence the C loops.
"""

import numpy as np

from libc.math cimport INFINITY, exp, log1p


cdef inline double maxstar(double a, double b) noexcept nogil:
    # Jacobian logarithm: exact log(e^a + e^b).
    cdef double hi, lo
    if a > b:
        hi = a
        lo = b
    else:
        hi = b
        lo = a
    if lo == -INFINITY:
        return hi
    return hi + log1p(exp(lo - hi))


def bcjr_posteriors(
    double[::1] sys_llr,
    double[::1] par_llr,
    double[::1] apriori,
    double[::1] tail_sys,
    double[::1] tail_par,
    int[:, ::1] next_state,
    int[:, ::1] parity,
    int[::1] term_input,
    int[::1] term_parity,
    int[::1] term_next,
):
    """See qostbc._kernels.reference.bcjr_posteriors."""
    cdef Py_ssize_t K = sys_llr.shape[0]
    cdef int S = <int> next_state.shape[1]
    cdef Py_ssize_t n_tail = tail_sys.shape[0]
    cdef Py_ssize_t k, j
    cdef int s, u, ns
    cdef double la, lp, g, t, m, g0, g1, met0, met1

    alpha_arr = np.full((K + 1, S), -np.inf)
    posterior_arr = np.empty(K)
    beta_arr = np.empty(S)
    beta_next_arr = np.empty(S)
    cdef double[:, ::1] alpha = alpha_arr
    cdef double[::1] posterior = posterior_arr
    cdef double[::1] beta = beta_arr
    cdef double[::1] beta_next = beta_next_arr

    with nogil:
        # ---- forward pass ------------------------------------------------
        alpha[0, 0] = 0.0
        for k in range(K):
            la = 0.5 * (apriori[k] + sys_llr[k])
            lp = 0.5 * par_llr[k]
            for s in range(S):
                if alpha[k, s] == -INFINITY:
                    continue
                for u in range(2):
                    g = (la if u == 0 else -la) + (lp if parity[u, s] == 0 else -lp)
                    ns = next_state[u, s]
                    alpha[k + 1, ns] = maxstar(alpha[k + 1, ns], alpha[k, s] + g)
            m = -INFINITY
            for s in range(S):
                if alpha[k + 1, s] > m:
                    m = alpha[k + 1, s]
            for s in range(S):
                alpha[k + 1, s] = alpha[k + 1, s] - m

        # ---- backward initialisation over the termination tail -----------
        if n_tail > 0:
            for s in range(S):
                beta_next[s] = 0.0 if s == 0 else -INFINITY
            for j in range(n_tail - 1, -1, -1):
                for s in range(S):
                    g = (0.5 * tail_sys[j] if term_input[s] == 0 else -0.5 * tail_sys[j]) + (
                        0.5 * tail_par[j] if term_parity[s] == 0 else -0.5 * tail_par[j]
                    )
                    beta[s] = g + beta_next[term_next[s]]
                m = -INFINITY
                for s in range(S):
                    if beta[s] > m:
                        m = beta[s]
                for s in range(S):
                    beta_next[s] = beta[s] - m
        else:
            for s in range(S):
                beta_next[s] = 0.0

        # ---- combined backward / posterior pass ---------------------------
        for k in range(K - 1, -1, -1):
            la = 0.5 * (apriori[k] + sys_llr[k])
            lp = 0.5 * par_llr[k]
            met0 = -INFINITY
            met1 = -INFINITY
            for s in range(S):
                g0 = la + (lp if parity[0, s] == 0 else -lp)
                g1 = -la + (lp if parity[1, s] == 0 else -lp)
                t = alpha[k, s] + g0 + beta_next[next_state[0, s]]
                met0 = maxstar(met0, t)
                t = alpha[k, s] + g1 + beta_next[next_state[1, s]]
                met1 = maxstar(met1, t)
                beta[s] = maxstar(
                    g0 + beta_next[next_state[0, s]],
                    g1 + beta_next[next_state[1, s]],
                )
            posterior[k] = met0 - met1
            m = -INFINITY
            for s in range(S):
                if beta[s] > m:
                    m = beta[s]
            for s in range(S):
                beta_next[s] = beta[s] - m

    return posterior_arr
