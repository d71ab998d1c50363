"""Reference computations that share no code with the package.

They use scipy's DOP853 directly on textbook formulations, so agreement with
the library is a genuine cross-check.
"""

import numpy as np
from scipy.integrate import solve_ivp

PI2 = 2 * np.pi


def cos_coeff(offset, amp):
    return lambda t: offset + amp * np.cos(PI2 * t)


def dfe_start(N=2.2e6, mu=0.02, p=0.85, delta=0.0, r=cos_coeff(0.1, 0.004), period=1.0):
    """S_hat(0) from the affine one-period map S -> a S + b."""
    c = N * (mu * (1 - p) + delta)

    def rhs(t, y):
        k = mu + r(t) + delta
        return [-k * y[0], c - k * y[1]]

    sol = solve_ivp(rhs, (0, period), [1.0, 0.0], method="DOP853", rtol=1e-13, atol=1e-12)
    a, b = sol.y[:, -1]
    return b / (1 - a)


def rho_w(lam, beta0, slope=1.0, N=2.2e6, mu=0.02, p=0.85, sigma=38.5, gamma=100.0,
          beta_amp=0.0002, r=cos_coeff(0.1, 0.004)):
    """Spectral radius of the one-period operator of w' = (F(t)/lam - V) w.

    S_hat is carried as an extra state started at its periodic value.
    """
    s0 = dfe_start(N, mu, p, 0.0, r)
    c = N * mu * (1 - p)
    beta = cos_coeff(beta0, beta_amp)

    def rhs(t, y):
        S = y[0]
        W = y[1:].reshape(2, 2)
        A = np.array([[-(mu + sigma), beta(t) * S * slope / lam], [sigma, -(mu + gamma)]])
        return np.concatenate([[c - (mu + r(t)) * S], (A @ W).ravel()])

    y0 = np.concatenate([[s0], np.eye(2).ravel()])
    sol = solve_ivp(rhs, (0, 1), y0, method="DOP853", rtol=1e-12, atol=1e-14)
    W = sol.y[1:, -1].reshape(2, 2)
    return float(np.max(np.abs(np.linalg.eigvals(W))))
