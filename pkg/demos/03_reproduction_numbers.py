"""Averaged versus periodic reproduction numbers.

The averaged number uses period means of beta and S_hat. The periodic one
is the lambda at which the one-period evolution operator of
w' = (F(t)/lambda - V) w has spectral radius one. Seasonality lowers the
threshold quantity slightly below the averaged value here.
"""

from floqseirs import IncidenceFunction, ModelParams, PeriodicCoefficient, r0_solve, rho_w

f = IncidenceFunction.saturated(0.001)


def params(beta0):
    return ModelParams(
        N=2.2e6, mu=0.02, p=0.85, sigma=38.5, gamma=100.0, delta=0.0,
        beta=PeriodicCoefficient.cosine(beta0, 0.0002),
        r=PeriodicCoefficient.cosine(0.1, 0.004),
    )


for beta0 in (0.0018, 0.005):
    rep = r0_solve(params(beta0), f)
    print(f"beta0={beta0}: averaged {rep.r0_avg:.8f}  periodic {rep.r0:.8f}  "
          f"({rep.classification}, {rep.iterations} bisections, residual {rep.residual:.1e})")

print("\nspectral radius of W(1, 0, lambda) around the root, beta0 = 0.0018:")
for lam in (0.985, 0.987, 0.988, 0.9881, 0.989, 0.991):
    print(f"  lambda={lam:<7} rho={rho_w(params(0.0018), f, lam):.6f}")

# the linearization only sees f'(0), so the saturation constant is irrelevant
for a in (0.0, 1.0):
    print(f"\nsaturation a={a}: r0 = {r0_solve(params(0.0018), IncidenceFunction.saturated(a)).r0:.8f}", end="")
print()
