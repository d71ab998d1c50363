"""Which incidence functions satisfy the standing assumptions?

The threshold results need f(0) = 0, f'(0) > 0, f(I) >= I f'(I), f''(0) <= 0
and a local quadratic lower bound near zero. This script runs the numeric
checker on a few candidates over the population range [0, N].
"""

import numpy as np

from floqseirs import IncidenceFunction, check_assumptions

N = 2.2e6

candidates = {
    "bilinear I": IncidenceFunction.bilinear(),
    "saturated I/(1+0.001 I)": IncidenceFunction.saturated(0.001),
    "saturated I/(1+I)": IncidenceFunction.saturated(1.0),
    "non-monotone I/(1+I^2)": IncidenceFunction.power_saturated(1.0, 2.0),
    "power I/(1+2 I^0.5)": IncidenceFunction.power_saturated(2.0, 0.5),
    "quadratic I^2": IncidenceFunction.external(lambda I: np.asarray(I, float) ** 2,
                                                 lambda I: 2 * np.asarray(I, float), label="I^2"),
}

for name, f in candidates.items():
    rep = check_assumptions(f, N)
    status = "pass" if rep.passed else "fails " + ",".join(rep.failures())
    print(f"{name:28s} f'(0)={rep.slope_at_zero:<6.3g} f''(0)={rep.curvature_at_zero:<8.3g} "
          f"eps*={rep.a5_epsilon_star}  -> {status}")

# I/(1+I^2) = I - I^3 + ... lies below its tangent at 0, so no quadratic
# lower bound with f''(0) = 0 exists on any (0, eps).
f = candidates["non-monotone I/(1+I^2)"]
I = np.array([1e-3, 1e-2, 1e-1])
print("\nI/(1+I^2) - I at small I:", f.value(I) - I)
