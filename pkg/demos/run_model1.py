"""Walk through the exactly solvable benchmark: first-derivative coupling.

The problem y'' = lam y' - E y on [0, 1] with Dirichlet ends has the exact
spectrum E = n^2 pi^2 + lam^2/4, so every perturbation coefficient is known:
the energy series stops at order 2 and the corrections are y_j = x^j/(j! 2^j) y_0.
"""

import numpy as np

from pertbvp import analytic_sine_state, compute_series, residual, sum_series
from pertbvp.oracles import model1_exact, model1_problem

problem = model1_problem()
state = analytic_sine_state(problem, n=1)

series = compute_series(problem, state, J=6)
print("energy coefficients (expect pi^2, 0, 1/4, 0, 0, 0, 0):")
for j, e in enumerate(series.energies):
    print(f"  E_{j} = {e: .12e}")

print("\nnormalization coefficients (expect 1, -1/4, ...):")
for j, v in enumerate(series.norm_coeffs):
    print(f"  N_{j} = {v: .12e}")

lam = 0.8
energy, y = sum_series(series, lam, 6)
exact_energy, exact_y = model1_exact(1, lam)
print(f"\nsummed energy at coupling {lam}: {energy:.12f}")
print(f"exact energy:                    {exact_energy:.12f}")

xs = np.linspace(0, 1, 5)
print("\nwavefunction sum vs exact (up to the series' amplitude drift):")
for x in xs:
    print(f"  x={x:.2f}  sum={y(x): .8f}  exact={exact_y(x): .8f}")

print(f"\nresidual of the order-6 sum in the original equation: "
      f"{residual(problem, lam, energy, y):.3e}")
