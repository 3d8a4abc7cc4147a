"""Walk through the partially solvable benchmark: second-derivative coupling.

(1 - 3x^2/5) y'' - (6/5)(x y' - y) + E y = 0 on [0, 1] has an exact ground
state at coupling 1 (E = 6, y = x(1 - x^2)) but no known closed forms for
excited states; the series coefficients are compared against the exact
E_1..E_3 formulas and the finite-difference eigenvalue oracle.
"""

from pertbvp import analytic_sine_state, compute_series, sum_series
from pertbvp.oracles import fd_eigenvalue, model3_E_coeffs, model3_problem

problem = model3_problem()

print("ground state, coupling 1:")
state = analytic_sine_state(problem, n=1, amplitude=1.0)
series = compute_series(problem, state, J=8)
exact = model3_E_coeffs(1)
for j in range(4):
    print(f"  E_{j} = {series.energies[j]: .10f}   closed form {exact[j]: .10f}")

for upto in (3, 5, 8):
    energy, _ = sum_series(series, 1.0, upto)
    print(f"  partial sum through order {upto}: {energy:.6f}")
fd = fd_eigenvalue(problem, 1.0, 9.0, 512)
print(f"  finite-difference oracle:      {fd:.6f}   (exact: 6)")

print("\nnormalization series (bare-sine amplitude convention):")
for j, v in enumerate(series.norm_coeffs[:3]):
    print(f"  N_{j} = {v: .10f}")

print("\nexcited states (no exact solution; oracle is the reference):")
for n in (2, 3):
    st = analytic_sine_state(problem, n=n)
    ser = compute_series(problem, st, J=8)
    energy, _ = sum_series(ser, 1.0, 8)
    guess = sum(model3_E_coeffs(n))
    fd = fd_eigenvalue(problem, 1.0, guess, 1024)
    print(f"  n={n}: order-8 sum {energy:.6f}   fd oracle {fd:.6f}")
