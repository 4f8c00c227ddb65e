"""Finite transformations of the oscillator acting on exact solutions.

Run: python3 demos/finite_flows.py
"""

from superprolong.models import builtin
from superprolong.numcheck import NumericModel, finite_residual, group_law, transformations

m = builtin("susy_oscillator")
nm = NumericModel(m, 42)
sol = dict(m.solutions)["n=1 top"]
for name, T in transformations(nm).items():
    floor = finite_residual(m, T, 0.0, sol, nm=nm).value
    res = [finite_residual(m, T, lam, sol, nm=nm).value for lam in (0.1, 0.2, 0.3)]
    print(f"{name:4s} floor {floor:.1e}  residual at 0.1/0.2/0.3: "
          + " ".join(f"{r:.1e}" for r in res) + f"  group law {group_law(T, 0.1, 0.1):.1e}")
