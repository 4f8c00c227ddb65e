"""Walk through the SUSY oscillator: generators, graded brackets, printed tables.

Run: python3 demos/oscillator_superalgebra.py
"""

from superprolong.algebra import Workspace, bracket, verify_table
from superprolong.models import builtin

m = builtin("susy_oscillator")
ws = Workspace(m)
print(f"{m.name}: {len(m.generators)} generators, solutions {[label for label, _ in m.solutions]}")

# the supercharges square to zero and close on the Hamiltonian pieces
basis = ["H0", "Cm", "Cp", "Y", "Qm", "Qp", "Sm", "Sp"]
for a, b in (("Qp", "Qm"), ("Sm", "Sp"), ("Qp", "Sm"), ("Qp", "Qp")):
    kind, op = bracket(ws.gens[a], ws.gens[b])
    exp = ws.expand(op, basis, "on_shell", 42, 20)
    print(f"  {kind}({a}, {b}) = {exp.combination()}")

# stored tables keep the printed entries; the engine reports where it disagrees
for name in ("sl2_h2", "osp22"):
    s = verify_table(m, name)["summary"]
    print(f"{name}: {s['match']}/{s['cells']} match, {s['genuine_failures']} genuine failures")
    for w in s["warnings"]:
        print("  warning:", w)
