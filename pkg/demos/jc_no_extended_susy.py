"""Jaynes-Cummings: the candidate second supercharge leaves the Lie algebra.

Run: python3 demos/jc_no_extended_susy.py
"""

from superprolong.algebra import Workspace, bracket, closure_check
from superprolong.models import builtin

m = builtin("jc")
ws = Workspace(m)
basis = ["HJC", "Am", "Ap", "I", "J", "Qd"]

_, sq = bracket(ws.gens["Qd"], ws.gens["Qd"], "anticommutator")
exp = ws.expand(sq, basis, "off_shell", 42, 20)
print(f"(Qp - Qm)^2 over {basis}: {exp.status}, residual {exp.span_residual:.2e}")

# with kappa tied to the fields the commutators close; with a free kappa they do not
for sub in ("physical", None):
    s = closure_check(m, basis, kind="commutator", substitution=sub)["summary"]
    print(f"closure with kappa {sub or 'generic'}: closed={s['closed']}, jacobi failures={s['jacobi_failures']}")
