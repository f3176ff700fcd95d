"""Nodal and edge bases on the reference interval.

Plots the Gauss-Lobatto Lagrange family and its edge companion for a
few orders, and prints the quadrature exactness ladder.  The edge
functions integrate to one over exactly one inter-node cell, which is
what lets cochain differences represent the exterior derivative.
"""
import matplotlib.pyplot as plt
import numpy as np

from formadvect import Basis1D, gauss_lobatto_rule, gauss_rule

p = 4
basis = Basis1D(p)
x = np.linspace(-1, 1, 400)

fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4))
for i, row in enumerate(basis.lagrange_all(x)):
    ax0.plot(x, row, label=f"l_{i}")
ax0.plot(basis.nodes, np.zeros(p + 1), "ko", ms=4)
ax0.set_title(f"nodal basis, p={p}")
ax0.legend(fontsize=8)

for i, row in enumerate(basis.edge_all(x), start=1):
    ax1.plot(x, row, label=f"e_{i}")
for xi in basis.nodes:
    ax1.axvline(xi, color="k", alpha=0.2)
ax1.set_title("edge basis (cell integrals = 1)")
ax1.legend(fontsize=8)
fig.tight_layout()
fig.savefig("demo01_bases.png", dpi=150)
print("wrote demo01_bases.png")

print("\nquadrature exactness check (max monomial error):")
for rule in (gauss_rule(4), gauss_lobatto_rule(4)):
    errs = []
    for m in range(rule.exactness + 1):
        exact = 2.0 / (m + 1) if m % 2 == 0 else 0.0
        errs.append(abs(np.dot(rule.weights, rule.nodes**m) - exact))
    print(f"  {rule.kind:14s} p={rule.p}: degree <= {rule.exactness}, "
          f"max error {max(errs):.2e}")
