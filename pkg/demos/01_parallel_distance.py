"""Parallel distance on the six-hump camel function.

The parallel distance g at a point x is the diameter of the segment that the
line through x in direction v cuts out of the super-level set {f >= l}. Near
a saddle of Morse index one, with v close to the downhill eigenvector, g^2
behaves like a convex quadratic: this script evaluates g, its square and the
derivatives of the square at a few points and sanity-checks them against
finite differences.
"""

import numpy as np

from mtnpass import TrustRegion, eval_pardist, find_level_crossings, six_hump_camel

camel = six_hump_camel()
region = TrustRegion(np.zeros(2), 10.0)

# Downhill direction at the origin saddle: eigenvector of the negative
# eigenvalue of the Hessian [[8, 1], [1, -8]].
H0 = camel.hessian(np.zeros(2))
w, V = np.linalg.eigh(H0)
vbar = V[:, 0]
print(f"origin Hessian eigenvalues: {w.round(4)}")
print(f"downhill direction vbar = {vbar.round(4)}\n")

level = -0.05
print(f"sections of {{f >= {level}}} along vbar:")
for x in (np.zeros(2), np.array([0.05, 0.02]), np.array([0.2, -0.1])):
    sec = find_level_crossings(camel, x, vbar, level, region)
    print(f"  x = {x.round(3)}: t in [{sec.t1:+.6f}, {sec.t2:+.6f}], "
          f"g = {sec.diam:.6f}, f(z) = {camel.value(sec.z):+.10f}")

print("\nderivatives of g^2 at x = (0.05, 0.02):")
x = np.array([0.05, 0.02])
pe = eval_pardist(camel, x, vbar, level, region, want_hessian=True)
print(f"  g          = {pe.g:.8f}")
print(f"  grad g^2   = {pe.grad_g2.round(8)}")
print(f"  hess g^2   =\n{pe.hess_g2.round(5)}")

# Finite-difference cross-check of the gradient.
h = 1e-6
fd = np.zeros(2)
for i in range(2):
    e = np.zeros(2)
    e[i] = h
    gp = find_level_crossings(camel, x + e, vbar, level, region).diam ** 2
    gm = find_level_crossings(camel, x - e, vbar, level, region).diam ** 2
    fd[i] = (gp - gm) / (2.0 * h)
err = np.linalg.norm(pe.grad_g2 - fd) / np.linalg.norm(fd)
print(f"\nfinite-difference gradient check: rel. error {err:.2e}")

# g^2 is constant along v: its gradient is orthogonal to vbar.
print(f"grad g^2 . vbar = {pe.grad_g2 @ vbar:+.2e}  (zero up to roundoff)")
