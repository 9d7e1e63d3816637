#!/usr/bin/env python3
"""Three routes to the geometric phase on the Poincare sphere.

For a few interferometer settings this script computes the post-selection
phase shift by (1) the gauge-invariant three-state overlap product, (2) the
closed-form expression, and (3) half the oriented solid angle of the
geodesic triangle spanned by the two arm states and the analyzer state, and
shows that all three coincide.  It also draws the triangle for one setting.
"""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from geophase import (
    SetupConfig,
    closed_form_one_photon,
    pancharatnam_phase,
    prepare_setup_states,
    signed_solid_angle,
    to_stokes,
    wrap_angle,
)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

print(f"{'theta1':>8} {'theta2':>8} {'overlap product':>16} "
      f"{'closed form':>12} {'solid angle/2':>14}")
for theta1, theta2 in [(0.15, 0.6), (0.5, 0.25), (-0.7, 1.2), (0.05, math.pi / 50)]:
    _, psi_a, psi_b, psi2 = prepare_setup_states(SetupConfig(theta1, theta2))
    product = pancharatnam_phase(psi_a, psi_b, psi2)
    closed = wrap_angle(closed_form_one_photon(theta1, theta2).geometric)
    omega = signed_solid_angle(to_stokes(psi_a), to_stokes(psi_b), to_stokes(psi2))
    print(f"{theta1:8.3f} {theta2:8.3f} {product:16.9f} {closed:12.9f} {omega / 2:14.9f}")

# Draw one geodesic triangle.
theta1, theta2 = 0.5, 0.25
_, psi_a, psi_b, psi2 = prepare_setup_states(SetupConfig(theta1, theta2))
va, vb, v2 = (to_stokes(s).as_array() for s in (psi_a, psi_b, psi2))


def geodesic(p, q, steps=60):
    pts = []
    for t in np.linspace(0, 1, steps):
        v = (1 - t) * p + t * q
        pts.append(v / np.linalg.norm(v))
    return np.array(pts)


fig = plt.figure(figsize=(6, 6))
ax = fig.add_subplot(projection="3d")
u, v = np.meshgrid(np.linspace(0, 2 * math.pi, 36), np.linspace(0, math.pi, 18))
ax.plot_wireframe(np.cos(u) * np.sin(v), np.sin(u) * np.sin(v), np.cos(v),
                  color="lightgray", lw=0.3)
for p, q in [(va, vb), (vb, v2), (v2, va)]:
    arc = geodesic(p, q)
    ax.plot(arc[:, 0], arc[:, 1], arc[:, 2], "b-", lw=2)
for vec, name in [(va, "arm A"), (vb, "arm B"), (v2, "analyzer")]:
    ax.scatter(*vec, s=40)
    ax.text(*(vec * 1.12), name, fontsize=9)
omega = signed_solid_angle(va, vb, v2)
ax.set_title(f"geodesic triangle, solid angle = {omega:.4f} sr\n"
             f"geometric phase = {omega / 2:.4f} rad")
ax.set_box_aspect((1, 1, 1))
path = os.path.join(OUT, "poincare_triangle.png")
fig.savefig(path, dpi=150)
print(f"wrote {path}")
