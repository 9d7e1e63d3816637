#!/usr/bin/env python3
"""Nonlinearity of the post-selection phase shift.

Sweeps the input-polarizer angle theta1 for three analyzer angles theta2 and
plots the geometric phase and the post-selection success probability, for one
photon and for a photon pair.  Small theta2 makes the phase shift around
theta1 = 0 steep (nearly a full 2*pi swing inside a narrow window) at the
price of a collapsing success probability; N photons multiply both the phase
and its slope by N while the probability drops to the N-th power.
"""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from geophase import SetupConfig, closed_form_one_photon, nphoton_postselect

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

theta1 = np.linspace(-math.pi / 2, math.pi / 2, 721)
theta2_cases = [
    (math.pi / 50, "solid", r"$\theta_2=\pi/50$"),
    (math.pi / 10, "dashed", r"$\theta_2=\pi/10$"),
    (math.pi / 4, "dotted", r"$\theta_2=\pi/4$"),
]

fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
for col, n in enumerate((1, 2)):
    ax_phase, ax_prob = axes[0, col], axes[1, col]
    for theta2, style, label in theta2_cases:
        gamma = []
        prob = []
        for t1 in theta1:
            rep = nphoton_postselect(SetupConfig(float(t1), theta2, n))
            one = closed_form_one_photon(float(t1), theta2)
            gamma.append(n * one.geometric)
            prob.append(rep.success_probability)
        ax_phase.plot(theta1, np.array(gamma) / math.pi, linestyle=style, label=label)
        ax_prob.semilogy(theta1, prob, linestyle=style, label=label)
    ax_phase.set_title(f"N = {n}")
    ax_phase.set_ylabel(r"geometric phase $\gamma_N/\pi$")
    ax_prob.set_ylabel("success probability")
    ax_prob.set_xlabel(r"$\theta_1$ (rad)")
    ax_prob.set_ylim(1e-6, 1.5)
    ax_phase.legend(loc="upper left", fontsize=8)

fig.suptitle("Nonlinear geometric phase and post-selection cost")
fig.tight_layout()
path = os.path.join(OUT, "nonlinear_phase_curves.png")
fig.savefig(path, dpi=150)
print(f"wrote {path}")

# The same information, printed for the steepest configuration: around
# theta1 = 0 the phase crosses a full fringe period within ~2*theta2.
theta2 = math.pi / 50
slope = 2 / math.tan(theta2)
print(f"slope of gamma at theta1=0 for theta2=pi/50: {slope:.1f} rad/rad (one photon)")
print(f"two photons double it: {2 * slope:.1f} rad/rad")
