"""A criterion surface with a direction-dependent limit.

Four points in two dimensions: one mirrored pair is frozen, the other is
free but constrained to x4 = -x3.  As the free pair collapses to the
origin the criterion approaches *different* values along the abscissa and
the ordinate, so the surface has no continuous extension there.  The probe
certifies this by comparing the directional limit gap against how settled
each approach sequence is.
"""

import numpy as np

from imspe_kit import NearSingularError, discontinuity_probe, fig_imspe


def main() -> None:
    print("slice along the abscissa (x3 = (t, 0)): two mild interior minima")
    ts = np.linspace(-1.0, 1.0, 201)
    vals = []
    for t in ts:
        try:
            vals.append(fig_imspe(float(t), 0.0))
        except NearSingularError:
            vals.append(np.nan)
    vals = np.array(vals)
    minima = [
        (float(ts[i]), float(vals[i]))
        for i in range(1, 200)
        if vals[i] < vals[i - 1] and vals[i] < vals[i + 1]
    ]
    for t, v in minima:
        print(f"  local minimum near t = {t:+.3f}, imspe = {v:.4e}")

    print()
    print("approaching the origin along two directions")
    h_seq = (0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 1e-4, 1e-5)
    probe = discontinuity_probe(fig_imspe, (0.0, 0.0), ((1, 0), (0, 1)), h_seq)
    for d, limit, res in zip(probe.directions, probe.limits, probe.residuals):
        label = "(" + ", ".join(f"{c:g}" for c in d) + ")"
        print(f"  direction {label}: limit {limit:.6e} (residual {res:.1e})")
    print(f"  limit gap {probe.max_gap:.3e} >> residuals: essential discontinuity")

    print()
    print("control: the same probe at a smooth point raises no flag")
    smooth = discontinuity_probe(fig_imspe, (0.5, 0.3), ((1, 0), (0, 1)), h_seq)
    print(
        f"  limit gap {smooth.max_gap:.1e} is within the residual scale"
        f" {max(smooth.residuals):.1e}"
    )


if __name__ == "__main__":
    main()
