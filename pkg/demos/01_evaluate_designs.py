"""Evaluate the integrated prediction-error criterion of a few designs.

The criterion lives on the cube [-1, 1]^d: a design is good when the
kriging predictor built from its points has small mean-squared error on
average over the whole cube.  Every averaged-correlation integral has a
closed form, and an independent adaptive-quadrature oracle is available to
confirm each value.
"""

from imspe_kit import Family, Kernel, build_matrices
from imspe_kit.oracle import imspe_quad


def main() -> None:
    print("criterion values for a centered pair, per correlation family")
    print(f"{'family':<12} {'closed form':>20} {'quadrature':>20} {'gap':>10}")
    design = [[0.5], [-0.5]]
    for family in Family:
        kernel = Kernel(family, (1.0,))
        closed = build_matrices(kernel, design).imspe
        quad = imspe_quad(kernel, design)
        print(f"{family.value:<12} {closed:>20.15f} {quad:>20.15f} {abs(closed - quad):>10.1e}")

    print()
    print("adding points always helps: nested designs, Matern 5/2, theta = 2")
    kernel = Kernel(Family.MATERN52, (2.0,))
    nested = [[0.0], [0.6], [-0.6], [0.9], [-0.9]]
    for n in range(1, 6):
        value = build_matrices(kernel, nested[:n]).imspe
        print(f"  n = {n}: imspe = {value:.6f}")

    print()
    print("two dimensions: anisotropic decay rates stretch the design")
    kernel = Kernel(Family.GAUSS_P2, (4.0, 0.25))
    for label, design_2d in [
        ("axis-aligned pair", [[0.5, 0.0], [-0.5, 0.0]]),
        ("diagonal pair    ", [[0.5, 0.5], [-0.5, -0.5]]),
    ]:
        value = build_matrices(kernel, design_2d).imspe
        print(f"  {label}: imspe = {value:.6f}")


if __name__ == "__main__":
    main()
