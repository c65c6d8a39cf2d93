"""Two-parameter bifurcation diagram of the first monodromic subcase.

All four bifurcation curves (both homoclinic loops and both heteroclinic
connections) emanate from the origin of the (alpha, epsilon) plane.  The
stable cycle born from the contour exists inside the wedge between the
homoclinic curves; crossing either one changes the cycle count by one.
"""
import math

import numpy as np

from hetcontour import diagrams as dg


def main():
    scn = dg.scenario("mono_first")
    print(f"scenario: {scn.name} ({scn.notes})")
    diagram = dg.assemble_diagram(scn, k_max=0, step=4e-4, max_points=20)
    for c in diagram.curves:
        closest = float(np.linalg.norm(c.points, axis=1).min())
        print(f"  {c.tag.value}: {len(c.points)} points, "
              f"closest approach to origin {closest:.1e}, "
              f"max residual {float(abs(c.residuals).max()):.1e}")
    for key, why in diagram.failures.items():
        print(f"  failed {key}: {why}")

    print()
    print("cycle counts on a small circle around the origin:")
    for theta in (170, 225, 280):
        th = math.radians(theta)
        point = (2e-3 * math.cos(th), 2e-3 * math.sin(th))
        n = dg.flow_cycle_count(scn, point)
        print(f"  theta = {theta:3d} deg: {n} cycle(s)")


if __name__ == "__main__":
    main()
