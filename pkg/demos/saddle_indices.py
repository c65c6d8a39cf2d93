"""Saddle indices of the cubic contour family across the third parameter.

The contour is formed by the invariant x-axis and the invariant parabola
y = x(1-x), joining the saddles L = (0,0) and M = (1,0).  The saddle
indices lambda = -lambda_s/lambda_u decide the contour type: both above 1
gives the first (dissipative) subcase, straddling 1 the second.
"""
import numpy as np

from hetcontour import equilibria as eq
from hetcontour import vectorfield as vf


def main():
    sys_ = vf.builtin("mono_unperturbed")
    print(f"{'c':>6} {'lambda (L)':>12} {'mu (M)':>12} {'lambda*mu':>12}")
    for c in np.linspace(0.25, 1.75, 7):
        params = sys_.full_params({"c": c})
        lam = eq.saddle_data(sys_, params, (0.0, 0.0)).index
        mu = eq.saddle_data(sys_, params, (1.0, 0.0)).index
        print(f"{c:6.2f} {lam:12.6f} {mu:12.6f} {lam * mu:12.6f}")
    print()
    print("closed forms: lambda = -(a+b)/a, mu = a/(-a-b-c)")
    print("c = 3/2: both indices 2 (first subcase)")
    print("c = 1/2: indices 2 and 2/3 straddle 1 (second subcase)")


if __name__ == "__main__":
    main()
