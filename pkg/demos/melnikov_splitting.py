"""Melnikov integrals of the two connections, checked against the flow.

Each connection of the unperturbed contour splits under exactly one of the
two perturbation parameters.  The Melnikov integral gives the first-order
splitting rate; a central finite difference of the measured gap confirms
the sign and the vanishing cross-derivatives.
"""
from hetcontour import diagrams as dg
from hetcontour import melnikov as ml


def main():
    for c in (0.5, 1.5):
        for conn in (ml.Connection.PARABOLA, ml.Connection.X_AXIS):
            res = ml.melnikov_integral(ml.MelnikovProblem(c=c, connection=conn))
            cert = " (sign certified)" if res.sign_certified_negative else ""
            print(f"c={c}: {conn.value:8s} M(0) = {res.value:+.7f} "
                  f"+/- {res.error_estimate:.1e}{cert}")

    print()
    print("finite-difference gap derivatives at the origin (c=3/2):")
    scn = dg.scenario("mono_first")
    h = 1e-4
    for name in ("axis", "parabola"):
        g = dg.gap_function(scn, name)
        da = (g(scn.system, (h, 0)) - g(scn.system, (-h, 0))) / (2 * h)
        de = (g(scn.system, (0, h)) - g(scn.system, (0, -h))) / (2 * h)
        print(f"  {name:8s} d/dalpha = {da:+.6f}   d/depsilon = {de:+.6f}")
    print("each connection responds to one parameter only; the nonzero")
    print("derivatives carry the sign of the corresponding integral")


if __name__ == "__main__":
    main()
