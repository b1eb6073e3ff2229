"""Shared chart builders for the test modules."""

from hamstab.geometry import AmbientFlat
from hamstab.immersion import AxisDomain, chart_from_components
from hamstab.jets import jcos, jsin


def gradient_graph_chart():
    """Gradient graph (s, grad phi(s)) in C^2: Lagrangian for any potential,
    with a genuinely non-constant induced metric."""
    amb = AmbientFlat.pseudo_kahler(2, 0)

    def phi1(S):
        # d phi / d s1 for phi = 0.3 cos(s1) sin(2 s2) + 0.1 s1^2 s2
        return jsin(S[0]) * jsin(S[1] * 2.0) * (-0.3) + S[0] * S[1] * 0.2

    def phi2(S):
        return jcos(S[0]) * jcos(S[1] * 2.0) * 0.6 + (S[0] ** 2) * 0.1

    comps = [lambda S: S[0], phi1, lambda S: S[1], phi2]
    return chart_from_components(
        amb, (AxisDomain.line(), AxisDomain.line()), comps, name="gradient-graph"
    )
