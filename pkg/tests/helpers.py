"""Shared test fixtures: exact power-sum fields and small comparison helpers."""

import math

from fracvec.fields import RadialScalarField


class PowerSum:
    """sum_k c_k r^(e_k) with exact derivatives, closed under the radial operators."""

    def __init__(self, terms):
        self.terms = [(float(c), float(e)) for c, e in terms]

    def __call__(self, r):
        return math.fsum(c * r ** e for c, e in self.terms)

    def deriv(self):
        return PowerSum([(c * e, e - 1.0) for c, e in self.terms if e != 0.0])

    def scale_shift(self, k, shift):
        """k * r^shift * self."""
        return PowerSum([(k * c, e + shift) for c, e in self.terms])

    def __add__(self, other):
        return PowerSum(self.terms + other.terms)

    def field(self):
        d1 = self.deriv()
        d2 = d1.deriv()
        return RadialScalarField(self, d1, d2)


def rel(a, b, floor=1e-300):
    return abs(a - b) / max(abs(b), floor)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []
