"""The modular surface: quotient by the group generated by z -> z + 1 and
z -> -1/z.

In contrast to the octagon surface this quotient is not compact; geodesics
can run up the cusp, which is exactly the divergence the escape diagnostics
look for.  The fundamental domain is the classical strip |Re z| <= 1/2 cut
below by the unit circle.
"""

from __future__ import annotations

import math

from horoflow.models.base import QuotientPoint, ReductionError
from horoflow.moebius import (
    HalfPlanePoint,
    MoebiusElement,
    frame_to_tangent,
    hyp_dist,
)

REDUCE_CAP = 10_000
_BOUNDARY_SLACK = 1e-12


class ModularModel:
    """PSL(2, Z) with the standard fundamental domain."""

    name = "modular"

    def __init__(self):
        self.gen_t = MoebiusElement.u(1.0)
        self.gen_s = MoebiusElement.rot(0.5 * math.pi)
        # letters: T, T inverse, S (self-inverse)
        self.letters = (self.gen_t, self.gen_t.inv(), self.gen_s)

    def letter(self, k):
        return self.letters[k]

    def letter_count(self):
        return 3

    def independent_generators(self):
        return (self.gen_t, self.gen_s)

    def inverse_letter(self, k):
        return (1, 0, 2)[k]

    def generators_named(self):
        return [("T", self.gen_t), ("S", self.gen_s)]

    # -- reduction ---------------------------------------------------------

    def reduce_point(self, z):
        """Reduce a half-plane point into the fundamental domain.

        Alternates the horizontal translation into |Re| <= 1/2 with the
        inversion while the point is inside the unit circle.
        """
        if isinstance(z, HalfPlanePoint):
            z = z.as_complex()
        z = complex(z)
        if z.imag <= 0.0:
            raise ValueError("point must lie in the open upper half-plane")
        for _ in range(REDUCE_CAP):
            m = math.floor(z.real + 0.5)
            if m != 0:
                z = complex(z.real - m, z.imag)
            if abs(z) < 1.0 - _BOUNDARY_SLACK:
                z = -1.0 / z
            else:
                return QuotientPoint(self.name, (z.real, z.imag))
        raise ReductionError(
            "modular point reduction did not settle within %d steps" % REDUCE_CAP,
            REDUCE_CAP,
        )

    def reduce_frame(self, f):
        """Reduce a frame; returns (frame, steps).

        Steps are (letter index, count): the translation letter carries how
        many times it was applied so callers can push holonomy through
        without replaying every unit shift.
        """
        steps = []
        for _ in range(REDUCE_CAP):
            z = f.apply(1.0j)
            m = math.floor(z.real + 0.5)
            if m != 0:
                # left-multiply by T^-m in one go
                f = MoebiusElement.u(-float(m)).mul(f)
                steps.append((1, m) if m > 0 else (0, -m))
                z = complex(z.real - m, z.imag)
            if abs(z) < 1.0 - _BOUNDARY_SLACK:
                f = self.gen_s.mul(f)
                steps.append((2, 1))
            else:
                return f, steps
        raise ReductionError(
            "modular frame reduction did not settle within %d steps" % REDUCE_CAP,
            REDUCE_CAP,
        )

    def reduce(self, f):
        reduced, _ = self.reduce_frame(f)
        return self.point_from_frame(reduced)

    def point_from_frame(self, f):
        tangent = frame_to_tangent(f)
        return QuotientPoint(
            self.name,
            (tangent.base.re, tangent.base.im, tangent.direction),
            frame=f,
        )

    def in_domain(self, z, slack=_BOUNDARY_SLACK):
        z = complex(z)
        return abs(z.real) <= 0.5 + slack and abs(z) >= 1.0 - slack

    def points_close(self, p, q, tol=1e-9):
        f, g = p.frame, q.frame
        if f.close_to(g, tol):
            return True
        for letter in self.letters:
            if letter.mul(f).close_to(g, tol):
                return True
        return False

    def sample_point(self, rng):
        f = (
            MoebiusElement.u(rng.uniform(-2.0, 2.0))
            .mul(MoebiusElement.geo(math.sqrt(rng.uniform(0.3, 3.0))))
            .mul(MoebiusElement.rot(rng.uniform(-math.pi, math.pi)))
        )
        reduced, _ = self.reduce_frame(f)
        return self.point_from_frame(reduced)

    def coord_names(self):
        return ("re", "im", "direction")

    def coverage_box(self):
        """Window over the finite-area part of the domain.

        The domain runs to infinity up the cusp; statistics are collected
        over a fixed window covering the region below the height where the
        cusp neighborhood carries negligible area.
        """
        return ((-0.5, 0.5), (0.5 * math.sqrt(3.0), 3.0))


def build_modular():
    return ModularModel()


def modular_reduce(z):
    """Reduce a half-plane point into the standard fundamental domain."""
    return ModularModel().reduce_point(z)
