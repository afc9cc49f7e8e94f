#pragma once

#include <array>
#include <functional>

#include "cmr/annulus.hpp"

namespace cmr {

/// Pointwise analytic map of a neighborhood of 0. Wraps lifts, lifts with a
/// small non-periodic polynomial part (almost-commuting seeds), and chart
/// conjugations that have no global Fourier representation.
struct PointMap {
    std::function<cplx(cplx)> f;
    cplx operator()(cplx z) const { return f(z); }

    static PointMap from_lift(const AnnulusLift& h);
    /// h(z) + c2 z^2 + c3 z^3
    static PointMap from_lift_with_poly(const AnnulusLift& h, cplx c2, cplx c3);
    static PointMap composed(const PointMap& outer, const PointMap& inner);
};

/// Commutator data [eta, xi](z) = eta(xi(z)) - xi(eta(z)) at 0: value, first
/// and second derivative, taken spectrally (Cauchy coefficients on a small
/// circle). The o(z^2) condition of almost-commuting pairs is exactly the
/// vanishing of this triple.
struct DefectTriple {
    cplx value{0.0, 0.0};
    cplx d1{0.0, 0.0};
    cplx d2{0.0, 0.0};
    double norm() const;
};

struct DefectOptions {
    double radius = 0.1;
    int samples = 64;
};

DefectTriple commutation_defect(const PointMap& eta, const PointMap& xi,
                                const DefectOptions& opt = {});
DefectTriple commutation_defect(const AnnulusLift& eta, const AnnulusLift& xi,
                                const DefectOptions& opt = {});

/// Taylor coefficients a_0..a_{order} of an analytic map at 0 via Cauchy
/// integrals on |z| = radius.
std::vector<cplx> taylor_at_zero(const PointMap& g, int order, double radius = 0.1,
                                 int samples = 64);

}  // namespace cmr
