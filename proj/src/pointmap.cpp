#include "cmr/pointmap.hpp"

#include <cmath>

namespace cmr {

PointMap PointMap::from_lift(const AnnulusLift& h) {
    return PointMap{[h](cplx z) { return h.eval_unchecked(z); }};
}

PointMap PointMap::from_lift_with_poly(const AnnulusLift& h, cplx c2, cplx c3) {
    return PointMap{[h, c2, c3](cplx z) { return h.eval_unchecked(z) + c2 * z * z + c3 * z * z * z; }};
}

PointMap PointMap::composed(const PointMap& outer, const PointMap& inner) {
    return PointMap{[outer, inner](cplx z) { return outer(inner(z)); }};
}

double DefectTriple::norm() const {
    return std::sqrt(std::norm(value) + std::norm(d1) + std::norm(d2));
}

std::vector<cplx> taylor_at_zero(const PointMap& g, int order, double radius, int samples) {
    std::vector<cplx> vals(static_cast<std::size_t>(samples));
    for (int m = 0; m < samples; ++m) {
        const double th = kTwoPi * m / samples;
        vals[static_cast<std::size_t>(m)] = g(radius * cplx{std::cos(th), std::sin(th)});
    }
    std::vector<cplx> a(static_cast<std::size_t>(order) + 1);
    for (int j = 0; j <= order; ++j) {
        cplx acc{0.0, 0.0};
        for (int m = 0; m < samples; ++m) {
            const double th = -kTwoPi * j * m / samples;
            acc += vals[static_cast<std::size_t>(m)] * cplx{std::cos(th), std::sin(th)};
        }
        a[static_cast<std::size_t>(j)] = acc / (static_cast<double>(samples) * std::pow(radius, j));
    }
    return a;
}

DefectTriple commutation_defect(const PointMap& eta, const PointMap& xi,
                                const DefectOptions& opt) {
    PointMap comm{[&eta, &xi](cplx z) { return eta(xi(z)) - xi(eta(z)); }};
    const auto a = taylor_at_zero(comm, 2, opt.radius, opt.samples);
    DefectTriple t;
    t.value = a[0];
    t.d1 = a[1];
    t.d2 = 2.0 * a[2];
    return t;
}

DefectTriple commutation_defect(const AnnulusLift& eta, const AnnulusLift& xi,
                                const DefectOptions& opt) {
    (void)opt;
    // composed series differ by a periodic function; its derivatives at 0 are
    // mode sums, so only real-circle data enters (no boundary amplification)
    FourierSeries d = compose(eta, xi).displacement();
    d -= compose(xi, eta).displacement();
    DefectTriple t;
    for (int k = -d.degree(); k <= d.degree(); ++k) {
        const cplx ck = d.coeff(k);
        const cplx ik = kI * (kTwoPi * k);
        t.value += ck;
        t.d1 += ik * ck;
        t.d2 += ik * ik * ck;
    }
    return t;
}

}  // namespace cmr
