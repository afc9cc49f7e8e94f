#include "cmr/annulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cmr {

cplx AnnulusLift::eval(cplx z) const {
    if (std::abs(z.imag()) > eps() + 1e-12) {
        throw DomainError("eval: point outside certified strip (|Im z| = " +
                          std::to_string(std::abs(z.imag())) + ", eps = " + std::to_string(eps()) + ")");
    }
    return z + disp_.eval(z);
}

FourierSeries AnnulusLift::derivative() const {
    FourierSeries d = disp_.derivative();
    d.set_mean(d.mean() + 1.0);
    return d;
}

double AnnulusLift::min_derivative_modulus(double height) const {
    const FourierSeries d = derivative();
    const int N = std::max(composition_grid(degree()), 64);
    double m = std::numeric_limits<double>::max();
    for (int j = 0; j < N; ++j) {
        const double x = static_cast<double>(j) / N;
        m = std::min(m, std::abs(d.eval(cplx{x, 0.0})));
        if (height > 0.0) {
            m = std::min(m, std::abs(d.eval(cplx{x, height})));
            m = std::min(m, std::abs(d.eval(cplx{x, -height})));
        }
    }
    return m;
}

double AnnulusLift::top_mode_ratio() const {
    const int M = degree();
    if (M == 0) return 0.0;
    double scale = std::abs(mean());
    for (int k = 1; k <= M; ++k) {
        scale = std::max({scale, std::abs(disp_.coeff(k)), std::abs(disp_.coeff(-k))});
    }
    if (scale == 0.0) return 0.0;
    const double top = std::max(std::abs(disp_.coeff(M)), std::abs(disp_.coeff(-M)));
    return top / scale;
}

AnnulusLift compose(const AnnulusLift& f, const AnnulusLift& g, const ComposeOptions& opt) {
    // composition generates harmonics beyond the input degrees; work at the
    // full configured degree and let coefficient decay control the tail
    const int M = std::max(opt.max_degree, std::max(f.degree(), g.degree()));
    const int N = composition_grid(M);
    std::vector<cplx> disp(static_cast<std::size_t>(N));
    double max_im = 0.0;
    double scale = 1.0;
    for (int j = 0; j < N; ++j) {
        const cplx x{static_cast<double>(j) / N, 0.0};
        const cplx w = g.eval_unchecked(x);
        max_im = std::max(max_im, std::abs(w.imag()));
        if (std::abs(w.imag()) > opt.escape_margin * f.eps()) {
            throw DomainError("compose: inner map leaves the outer strip (|Im| = " +
                              std::to_string(std::abs(w.imag())) + ")");
        }
        disp[static_cast<std::size_t>(j)] = f.eval_unchecked(w) - x;
        scale = std::max(scale, std::abs(disp[static_cast<std::size_t>(j)]));
    }
    const double eps_out = std::min(g.eps(), f.eps() - max_im);
    // DFT noise floor ~ sqrt(N) eps_mach * scale; modes below it are not signal
    const double floor = 2.0 * std::numeric_limits<double>::epsilon() * std::sqrt(N) * scale;
    return AnnulusLift(FourierSeries::from_samples(eps_out, M, disp).chopped(floor));
}

AnnulusLift iterate_lift(const AnnulusLift& f, long long n, const ComposeOptions& opt) {
    if (n < 1) throw DomainError("iterate_lift: n must be >= 1");
    // binary exponentiation under composition
    AnnulusLift acc;
    bool have = false;
    AnnulusLift pow2 = f;
    long long m = n;
    while (m > 0) {
        if (m & 1) {
            acc = have ? compose(acc, pow2, opt) : pow2;
            have = true;
        }
        m >>= 1;
        if (m > 0) pow2 = compose(pow2, pow2, opt);
    }
    return acc;
}

AnnulusLift inverse(const AnnulusLift& f, const InverseOptions& opt) {
    const double dmin = f.min_derivative_modulus(0.0);
    if (dmin <= opt.min_derivative) {
        throw NumericalError("inverse: map too close to critical (min |f'| = " +
                             std::to_string(dmin) + ")");
    }
    const int M = std::max(opt.max_degree, f.degree());
    const int N = composition_grid(M);
    const FourierSeries fp = f.derivative();
    std::vector<cplx> disp(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        const cplx x{static_cast<double>(j) / N, 0.0};
        cplx w = x - f.mean();
        bool ok = false;
        for (int it = 0; it < opt.newton_cap; ++it) {
            const cplx r = f.eval_unchecked(w) - x;
            if (std::abs(r) < opt.tol) {
                ok = true;
                break;
            }
            w -= r / fp.eval(w);
        }
        if (!ok && std::abs(f.eval_unchecked(w) - x) > 1e3 * opt.tol) {
            throw NumericalError("inverse: Newton failed to converge at grid point " +
                                 std::to_string(j));
        }
        disp[static_cast<std::size_t>(j)] = w - x;
    }
    double scale = 1.0;
    for (const cplx& d : disp) scale = std::max(scale, std::abs(d));
    const double floor = 2.0 * std::numeric_limits<double>::epsilon() * std::sqrt(N) * scale;
    return AnnulusLift(FourierSeries::from_samples(f.eps(), M, disp).chopped(floor));
}

double lift_norm(const AnnulusLift& f, double height) {
    if (height < 0.0 || height > f.eps() + 1e-12) {
        throw DomainError("lift_norm: height outside certified strip");
    }
    return f.displacement().sup_norm(height);
}

double distance(const AnnulusLift& f, const AnnulusLift& g, double height) {
    FourierSeries d = f.displacement();
    d -= g.displacement();
    return d.sup_norm(height);
}

TruncateResult truncate(const AnnulusLift& f, int m) {
    if (m < 1) throw DomainError("truncate: degree must be >= 1");
    TruncateResult r;
    r.value = AnnulusLift(f.displacement().truncated(m, &r.tail));
    return r;
}

}  // namespace cmr
