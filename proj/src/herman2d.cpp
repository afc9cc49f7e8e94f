#include "cmr/herman2d.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace cmr {

Map2D::Map2D(double eps, int kmax, int wdeg)
    : eps_(eps), kmax_(kmax), wdeg_(wdeg),
      P_(static_cast<std::size_t>(2 * kmax + 1) * (wdeg + 1), cplx{0.0, 0.0}),
      Q_(static_cast<std::size_t>(2 * kmax + 1) * (wdeg + 1), cplx{0.0, 0.0}) {
    if (eps <= 0.0) throw DomainError("Map2D: nonpositive radius");
    if (kmax < 0 || wdeg < 0) throw DomainError("Map2D: negative degree bounds");
}

std::size_t Map2D::index(int k, int m) const {
    if (k < -kmax_ || k > kmax_ || m < 0 || m > wdeg_) throw DomainError("Map2D: index out of range");
    return static_cast<std::size_t>((k + kmax_) * (wdeg_ + 1) + m);
}

std::pair<cplx, cplx> Map2D::apply(cplx z, cplx w) const {
    const cplx u = std::exp(kI * kTwoPi * z);
    const cplx v = 1.0 / u;
    cplx pz{0.0, 0.0}, qz{0.0, 0.0};
    for (int k = -kmax_; k <= kmax_; ++k) {
        // Horner in w for this z-mode
        cplx pk{0.0, 0.0}, qk{0.0, 0.0};
        for (int m = wdeg_; m >= 0; --m) {
            pk = pk * w + P_[index(k, m)];
            qk = qk * w + Q_[index(k, m)];
        }
        cplx e{1.0, 0.0};
        if (k > 0) e = std::pow(u, k);
        if (k < 0) e = std::pow(v, -k);
        pz += pk * e;
        qz += qk * e;
    }
    return {z + pz, qz};
}

double Map2D::dissipation_bound(int zsamples, int wsamples) const {
    double worst = 0.0;
    for (int i = 0; i < zsamples; ++i) {
        const cplx z{static_cast<double>(i) / zsamples, 0.0};
        for (int j = 0; j < wsamples; ++j) {
            const double r = 0.9 * eps_ * (static_cast<double>(j) + 0.5) / wsamples;
            const cplx w{r, 0.0};
            const cplx u = std::exp(kI * kTwoPi * z);
            cplx dq{0.0, 0.0};
            for (int k = -kmax_; k <= kmax_; ++k) {
                cplx e{1.0, 0.0};
                if (k > 0) e = std::pow(u, k);
                if (k < 0) e = std::pow(1.0 / u, -k);
                for (int m = 1; m <= wdeg_; ++m) {
                    dq += static_cast<double>(m) * Q_[index(k, m)] * std::pow(w, m - 1) * e;
                }
            }
            worst = std::max(worst, std::abs(dq));
        }
    }
    return worst;
}

Map2D example_family(double t, double a, double c, double d, double e, double eps) {
    if (!(std::abs(d) < 1.0)) throw DomainError("example_family: |d| must be < 1 (dissipation)");
    if (!(a >= 0.0 && a < 1.0)) throw DomainError("example_family: a must satisfy 0 <= a < 1");
    Map2D F(eps, 1, 1);
    const cplx sin_coeff = cplx{1.0, 0.0} / (2.0 * kTwoPi * kI);  // sin(2 pi z)/(2 pi) modes
    F.p(0, 0) = cplx{t, 0.0};
    F.p(1, 0) = a * sin_coeff;
    F.p(-1, 0) = -a * sin_coeff;
    F.p(0, 1) = cplx{c, 0.0};
    F.q(0, 1) = cplx{d, 0.0};
    F.q(1, 0) = e * sin_coeff;
    F.q(-1, 0) = -e * sin_coeff;
    return F;
}

Embedded2D embed(const AnnulusLift& h) { return Embedded2D{h}; }

Flow2D as_flow(const Map2D& F) {
    return Flow2D{[F](cplx z, cplx w) { return F.apply(z, w); }, F.eps(), false};
}

Flow2D as_flow(const Embedded2D& F) {
    return Flow2D{[F](cplx z, cplx w) { return F.apply(z, w); }, F.h.eps(), true};
}

Orbit2D attractor_orbit(const Flow2D& F, cplx z0, cplx w0, int burn_in, int N,
                        const Orbit2DOptions& opt) {
    Orbit2D out;
    cplx z = z0, w = w0;
    auto escaped = [&](cplx zz, cplx ww) {
        if (std::abs(zz.imag()) > opt.escape_margin * F.eps) return true;
        if (!F.diagonal && std::abs(ww) > opt.escape_margin * F.eps) return true;
        return false;
    };
    if (escaped(z, w)) throw DomainError("attractor_orbit: start point outside Delta_eps");

    for (int j = 0; j < burn_in; ++j) {
        auto [zn, wn] = F.apply(z, w);
        if (escaped(zn, wn)) {
            out.escaped = true;
            out.escape_index = j;
            return out;
        }
        const double shift = std::floor(zn.real());
        z = zn - shift;
        w = F.diagonal ? wn - shift : wn;
    }
    out.z.reserve(static_cast<std::size_t>(N));
    out.w.reserve(static_cast<std::size_t>(N));
    double wmax = 0.0;
    bool moving = false;
    // record accumulated lift values while iterating the reduced representative
    double wraps = std::floor(z.real());
    z -= wraps;
    if (F.diagonal) w -= wraps;
    for (int j = 0; j < N; ++j) {
        out.z.push_back(z + wraps);
        out.w.push_back(F.diagonal ? w + wraps : w);
        wmax = std::max(wmax, std::abs(w));
        auto [zn, wn] = F.apply(z, w);
        if (escaped(zn, wn)) {
            out.escaped = true;
            out.escape_index = burn_in + j;
            return out;
        }
        if (std::abs(zn - z) > opt.fixed_point_tol) moving = true;
        const double shift = std::floor(zn.real());
        wraps += shift;
        z = zn - shift;
        w = F.diagonal ? wn - shift : wn;
    }
    out.fixed_point = !moving;
    out.w_amplitude = wmax;
    return out;
}

namespace {

double bump(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t)));
}

cplx weighted_birkhoff_2d(const Flow2D& F, cplx z0, cplx w0, long long N) {
    cplx z = z0, w = w0;
    cplx acc{0.0, 0.0};
    double wsum = 0.0;
    for (long long j = 0; j < N; ++j) {
        const double wt = bump((static_cast<double>(j) + 0.5) / static_cast<double>(N));
        auto [zn, wn] = F.apply(z, w);
        acc += wt * (zn - z);
        wsum += wt;
        // iterate on the reduced representative (diagonal fibers carry the
        // base point, so they reduce along with it)
        const double shift = std::floor(zn.real());
        z = zn - shift;
        w = F.diagonal ? wn - shift : wn;
    }
    return acc / wsum;
}

}  // namespace

RotationEstimate rotation_number_2d(const Flow2D& F, double target_accuracy, int burn_in,
                                    long long budget) {
    // settle on the attractor first, then average displacements
    cplx z{0.0, 0.0}, w{0.0, 0.0};
    for (int j = 0; j < burn_in; ++j) {
        auto [zn, wn] = F.apply(z, w);
        if (std::abs(zn.imag()) > 0.95 * F.eps || (!F.diagonal && std::abs(wn) > 0.95 * F.eps)) {
            throw NumericalError("rotation_number_2d: orbit escaped Delta_eps during burn-in");
        }
        const double shift = std::floor(zn.real());
        z = zn - shift;
        w = F.diagonal ? wn - shift : wn;
    }
    RotationEstimate est;
    est.method = "birkhoff";
    long long N = 4096;
    cplx prev = weighted_birkhoff_2d(F, z, w, N / 2);
    cplx cur = weighted_birkhoff_2d(F, z, w, N);
    long long used = N + N / 2;
    double err = std::abs(cur - prev) * 4.0 + 1e-15;
    while (err > target_accuracy && 2 * N <= budget) {
        N *= 2;
        prev = cur;
        cur = weighted_birkhoff_2d(F, z, w, N);
        used += N;
        err = std::abs(cur - prev) * 4.0 + 1e-15;
    }
    est.value = frac(cur.real());
    est.im_drift = cur.imag();
    est.error_bound = err;
    est.iterates_used = used + burn_in;
    est.converged = err <= target_accuracy;
    return est;
}

Shoot2DResult shoot2d(const std::function<Flow2D(double)>& family, const CFTarget& alpha,
                      double lo, double hi, const Shoot2DOptions& opt) {
    if (static_cast<int>(alpha.terms.size()) < opt.min_target_depth) {
        throw DomainError("shoot2d: target prefix too short (rational at working resolution)");
    }
    if (!(lo < hi)) throw DomainError("shoot2d: empty bracket");

    auto eval_point = [&](double s, double acc) {
        RotationEstimate est = rotation_number_2d(family(s), acc, opt.burn_in, opt.rho_budget);
        int depth = 0;
        const int cmp = cf_compare(est.value, est.error_bound, alpha, &depth);
        return std::tuple<int, int, RotationEstimate>(cmp, depth, est);
    };

    auto acc_for = [](double width) { return std::clamp(width * 0.02, 5e-13, 1e-6); };

    auto [clo, dlo, elo] = eval_point(lo, acc_for(hi - lo));
    auto [chi, dhi, ehi] = eval_point(hi, acc_for(hi - lo));
    int depth = std::max(dlo, dhi);
    if (clo == 0) return {lo, hi - lo, dlo};
    if (chi == 0) return {hi, hi - lo, dhi};
    if (clo == chi) {
        if (std::abs(elo.value - ehi.value) < 1e-11) {
            throw NumericalError("shoot2d: rotation number locked across the bracket (tongue "
                                 "plateau); no crossing");
        }
        throw DomainError("shoot2d: no sign change over the bracket");
    }
    if (clo > 0) std::swap(lo, hi);

    int it = 0;
    while (std::abs(hi - lo) > opt.bracket_tol && it < opt.max_bisections) {
        const double mid = 0.5 * (lo + hi);
        auto [cm, dm, em] = eval_point(mid, acc_for(std::abs(hi - lo)));
        (void)em;
        depth = std::max(depth, dm);
        if (cm == 0) {
            lo = hi = mid;
            break;
        }
        if (cm < 0) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++it;
    }
    Shoot2DResult r;
    r.s_star = 0.5 * (lo + hi);
    r.bracket_width = std::abs(hi - lo);
    auto [cf_, df_, ef_] = eval_point(r.s_star, 5e-13);
    (void)cf_;
    (void)ef_;
    r.certificate_depth = std::max(depth, df_);
    return r;
}

HermanCertificate certify_herman(const Flow2D& F, const CFTarget& alpha, int N, int modes,
                                 const CertifyOptions& opt) {
    HermanCertificate cert;
    cert.modes = modes;
    cert.w_is_lift = F.diagonal;

    cert.rho = rotation_number_2d(F, 1e-12, opt.burn_in, opt.rho_budget);
    const double a = alpha.value();

    Orbit2D orb = attractor_orbit(F, cplx{0.0, 0.0}, cplx{0.0, 0.0}, opt.burn_in, N);
    if (orb.escaped) throw NumericalError("certify_herman: attractor orbit escaped Delta_eps");
    if (orb.fixed_point) {
        throw NumericalError("certify_herman: orbit converged to a fixed point (resonance)");
    }

    // rebase the lift frame so the recorded tail starts in [0,1); the fit is
    // rotation-gauge covariant, so assigning angle {j alpha} to point j picks
    // one valid parametrization
    const double base = std::floor(orb.z.front().real());
    std::vector<double> theta(orb.z.size());
    std::vector<cplx> yz(orb.z.size()), yw(orb.z.size());
    for (std::size_t j = 0; j < orb.z.size(); ++j) {
        theta[j] = frac(a * static_cast<double>(j));
        const double ja = a * static_cast<double>(j);
        yz[j] = orb.z[j] - base - ja;
        yw[j] = F.diagonal ? orb.w[j] - base - ja : orb.w[j];
    }
    cert.Z = fourier_fit(theta, yz, modes, F.eps);
    cert.W = fourier_fit(theta, yw, modes, F.eps);

    double res = 0.0;
    for (int s = 0; s < opt.fresh_samples; ++s) {
        const double th = static_cast<double>(s) / opt.fresh_samples;
        const cplx zc = th + cert.Z.eval(cplx{th, 0.0});
        const cplx wc = F.diagonal ? th + cert.W.eval(cplx{th, 0.0}) : cert.W.eval(cplx{th, 0.0});
        auto [zn, wn] = F.apply(zc, wc);
        const double thn = th + a;
        const cplx zexp = thn + cert.Z.eval(cplx{thn, 0.0});
        const cplx wexp = F.diagonal ? thn + cert.W.eval(cplx{thn, 0.0})
                                     : cert.W.eval(cplx{thn, 0.0});
        res = std::max(res, std::abs(zn - zexp));
        res = std::max(res, std::abs(wn - wexp));
    }
    cert.residual = res;

    const double dz = coefficient_decay_rate(cert.Z);
    const double dw = coefficient_decay_rate(cert.W);
    cert.decay_rate = std::max(dz, dw);
    cert.passed = cert.residual <= opt.residual_tol && cert.decay_rate <= opt.decay_tol &&
                  cert.decay_rate >= 0.0;
    return cert;
}

void canonicalize_certificate(HermanCertificate& cert) {
    // the fit is unique up to theta -> theta + c; spend the gauge on zeroing
    // the real part of the Z-mean: psi'(theta) = psi(theta - c) with c = Re Z_0
    const double c = cert.Z.mean().real();
    if (std::abs(c) < 1e-15) return;
    cert.Z = cert.Z.shifted(cplx{c, 0.0});
    cert.Z.set_mean(cert.Z.mean() - c);
    cert.W = cert.W.shifted(cplx{c, 0.0});
    if (cert.w_is_lift) cert.W.set_mean(cert.W.mean() - c);
}

}  // namespace cmr
