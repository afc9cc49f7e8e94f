#include "cmr/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cmr/cfrac.hpp"

namespace cmr {

OrbitSample orbit(const AnnulusLift& f, cplx z0, int N) {
    if (std::abs(z0.imag()) > f.eps()) throw DomainError("orbit: start point outside strip");
    OrbitSample s;
    s.points.reserve(static_cast<std::size_t>(N) + 1);
    s.wraps.reserve(static_cast<std::size_t>(N) + 1);
    cplx z = z0;
    for (int j = 0; j <= N; ++j) {
        s.points.push_back(z);
        s.wraps.push_back(static_cast<long long>(std::floor(z.real())));
        s.height_bound = std::max(s.height_bound, std::abs(z.imag()));
        if (std::abs(z.imag()) > kEscapeMargin * f.eps()) {
            s.escaped = true;
            s.escape_index = j;
            break;
        }
        if (j < N) z = f.eval_unchecked(z);
    }
    return s;
}

namespace {

// Exponential bump window for weighted Birkhoff averages.
double bump(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t)));
}

// Weighted displacement average over N iterates starting at 0. The orbit is
// iterated on the reduced representative (Re z wrapped into [0,1)): the lift
// commutes with integer translations exactly, and small representatives keep
// displacement roundoff at machine scale over long orbits.
cplx weighted_birkhoff(const AnnulusLift& f, long long N) {
    cplx z{0.0, 0.0};
    cplx acc{0.0, 0.0};
    double wsum = 0.0;
    for (long long j = 0; j < N; ++j) {
        const double w = bump((static_cast<double>(j) + 0.5) / static_cast<double>(N));
        const cplx zn = f.eval_unchecked(z);
        acc += w * (zn - z);
        wsum += w;
        z = cplx{frac(zn.real()), zn.imag()};
    }
    return acc / wsum;
}

void require_monotone(const AnnulusLift& f) {
    if (!f.is_real_symmetric(1e-10)) return;  // complex perturbations carry no circle order
    const FourierSeries d = f.derivative();
    const int N = std::max(composition_grid(f.degree()), 64);
    for (int j = 0; j < N; ++j) {
        if (d.eval(cplx{static_cast<double>(j) / N, 0.0}).real() <= 0.0) {
            throw NumericalError("rotation_number: lift is not monotone on the circle "
                                 "(not a homeomorphism)");
        }
    }
}

}  // namespace

cplx rotation_number_complex(const AnnulusLift& f, long long N) {
    return weighted_birkhoff(f, N);
}

RotationEstimate rotation_number(const AnnulusLift& f, double target_accuracy,
                                 const RotationOptions& opt) {
    if (target_accuracy <= 0.0) throw DomainError("rotation_number: nonpositive accuracy");
    require_monotone(f);

    RotationEstimate est;
    est.method = "birkhoff";

    if (opt.fixed_iterates > 0) {
        const cplx a = weighted_birkhoff(f, opt.fixed_iterates);
        const cplx b = weighted_birkhoff(f, opt.fixed_iterates / 2);
        est.value = frac(a.real());
        est.im_drift = a.imag();
        est.error_bound = std::abs(a - b) + 1e-15;
        est.iterates_used = opt.fixed_iterates + opt.fixed_iterates / 2;
        est.converged = est.error_bound <= target_accuracy;
        return est;
    }

    long long N = opt.initial_iterates;
    cplx prev = weighted_birkhoff(f, N / 2);
    cplx cur = weighted_birkhoff(f, N);
    long long used = N + N / 2;
    double err = std::abs(cur - prev) * 4.0 + 1e-15;
    while (err > target_accuracy && 2 * N <= opt.budget) {
        N *= 2;
        prev = cur;
        cur = weighted_birkhoff(f, N);
        used += N;
        err = std::abs(cur - prev) * 4.0 + 1e-15;
    }
    est.value = frac(cur.real());
    est.im_drift = cur.imag();
    est.error_bound = err;
    est.iterates_used = used;
    est.converged = err <= target_accuracy;

    if (!est.converged) {
        RotationEstimate alt = rotation_number_convergent(f, target_accuracy, opt.budget);
        if (alt.error_bound < est.error_bound) return alt;
    }
    return est;
}

RotationEstimate rotation_number_convergent(const AnnulusLift& f, double target_accuracy,
                                            long long max_iterates) {
    require_monotone(f);
    RotationEstimate est;
    est.method = "convergent-accelerated";

    // one long orbit on the reduced representative; accumulate the lift value
    const long long N = max_iterates;
    std::vector<double> lift(static_cast<std::size_t>(N) + 1);
    cplx z{0.0, 0.0};
    double accum = 0.0;
    lift[0] = 0.0;
    for (long long j = 1; j <= N; ++j) {
        const cplx zn = f.eval_unchecked(z);
        accum += (zn - z).real();
        lift[static_cast<std::size_t>(j)] = accum;
        z = cplx{frac(zn.real()), zn.imag()};
    }
    est.im_drift = z.imag();
    const double rough = frac(lift[static_cast<std::size_t>(N)] / static_cast<double>(N));
    if (rough < 1e-9 || rough > 1.0 - 1e-9) {
        // fixed point / integer rotation number: the plain average is exact-ish
        est.value = frac(rough);
        est.error_bound = 2.0 / static_cast<double>(N);
        est.iterates_used = N;
        est.converged = est.error_bound <= target_accuracy;
        return est;
    }

    // closest-return times from the continued fraction of the rough estimate
    CFExpansion cf = expand(rough, 30);
    auto conv = convergents(cf);
    std::vector<double> qa, ra;  // Richardson pairs (q_n, A_{q_n})
    for (std::size_t i = 1; i < conv.size(); ++i) {
        const long long q = conv[i].q;
        if (q > N) break;
        qa.push_back(static_cast<double>(q));
        ra.push_back(lift[static_cast<std::size_t>(q)] / static_cast<double>(q));
    }
    if (qa.size() < 3) {
        est.value = rough;
        est.error_bound = 2.0 / static_cast<double>(N);
        est.iterates_used = N;
        est.converged = est.error_bound <= target_accuracy;
        return est;
    }
    // A_q = rho + c/q^2 along closest returns; eliminate the leading term
    std::vector<double> rich;
    for (std::size_t i = 1; i < qa.size(); ++i) {
        const double q2a = qa[i] * qa[i], q2b = qa[i - 1] * qa[i - 1];
        rich.push_back((q2a * ra[i] - q2b * ra[i - 1]) / (q2a - q2b));
    }
    const double best = rich.back();
    const double spread =
        rich.size() >= 2 ? std::abs(rich.back() - rich[rich.size() - 2]) : 1.0 / qa.back();
    est.value = frac(best);
    est.error_bound = spread + 1e-15;
    est.iterates_used = N;
    est.converged = est.error_bound <= target_accuracy;
    return est;
}

AnnulusLift arnold(double t, double a, double eps) {
    if (!(a >= 0.0 && a < 1.0)) throw DomainError("arnold: coupling must satisfy 0 <= a < 1");
    FourierSeries d(eps, 1);
    d.set_mean(cplx{t, 0.0});
    // (a/2pi) sin(2 pi z) = (a/(4 pi i)) e^{2 pi i z} - (a/(4 pi i)) e^{-2 pi i z}
    const cplx c1 = cplx{a, 0.0} / (2.0 * kTwoPi * kI);
    d.set_coeff(1, c1);
    d.set_coeff(-1, -c1);
    return AnnulusLift(d);
}

AnnulusLift translated(const AnnulusLift& f, cplx w) {
    if (std::abs(w.imag()) >= f.eps()) throw DomainError("translated: |Im w| exceeds strip height");
    FourierSeries d = f.displacement().shifted(w);
    d.set_eps(f.eps() - std::abs(w.imag()));
    return AnnulusLift(d);
}

AnnulusLift rotated(const AnnulusLift& f, cplx zeta) {
    AnnulusLift g = f;
    g.set_mean(g.mean() + zeta);
    return g;
}

CircleCurve invariant_circle(const AnnulusLift& f, double alpha, int N) {
    OrbitSample s = orbit(f, cplx{0.0, 0.0}, N);
    if (s.escaped) {
        throw NumericalError("invariant_circle: orbit escaped the strip at iterate " +
                             std::to_string(s.escape_index) + " (map not on the stable manifold)");
    }
    std::vector<std::size_t> idx(s.points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> ang(s.points.size());
    for (std::size_t j = 0; j < ang.size(); ++j) ang[j] = frac(alpha * static_cast<double>(j));
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ang[a] < ang[b]; });

    CircleCurve c;
    c.angles.reserve(idx.size());
    c.points.reserve(idx.size());
    double prev = -1.0;
    for (std::size_t j : idx) {
        if (std::abs(ang[j] - prev) < 1e-12) {
            throw NumericalError("invariant_circle: angle collision (rotation number rational at "
                                 "this resolution)");
        }
        prev = ang[j];
        c.angles.push_back(ang[j]);
        const cplx z = s.points[j];
        c.points.push_back(cplx{frac(z.real()), z.imag()});
    }
    return c;
}

}  // namespace cmr
