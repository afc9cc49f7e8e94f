#include "cmr/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace cmr {

FourierSeries solve_cohomological(const FourierSeries& v, cplx alpha,
                                  const CohomologicalOptions& opt) {
    if (std::abs(v.mean()) > opt.mean_tol) {
        throw DomainError("solve_cohomological: nonzero mean " + std::to_string(std::abs(v.mean())) +
                          " obstructs solvability (input must be a zero-average field)");
    }
    const int M = v.degree();
    FourierSeries h(v.eps(), M);
    std::vector<int> bad;
    for (int k = -M; k <= M; ++k) {
        if (k == 0) continue;
        const cplx vk = v.coeff(k);
        const cplx divisor = std::exp(kI * (kTwoPi * k) * alpha) - 1.0;
        if (std::abs(divisor) < opt.divisor_floor) {
            if (std::abs(vk) > 0.0) bad.push_back(k);
            continue;
        }
        h.set_coeff(k, vk / divisor);
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << "solve_cohomological: resonant divisors at modes";
        for (int k : bad) os << ' ' << k;
        throw NumericalError(os.str());
    }
    return h;
}

double deformation_check(const FourierSeries& h, double alpha, cplx zeta) {
    FourierSeries zh = h;
    zh *= zeta;
    const AnnulusLift phi(zh);
    const AnnulusLift conj =
        compose(compose(phi, AnnulusLift::rotation(h.eps(), alpha)), inverse(phi));
    // predicted first order: R_alpha + zeta (h(.+alpha) - h(.))
    FourierSeries pred = h.shifted(cplx{-alpha, 0.0});
    pred -= h;
    pred *= zeta;
    pred.set_mean(pred.mean() + alpha);
    FourierSeries diff = conj.displacement();
    diff -= pred;
    return diff.sup_norm(0.0);
}

ConjugacyChart kam_linearize(const AnnulusLift& f, cplx alpha, double eps_target,
                             const KamOptions& opt) {
    const double eps0 = f.eps();
    if (eps_target <= 0.0) eps_target = eps0 / 2.0;
    if (eps_target > eps0) throw DomainError("kam_linearize: target height exceeds input strip");

    ConjugacyChart chart;
    AnnulusLift fj = f;
    AnnulusLift acc = AnnulusLift::identity(eps0);  // phi_0 o phi_1 o ... (inverse chart)
    bool have_acc = false;

    const double initial_dist = distance(f, AnnulusLift::rotation(eps0, alpha), eps_target);
    double mean_sum = 0.0;
    double height = eps0;
    const int iters = opt.fixed_iterations > 0 ? opt.fixed_iterations : opt.max_iterations;
    ComposeOptions comp{opt.max_degree, 0.95};

    for (int j = 0; j < iters; ++j) {
        const double delta_j = (eps0 / 4.0) * std::pow(2.0, -static_cast<double>(j));
        const double next_height = std::max(height - delta_j, eps_target);

        FourierSeries u = fj.displacement();
        const cplx mj = u.mean() - alpha;
        FourierSeries v = u;
        v.set_mean(cplx{0.0, 0.0});
        const double vnorm = v.sup_norm(std::min(next_height, v.eps()));

        chart.error_sequence.push_back(vnorm);
        chart.mean_corrections.push_back(std::abs(mj));
        mean_sum += std::abs(mj);

        if (opt.fixed_iterations == 0) {
            const auto& e = chart.error_sequence;
            if (vnorm + std::abs(mj) < opt.stop_tol) break;
            // resolution floor: tiny norms that stop shrinking are spectral
            // noise, and further steps would pump it through the divisors
            if (j >= 1 && vnorm < 1e-9 && vnorm > 0.25 * e[j - 1]) break;
            if (mean_sum > opt.mean_budget_factor * std::max(initial_dist, 1e-9)) {
                throw NumericalError(
                    "kam_linearize: rotation corrections exceed budget -- off the stable manifold "
                    "(rho(f) != alpha at this resolution)");
            }
            if (j >= 2 && opt.throw_on_stall) {
                if (e[j] > 0.9 * e[j - 1] && e[j] > 1e3 * opt.stop_tol) {
                    throw NumericalError("kam_linearize: error norms stopped contracting at step " +
                                         std::to_string(j) + " (||v|| = " + std::to_string(e[j]) +
                                         ")");
                }
            }
        }

        FourierSeries h = solve_cohomological(v, alpha);
        h.set_eps(next_height);
        if (opt.fixed_iterations == 0 && h.sup_norm(next_height) > delta_j) {
            throw NumericalError("kam_linearize: correction exceeds the domain-loss budget at "
                                 "step " + std::to_string(j) +
                                 " (input too far from the rotation)");
        }
        const AnnulusLift phi(h);
        fj = compose(inverse(phi, {opt.max_degree, 50, 1e-14, 0.1}), compose(fj, phi, comp), comp);
        fj.set_eps(next_height);
        acc = have_acc ? compose(acc, phi, comp) : phi;
        have_acc = true;
        height = next_height;
        chart.iterations = j + 1;
    }

    AnnulusLift phi = have_acc ? inverse(acc, {opt.max_degree, 50, 1e-14, 0.1})
                               : AnnulusLift::identity(height);
    // normalize phi(0) = 0 by composing with a rotation
    phi.set_mean(phi.mean() - phi.eval_unchecked(cplx{0.0, 0.0}));
    phi.set_eps(height);
    chart.phi = phi;
    chart.height = height;

    // residual on fresh samples, independent of the iteration grid
    SplitMix64 rng(0x5eed0001ULL);
    double res = 0.0;
    for (int s = 0; s < opt.fresh_samples; ++s) {
        const cplx z{rng.uniform(), rng.uniform(-0.9 * height, 0.9 * height)};
        const cplx lhs = phi.eval_unchecked(f.eval_unchecked(z));
        const cplx rhs = phi.eval_unchecked(z) + alpha;
        res = std::max(res, std::abs(lhs - rhs));
    }
    chart.residual = res;
    return chart;
}

CFTarget CFTarget::golden(int depth) {
    CFTarget t;
    t.terms.assign(static_cast<std::size_t>(depth), 1);
    return t;
}

CFTarget CFTarget::silver(int depth) {
    CFTarget t;
    t.terms.assign(static_cast<std::size_t>(depth), 2);
    return t;
}

namespace {

// Sign of (x - target) by walking x's continued fraction against the target
// prefix with the alternating lexicographic order. A terminating remainder
// means x is the rational of the consumed prefix: its tail vanishes, which
// compares as an infinite term. Returns 0 when x agrees to the full prefix.
int cf_point_compare(double x, const CFTarget& target, int* matched_depth) {
    if (matched_depth) *matched_depth = 0;
    int parity = +1;  // +1: larger term at this depth => smaller value
    double rem = x;
    for (std::size_t d = 0; d < target.terms.size(); ++d) {
        const long long at = target.terms[d];
        long long a;
        if (rem < 1e-15) {
            a = std::numeric_limits<long long>::max();  // terminated: tail 0
        } else if (rem >= 1.0) {
            a = 0;  // tail fell outside (0,1): smaller than any valid term
        } else {
            a = static_cast<long long>(std::floor(1.0 / rem));
        }
        if (a != at) return a > at ? -parity : +parity;
        rem = 1.0 / rem - static_cast<double>(at);
        parity = -parity;
        if (matched_depth) *matched_depth = static_cast<int>(d) + 1;
    }
    return 0;
}

}  // namespace

int cf_compare(double value, double error, const CFTarget& target, int* matched_depth) {
    int dlo = 0, dhi = 0, dmid = 0;
    const int slo = cf_point_compare(value - error, target, &dlo);
    const int shi = cf_point_compare(value + error, target, &dhi);
    const int smid = cf_point_compare(value, target, &dmid);
    if (matched_depth) *matched_depth = dmid;
    if (slo == shi && slo != 0) return slo;
    if (slo == 0 && shi == 0) return 0;  // both endpoints on the prefix
    return 0;  // interval straddles the target at this resolution
}

namespace {

AnnulusLift with_mean(const AnnulusLift& f, double t) {
    AnnulusLift g = f;
    g.set_mean(cplx{t, 0.0});
    return g;
}

struct RhoEval {
    RotationEstimate est;
    int cmp = 0;
    int depth = 0;
};

RhoEval eval_family_point(const AnnulusLift& f, double t, const CFTarget& target,
                          double accuracy, long long budget) {
    RhoEval r;
    RotationOptions ro;
    ro.budget = budget;
    r.est = rotation_number(rotated(f, cplx{t, 0.0}), accuracy, ro);
    r.cmp = cf_compare(r.est.value, r.est.error_bound, target, &r.depth);
    return r;
}

}  // namespace

ShootingResult shoot(const AnnulusLift& f, const CFTarget& alpha, double lo, double hi,
                     const ShootOptions& opt) {
    if (static_cast<int>(alpha.terms.size()) < opt.min_target_depth) {
        throw DomainError("shoot: target prefix of depth " + std::to_string(alpha.terms.size()) +
                          " is rational at working resolution; irrational targets need >= " +
                          std::to_string(opt.min_target_depth) + " terms");
    }
    if (!(lo < hi)) throw DomainError("shoot: empty bracket");

    auto acc_for = [&](double width) {
        return std::clamp(width * 0.02, 1e-13, 1e-6);
    };

    RhoEval elo = eval_family_point(f, lo, alpha, acc_for(hi - lo), opt.rho_budget);
    RhoEval ehi = eval_family_point(f, hi, alpha, acc_for(hi - lo), opt.rho_budget);
    if (elo.cmp == 0) {
        return ShootingResult{lo, hi - lo, elo.depth, rotated(f, cplx{lo, 0.0})};
    }
    if (ehi.cmp == 0) {
        return ShootingResult{hi, hi - lo, ehi.depth, rotated(f, cplx{hi, 0.0})};
    }
    if (elo.cmp == ehi.cmp) {
        if (std::abs(elo.est.value - ehi.est.value) < 1e-12) {
            throw NumericalError("shoot: rotation number locked across the bracket (plateau); no "
                                 "crossing of the target inside it");
        }
        throw DomainError("shoot: no sign change over the bracket (target not straddled)");
    }
    if (elo.cmp > 0) std::swap(lo, hi), std::swap(elo, ehi);  // rho(lo) < alpha < rho(hi)

    int depth = std::max(elo.depth, ehi.depth);
    int bisections = 0;
    double tmid = 0.5 * (lo + hi);
    while (std::abs(hi - lo) > opt.bracket_tol && bisections < opt.max_bisections) {
        tmid = 0.5 * (lo + hi);
        RhoEval em = eval_family_point(f, tmid, alpha, acc_for(std::abs(hi - lo)), opt.rho_budget);
        depth = std::max(depth, em.depth);
        if (em.cmp == 0) break;  // on target at resolution
        if (em.cmp < 0) {
            lo = tmid;
        } else {
            hi = tmid;
        }
        ++bisections;
    }

    double t_star = 0.5 * (lo + hi);
    // secant refinement on the raw estimate differences, guarded to the bracket
    const double alpha_val = alpha.value();
    double ta = lo, tb = hi;
    RotationOptions ro;
    ro.budget = opt.rho_budget;
    double fa = rotation_number(rotated(f, cplx{ta, 0.0}), 1e-13, ro).value - alpha_val;
    double fb = rotation_number(rotated(f, cplx{tb, 0.0}), 1e-13, ro).value - alpha_val;
    for (int s = 0; s < opt.secant_steps; ++s) {
        if (fb == fa) break;
        const double tc = tb - fb * (tb - ta) / (fb - fa);
        if (!(tc > lo && tc < hi)) break;
        const double fc = rotation_number(rotated(f, cplx{tc, 0.0}), 1e-13, ro).value - alpha_val;
        ta = tb;
        fa = fb;
        tb = tc;
        fb = fc;
        t_star = tc;
    }

    ShootingResult r;
    r.t_star = t_star;
    r.bracket_width = std::abs(hi - lo);
    r.f_star = rotated(f, cplx{t_star, 0.0});
    RhoEval efin = eval_family_point(f, t_star, alpha, 1e-13, opt.rho_budget);
    r.certificate_depth = std::max(depth, efin.depth);
    return r;
}

std::vector<WalphaSample> stable_manifold_chart(const AnnulusLift& f0,
                                                const std::vector<FourierSeries>& directions,
                                                double amp, const CFTarget& alpha,
                                                const ShootOptions& opt, int jobs) {
    if (std::abs(amp) > 0.05) throw DomainError("stable_manifold_chart: |amp| must be <= 0.05");
    const double alpha_val = alpha.value();

    auto run_one = [&](std::size_t i) {
        const FourierSeries& g = directions[i];
        if (!g.is_zero_mean(1e-10)) {
            throw DomainError("stable_manifold_chart: direction " + std::to_string(i) +
                              " has nonzero mean");
        }
        FourierSeries pert = f0.displacement();
        pert.set_mean(cplx{0.0, 0.0});
        FourierSeries ag = g;
        ag *= cplx{amp, 0.0};
        pert += ag;
        pert.set_eps(f0.eps());
        AnnulusLift base{pert};  // mean 0; shooting sets the rotation coefficient
        const double spread = std::max(0.05, 4.0 * std::abs(amp));
        ShootingResult sr = shoot(base, alpha, alpha_val - spread, alpha_val + spread, opt);
        return WalphaSample{static_cast<int>(i), amp, sr.t_star};
    };

    std::vector<WalphaSample> out(directions.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < directions.size(); ++i) out[i] = run_one(i);
        return out;
    }
    std::vector<std::future<WalphaSample>> futs;
    futs.reserve(directions.size());
    for (std::size_t i = 0; i < directions.size(); ++i) {
        futs.push_back(std::async(std::launch::async, run_one, i));
    }
    for (std::size_t i = 0; i < directions.size(); ++i) out[i] = futs[i].get();
    return out;
}

FourierSeries fourier_fit(const std::vector<double>& theta, const std::vector<cplx>& y, int modes,
                          double eps) {
    const int N = static_cast<int>(theta.size());
    const int cols = 2 * modes + 1;
    if (N < 3 * cols) {
        throw NumericalError("fourier_fit: " + std::to_string(N) + " samples cannot support " +
                             std::to_string(cols) + " modes (ill-conditioned fit)");
    }
    Eigen::MatrixXcd A(N, cols);
    Eigen::VectorXcd b(N);
    for (int j = 0; j < N; ++j) {
        for (int k = -modes; k <= modes; ++k) {
            A(j, k + modes) = std::exp(kI * (kTwoPi * k) * theta[static_cast<std::size_t>(j)]);
        }
        b(j) = y[static_cast<std::size_t>(j)];
    }
    const Eigen::MatrixXcd G = A.adjoint() * A;
    const Eigen::VectorXcd rhs = A.adjoint() * b;
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(G);
    if (ldlt.info() != Eigen::Success) {
        throw NumericalError("fourier_fit: normal equations not positive definite");
    }
    const Eigen::VectorXcd c = ldlt.solve(rhs);
    FourierSeries s(eps, modes);
    for (int k = -modes; k <= modes; ++k) s.set_coeff(k, c(k + modes));
    return s;
}

OrbitFit conjugacy_from_orbit(const AnnulusLift& f, double alpha, int N, int modes) {
    if (N < 6 * (2 * modes + 1)) {
        throw NumericalError("conjugacy_from_orbit: orbit too short for " + std::to_string(modes) +
                             " modes");
    }
    OrbitSample s = orbit(f, cplx{0.0, 0.0}, N);
    if (s.escaped) {
        throw NumericalError("conjugacy_from_orbit: orbit escaped the strip at iterate " +
                             std::to_string(s.escape_index));
    }
    std::vector<double> theta(s.points.size());
    std::vector<cplx> y(s.points.size());
    for (std::size_t j = 0; j < s.points.size(); ++j) {
        theta[j] = frac(alpha * static_cast<double>(j));
        y[j] = s.points[j] - alpha * static_cast<double>(j);
    }
    OrbitFit fit;
    fit.psi = fourier_fit(theta, y, modes, f.eps());
    double res = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        res = std::max(res, std::abs(fit.psi.eval(cplx{theta[j], 0.0}) - y[j]));
    }
    fit.residual = res;
    fit.decay_rate = coefficient_decay_rate(fit.psi);
    return fit;
}

double coefficient_decay_rate(const FourierSeries& s, double floor) {
    // least-squares slope of log max(|c_k|,|c_-k|) against k
    std::vector<double> xs, ys;
    for (int k = 1; k <= s.degree(); ++k) {
        const double m = std::max(std::abs(s.coeff(k)), std::abs(s.coeff(-k)));
        if (m > floor) {
            xs.push_back(static_cast<double>(k));
            ys.push_back(std::log(m));
        }
    }
    if (xs.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double n = static_cast<double>(xs.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::exp(slope);
}

}  // namespace cmr
