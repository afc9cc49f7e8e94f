#include "cmr/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace cmr {

CommutingPair build_pair(const AnnulusLift& f, int level, const PairOptions& opt) {
    if (level < 0) throw DomainError("build_pair: negative level");
    RotationOptions ro;
    ro.budget = opt.rho_budget;
    const RotationEstimate est = rotation_number(f, opt.rho_accuracy, ro);
    CFExpansion cf = expand(est.value, level + 3);
    if (static_cast<int>(cf.terms.size()) < level + 2) {
        throw NumericalError("build_pair: rotation number rational at resolution; pair level " +
                             std::to_string(level) + " undefined");
    }
    const auto conv = convergents(cf);
    const long long qn = conv[static_cast<std::size_t>(level)].q;
    const long long pn = conv[static_cast<std::size_t>(level)].p;
    const long long qn1 = conv[static_cast<std::size_t>(level) + 1].q;
    const long long pn1 = conv[static_cast<std::size_t>(level) + 1].p;
    // the comparator needs the expansion trusted one level past the pair
    if (est.error_bound * static_cast<double>(qn1) * static_cast<double>(qn1) > 0.5) {
        throw NumericalError("build_pair: rotation number not certified to depth " +
                             std::to_string(level + 1));
    }

    ComposeOptions comp{opt.degree, 0.95};
    AnnulusLift eta = iterate_lift(f, qn, comp);
    AnnulusLift xi = iterate_lift(f, qn1, comp);
    eta.set_mean(eta.mean() - static_cast<double>(pn));
    xi.set_mean(xi.mean() - static_cast<double>(pn1));
    const bool eta_saturated = eta.degree() >= opt.degree && eta.top_mode_ratio() > opt.tail_alarm;
    const bool xi_saturated = xi.degree() >= opt.degree && xi.top_mode_ratio() > opt.tail_alarm;
    if (eta_saturated || xi_saturated) {
        throw NumericalError("build_pair: coefficient tails unresolved at the degree cap "
                             "(analyticity loss under iteration)");
    }

    CommutingPair p;
    p.eta = eta;
    p.xi = xi;
    p.level = level;
    p.source_rotation = est.value;
    p.qn = qn;
    p.qn1 = qn1;
    p.pn = pn;
    p.pn1 = pn1;
    return p;
}

cplx PolyFit::eval(cplx z) const {
    cplx acc{0.0, 0.0};
    for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) acc = acc * z + *it;
    return acc;
}

PolyFit PolyFit::derivative() const {
    PolyFit d;
    for (std::size_t m = 1; m < coeff.size(); ++m) {
        d.coeff.push_back(static_cast<double>(m) * coeff[m]);
    }
    return d;
}

namespace {

PolyFit polynomial_fit(const std::vector<double>& x, const std::vector<cplx>& y, int degree) {
    const int N = static_cast<int>(x.size());
    Eigen::MatrixXcd A(N, degree + 1);
    Eigen::VectorXcd b(N);
    for (int j = 0; j < N; ++j) {
        double p = 1.0;
        for (int m = 0; m <= degree; ++m) {
            A(j, m) = p;
            p *= x[static_cast<std::size_t>(j)];
        }
        b(j) = y[static_cast<std::size_t>(j)];
    }
    const Eigen::VectorXcd c = (A.adjoint() * A).ldlt().solve(A.adjoint() * b);
    PolyFit fit;
    fit.coeff.assign(c.data(), c.data() + degree + 1);
    return fit;
}

double affine_residual(const std::vector<double>& x, const std::vector<cplx>& y) {
    const PolyFit line = polynomial_fit(x, y, 1);
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        worst = std::max(worst, std::abs(y[j] - line.eval(cplx{x[j], 0.0})));
    }
    return worst;
}

}  // namespace

RescaledPair rescale_pair(const CommutingPair& p, int samples, int poly_degree) {
    const cplx s = p.eta.eval_unchecked(cplx{0.0, 0.0});
    if (std::abs(s) < 1e-14) {
        throw NumericalError("rescale_pair: degenerate scale |f^{q_n}(0)| < 1e-14");
    }
    RescaledPair r;
    r.scale = s;
    r.window.resize(static_cast<std::size_t>(samples));
    r.eta_r.resize(static_cast<std::size_t>(samples));
    r.xi_r.resize(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        const double w = -1.5 + 3.0 * static_cast<double>(j) / (samples - 1);
        r.window[static_cast<std::size_t>(j)] = w;
        const cplx z = s * w;
        if (std::abs(z.imag()) > 0.95 * p.eta.eps()) {
            throw DomainError("rescale_pair: window leaves the strip");
        }
        r.eta_r[static_cast<std::size_t>(j)] = p.eta.eval_unchecked(z) / s;
        r.xi_r[static_cast<std::size_t>(j)] = p.xi.eval_unchecked(z) / s;
    }
    r.eta_fit = polynomial_fit(r.window, r.eta_r, poly_degree);
    r.xi_fit = polynomial_fit(r.window, r.xi_r, poly_degree);
    return r;
}

double affinity_defect(const RescaledPair& p) {
    return std::max(affine_residual(p.window, p.eta_r), affine_residual(p.window, p.xi_r));
}

double nonlinearity_max(const RescaledPair& p) {
    double worst = 0.0;
    for (const PolyFit* fit : {&p.eta_fit, &p.xi_fit}) {
        const PolyFit d1 = fit->derivative();
        const PolyFit d2 = d1.derivative();
        for (double w : p.window) {
            const cplx g1 = d1.eval(cplx{w, 0.0});
            if (std::abs(g1) < 1e-12) continue;
            worst = std::max(worst, std::abs(d2.eval(cplx{w, 0.0}) / g1));
        }
    }
    return worst;
}

PointMap NormalizedPair::beta_pointwise() const {
    return PointMap::from_lift_with_poly(beta, seed_c2, seed_c3);
}

NormalizedPair make_normalized(AnnulusLift beta, cplx seed_c2, cplx seed_c3) {
    NormalizedPair p;
    p.beta = std::move(beta);
    p.seed_c2 = seed_c2;
    p.seed_c3 = seed_c3;
    const PointMap alpha{[](cplx z) { return z + 1.0; }};
    p.defect = commutation_defect(alpha, p.beta_pointwise());
    return p;
}

AbelChart solve_abel(const AnnulusLift& beta, const AbelOptions& opt) {
    RotationOptions ro;
    ro.budget = opt.rho_budget;
    ro.fixed_iterates = opt.fixed_rho_iterates;
    const RotationEstimate est = rotation_number(beta, opt.rho_accuracy, ro);
    if (est.value < 1e-9 || est.value > 1.0 - 1e-9) {
        throw NumericalError("solve_abel: projected rotation number vanishes at resolution");
    }
    const cplx rho{est.value, est.im_drift};

    KamOptions ko;
    ko.fixed_iterations = opt.fixed_kam_iterations;
    ko.max_degree = opt.degree;
    AbelChart a;
    a.chart = kam_linearize(beta, rho, beta.eps() / 2.0, ko);
    a.rho = rho;

    if (opt.fixed_kam_iterations == 0 && a.chart.residual > opt.residual_tol) {
        throw NumericalError("solve_abel: linearizer residual " + std::to_string(a.chart.residual) +
                             " above tolerance (beta too far from rotation, or rho too Liouville "
                             "at this resolution)");
    }

    // verify the Abel identity Psi^{-1} o beta o Psi = T_1 on samples:
    // Psi(z) = h^{-1}(rho z) with h = chart.phi
    const AnnulusLift hinv = inverse(a.chart.phi, {opt.degree, 50, 1e-14, 0.1});
    double worst = 0.0;
    for (int j = 0; j < opt.verify_samples; ++j) {
        const cplx z{static_cast<double>(j) / opt.verify_samples, 0.0};
        const cplx psi_z = hinv.eval_unchecked(rho * z);
        const cplx lhs = a.chart.phi.eval_unchecked(beta.eval_unchecked(psi_z)) / rho;
        worst = std::max(worst, std::abs(lhs - (z + 1.0)));
    }
    if (opt.fixed_kam_iterations == 0 && worst > 10.0 * std::max(opt.residual_tol, 1e-9)) {
        throw NumericalError("solve_abel: Abel identity residual " + std::to_string(worst));
    }
    return a;
}

NormalizedPair renorm_step(const NormalizedPair& p, const RenormOptions& opt) {
    const AnnulusLift& beta = p.beta;
    AbelChart abel = solve_abel(beta, opt.abel);
    const cplx rho = abel.rho;
    const double rho_re = rho.real();
    const long long kappa = static_cast<long long>(std::floor(1.0 / rho_re));
    if (kappa < 1 || kappa > opt.kappa_cap) {
        throw NumericalError("renorm_step: kappa = [1/rho] = " + std::to_string(kappa) +
                             " out of range (rho = " + std::to_string(rho_re) + ")");
    }

    ComposeOptions comp{opt.degree, 0.95};
    AnnulusLift beta_k = kappa == 1 ? beta : iterate_lift(beta, kappa, comp);
    AnnulusLift gamma = beta_k;
    gamma.set_mean(gamma.mean() + 1.0);  // gamma = beta^kappa o T_1 on lifts

    const AnnulusLift& h = abel.chart.phi;
    const AnnulusLift hinv = inverse(h, {opt.degree, 50, 1e-14, 0.1});
    const AnnulusLift mid = compose(compose(h, gamma, comp), hinv, comp);

    // beta'(z) = mid(rho z)/rho ; displacement_out(z) = D(rho z)/rho
    const int N = composition_grid(opt.degree);
    std::vector<cplx> disp(static_cast<std::size_t>(N));
    double scale = 1.0;
    for (int j = 0; j < N; ++j) {
        const cplx z{static_cast<double>(j) / N, 0.0};
        disp[static_cast<std::size_t>(j)] = mid.displacement().eval(rho * z) / rho;
        scale = std::max(scale, std::abs(disp[static_cast<std::size_t>(j)]));
    }
    const double noise_floor =
        2.0 * std::numeric_limits<double>::epsilon() * std::sqrt(N) * scale;
    AnnulusLift out{FourierSeries::from_samples(beta.eps(), opt.degree, disp).chopped(noise_floor)};

    const double shift = std::floor(out.mean().real());
    out.set_mean(out.mean() - shift);

    NormalizedPair q;
    q.beta = out;

    // defect of the output measured on the pre-projection pointwise chain;
    // the unit translation is applied after beta^kappa, which agrees with the
    // series route on true lifts and keeps seeded defects from picking up an
    // argument shift
    const PointMap beta_pt = p.beta_pointwise();
    PointMap gamma_pt{[beta_pt, kappa](cplx z) {
        cplx w = z;
        for (long long i = 0; i < kappa; ++i) w = beta_pt(w);
        return w + 1.0;
    }};
    const FourierSeries hp = h.derivative();
    PointMap hinv_pt{[h, hinv, hp](cplx z) {
        cplx w = hinv.eval_unchecked(z);  // seed from the series inverse, then polish
        for (int it = 0; it < 8; ++it) {
            const cplx r = h.eval_unchecked(w) - z;
            if (std::abs(r) < 1e-14) break;
            w -= r / hp.eval(w);
        }
        return w;
    }};
    PointMap out_pt{[h, hinv_pt, gamma_pt, rho, shift](cplx z) {
        return h.eval_unchecked(gamma_pt(hinv_pt(rho * z))) / rho - shift;
    }};
    const PointMap alpha_pt{[](cplx z) { return z + 1.0; }};
    q.defect = commutation_defect(alpha_pt, out_pt);

    if (p.seeded()) {
        const AnnulusLift out_lift = out;
        PointMap residue{[out_pt, out_lift](cplx z) { return out_pt(z) - out_lift.eval_unchecked(z); }};
        const auto a = taylor_at_zero(residue, 3);
        q.seed_c2 = a[2];
        q.seed_c3 = a[3];
    }
    return q;
}

GalerkinMatrix galerkin_differential(double alpha, int modes, double fd_step, int steps,
                                     const GalerkinOptions& opt) {
    if (modes < 1) throw DomainError("galerkin_differential: modes must be >= 1");
    if (fd_step <= 0.0) throw DomainError("galerkin_differential: nonpositive fd step");
    if (steps < 1) throw DomainError("galerkin_differential: steps must be >= 1");

    RenormOptions ro;
    ro.degree = opt.degree;
    ro.abel.fixed_rho_iterates = opt.rho_iterates;
    ro.abel.fixed_kam_iterations = opt.kam_iterations;
    ro.abel.degree = opt.degree;

    const int dim = 2 * modes + 1;

    auto renormalized_coeffs = [&](int k, double sign) {
        FourierSeries d(opt.base_eps, std::max(modes, 1));
        d.set_mean(cplx{alpha, 0.0});
        if (k == 0) {
            d.set_mean(cplx{alpha + sign * fd_step, 0.0});
        } else {
            d.set_coeff(k, cplx{sign * fd_step, 0.0});
        }
        NormalizedPair p = make_normalized(AnnulusLift{d});
        for (int s = 0; s < steps; ++s) p = renorm_step(p, ro);
        std::vector<cplx> out(static_cast<std::size_t>(dim));
        for (int m = -modes; m <= modes; ++m) {
            out[static_cast<std::size_t>(m + modes)] = p.beta.coeff(m);
        }
        return out;
    };

    auto column = [&](int k) {
        const auto plus = renormalized_coeffs(k, +1.0);
        const auto minus = renormalized_coeffs(k, -1.0);
        std::vector<cplx> col(static_cast<std::size_t>(dim));
        for (int m = 0; m < dim; ++m) {
            col[static_cast<std::size_t>(m)] =
                (plus[static_cast<std::size_t>(m)] - minus[static_cast<std::size_t>(m)]) /
                (2.0 * fd_step);
        }
        return col;
    };

    std::vector<std::vector<cplx>> cols(static_cast<std::size_t>(dim));
    if (opt.jobs <= 1) {
        for (int k = -modes; k <= modes; ++k) {
            cols[static_cast<std::size_t>(k + modes)] = column(k);
        }
    } else {
        std::vector<std::future<std::vector<cplx>>> futs(static_cast<std::size_t>(dim));
        int launched = 0;
        for (int k = -modes; k <= modes; ++k) {
            futs[static_cast<std::size_t>(k + modes)] =
                std::async(std::launch::async, column, k);
            if (++launched % opt.jobs == 0) {
                // soft throttle: wait for this batch before launching more
                for (int j = launched - opt.jobs; j < launched; ++j) futs[static_cast<std::size_t>(j)].wait();
            }
        }
        for (int j = 0; j < dim; ++j) cols[static_cast<std::size_t>(j)] = futs[static_cast<std::size_t>(j)].get();
    }

    GalerkinMatrix g;
    g.modes = modes;
    g.base_alpha = alpha;
    g.steps = steps;
    g.fd_step = fd_step;
    g.entries.assign(static_cast<std::size_t>(dim) * dim, cplx{0.0, 0.0});
    for (int row = 0; row < dim; ++row) {
        for (int col = 0; col < dim; ++col) {
            g.entries[static_cast<std::size_t>(row * dim + col)] =
                cols[static_cast<std::size_t>(col)][static_cast<std::size_t>(row)];
        }
    }
    return g;
}

SpectrumResult spectrum(const GalerkinMatrix& m) {
    const int n = m.dim();
    Eigen::MatrixXcd A(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) A(r, c) = m.entries[static_cast<std::size_t>(r * n + c)];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("spectrum: eigensolver failed to converge");
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    const auto& vals = solver.eigenvalues();
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(vals(a)) > std::abs(vals(b)); });

    SpectrumResult r;
    r.eigenvalues.reserve(static_cast<std::size_t>(n));
    for (int i : order) r.eigenvalues.push_back(vals(i));
    r.unstable_count = static_cast<int>(
        std::count_if(r.eigenvalues.begin(), r.eigenvalues.end(),
                      [](cplx v) { return std::abs(v) > 1.0; }));
    const Eigen::VectorXcd v = solver.eigenvectors().col(order[0]);
    r.dominant_vector.assign(v.data(), v.data() + n);
    const double vnorm = v.norm();
    const double v0 = std::abs(v(m.modes));  // mode-0 slot
    r.dominant_angle_to_mode0 = std::acos(std::clamp(v0 / vnorm, 0.0, 1.0));
    r.second_modulus = n >= 2 ? std::abs(r.eigenvalues[1]) : 0.0;
    return r;
}

}  // namespace cmr
