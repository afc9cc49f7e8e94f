#include <doctest.h>

#include <cmath>

#include "cmr/renorm.hpp"
#include "oracles.hpp"

using namespace cmr;

namespace {

FourierSeries single_sin_mode(double eps, double amplitude) {
    FourierSeries h(eps, 1);
    const cplx c = cplx{amplitude, 0.0} / (2.0 * kI);
    h.set_coeff(1, c);
    h.set_coeff(-1, std::conj(c));
    return h;
}

AnnulusLift conjugated_rotation(double g, double eps, const FourierSeries& h) {
    const AnnulusLift phi{h};
    return compose(compose(phi, AnnulusLift::rotation(eps, g)), inverse(phi));
}

}  // namespace

TEST_SUITE_BEGIN("renorm");

TEST_CASE("build_pair: rotations give translation pairs, level 0 convention") {
    const double g = oracles::golden();
    const AnnulusLift r = AnnulusLift::rotation(0.25, g);
    CommutingPair p = build_pair(r, 3);
    CHECK(p.qn == 3);
    CHECK(p.qn1 == 5);
    CHECK(std::abs(p.eta.mean() - cplx{3.0 * g - 2.0, 0.0}) < 1e-11);
    CHECK(std::abs(p.xi.mean() - cplx{5.0 * g - 3.0, 0.0}) < 1e-11);

    CommutingPair p0 = build_pair(r, 0);
    CHECK(p0.qn == 1);
    CHECK(p0.qn1 == 1);  // golden: a_0 = 1

    const AnnulusLift s = AnnulusLift::rotation(0.25, oracles::silver());
    CommutingPair ps = build_pair(s, 0);
    CHECK(ps.qn == 1);
    CHECK(ps.qn1 == 2);  // silver: a_0 = 2
}

TEST_CASE("build_pair: iterates commute to high accuracy") {
    const double g = oracles::golden();
    const AnnulusLift f = conjugated_rotation(g, 0.25, single_sin_mode(0.25, 0.01));
    CommutingPair p = build_pair(f, 3);
    const AnnulusLift ab = compose(p.eta, p.xi);
    const AnnulusLift ba = compose(p.xi, p.eta);
    CHECK(distance(ab, ba, 0.0) < 1e-10);
    DefectTriple t = commutation_defect(p.eta, p.xi);
    CHECK(std::abs(t.value) < 1e-10);
    CHECK(std::abs(t.d1) < 1e-10);
    CHECK(std::abs(t.d2) < 1e-9);  // second spectral derivative floor ~ (2 pi k)^2 noise
}

TEST_CASE("rescale_pair: rotation identities") {
    const double g = oracles::golden();
    const AnnulusLift r = AnnulusLift::rotation(0.25, g);
    for (int k = 1; k <= 5; ++k) {
        CommutingPair p = build_pair(r, k);
        RescaledPair rp = rescale_pair(p);
        // eta_r = z + 1 exactly
        for (std::size_t j = 0; j < rp.window.size(); ++j) {
            CHECK(std::abs(rp.eta_r[j] - (rp.window[j] + 1.0)) < 1e-9);
        }
        // xi_r = z - alpha_{k+1}: |q_{k+1} a - p_{k+1}| = alpha_{k+1} |q_k a - p_k|
        // with alternating signs; direct arithmetic oracle
        double ak1 = g;
        for (int i = 0; i <= k; ++i) ak1 = 1.0 / ak1 - std::floor(1.0 / ak1);
        const cplx shift = rp.xi_r[0] - rp.window[0];
        CHECK(std::abs(shift - cplx{-ak1, 0.0}) < 1e-8);
        CHECK(affinity_defect(rp) < 1e-9);
    }
}

TEST_CASE("rescale_pair: affinity defect of a conjugated rotation contracts geometrically") {
    const double g = oracles::golden();
    const AnnulusLift f = conjugated_rotation(g, 0.25, single_sin_mode(0.25, 0.01));
    std::vector<double> ks, logd, nl;
    for (int k = 1; k <= 6; ++k) {
        CommutingPair p = build_pair(f, k);
        RescaledPair rp = rescale_pair(p);
        ks.push_back(static_cast<double>(k));
        logd.push_back(std::log(affinity_defect(rp)));
        nl.push_back(nonlinearity_max(rp));
    }
    for (std::size_t i = 1; i < logd.size(); ++i) CHECK(logd[i] < logd[i - 1]);
    auto fit = oracles::line_fit(ks, logd);
    const double lambda = std::exp(fit.slope);
    CHECK(lambda < 1.0);
    CHECK(fit.r_squared > 0.95);
    // the nonlinearity functional decays alongside
    CHECK(nl.back() < nl.front());
}

TEST_CASE("renorm_step: golden and silver translations are fixed points") {
    const double g = oracles::golden();
    NormalizedPair p = make_normalized(AnnulusLift::rotation(0.25, g));
    NormalizedPair q = renorm_step(p);
    CHECK(std::abs(q.beta.mean() - cplx{g, 0.0}) < 1e-11);
    CHECK(lift_norm(q.beta, 0.0) == doctest::Approx(g).epsilon(1e-9));

    const double s = oracles::silver();
    NormalizedPair ps = make_normalized(AnnulusLift::rotation(0.25, s));
    NormalizedPair qs = renorm_step(ps);
    CHECK(std::abs(qs.beta.mean() - cplx{s, 0.0}) < 1e-11);
}

TEST_CASE("renorm_step: fixed-point property on a theta grid") {
    for (double th : {0.13, 0.271, 0.38, 0.55, 0.62, 0.77, 0.91}) {
        NormalizedPair p = make_normalized(AnnulusLift::rotation(0.25, th));
        NormalizedPair q = renorm_step(p);
        const double want = 1.0 / th - std::floor(1.0 / th);
        CHECK(std::abs(q.beta.mean().real() - want) < 1e-9);
        CHECK(std::abs(q.beta.mean().imag()) < 1e-12);
    }
}

TEST_CASE("renorm_step: k-fold steps track the Gauss orbit") {
    double th = 0.372;
    NormalizedPair p = make_normalized(AnnulusLift::rotation(0.25, th));
    for (int k = 0; k < 4; ++k) {
        th = 1.0 / th - std::floor(1.0 / th);
        if (th < 0.05 || th > 0.95) break;
        p = renorm_step(p);
        CHECK(std::abs(p.beta.mean().real() - th) < 1e-8);
    }
}

TEST_CASE("renorm_step: Gauss action on a perturbed-mean pair near golden") {
    const double g = oracles::golden();
    NormalizedPair p = make_normalized(AnnulusLift::rotation(0.25, g + 1e-3));
    NormalizedPair q = renorm_step(p);
    RotationEstimate out = rotation_number(q.beta, 1e-11);
    const RotationEstimate in = rotation_number(p.beta, 1e-11);
    CHECK(std::abs(out.value - gauss(in.value)) < 1e-9);
}

TEST_CASE("renorm_step: rational rotation rejected") {
    NormalizedPair p = make_normalized(AnnulusLift::rotation(0.25, 1e-12));
    CHECK_THROWS_AS(renorm_step(p), NumericalError);
}

TEST_CASE("solve_abel: translation, constructed conjugacy, Arnold residual") {
    const double g = oracles::golden();
    AbelChart triv = solve_abel(AnnulusLift::rotation(0.25, g));
    CHECK(std::abs(triv.rho - cplx{g, 0.0}) < 1e-12);
    CHECK(distance(triv.chart.phi, AnnulusLift::identity(0.25), 0.05) < 1e-11);

    const FourierSeries h0 = single_sin_mode(0.25, 0.01);
    const AnnulusLift beta = conjugated_rotation(g, 0.25, h0);
    AbelChart a = solve_abel(beta);
    CHECK(a.chart.residual <= 1e-8);
    CHECK(distance(a.chart.phi, inverse(AnnulusLift{h0}), 0.05) < 1e-7);

    // Abel identity residual on samples for an Arnold-derived beta
    const AnnulusLift fa = arnold(0.6178, 0.03, 0.25);
    AbelChart ab = solve_abel(fa);
    const AnnulusLift hinv = inverse(ab.chart.phi);
    double worst = 0.0;
    for (int j = 0; j < 64; ++j) {
        const cplx z{static_cast<double>(j) / 64.0, 0.0};
        const cplx psi_z = hinv.eval_unchecked(ab.rho * z);
        const cplx lhs = ab.chart.phi.eval_unchecked(fa.eval_unchecked(psi_z)) / ab.rho;
        worst = std::max(worst, std::abs(lhs - (z + 1.0)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("commutation defect: iterates and translation pairs vanish") {
    const AnnulusLift f = arnold(0.4, 0.1);
    const AnnulusLift f2 = compose(f, f);
    const AnnulusLift f3 = compose(f2, f);
    CHECK(commutation_defect(f2, f3).norm() < 1e-10);

    const AnnulusLift t1 = AnnulusLift::rotation(0.3, 1.0);
    const AnnulusLift tth = AnnulusLift::rotation(0.3, 0.617);
    CHECK(commutation_defect(t1, tth).norm() < 1e-12);
}

TEST_CASE("commutation defect: o(z^2) discriminator against the symbolic oracle") {
    // exactly commuting pair fixing 0: iterates of an Arnold map with t = 0
    const AnnulusLift f = arnold(0.0, 0.3);
    const AnnulusLift eta = compose(f, f);
    const AnnulusLift xi = compose(eta, f);
    const double delta = 1e-4;

    // first-order formula for the perturbed commutator
    //   [eta, xi + d p](z) = d (eta'(xi(z)) p(z) - p(eta(z))) + O(d^2);
    // with eta(0) = xi(0) = 0 the z^3 perturbation leaves the triple at 0
    // while z^2 shows up in the second derivative as 2 d eta'(0)(1 - eta'(0)).
    const PointMap eta_pt = PointMap::from_lift(eta);
    const PointMap xi3 = PointMap::from_lift_with_poly(xi, cplx{0.0, 0.0}, cplx{delta, 0.0});
    DefectTriple t3 = commutation_defect(eta_pt, xi3);
    CHECK(t3.norm() < 10.0 * delta * delta);

    const PointMap xi2 = PointMap::from_lift_with_poly(xi, cplx{delta, 0.0}, cplx{0.0, 0.0});
    DefectTriple t2 = commutation_defect(eta_pt, xi2);
    CHECK(std::abs(t2.value) < 10.0 * delta * delta);
    CHECK(std::abs(t2.d1) < 10.0 * delta * delta);
    const cplx etap0 = eta.derivative().eval(cplx{0.0, 0.0});
    const cplx want_d2 = 2.0 * delta * (etap0 - etap0 * etap0);
    CHECK(std::abs(t2.d2 - want_d2) < 10.0 * delta * delta);
    CHECK(std::abs(t2.d2) > 0.1 * delta);  // genuinely order delta
}

TEST_CASE("renorm_step preserves commutation and does not grow seeded defects") {
    const double g = oracles::golden();
    // true pair: defect stays at numerical zero
    NormalizedPair p = make_normalized(conjugated_rotation(g, 0.25, single_sin_mode(0.25, 0.005)));
    CHECK(p.defect.norm() < 1e-11);
    NormalizedPair q = renorm_step(p);
    CHECK(q.defect.norm() < 1e-10);

    // seeded almost-commuting pair near T_gamma
    const double seed = 1e-6;
    NormalizedPair ps = make_normalized(AnnulusLift::rotation(0.25, g), cplx{seed, 0.0});
    CHECK(ps.defect.norm() == doctest::Approx(std::sqrt(5.0) * seed).epsilon(1e-6));
    NormalizedPair qs = renorm_step(ps);
    CHECK(qs.defect.norm() <= ps.defect.norm() * 1.0 + 1e-12);
}

TEST_CASE("galerkin differential: mode-0 action is the Gauss derivative") {
    const double g = oracles::golden();
    GalerkinOptions go;
    GalerkinMatrix m1 = galerkin_differential(g, 2, 1e-5, 1, go);
    // |G'(gamma)| = 1/gamma^2
    CHECK(std::abs(m1.at(0, 0)) == doctest::Approx(1.0 / (g * g)).epsilon(1e-5));

    const double a2 = 0.38196601125010515;  // an eventually-golden base: G moves it
    GalerkinMatrix m2 = galerkin_differential(a2, 2, 1e-5, 1, go);
    CHECK(std::abs(m2.at(0, 0)) == doctest::Approx(1.0 / (a2 * a2)).epsilon(1e-4));
}

TEST_CASE("galerkin differential: stable under fd halving and parallel column jobs") {
    const double g = oracles::golden();
    GalerkinOptions serial;
    GalerkinMatrix a = galerkin_differential(g, 3, 1e-5, 1, serial);
    GalerkinMatrix b = galerkin_differential(g, 3, 5e-6, 1, serial);
    const double ta = std::abs(spectrum(a).eigenvalues[0]);
    const double tb = std::abs(spectrum(b).eigenvalues[0]);
    CHECK(std::abs(ta - tb) / ta <= 1e-3);

    GalerkinOptions par;
    par.jobs = 3;
    GalerkinMatrix c = galerkin_differential(g, 3, 1e-5, 1, par);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].real() == c.entries[i].real());
        CHECK(a.entries[i].imag() == c.entries[i].imag());
    }
}

TEST_CASE("galerkin differential: V0 stays zero-mean and the spectrum is hyperbolic") {
    const double g = oracles::golden();
    GalerkinMatrix m = galerkin_differential(g, 6, 1e-5, 2);
    // V0 invariance: the mean row of every k != 0 column is tiny
    for (int k = -6; k <= 6; ++k) {
        if (k == 0) continue;
        CHECK(std::abs(m.at(0, k)) <= 1e-6);
    }
    SpectrumResult s = spectrum(m);
    CHECK(s.unstable_count == 1);
    CHECK(std::abs(s.eigenvalues[0]) == doctest::Approx(std::pow(g, -4.0)).epsilon(0.05));
    CHECK(s.dominant_angle_to_mode0 <= 1e-2);
    CHECK(s.second_modulus < 1.0);
}

TEST_SUITE_END();
