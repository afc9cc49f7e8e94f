#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmr/cfrac.hpp"
#include "cmr/circle.hpp"

namespace cmr {

struct CohomologicalOptions {
    double mean_tol = 1e-12;
    double divisor_floor = 1e-13;
};

/// Mode-wise solution of v(z) = h(z + alpha) - h(z) for zero-mean v:
/// h_k = v_k / (e^{2 pi i k alpha} - 1), h_0 = 0. A nonzero mean is the
/// obstruction (v must lie in the zero-average subspace); divisors under the
/// floor are reported with the offending modes. alpha may carry a tiny
/// imaginary part (perturbed-lift work), which only detunes the divisors.
FourierSeries solve_cohomological(const FourierSeries& v, cplx alpha,
                                  const CohomologicalOptions& opt = {});

/// Sup distance between (Id + zeta h) o R_alpha o (Id + zeta h)^{-1} and
/// R_alpha + zeta (h(.+alpha) - h(.)); the conjugation deformation identity
/// holds to O(|zeta|^2).
double deformation_check(const FourierSeries& h, double alpha, cplx zeta);

struct ConjugacyChart {
    AnnulusLift phi;                     ///< phi o f = R_alpha o phi, phi(0) = 0
    double residual = 0.0;               ///< sup |phi(f(z)) - phi(z) - alpha| on fresh samples
    double height = 0.0;                 ///< certified half-height of the chart
    int iterations = 0;
    std::vector<double> error_sequence;  ///< ||v_j|| per step (quadratic-convergence data)
    std::vector<double> mean_corrections;
};

struct KamOptions {
    int max_iterations = 30;
    int fixed_iterations = 0;       ///< >0: run exactly this many steps, no stop tests
    double stop_tol = 1e-12;        ///< stop when ||v_j|| + |m_j| drops below
    double mean_budget_factor = 10.0;
    int max_degree = 64;
    int fresh_samples = 256;
    bool throw_on_stall = true;
};

/// Quadratic conjugacy iteration towards R_alpha: v_j = zero-mean part of
/// f_j - Id - alpha, h_j from the cohomological equation, f_{j+1} =
/// (Id+h_j)^{-1} o f_j o (Id+h_j). The mean of f_j - Id - alpha is carried as
/// a rotation correction that must die out (it does exactly when rho(f) =
/// alpha); its partial sums exceeding mean_budget_factor times the initial
/// distance aborts with an off-the-stable-manifold diagnosis. Domain loss per
/// step is (eps/4) 2^{-j}, so the chart is certified on height >= eps/2.
ConjugacyChart kam_linearize(const AnnulusLift& f, cplx alpha, double eps_target = 0.0,
                             const KamOptions& opt = {});

/// Exact continued-fraction prefix of an irrational shooting target.
struct CFTarget {
    std::vector<long long> terms;
    static CFTarget golden(int depth = 40);
    static CFTarget silver(int depth = 40);
    double value() const { return reconstruct(terms); }
};

/// Three-way comparison of an estimate (value +- error) against the target,
/// by continued-fraction prefix with the alternating lexicographic order.
/// Returns -1 / +1 when decided, 0 when the interval straddles the target at
/// the resolvable depth. matched_depth receives the number of target terms
/// consumed before the decision (the certificate depth).
int cf_compare(double value, double error, const CFTarget& target, int* matched_depth = nullptr);

struct ShootingResult {
    double t_star = 0.0;
    double bracket_width = 0.0;
    int certificate_depth = 0;   ///< continued-fraction prefix matched at t*
    AnnulusLift f_star;
};

struct ShootOptions {
    double bracket_tol = 1e-12;
    int max_bisections = 64;
    int secant_steps = 2;
    long long rho_budget = 1 << 21;
    int min_target_depth = 20;   ///< shorter targets are refused as rational
};

/// One-parameter shooting t -> rho(R_t o f) onto the stable-manifold target:
/// bisection on the continued-fraction comparator, then secant refinement.
/// Requires a sign change over [lo, hi].
ShootingResult shoot(const AnnulusLift& f, const CFTarget& alpha, double lo, double hi,
                     const ShootOptions& opt = {});

struct WalphaSample {
    int direction_id = 0;
    double amp = 0.0;
    double t_star = 0.0;
};

/// Local graph of the codimension-one stable manifold over the rotation
/// coefficient: for each zero-mean direction g, shoot the family
/// t -> lift(mean = t, periodic = f0's periodic part + amp*g).
std::vector<WalphaSample> stable_manifold_chart(const AnnulusLift& f0,
                                                const std::vector<FourierSeries>& directions,
                                                double amp, const CFTarget& alpha,
                                                const ShootOptions& opt = {}, int jobs = 1);

struct OrbitFit {
    FourierSeries psi;        ///< periodic part of the fitted parametrization
    double residual = 0.0;    ///< max fit deviation over the orbit data
    double decay_rate = 0.0;  ///< fitted geometric ratio of |coefficients|
};

/// Least-squares Fourier fit of j -> f^j(0) against angles {j alpha}: the
/// inverse linearizer psi with f o psi = psi o R_alpha sampled along the
/// orbit combinatorics.
OrbitFit conjugacy_from_orbit(const AnnulusLift& f, double alpha, int N, int modes = 32);

/// Geometric decay ratio fitted to log|c_k| by least squares (modes above the
/// noise floor only).
double coefficient_decay_rate(const FourierSeries& s, double floor = 1e-13);

/// Least-squares fit of sum_{|k|<=modes} c_k e^{2 pi i k theta_j} to data y_j.
/// Throws NumericalError when the normal equations are too ill-conditioned
/// (too few samples for the requested mode count).
FourierSeries fourier_fit(const std::vector<double>& theta, const std::vector<cplx>& y, int modes,
                          double eps);

}  // namespace cmr
