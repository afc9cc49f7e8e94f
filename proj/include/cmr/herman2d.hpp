#pragma once

#include <functional>

#include "cmr/linearize.hpp"

namespace cmr {

/// Holomorphic map of the cylinder-times-disk Delta_eps:
///     F(z, w) = (z + P(z, w), Q(z, w)),
/// with P, Q finite double series in (e^{2 pi i k z}, w^m). Cylinder
/// equivariance F(z+1, w) = F(z, w) + (1, 0) holds by construction.
class Map2D {
public:
    Map2D(double eps, int kmax, int wdeg);

    double eps() const { return eps_; }
    int kmax() const { return kmax_; }
    int wdeg() const { return wdeg_; }

    cplx& p(int k, int m) { return P_[index(k, m)]; }
    cplx& q(int k, int m) { return Q_[index(k, m)]; }
    cplx p(int k, int m) const { return P_[index(k, m)]; }
    cplx q(int k, int m) const { return Q_[index(k, m)]; }

    std::pair<cplx, cplx> apply(cplx z, cplx w) const;

    /// max |dQ/dw| over a sample grid; < 1 certifies dissipation there.
    double dissipation_bound(int zsamples = 32, int wsamples = 8) const;

private:
    std::size_t index(int k, int m) const;
    double eps_;
    int kmax_;
    int wdeg_;
    std::vector<cplx> P_, Q_;
};

/// F(z,w) = (z + t + (a/2pi) sin(2 pi z) + c w,  d w + (e/2pi) sin(2 pi z)).
/// At a = c = e = 0, t = alpha this is the degenerate base point
/// (R_alpha(z), 0). Requires |d| < 1 (dissipation) and a < 1.
Map2D example_family(double t, double a, double c, double d, double e, double eps = 0.2);

/// Diagonal embedding of a 1D lift: (z, w) -> (h(z), h(z)). The fiber
/// coordinate carries the base lift, so equivariance is diagonal and the
/// fitted fiber parametrization is a lift rather than a periodic function.
struct Embedded2D {
    AnnulusLift h;
    std::pair<cplx, cplx> apply(cplx z, cplx w) const {
        (void)w;
        const cplx v = h.eval_unchecked(z);
        return {v, v};
    }
};

Embedded2D embed(const AnnulusLift& h);

/// Type-erased 2D dynamics handed to the orbit/rotation/certification ops.
struct Flow2D {
    std::function<std::pair<cplx, cplx>(cplx, cplx)> apply;
    double eps = 0.2;
    bool diagonal = false;  ///< fiber coordinate is a lift (diagonal embedding)
};

Flow2D as_flow(const Map2D& F);
Flow2D as_flow(const Embedded2D& F);

struct Orbit2D {
    std::vector<cplx> z;  ///< lift values after burn-in
    std::vector<cplx> w;
    bool escaped = false;
    int escape_index = -1;
    bool fixed_point = false;  ///< orbit converged to a point (resonance)
    double w_amplitude = 0.0;
};

struct Orbit2DOptions {
    double escape_margin = 0.95;
    double fixed_point_tol = 1e-13;
};

Orbit2D attractor_orbit(const Flow2D& F, cplx z0, cplx w0, int burn_in, int N,
                        const Orbit2DOptions& opt = {});

/// Rotation number of the z-lift along the attractor (weighted Birkhoff,
/// same estimator contract as the 1D rotation number).
RotationEstimate rotation_number_2d(const Flow2D& F, double target_accuracy, int burn_in = 10000,
                                    long long budget = 1 << 19);

struct Shoot2DResult {
    double s_star = 0.0;
    double bracket_width = 0.0;
    int certificate_depth = 0;
};

struct Shoot2DOptions {
    double bracket_tol = 1e-10;
    int max_bisections = 60;
    int burn_in = 10000;
    long long rho_budget = 1 << 19;
    int min_target_depth = 20;
};

/// Bisection of a one-parameter slice s -> F(s) on the comparator
/// sign(rho_2d - alpha); the codimension-one locus is crossed at isolated
/// parameters for generic slices.
Shoot2DResult shoot2d(const std::function<Flow2D(double)>& family, const CFTarget& alpha,
                      double lo, double hi, const Shoot2DOptions& opt = {});

/// Invariant-circle certificate: least-squares Fourier fit of the attractor
/// orbit against angles {j alpha}, residual of F(psi(theta)) = psi(theta +
/// alpha) on fresh angles, and geometric decay of the fitted coefficients
/// (the analyticity proxy standing in for a genuine complex annulus).
struct HermanCertificate {
    FourierSeries Z;      ///< periodic part of theta -> Z(theta) = theta + ...
    FourierSeries W;      ///< fiber series (periodic part when diagonal)
    bool w_is_lift = false;
    double residual = 0.0;
    double decay_rate = 0.0;
    RotationEstimate rho;
    int modes = 0;
    bool passed = false;  ///< residual <= 1e-6 and decay_rate <= 0.9
};

struct CertifyOptions {
    int burn_in = 10000;
    int fresh_samples = 256;
    double residual_tol = 1e-6;
    double decay_tol = 0.9;
    long long rho_budget = 1 << 19;
};

HermanCertificate certify_herman(const Flow2D& F, const CFTarget& alpha, int N, int modes,
                                 const CertifyOptions& opt = {});

/// Rotate the angle gauge so the first active mode has phase 0; the fit is
/// unique only up to theta -> theta + c, and this fixes the gauge.
void canonicalize_certificate(HermanCertificate& cert);

}  // namespace cmr
