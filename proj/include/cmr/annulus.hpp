#pragma once

#include "cmr/fourier.hpp"

namespace cmr {

/// Analytic lift of a degree-one circle map on the strip |Im z| <= eps:
///     f(z) = z + c_0 + sum_{k != 0} c_k e^{2 pi i k z},
/// so f(z+1) = f(z)+1 holds by construction. Rotations are the case of an
/// empty periodic part (R_alpha: c_0 = alpha). The strip half-height is
/// carried along as first-class data: operations report the height on which
/// their output is certified.
class AnnulusLift {
public:
    AnnulusLift() = default;
    explicit AnnulusLift(FourierSeries displacement) : disp_(std::move(displacement)) {}

    static AnnulusLift rotation(double eps, cplx alpha) {
        return AnnulusLift(FourierSeries::constant(eps, alpha));
    }
    static AnnulusLift identity(double eps) { return rotation(eps, cplx{0.0, 0.0}); }

    double eps() const { return disp_.eps(); }
    void set_eps(double e) { disp_.set_eps(e); }
    int degree() const { return disp_.degree(); }
    cplx mean() const { return disp_.mean(); }
    void set_mean(cplx v) { disp_.set_mean(v); }
    cplx coeff(int k) const { return k == 0 ? disp_.mean() : disp_.coeff(k); }

    const FourierSeries& displacement() const { return disp_; }
    FourierSeries& displacement() { return disp_; }

    /// Lift value. Throws if |Im z| exceeds the certified strip.
    cplx eval(cplx z) const;
    /// Same, without the strip check (hot loops that manage their own margin).
    cplx eval_unchecked(cplx z) const { return z + disp_.eval(z); }

    /// f' = 1 + disp'; the constant 1 is included, so derivative of a
    /// rotation is the constant series 1.
    FourierSeries derivative() const;

    /// min |f'| over the real circle and the +-height circles.
    double min_derivative_modulus(double height) const;

    bool is_real_symmetric(double tol = 1e-12) const { return disp_.is_real_symmetric(tol); }

    /// Relative size of the top stored mode. A resolved analytic map sits at
    /// the transform noise floor here; anything larger at the degree cap
    /// means the series wanted more modes (analyticity loss under iteration).
    double top_mode_ratio() const;

private:
    FourierSeries disp_;
};

struct TruncateResult {
    AnnulusLift value;
    double tail = 0.0;  ///< sum_{|k|>m} |c_k| e^{2 pi |k| eps}
};

struct ComposeOptions {
    /// working degree of the transform (raised to the inputs' degree when
    /// larger); the stored result shrinks to its last non-noise mode
    int max_degree = 64;
    double escape_margin = 0.95;  ///< samples must stay within margin*eps of f
};

/// Coefficients of f o g from equispaced samples on the real circle
/// (grid 4M+1). Throws DomainError when g pushes samples outside f's strip.
AnnulusLift compose(const AnnulusLift& f, const AnnulusLift& g, const ComposeOptions& opt = {});

/// f^n by repeated composition (n >= 1).
AnnulusLift iterate_lift(const AnnulusLift& f, long long n, const ComposeOptions& opt = {});

struct InverseOptions {
    int max_degree = 64;
    int newton_cap = 50;
    double tol = 1e-13;
    double min_derivative = 0.1;
};

/// Inverse lift via per-sample Newton; requires min |f'| > min_derivative.
AnnulusLift inverse(const AnnulusLift& f, const InverseOptions& opt = {});

/// Sup of |f(z) - z| over the sampled boundary circles at heights +-height.
double lift_norm(const AnnulusLift& f, double height);

/// Sup-norm distance of displacements at the given height.
double distance(const AnnulusLift& f, const AnnulusLift& g, double height);

TruncateResult truncate(const AnnulusLift& f, int m);

}  // namespace cmr
