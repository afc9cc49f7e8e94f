#pragma once

#include <span>
#include <vector>

#include "cmr/numeric.hpp"

namespace cmr {

/// 1-periodic analytic function on the strip |Im z| <= eps, held as a
/// two-sided truncated Fourier series
///     g(z) = sum_{|k| <= degree} c_k e^{2 pi i k z}.
/// This is the computational realization of vector fields / conjugacy
/// corrections on the annulus; the mean c_0 is the rotation component.
class FourierSeries {
public:
    FourierSeries() : eps_(0.0), degree_(0), c_(1, cplx{0.0, 0.0}) {}
    FourierSeries(double eps, int degree);

    static FourierSeries zero(double eps, int degree) { return FourierSeries(eps, degree); }
    static FourierSeries constant(double eps, cplx value);
    /// Single mode c_k e^{2 pi i k z}.
    static FourierSeries mode(double eps, int k, cplx coeff);

    double eps() const { return eps_; }
    void set_eps(double e) { eps_ = e; }
    int degree() const { return degree_; }

    cplx coeff(int k) const {
        if (k < -degree_ || k > degree_) return {0.0, 0.0};
        return c_[static_cast<std::size_t>(k + degree_)];
    }
    void set_coeff(int k, cplx v);
    cplx mean() const { return c_[static_cast<std::size_t>(degree_)]; }
    void set_mean(cplx v) { c_[static_cast<std::size_t>(degree_)] = v; }

    cplx eval(cplx z) const;

    /// Termwise derivative: c_k -> 2 pi i k c_k.
    FourierSeries derivative() const;

    /// Keep modes |k| <= m; `tail` (if given) receives sum_{|k|>m} |c_k| e^{2 pi |k| eps}.
    FourierSeries truncated(int m, double* tail = nullptr) const;

    /// Zero coefficients with |c_k| <= floor and shrink the stored degree to
    /// the last surviving mode. Grid transforms leave roundoff-level noise in
    /// high modes, which exponential boundary weights would otherwise amplify.
    FourierSeries chopped(double floor) const;

    /// Max |g| over the sampled boundary circles Im z = +-height (one circle
    /// when height == 0). Grid size max(4*degree+1, 64).
    double sup_norm(double height) const;

    bool is_zero_mean(double tol = 1e-12) const { return std::abs(mean()) <= tol; }
    /// c_0 real and c_{-k} = conj(c_k).
    bool is_real_symmetric(double tol = 1e-12) const;

    /// Phase shift: g(. - w); c_k -> c_k e^{-2 pi i k w}.
    FourierSeries shifted(cplx w) const;

    FourierSeries& operator+=(const FourierSeries& o);
    FourierSeries& operator-=(const FourierSeries& o);
    FourierSeries& operator*=(cplx s);
    friend FourierSeries operator+(FourierSeries a, const FourierSeries& b) { return a += b; }
    friend FourierSeries operator-(FourierSeries a, const FourierSeries& b) { return a -= b; }
    friend FourierSeries operator*(cplx s, FourierSeries a) { return a *= s; }

    /// Coefficients from N equispaced samples on the real circle (plain DFT,
    /// modes |k| <= degree). N must exceed 2*degree.
    static FourierSeries from_samples(double eps, int degree, std::span<const cplx> samples);

    /// Values at z = j/N, j = 0..N-1.
    std::vector<cplx> samples(int N) const;

    const std::vector<cplx>& raw() const { return c_; }

private:
    double eps_;
    int degree_;
    std::vector<cplx> c_;  // index k + degree_
};

/// Anti-aliasing grid size used for products/compositions of band-limited series.
inline int composition_grid(int degree) { return 4 * degree + 1; }

}  // namespace cmr
