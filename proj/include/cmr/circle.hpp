#pragma once

#include <string>
#include <vector>

#include "cmr/annulus.hpp"

namespace cmr {

struct OrbitSample {
    std::vector<cplx> points;        ///< lift values z_j = f^j(z0)
    std::vector<long long> wraps;    ///< floor(Re z_j)
    double height_bound = 0.0;       ///< max |Im z_j| seen
    bool escaped = false;
    int escape_index = -1;
};

/// Orbits escape when |Im z| exceeds escape_margin * eps; this is a negative
/// stable-manifold membership signal, not a fatal error.
inline constexpr double kEscapeMargin = 0.95;

OrbitSample orbit(const AnnulusLift& f, cplx z0, int N);

struct RotationEstimate {
    double value = 0.0;        ///< in [0,1)
    double error_bound = 1.0;
    std::string method;        ///< "birkhoff" | "convergent-accelerated"
    long long iterates_used = 0;
    bool converged = false;
    double im_drift = 0.0;     ///< Im part of the displacement average (0 for real maps)
};

struct RotationOptions {
    long long budget = 1 << 20;       ///< max iterates for the adaptive ladder
    long long fixed_iterates = 0;     ///< >0: single pass at exactly this N (branch-free)
    long long initial_iterates = 4096;
};

/// Rotation number of the circle projection via weighted Birkhoff averaging of
/// lift displacements (exponential bump window), doubling N until the
/// requested accuracy is met. Falls back to closest-return Richardson
/// extrapolation when the ladder saturates. Non-monotone lifts are rejected.
RotationEstimate rotation_number(const AnnulusLift& f, double target_accuracy,
                                 const RotationOptions& opt = {});

/// Closest-return estimator: plain averages at convergent denominators q_n of
/// the running estimate, Richardson-extrapolated under the error model
/// (z_N - z_0)/N = rho + O(1/N^2) along closest returns.
RotationEstimate rotation_number_convergent(const AnnulusLift& f, double target_accuracy,
                                            long long max_iterates = 1 << 21);

/// Complex displacement average (used for perturbed, non-real-symmetric lifts
/// where the drift Im part is meaningful data).
cplx rotation_number_complex(const AnnulusLift& f, long long N);

/// Arnold family lift z + t + (a / 2 pi) sin(2 pi z); requires 0 <= a < 1.
AnnulusLift arnold(double t, double a, double eps = 0.2);

/// Translated family f_w(z) = f(z - w) + w; coefficients pick up phases
/// e^{-2 pi i k w}, the mean is unchanged.
AnnulusLift translated(const AnnulusLift& f, cplx w);

/// R_zeta o f: mean shifted by zeta.
AnnulusLift rotated(const AnnulusLift& f, cplx zeta);

struct CircleCurve {
    std::vector<double> angles;  ///< {j alpha}, cyclically ordering the samples
    std::vector<cplx> points;    ///< orbit points reduced to [0,1) x i R
};

/// Samples of the invariant circle as the orbit closure of 0, ordered by the
/// conjugacy combinatorics: f^j(0) gets angle {j alpha}.
CircleCurve invariant_circle(const AnnulusLift& f, double alpha, int N);

}  // namespace cmr
