#pragma once

#include <optional>
#include <vector>

#include "cmr/numeric.hpp"

namespace cmr {

/// Continued fraction of x in (0,1) with positive partial quotients:
///   x = 1/(a0 + 1/(a1 + 1/(a2 + ...)))
struct CFExpansion {
    std::vector<long long> terms;  ///< a_0, a_1, ... (finite prefix)
    double value = 0.0;            ///< the expanded number
    bool exact = false;            ///< expansion terminated (rational input)
};

struct Convergent {
    long long p = 0;
    long long q = 1;
};

struct BoundedTypeWitness {
    int bound = 0;  ///< K
    int depth = 0;  ///< number of terms checked
};

/// Either a witness (all checked terms <= K) or the first violating index.
struct BoundedTypeResult {
    std::optional<BoundedTypeWitness> witness;
    int violation_index = -1;
    bool bounded() const { return witness.has_value(); }
};

/// Gauss map G(x) = {1/x}. Requires x in (0,1).
double gauss(double x);

/// Depth cap beyond which double-precision Gauss iterations are not trusted.
inline constexpr int kMaxExpansionDepth = 40;

/// Partial quotients of x in (0,1), at most n terms (n capped at kMaxExpansionDepth).
/// Stops early on rational detection (remainder < 1e-14), setting `exact`.
CFExpansion expand(double x, int n);

/// Convergents p_k/q_k = [a_0,...,a_{k-1}], k = 0..terms.size().
/// The leading entry is p_0/q_0 = 0/1; q obeys q_k = a_{k-1} q_{k-1} + q_{k-2}.
std::vector<Convergent> convergents(const CFExpansion& e);
std::vector<Convergent> convergents(const std::vector<long long>& terms);

BoundedTypeResult is_bounded_type(const CFExpansion& e, int K);

/// Value of the finite continued fraction 1/(a0 + 1/(a1 + ...)).
double reconstruct(const std::vector<long long>& terms);

}  // namespace cmr
