#include "cmr/cfrac.hpp"

#include <cmath>

namespace cmr {

namespace {
constexpr double kRationalFloor = 1e-14;
}

double gauss(double x) {
    if (!(x > 0.0 && x < 1.0)) {
        throw DomainError("gauss: argument must lie in (0,1), got " + std::to_string(x));
    }
    return frac(1.0 / x);
}

CFExpansion expand(double x, int n) {
    if (!(x > 0.0 && x < 1.0)) {
        throw DomainError("expand: argument must lie in (0,1), got " + std::to_string(x));
    }
    if (n < 1) throw DomainError("expand: depth must be >= 1");
    n = std::min(n, kMaxExpansionDepth);

    CFExpansion e;
    e.value = x;
    double a = x;
    for (int i = 0; i < n; ++i) {
        if (a < kRationalFloor) {
            e.exact = true;
            break;
        }
        double inv = 1.0 / a;
        e.terms.push_back(static_cast<long long>(std::floor(inv)));
        a = inv - std::floor(inv);
    }
    if (!e.exact && a < kRationalFloor) e.exact = true;
    return e;
}

std::vector<Convergent> convergents(const std::vector<long long>& terms) {
    if (terms.empty()) throw DomainError("convergents: empty expansion");
    std::vector<Convergent> out;
    out.reserve(terms.size() + 1);
    // p_0/q_0 = 0/1, and for the value 1/(a0+...) the recursion runs with
    // p_{-1}/q_{-1} = 1/0.
    long long pm1 = 1, qm1 = 0;
    long long p0 = 0, q0 = 1;
    out.push_back({p0, q0});
    for (long long a : terms) {
        if (a < 1) throw DomainError("convergents: partial quotients must be >= 1");
        long long p = a * p0 + pm1;
        long long q = a * q0 + qm1;
        pm1 = p0;
        qm1 = q0;
        p0 = p;
        q0 = q;
        out.push_back({p, q});
    }
    return out;
}

std::vector<Convergent> convergents(const CFExpansion& e) { return convergents(e.terms); }

BoundedTypeResult is_bounded_type(const CFExpansion& e, int K) {
    if (K < 1) throw DomainError("is_bounded_type: K must be >= 1");
    BoundedTypeResult r;
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
        if (e.terms[i] > K) {
            r.violation_index = static_cast<int>(i);
            return r;
        }
    }
    r.witness = BoundedTypeWitness{K, static_cast<int>(e.terms.size())};
    return r;
}

double reconstruct(const std::vector<long long>& terms) {
    if (terms.empty()) throw DomainError("reconstruct: empty expansion");
    double r = 0.0;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        if (*it < 1) throw DomainError("reconstruct: partial quotients must be >= 1");
        r = 1.0 / (static_cast<double>(*it) + r);
    }
    return r;
}

}  // namespace cmr
