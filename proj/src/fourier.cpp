#include "cmr/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace cmr {

FourierSeries::FourierSeries(double eps, int degree)
    : eps_(eps), degree_(degree), c_(static_cast<std::size_t>(2 * degree + 1), cplx{0.0, 0.0}) {
    if (eps < 0.0) throw DomainError("FourierSeries: negative strip height");
    if (degree < 0) throw DomainError("FourierSeries: negative degree");
}

FourierSeries FourierSeries::constant(double eps, cplx value) {
    FourierSeries g(eps, 0);
    g.set_mean(value);
    return g;
}

FourierSeries FourierSeries::mode(double eps, int k, cplx coeff) {
    FourierSeries g(eps, std::max(1, std::abs(k)));
    g.set_coeff(k, coeff);
    return g;
}

void FourierSeries::set_coeff(int k, cplx v) {
    if (k < -degree_ || k > degree_) {
        if (v == cplx{0.0, 0.0}) return;
        // grow to fit
        FourierSeries g(eps_, std::abs(k));
        for (int j = -degree_; j <= degree_; ++j) g.c_[static_cast<std::size_t>(j + g.degree_)] = coeff(j);
        *this = g;
    }
    c_[static_cast<std::size_t>(k + degree_)] = v;
}

cplx FourierSeries::eval(cplx z) const {
    // two-sided Horner in u = e^{2 pi i z} and 1/u
    const cplx u = std::exp(kI * kTwoPi * z);
    const cplx v = 1.0 / u;
    cplx pos{0.0, 0.0}, neg{0.0, 0.0};
    for (int k = degree_; k >= 1; --k) {
        pos = pos * u + c_[static_cast<std::size_t>(k + degree_)];
        neg = neg * v + c_[static_cast<std::size_t>(-k + degree_)];
    }
    return mean() + pos * u + neg * v;
}

FourierSeries FourierSeries::derivative() const {
    FourierSeries d(eps_, degree_);
    for (int k = -degree_; k <= degree_; ++k) {
        d.c_[static_cast<std::size_t>(k + degree_)] =
            kI * (kTwoPi * k) * c_[static_cast<std::size_t>(k + degree_)];
    }
    return d;
}

FourierSeries FourierSeries::truncated(int m, double* tail) const {
    if (m < 0) throw DomainError("truncated: negative degree");
    double t = 0.0;
    FourierSeries g(eps_, std::min(m, degree_));
    for (int k = -degree_; k <= degree_; ++k) {
        cplx ck = c_[static_cast<std::size_t>(k + degree_)];
        if (std::abs(k) <= m) {
            g.set_coeff(k, ck);
        } else {
            t += std::abs(ck) * std::exp(kTwoPi * std::abs(k) * eps_);
        }
    }
    if (tail) *tail = t;
    return g;
}

FourierSeries FourierSeries::chopped(double floor) const {
    int top = 0;
    for (int k = 1; k <= degree_; ++k) {
        if (std::abs(coeff(k)) > floor || std::abs(coeff(-k)) > floor) top = k;
    }
    FourierSeries g(eps_, top);
    g.set_mean(mean());
    for (int k = 1; k <= top; ++k) {
        const cplx cp = coeff(k), cm = coeff(-k);
        g.set_coeff(k, std::abs(cp) > floor ? cp : cplx{0.0, 0.0});
        g.set_coeff(-k, std::abs(cm) > floor ? cm : cplx{0.0, 0.0});
    }
    return g;
}

double FourierSeries::sup_norm(double height) const {
    const int N = std::max(composition_grid(degree_), 64);
    double m = 0.0;
    const double h = std::abs(height);
    for (int j = 0; j < N; ++j) {
        const double x = static_cast<double>(j) / N;
        m = std::max(m, std::abs(eval(cplx{x, h})));
        if (h > 0.0) m = std::max(m, std::abs(eval(cplx{x, -h})));
    }
    return m;
}

bool FourierSeries::is_real_symmetric(double tol) const {
    if (std::abs(mean().imag()) > tol) return false;
    for (int k = 1; k <= degree_; ++k) {
        if (std::abs(coeff(-k) - std::conj(coeff(k))) > tol) return false;
    }
    return true;
}

FourierSeries FourierSeries::shifted(cplx w) const {
    FourierSeries g(eps_, degree_);
    for (int k = -degree_; k <= degree_; ++k) {
        g.c_[static_cast<std::size_t>(k + degree_)] =
            c_[static_cast<std::size_t>(k + degree_)] * std::exp(-kI * (kTwoPi * k) * w);
    }
    return g;
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& o) {
    if (o.degree_ > degree_) {
        FourierSeries g(std::min(eps_, o.eps_), o.degree_);
        for (int k = -degree_; k <= degree_; ++k) g.set_coeff(k, coeff(k));
        *this = g;
    }
    eps_ = std::min(eps_, o.eps_);
    for (int k = -o.degree_; k <= o.degree_; ++k) {
        c_[static_cast<std::size_t>(k + degree_)] += o.coeff(k);
    }
    return *this;
}

FourierSeries& FourierSeries::operator-=(const FourierSeries& o) {
    FourierSeries neg = o;
    neg *= cplx{-1.0, 0.0};
    return *this += neg;
}

FourierSeries& FourierSeries::operator*=(cplx s) {
    for (auto& ck : c_) ck *= s;
    return *this;
}

FourierSeries FourierSeries::from_samples(double eps, int degree, std::span<const cplx> samples) {
    const int N = static_cast<int>(samples.size());
    if (N <= 2 * degree) throw DomainError("from_samples: grid too small for requested degree");
    FourierSeries g(eps, degree);
    for (int k = -degree; k <= degree; ++k) {
        cplx acc{0.0, 0.0};
        // e^{-2 pi i k j / N} accumulated by rotation; start at j = 0
        const cplx step = std::exp(-kI * (kTwoPi * k / N));
        cplx rot{1.0, 0.0};
        for (int j = 0; j < N; ++j) {
            acc += samples[static_cast<std::size_t>(j)] * rot;
            rot *= step;
        }
        g.set_coeff(k, acc / static_cast<double>(N));
    }
    return g;
}

std::vector<cplx> FourierSeries::samples(int N) const {
    std::vector<cplx> out(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        out[static_cast<std::size_t>(j)] = eval(cplx{static_cast<double>(j) / N, 0.0});
    }
    return out;
}

}  // namespace cmr
