#pragma once

#include "cmr/linearize.hpp"
#include "cmr/pointmap.hpp"

namespace cmr {

/// Return-map pair (eta, xi) = (f^{q_n} - p_n, f^{q_{n+1}} - p_{n+1}), the
/// iterates at consecutive closest-return times in the frame where the
/// fundamental translation is removed. Exact iterates of one map commute.
struct CommutingPair {
    AnnulusLift eta;
    AnnulusLift xi;
    int level = 0;
    double source_rotation = 0.0;
    long long qn = 1, qn1 = 1, pn = 0, pn1 = 0;
};

struct PairOptions {
    double rho_accuracy = 1e-12;
    long long rho_budget = 1 << 21;
    int degree = 64;
    double tail_alarm = 1e-8;  ///< top-mode ratio at the degree cap flagging blow-up
};

CommutingPair build_pair(const AnnulusLift& f, int level, const PairOptions& opt = {});

/// Polynomial in ascending powers (fits of rescaled return maps, which are
/// not 1-periodic and so live outside the Fourier representation).
struct PolyFit {
    std::vector<cplx> coeff;
    cplx eval(cplx z) const;
    PolyFit derivative() const;
};

/// The pair rescaled by l(z) = s z with s = eta(0): maps on a fixed window
/// around 0, sampled and polynomial-fitted. eta_r(0) = 1 by construction.
struct RescaledPair {
    std::vector<double> window;  ///< abscissas in [-1.5, 1.5]
    std::vector<cplx> eta_r;
    std::vector<cplx> xi_r;
    cplx scale{0.0, 0.0};        ///< f^{q_n}(0) in the reduced frame
    PolyFit eta_fit;
    PolyFit xi_fit;
};

RescaledPair rescale_pair(const CommutingPair& p, int samples = 65, int poly_degree = 8);

/// Max distance of (eta_r, xi_r) to their best affine approximations over the
/// window; the pair-renormalization contraction is read off its decay in k.
double affinity_defect(const RescaledPair& p);

/// Max |g''/g'| over the window (from the polynomial fits) -- the
/// nonlinearity functional contracted by renormalization.
double nonlinearity_max(const RescaledPair& p);

/// Normalized pair (alpha, beta) with alpha = T_1 (z -> z+1) implicit. A pure
/// lift commutes with T_1 by construction; almost-commuting seeds carry a
/// small non-periodic polynomial part c2 z^2 + c3 z^3 whose commutator with
/// T_1 is the measured defect triple.
struct NormalizedPair {
    AnnulusLift beta;
    DefectTriple defect;
    cplx seed_c2{0.0, 0.0};
    cplx seed_c3{0.0, 0.0};
    bool seeded() const { return seed_c2 != cplx{0.0, 0.0} || seed_c3 != cplx{0.0, 0.0}; }
    PointMap beta_pointwise() const;
};

NormalizedPair make_normalized(AnnulusLift beta, cplx seed_c2 = {}, cplx seed_c3 = {});

/// Linearizing chart for the Abel equation Psi^{-1} o beta o Psi = T_1,
/// realized as Psi(z) = h^{-1}(rho z) with h the circle linearizer
/// (h o beta o h^{-1} = R_rho).
struct AbelChart {
    ConjugacyChart chart;
    cplx rho{0.0, 0.0};
};

struct AbelOptions {
    double residual_tol = 1e-8;
    double rho_accuracy = 1e-12;
    long long rho_budget = 1 << 20;
    long long fixed_rho_iterates = 0;
    int fixed_kam_iterations = 0;
    int degree = 64;
    int verify_samples = 64;
};

AbelChart solve_abel(const AnnulusLift& beta, const AbelOptions& opt = {});

struct RenormOptions {
    AbelOptions abel{};
    int degree = 64;
    int kappa_cap = 200;
};

/// One renormalization step on normalized pairs: kappa = [1/rho(f_beta)],
/// gamma = beta^kappa o T_1, conjugation by the Abel chart of beta, then mean
/// reduction by an integer translation into (0,1). One step realizes one
/// Gauss step on the projected rotation number; T_theta maps to T_{G(theta)}.
NormalizedPair renorm_step(const NormalizedPair& p, const RenormOptions& opt = {});

/// Galerkin truncation of the renormalization differential at R_alpha:
/// central finite differences along the basis fields e^{2 pi i k z},
/// k = -modes..modes, with mode 0 the rotation direction. Entries are stored
/// row-major over output modes x input modes.
struct GalerkinMatrix {
    int modes = 0;
    double base_alpha = 0.0;
    int steps = 1;
    double fd_step = 0.0;
    std::vector<cplx> entries;

    int dim() const { return 2 * modes + 1; }
    cplx at(int k_out, int k_in) const {
        return entries[static_cast<std::size_t>((k_out + modes) * dim() + (k_in + modes))];
    }
};

struct GalerkinOptions {
    long long rho_iterates = 32768;  ///< frozen Birkhoff length (branch-free schedule)
    int kam_iterations = 3;          ///< frozen conjugacy-iteration count
    int degree = 64;
    double base_eps = 0.25;
    int jobs = 1;
};

GalerkinMatrix galerkin_differential(double alpha, int modes, double fd_step, int steps = 1,
                                     const GalerkinOptions& opt = {});

struct SpectrumResult {
    std::vector<cplx> eigenvalues;      ///< sorted by modulus, descending
    std::vector<cplx> dominant_vector;  ///< over modes -M..M
    int unstable_count = 0;             ///< eigenvalues with modulus > 1
    double dominant_angle_to_mode0 = 0.0;
    double second_modulus = 0.0;
};

/// Dense eigensolve of the Galerkin matrix.
SpectrumResult spectrum(const GalerkinMatrix& m);

}  // namespace cmr
