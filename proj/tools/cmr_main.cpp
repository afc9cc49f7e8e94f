// cmr: numerical laboratory for renormalization of analytic circle maps.
// Subcommands emit JSON on stdout; CSV plot data only via --plot-data.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cmr/io.hpp"

using namespace cmr;

namespace {

CFTarget parse_alpha(const std::string& token) {
    if (token == "golden") return CFTarget::golden();
    if (token == "silver") return CFTarget::silver();
    if (token.find('.') != std::string::npos) {
        throw DomainError("--alpha takes 'golden', 'silver', or a comma list of partial "
                          "quotients; bare decimals cannot pin an irrational target");
    }
    CFTarget t;
    std::size_t pos = 0;
    while (pos < token.size()) {
        std::size_t next = token.find(',', pos);
        if (next == std::string::npos) next = token.size();
        t.terms.push_back(std::stoll(token.substr(pos, next - pos)));
        pos = next + 1;
    }
    if (t.terms.empty()) throw DomainError("--alpha: empty term list");
    return t;
}

AnnulusLift family_map(const std::string& family, double t, double a, double eps,
                       const std::string& map_path) {
    if (!map_path.empty()) return lift_from_json(json::parse(read_text_file(map_path)));
    if (family == "arnold") return arnold(t, a, eps);
    if (family == "rotation") return AnnulusLift::rotation(eps, t);
    throw DomainError("unknown family '" + family + "' (arnold|rotation, or --map FILE)");
}

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

int run(int argc, char** argv) {
    CLI::App app{"circle-map renormalization laboratory"};
    app.require_subcommand(1);

    // ---- cf ----------------------------------------------------------------
    auto* cf = app.add_subcommand("cf", "continued fraction of a value in (0,1)");
    double cf_value = 0.0;
    int cf_depth = 20, cf_K = 0;
    cf->add_option("--value", cf_value, "number in (0,1)")->required();
    cf->add_option("--depth", cf_depth, "number of terms");
    cf->add_option("--K", cf_K, "bounded-type check against this K");
    cf->callback([&] {
        CFExpansion e = expand(cf_value, cf_depth);
        json out;
        out["terms"] = e.terms;
        out["exact"] = e.exact;
        json conv = json::array();
        for (const auto& c : convergents(e)) conv.push_back({c.p, c.q});
        out["convergents"] = conv;
        if (cf_K > 0) {
            auto r = is_bounded_type(e, cf_K);
            out["bounded_type"] = r.bounded();
            if (!r.bounded()) out["violation_index"] = r.violation_index;
        }
        emit(out);
    });

    // ---- rho ---------------------------------------------------------------
    auto* rho = app.add_subcommand("rho", "rotation number of a circle-map lift");
    std::string rho_family = "arnold", rho_map, rho_orbit_csv, rho_curve_csv;
    double rho_t = 0.0, rho_a = 0.0, rho_eps = 0.2, rho_acc = 1e-10;
    int rho_orbit_len = 1000, rho_curve_len = 233;
    rho->add_option("--family", rho_family, "arnold|rotation");
    rho->add_option("--map", rho_map, "JSON map file");
    rho->add_option("--t", rho_t, "rotation coefficient");
    rho->add_option("--a", rho_a, "Arnold coupling");
    rho->add_option("--eps", rho_eps, "strip half-height");
    rho->add_option("--accuracy", rho_acc, "target accuracy");
    rho->add_option("--plot-data", rho_orbit_csv, "write the orbit CSV here");
    rho->add_option("--orbit-length", rho_orbit_len);
    rho->add_option("--curve-data", rho_curve_csv, "write the invariant-circle CSV here");
    rho->add_option("--curve-length", rho_curve_len);
    rho->callback([&] {
        AnnulusLift f = family_map(rho_family, rho_t, rho_a, rho_eps, rho_map);
        RotationEstimate est = rotation_number(f, rho_acc);
        if (!rho_orbit_csv.empty()) {
            write_text_file(rho_orbit_csv, orbit_csv(orbit(f, cplx{0.0, 0.0}, rho_orbit_len)));
        }
        if (!rho_curve_csv.empty()) {
            write_text_file(rho_curve_csv, curve_csv(invariant_circle(f, est.value, rho_curve_len)));
        }
        emit(estimate_to_json(est));
    });

    // ---- renorm ------------------------------------------------------------
    auto* rn = app.add_subcommand("renorm", "pair renormalization contraction diagnostics");
    std::string rn_family = "arnold", rn_map, rn_alpha = "golden", rn_plot, rn_pair_out;
    double rn_t = 0.0, rn_a = 0.0, rn_eps = 0.2;
    int rn_levels = 6;
    bool rn_shoot = false;
    std::vector<double> rn_bracket{0.55, 0.70};
    rn->add_option("--family", rn_family);
    rn->add_option("--map", rn_map);
    rn->add_option("--t", rn_t);
    rn->add_option("--a", rn_a);
    rn->add_option("--eps", rn_eps);
    rn->add_option("--alpha", rn_alpha);
    rn->add_option("--levels", rn_levels, "deepest pair level k");
    rn->add_flag("--shoot", rn_shoot, "shoot t to the target first");
    rn->add_option("--bracket", rn_bracket)->expected(2);
    rn->add_option("--plot-data", rn_plot, "write defect-vs-k CSV here");
    rn->add_option("--pair-out", rn_pair_out, "write the deepest pair JSON here");
    rn->callback([&] {
        CFTarget target = parse_alpha(rn_alpha);
        AnnulusLift f = family_map(rn_family, rn_t, rn_a, rn_eps, rn_map);
        if (rn_shoot) f = shoot(f, target, rn_bracket[0], rn_bracket[1]).f_star;
        json out;
        json lv = json::array();
        std::vector<int> ks;
        std::vector<double> defects, nonlin;
        for (int k = 1; k <= rn_levels; ++k) {
            CommutingPair p = build_pair(f, k);
            RescaledPair r = rescale_pair(p);
            if (k == rn_levels && !rn_pair_out.empty()) {
                write_text_file(rn_pair_out, pair_to_json(p).dump(2));
            }
            const double d = affinity_defect(r);
            const double nl = nonlinearity_max(r);
            ks.push_back(k);
            defects.push_back(d);
            nonlin.push_back(nl);
            lv.push_back({{"k", k},
                          {"qn", p.qn},
                          {"scale_re", r.scale.real()},
                          {"scale_im", r.scale.imag()},
                          {"affinity_defect", d},
                          {"nonlinearity", nl}});
        }
        out["levels"] = lv;
        if (defects.size() >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < defects.size(); ++i) {
                const double x = static_cast<double>(ks[i]);
                const double y = std::log(defects[i]);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            const double n = static_cast<double>(defects.size());
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            out["lambda_fit"] = std::exp(slope);
        }
        if (!rn_plot.empty()) write_text_file(rn_plot, defect_csv(ks, defects, nonlin));
        emit(out);
    });

    // ---- spectrum ----------------------------------------------------------
    auto* sp = app.add_subcommand("spectrum", "Galerkin differential spectrum at a rotation");
    std::string sp_alpha = "golden", sp_plot;
    int sp_modes = 16, sp_steps = 2, sp_jobs = 1;
    double sp_fd = 1e-5;
    sp->add_option("--alpha", sp_alpha);
    sp->add_option("--modes", sp_modes);
    sp->add_option("--steps", sp_steps, "composed Gauss steps");
    sp->add_option("--fd", sp_fd, "finite-difference step");
    sp->add_option("--jobs", sp_jobs, "parallel column jobs");
    sp->add_option("--plot-data", sp_plot, "write spectrum CSV here");
    sp->callback([&] {
        CFTarget target = parse_alpha(sp_alpha);
        GalerkinOptions go;
        go.jobs = sp_jobs;
        GalerkinMatrix m = galerkin_differential(target.value(), sp_modes, sp_fd, sp_steps, go);
        SpectrumResult s = spectrum(m);
        json out = spectrum_to_json(s);
        out["modes"] = sp_modes;
        out["steps"] = sp_steps;
        out["fd_step"] = sp_fd;
        if (!sp_plot.empty()) write_text_file(sp_plot, spectrum_csv(s));
        emit(out);
    });

    // ---- linearize ---------------------------------------------------------
    auto* lin = app.add_subcommand("linearize", "KAM conjugacy to the target rotation");
    std::string lin_family = "arnold", lin_map, lin_alpha = "golden", lin_plot, lin_chart_out;
    double lin_t = 0.0, lin_a = 0.0, lin_eps = 0.2, lin_height = 0.0;
    bool lin_shoot = false;
    std::vector<double> lin_bracket{0.55, 0.70};
    lin->add_option("--family", lin_family);
    lin->add_option("--map", lin_map);
    lin->add_option("--t", lin_t);
    lin->add_option("--a", lin_a);
    lin->add_option("--eps", lin_eps);
    lin->add_option("--alpha", lin_alpha);
    lin->add_option("--height", lin_height, "target chart height (default eps/2)");
    lin->add_flag("--shoot", lin_shoot);
    lin->add_option("--bracket", lin_bracket)->expected(2);
    lin->add_option("--plot-data", lin_plot, "write iteration error CSV here");
    lin->add_option("--chart-out", lin_chart_out, "write the chart JSON here");
    lin->callback([&] {
        CFTarget target = parse_alpha(lin_alpha);
        AnnulusLift f = family_map(lin_family, lin_t, lin_a, lin_eps, lin_map);
        json out;
        if (lin_shoot) {
            ShootingResult sr = shoot(f, target, lin_bracket[0], lin_bracket[1]);
            f = sr.f_star;
            out["shoot"] = shooting_to_json(sr);
        }
        ConjugacyChart chart = kam_linearize(f, target.value(), lin_height);
        out["chart"] = chart_to_json(chart);
        if (!lin_plot.empty()) write_text_file(lin_plot, error_sequence_csv(chart.error_sequence));
        if (!lin_chart_out.empty()) write_text_file(lin_chart_out, out["chart"].dump(2));
        emit(out);
    });

    // ---- shoot -------------------------------------------------------------
    auto* sh = app.add_subcommand("shoot", "stable-manifold shooting on the rotation coefficient");
    std::string sh_family = "arnold", sh_map, sh_alpha = "golden", sh_plot;
    double sh_t = 0.0, sh_a = 0.0, sh_eps = 0.2, sh_amp = 0.02;
    bool sh_chart = false;
    int sh_directions = 5;
    std::vector<double> sh_bracket{0.55, 0.70};
    sh->add_option("--family", sh_family);
    sh->add_option("--map", sh_map);
    sh->add_option("--t", sh_t);
    sh->add_option("--a", sh_a);
    sh->add_option("--eps", sh_eps);
    sh->add_option("--alpha", sh_alpha);
    sh->add_option("--bracket", sh_bracket)->expected(2);
    sh->add_flag("--chart", sh_chart, "sample the W_alpha graph over zero-mean directions");
    sh->add_option("--directions", sh_directions);
    sh->add_option("--amp", sh_amp);
    sh->add_option("--plot-data", sh_plot, "write W_alpha graph CSV here");
    sh->callback([&] {
        CFTarget target = parse_alpha(sh_alpha);
        AnnulusLift f = family_map(sh_family, sh_t, sh_a, sh_eps, sh_map);
        json out;
        if (sh_chart) {
            std::vector<FourierSeries> dirs;
            for (int d = 0; d < sh_directions; ++d) {
                const int k = d / 2 + 1;
                FourierSeries g(sh_eps, k);
                const cplx half{0.5, 0.0};
                if (d % 2 == 0) {  // sin mode
                    g.set_coeff(k, half / kI);
                    g.set_coeff(-k, -half / kI);
                } else {  // cos mode
                    g.set_coeff(k, half);
                    g.set_coeff(-k, half);
                }
                dirs.push_back(g);
            }
            auto samples = stable_manifold_chart(AnnulusLift::rotation(sh_eps, target.value()),
                                                 dirs, sh_amp, target);
            json arr = json::array();
            for (const auto& s : samples) {
                arr.push_back({{"direction", s.direction_id}, {"amp", s.amp}, {"t_star", s.t_star}});
            }
            out["walpha"] = arr;
            if (!sh_plot.empty()) write_text_file(sh_plot, walpha_csv(samples));
        } else {
            ShootingResult sr = shoot(f, target, sh_bracket[0], sh_bracket[1]);
            out = shooting_to_json(sr);
            out["rho_at_t_star"] = estimate_to_json(rotation_number(sr.f_star, 1e-12));
        }
        emit(out);
    });

    // ---- herman ------------------------------------------------------------
    auto* hm = app.add_subcommand("herman", "dissipative 2D family: shooting and ring certificate");
    std::string hm_alpha = "golden", hm_config, hm_plot;
    double hm_t = 0.0, hm_a = 0.1, hm_c = 0.5, hm_d = 0.2, hm_e = 0.1, hm_eps = 0.2;
    bool hm_shoot = false;
    int hm_modes = 32, hm_orbit = 4096;
    std::vector<double> hm_bracket{0.55, 0.70};
    hm->add_option("--config", hm_config, "family config JSON");
    hm->add_option("--alpha", hm_alpha);
    hm->add_option("--t", hm_t);
    hm->add_option("--a", hm_a);
    hm->add_option("--c", hm_c);
    hm->add_option("--d", hm_d);
    hm->add_option("--e", hm_e);
    hm->add_option("--eps", hm_eps);
    hm->add_flag("--shoot", hm_shoot, "bisect the slice in t first");
    hm->add_option("--bracket", hm_bracket)->expected(2);
    hm->add_option("--modes", hm_modes);
    hm->add_option("--orbit", hm_orbit, "attractor orbit length for the fit");
    hm->add_option("--plot-data", hm_plot, "write attractor orbit CSV here");
    hm->callback([&] {
        if (!hm_config.empty()) {
            const json cfg = json::parse(read_text_file(hm_config));
            hm_t = cfg.value("t", hm_t);
            hm_a = cfg.value("a", hm_a);
            hm_c = cfg.value("c", hm_c);
            hm_d = cfg.value("d", hm_d);
            hm_e = cfg.value("e", hm_e);
            hm_eps = cfg.value("eps", hm_eps);
            if (cfg.contains("slice")) {
                hm_shoot = true;
                hm_bracket = {cfg["slice"].value("lo", hm_bracket[0]),
                              cfg["slice"].value("hi", hm_bracket[1])};
            }
        }
        CFTarget target = parse_alpha(hm_alpha);
        json out;
        double t = hm_t;
        if (hm_shoot) {
            auto family = [&](double s) {
                return as_flow(example_family(s, hm_a, hm_c, hm_d, hm_e, hm_eps));
            };
            Shoot2DResult sr = shoot2d(family, target, hm_bracket[0], hm_bracket[1]);
            t = sr.s_star;
            out["shoot"] = {{"s_star", sr.s_star},
                            {"bracket_width", sr.bracket_width},
                            {"certificate_depth", sr.certificate_depth}};
        }
        const Map2D F = example_family(t, hm_a, hm_c, hm_d, hm_e, hm_eps);
        const Flow2D flow = as_flow(F);
        HermanCertificate cert = certify_herman(flow, target, hm_orbit, hm_modes);
        canonicalize_certificate(cert);
        out["certificate"] = certificate_to_json(cert);
        out["dissipation_bound"] = F.dissipation_bound();
        if (!hm_plot.empty()) {
            Orbit2D orb = attractor_orbit(flow, cplx{0.0, 0.0}, cplx{0.0, 0.0}, 10000, hm_orbit);
            write_text_file(hm_plot, orbit2d_csv(orb));
        }
        emit(out);
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DomainError& e) {
        emit(json{{"error", {{"type", "domain"}, {"message", e.what()}}}});
        return 2;
    } catch (const NumericalError& e) {
        emit(json{{"error", {{"type", "numerical"}, {"message", e.what()}}}});
        return 3;
    } catch (const json::exception& e) {
        emit(json{{"error", {{"type", "domain"}, {"message", e.what()}}}});
        return 2;
    } catch (const std::exception& e) {
        emit(json{{"error", {{"type", "internal"}, {"message", e.what()}}}});
        return 3;
    }
}
