#include "cmr/io.hpp"

#include <fstream>
#include <sstream>

namespace cmr {

json lift_to_json(const AnnulusLift& f) {
    json j;
    j["eps"] = f.eps();
    j["mean"] = {f.mean().real(), f.mean().imag()};
    json coeffs = json::array();
    for (int k = -f.degree(); k <= f.degree(); ++k) {
        if (k == 0) continue;
        const cplx c = f.coeff(k);
        if (c == cplx{0.0, 0.0}) continue;
        coeffs.push_back({k, c.real(), c.imag()});
    }
    j["coeffs"] = coeffs;
    return j;
}

AnnulusLift lift_from_json(const json& j) {
    if (!j.contains("eps") || !j.contains("mean")) {
        throw DomainError("lift_from_json: missing eps/mean");
    }
    const double eps = j.at("eps").get<double>();
    int deg = 1;
    for (const auto& e : j.value("coeffs", json::array())) {
        deg = std::max(deg, std::abs(e.at(0).get<int>()));
    }
    FourierSeries d(eps, deg);
    d.set_mean(cplx{j.at("mean").at(0).get<double>(), j.at("mean").at(1).get<double>()});
    for (const auto& e : j.value("coeffs", json::array())) {
        d.set_coeff(e.at(0).get<int>(), cplx{e.at(1).get<double>(), e.at(2).get<double>()});
    }
    return AnnulusLift{d};
}

json series_to_json(const FourierSeries& s) {
    json j;
    j["eps"] = s.eps();
    json coeffs = json::array();
    for (int k = -s.degree(); k <= s.degree(); ++k) {
        const cplx c = s.coeff(k);
        if (c == cplx{0.0, 0.0}) continue;
        coeffs.push_back({k, c.real(), c.imag()});
    }
    j["coeffs"] = coeffs;
    return j;
}

FourierSeries series_from_json(const json& j) {
    const double eps = j.at("eps").get<double>();
    int deg = 0;
    for (const auto& e : j.value("coeffs", json::array())) {
        deg = std::max(deg, std::abs(e.at(0).get<int>()));
    }
    FourierSeries s(eps, deg);
    for (const auto& e : j.value("coeffs", json::array())) {
        s.set_coeff(e.at(0).get<int>(), cplx{e.at(1).get<double>(), e.at(2).get<double>()});
    }
    return s;
}

json estimate_to_json(const RotationEstimate& e) {
    return json{{"value", e.value},
                {"error_bound", e.error_bound},
                {"method", e.method},
                {"iterates_used", e.iterates_used},
                {"converged", e.converged},
                {"im_drift", e.im_drift}};
}

json chart_to_json(const ConjugacyChart& c) {
    return json{{"phi", lift_to_json(c.phi)},
                {"residual", c.residual},
                {"height", c.height},
                {"iterations", c.iterations},
                {"error_sequence", c.error_sequence}};
}

json shooting_to_json(const ShootingResult& r) {
    return json{{"t_star", r.t_star},
                {"bracket_width", r.bracket_width},
                {"certificate_depth", r.certificate_depth}};
}

json certificate_to_json(const HermanCertificate& c) {
    return json{{"Z", series_to_json(c.Z)},
                {"W", series_to_json(c.W)},
                {"w_is_lift", c.w_is_lift},
                {"residual", c.residual},
                {"decay_rate", c.decay_rate},
                {"rho", estimate_to_json(c.rho)},
                {"modes", c.modes},
                {"passed", c.passed}};
}

json spectrum_to_json(const SpectrumResult& s) {
    json ev = json::array();
    for (cplx v : s.eigenvalues) ev.push_back({v.real(), v.imag(), std::abs(v)});
    return json{{"eigenvalues", ev},
                {"unstable_count", s.unstable_count},
                {"dominant_angle_to_mode0", s.dominant_angle_to_mode0},
                {"second_modulus", s.second_modulus}};
}

json pair_to_json(const CommutingPair& p) {
    return json{{"eta", lift_to_json(p.eta)}, {"xi", lift_to_json(p.xi)},
                {"level", p.level},           {"qn", p.qn},
                {"qn1", p.qn1},               {"source_rotation", p.source_rotation}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {
std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}
}  // namespace

std::string orbit_csv(const OrbitSample& s) {
    std::ostringstream os;
    os << "j,re,im,wrap\n";
    for (std::size_t j = 0; j < s.points.size(); ++j) {
        os << j << ',' << fmt(s.points[j].real()) << ',' << fmt(s.points[j].imag()) << ','
           << s.wraps[j] << '\n';
    }
    return os.str();
}

std::string curve_csv(const CircleCurve& c) {
    std::ostringstream os;
    os << "angle,re,im\n";
    for (std::size_t j = 0; j < c.points.size(); ++j) {
        os << fmt(c.angles[j]) << ',' << fmt(c.points[j].real()) << ',' << fmt(c.points[j].imag())
           << '\n';
    }
    return os.str();
}

std::string spectrum_csv(const SpectrumResult& s) {
    std::ostringstream os;
    os << "re,im,modulus\n";
    for (cplx v : s.eigenvalues) {
        os << fmt(v.real()) << ',' << fmt(v.imag()) << ',' << fmt(std::abs(v)) << '\n';
    }
    return os.str();
}

std::string defect_csv(const std::vector<int>& levels, const std::vector<double>& defects,
                       const std::vector<double>& nonlinearity) {
    std::ostringstream os;
    os << "k,affinity_defect,nonlinearity\n";
    for (std::size_t i = 0; i < levels.size(); ++i) {
        os << levels[i] << ',' << fmt(defects[i]) << ','
           << (i < nonlinearity.size() ? fmt(nonlinearity[i]) : "") << '\n';
    }
    return os.str();
}

std::string walpha_csv(const std::vector<WalphaSample>& samples) {
    std::ostringstream os;
    os << "direction_id,amp,t_star\n";
    for (const auto& s : samples) {
        os << s.direction_id << ',' << fmt(s.amp) << ',' << fmt(s.t_star) << '\n';
    }
    return os.str();
}

std::string orbit2d_csv(const Orbit2D& o) {
    std::ostringstream os;
    os << "j,z_re,z_im,w_re,w_im\n";
    for (std::size_t j = 0; j < o.z.size(); ++j) {
        os << j << ',' << fmt(o.z[j].real()) << ',' << fmt(o.z[j].imag()) << ','
           << fmt(o.w[j].real()) << ',' << fmt(o.w[j].imag()) << '\n';
    }
    return os.str();
}

std::string error_sequence_csv(const std::vector<double>& errs) {
    std::ostringstream os;
    os << "step,v_norm\n";
    for (std::size_t j = 0; j < errs.size(); ++j) os << j << ',' << fmt(errs[j]) << '\n';
    return os.str();
}

}  // namespace cmr
