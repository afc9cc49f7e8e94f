#pragma once

#include <string>

#include <json.hpp>

#include "cmr/herman2d.hpp"
#include "cmr/renorm.hpp"

namespace cmr {

using json = nlohmann::json;

/// Map format {"eps": h, "mean": [re, im], "coeffs": [[k, re, im], ...]};
/// doubles survive the round trip bit-exactly.
json lift_to_json(const AnnulusLift& f);
AnnulusLift lift_from_json(const json& j);

json series_to_json(const FourierSeries& s);
FourierSeries series_from_json(const json& j);

json estimate_to_json(const RotationEstimate& e);
json chart_to_json(const ConjugacyChart& c);
json shooting_to_json(const ShootingResult& r);
json certificate_to_json(const HermanCertificate& c);
json spectrum_to_json(const SpectrumResult& s);
json pair_to_json(const CommutingPair& p);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// CSV writers for offline plotting.
std::string orbit_csv(const OrbitSample& s);
std::string curve_csv(const CircleCurve& c);
std::string spectrum_csv(const SpectrumResult& s);
std::string defect_csv(const std::vector<int>& levels, const std::vector<double>& defects,
                       const std::vector<double>& nonlinearity);
std::string walpha_csv(const std::vector<WalphaSample>& samples);
std::string orbit2d_csv(const Orbit2D& o);
std::string error_sequence_csv(const std::vector<double>& errs);

}  // namespace cmr
