#pragma once

// JSON forms of result types. Nonfinite doubles are written as strings
// ("nan", "inf", "-inf") so tables survive a round trip bit for bit.

#include <json.hpp>

#include "blowup/dichotomy.hpp"
#include "blowup/energy.hpp"
#include "blowup/selfsimilar.hpp"
#include "blowup/thresholds.hpp"

namespace blowup {

nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepTable& t);
SweepTable sweep_table_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const DiniResult& d);
nlohmann::json to_json(const EnergyReport& r);
nlohmann::json to_json(const SolveDiagnostics& d);
nlohmann::json to_json(const SubsolutionScan& s);

}  // namespace blowup
