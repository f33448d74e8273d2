#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cfspectra/interval.hpp"
#include "cfspectra/log_value.hpp"
#include "cfspectra/numeric_util.hpp"
#include "cfspectra/real.hpp"

namespace cfspectra {

// Key order is part of the report contract (determinism is checked byte-wise).
using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "cfspectra.report.v1";

// {"approx": double?, "lo": dec, "hi": dec, "rational": "p/q"?}
ordered_json real_json(const Real& r);

// {"lo": dec, "hi": dec, "approx": double?}
ordered_json interval_json(const Interval& iv);

// Positive quantity in log-domain:
// {"ln": dec, "ln_lo": dec, "ln_hi": dec,
//  "exact_form": [[base, num, den], ...]?,   // value = e^q * prod base^(num/den)
//  "ln_rational": "q"?, "value": "p/q"?}
ordered_json log_value_json(const LogValue& v);

std::string rational_string(const Rational& q);

// CSV with a fixed header; the first column is the (strictly increasing)
// index.
std::string series_csv(const std::string& header,
                       const std::vector<std::vector<std::string>>& rows);

// Growth-table file: header "n,ln_psi", rows n = 1.. contiguous, ln values
// as exact decimal/rational strings.
std::vector<LogValue> read_growth_table(const std::string& path);

// Structural check of the shared report envelope.
bool validate_report(const ordered_json& rep, std::string* why = nullptr);

}  // namespace cfspectra
