#include "cfspectra/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "cfspectra/errors.hpp"

namespace cfspectra {

namespace {

std::size_t count_fields(const std::string& line) {
    return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

} // namespace

std::string rational_string(const Rational& q) { return to_string(q); }

ordered_json interval_json(const Interval& iv) {
    ordered_json j;
    j["lo"] = iv.lo_string();
    j["hi"] = iv.hi_string();
    double mid = iv.mid_double();
    if (std::isfinite(mid)) j["approx"] = mid;
    return j;
}

ordered_json real_json(const Real& r) {
    ordered_json j;
    const Interval& enc = r.enc_ref();
    double a = r.approx();
    if (std::isfinite(a)) j["approx"] = a;
    j["lo"] = enc.lo_string();
    j["hi"] = enc.hi_string();
    if (r.has_exact() && r.exact()->is_rational()) {
        const Rational& q = r.exact()->rational_part();
        if (bit_length(q.get_num()) + bit_length(q.get_den()) <= 512)
            j["rational"] = rational_string(q);
    }
    return j;
}

ordered_json log_value_json(const LogValue& v) {
    ordered_json j;
    const Real& ln = v.ln();
    const Interval& enc = ln.enc_ref();
    j["ln"] = enc.mid_string();
    j["ln_lo"] = enc.lo_string();
    j["ln_hi"] = enc.hi_string();
    if (ln.has_exact()) {
        const LogCombo& combo = *ln.exact();
        if (combo.is_rational()) {
            j["ln_rational"] = rational_string(combo.rational_part());
        } else {
            ordered_json form = ordered_json::array();
            for (const auto& [p, c] : combo.log_coeffs()) {
                form.push_back(ordered_json::array(
                    {p, c.get_num().get_str(), c.get_den().get_str()}));
            }
            j["exact_form"] = form;
            if (combo.rational_part() != 0)
                j["ln_plus_rational"] = rational_string(combo.rational_part());
        }
    }
    if (auto q = v.as_rational(4096)) j["value"] = rational_string(*q);
    return j;
}

std::string series_csv(const std::string& header,
                       const std::vector<std::vector<std::string>>& rows) {
    const std::size_t cols = count_fields(header);
    std::ostringstream out;
    out << header << '\n';
    bool have_prev = false;
    unsigned long long prev = 0;
    for (const auto& row : rows) {
        if (row.size() != cols)
            throw UsageError("csv row width does not match header");
        unsigned long long idx = std::stoull(row.front());
        if (have_prev && idx <= prev)
            throw UsageError("csv index column must be strictly increasing");
        prev = idx;
        have_prev = true;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    return out.str();
}

std::vector<LogValue> read_growth_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open growth table: " + path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "n,ln_psi")
        throw UsageError("growth table must start with header 'n,ln_psi'");
    std::vector<LogValue> values;
    std::size_t expect = 1;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw UsageError("growth table row missing comma: " + line);
        std::size_t n = std::stoull(line.substr(0, comma));
        if (n != expect)
            throw UsageError("growth table rows must be n = 1,2,... contiguous");
        ++expect;
        Rational ln_q = parse_rational(line.substr(comma + 1));
        values.push_back(LogValue::from_ln(Real::of_rational(ln_q)));
    }
    if (values.empty()) throw UsageError("growth table has no rows");
    return values;
}

bool validate_report(const ordered_json& rep, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!rep.is_object()) return fail("report is not an object");
    if (!rep.contains("schema") || rep["schema"] != kReportSchema)
        return fail("missing or wrong schema tag");
    if (!rep.contains("command") || !rep["command"].is_string())
        return fail("missing command");
    if (!rep.contains("config") || !rep["config"].is_object())
        return fail("missing config object");
    if (rep.contains("error")) {
        const auto& e = rep["error"];
        if (!e.is_object() || !e.contains("type") || !e.contains("message"))
            return fail("malformed error object");
        return true;
    }
    if (!rep.contains("summary") || !rep["summary"].is_object())
        return fail("missing summary object");
    if (!rep.contains("assertions") || !rep["assertions"].is_array())
        return fail("missing assertions array");
    for (const auto& a : rep["assertions"]) {
        if (!a.is_object() || !a.contains("name") || !a.contains("pass") ||
            !a["pass"].is_boolean())
            return fail("malformed assertion entry");
    }
    return true;
}

} // namespace cfspectra
