#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mrsubdiv/cascade.hpp"
#include "mrsubdiv/gramian.hpp"
#include "mrsubdiv/mask.hpp"
#include "mrsubdiv/mra.hpp"

namespace mrsubdiv::io {

/// 17 significant digits, so every double round-trips.
inline std::string format_real(double x) {
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_array(std::span<const double> xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += format_real(xs[i]);
    }
    return out + "]";
}

// Masks: {"offset": int, "coeffs": [real, ...]}

inline Mask parse_mask(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidMask(std::string("mask JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("offset") || !j.contains("coeffs"))
        throw InvalidMask("mask JSON must be an object with \"offset\" and \"coeffs\"");
    if (!j["offset"].is_number_integer()) throw InvalidMask("mask offset must be an integer");
    if (!j["coeffs"].is_array()) throw InvalidMask("mask coeffs must be an array");
    std::vector<double> coeffs;
    for (const auto& c : j["coeffs"]) {
        if (!c.is_number()) throw InvalidMask("mask coeffs must be numbers");
        coeffs.push_back(c.get<double>());
    }
    return Mask(j["offset"].get<Index>(), std::move(coeffs));
}

inline Mask read_mask(std::istream& in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_mask(ss.str());
}

inline void write_mask(std::ostream& out, const Mask& m) {
    out << "{\"offset\": " << m.offset() << ", \"coeffs\": " << format_array(m.coeffs()) << "}\n";
}

// Signals: CSV lines "index,value"; blank lines and '#' comments skipped,
// indices may appear in any order, missing indices are zero.

inline Signal read_signal(std::istream& in) {
    std::map<Index, double> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("signal CSV line " + std::to_string(lineno) + ": expected index,value");
        try {
            std::size_t used = 0;
            const std::string idx_text = line.substr(0, comma);
            const long long idx = std::stoll(idx_text, &used);
            if (idx_text.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("index");
            const double val = std::stod(line.substr(comma + 1));
            if (!entries.emplace(static_cast<Index>(idx), val).second)
                throw InputError("signal CSV line " + std::to_string(lineno) + ": duplicate index");
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const InputError*>(&e)) throw;
            throw InputError("signal CSV line " + std::to_string(lineno) + ": malformed entry");
        }
    }
    if (entries.empty()) return {};
    const Index lo = entries.begin()->first;
    const Index hi = entries.rbegin()->first;
    std::vector<double> values(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& [i, v] : entries) values[static_cast<std::size_t>(i - lo)] = v;
    return Signal(lo, std::move(values));
}

inline void write_signal(std::ostream& out, const Signal& s) {
    for (Index i = s.lo(); i <= s.hi(); ++i) out << i << ',' << format_real(s[i]) << '\n';
}

/// "t,value" CSV of dyadic samples.
inline void write_samples(std::ostream& out, const DyadicSamples& s) {
    for (Index n = s.lo(); n <= s.hi(); ++n) out << format_real(s.point(n)) << ',' << format_real(s.at(n)) << '\n';
}

/// Piecewise-linear function through "t,value" rows (zero outside the data).
inline std::vector<std::pair<double, double>> read_samples(std::istream& in) {
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("sample CSV: expected t,value");
        try {
            pts.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::logic_error&) {
            throw InputError("sample CSV: malformed entry");
        }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

inline void write_gramian(std::ostream& out, const GramianSequence& eta, double min_symbol) {
    out << "{\"radius\": " << eta.radius() << ", \"values\": " << format_array(eta.half())
        << ", \"min_symbol\": " << format_real(min_symbol) << "}\n";
}

// Pyramids: {"levels": L, "coarse": {"offset", "values"}, "details": [{...}, ...]}

inline std::string signal_json(const Signal& s) {
    return "{\"offset\": " + std::to_string(s.offset()) + ", \"values\": " + format_array(s.values()) + "}";
}

inline void write_pyramid(std::ostream& out, const Pyramid& p, const double* kept_fraction = nullptr) {
    out << "{\"levels\": " << p.levels() << ", \"coarse\": " << signal_json(p.coarse) << ", \"details\": [";
    for (std::size_t k = 0; k < p.details.size(); ++k) out << (k ? ", " : "") << signal_json(p.details[k]);
    out << "]";
    if (kept_fraction) out << ", \"kept_fraction\": " << format_real(*kept_fraction);
    out << "}\n";
}

inline Signal signal_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("offset") || !j.contains("values") || !j["offset"].is_number_integer() ||
        !j["values"].is_array())
        throw InputError("pyramid JSON: signal must be {\"offset\": int, \"values\": [...]}");
    std::vector<double> v;
    for (const auto& x : j["values"]) {
        if (!x.is_number()) throw InputError("pyramid JSON: non-numeric value");
        v.push_back(x.get<double>());
    }
    return Signal(j["offset"].get<Index>(), std::move(v));
}

inline Pyramid read_pyramid(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("pyramid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("coarse") || !j.contains("details") || !j["details"].is_array())
        throw InputError("pyramid JSON must have \"coarse\" and \"details\"");
    Pyramid p;
    p.coarse = signal_from_json(j["coarse"]);
    for (const auto& d : j["details"]) p.details.push_back(signal_from_json(d));
    if (j.contains("levels") && j["levels"].get<int>() != p.levels())
        throw InputError("pyramid JSON: \"levels\" disagrees with the number of details");
    return p;
}

} // namespace mrsubdiv::io
