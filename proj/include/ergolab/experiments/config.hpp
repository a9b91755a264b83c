#pragma once

// Experiment configuration: a JSON document {"experiment": id,
// "parameters": {...}} with typed, range-checked parameter access. Every
// value read is echoed back (defaults included) so a report re-runs as is.

#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"
#include "ergolab/diophantine.hpp"
#include "ergolab/experiments/report.hpp"

namespace ergolab::experiments {

struct experiment_config {
    std::string experiment;
    json parameters = json::object();
    std::string output; // may be empty

    /// Accepts a bare config or a whole report (its "config" member).
    static experiment_config from_json(const json& doc) {
        const json& c = doc.contains("config") && doc.contains("schema_version") ? doc.at("config") : doc;
        require(c.is_object(), errc::config_invalid, "config must be a JSON object");
        experiment_config out;
        require(c.contains("experiment") && c.at("experiment").is_string(), errc::config_invalid,
                "config needs a string member 'experiment'");
        out.experiment = c.at("experiment").get<std::string>();
        if (c.contains("parameters")) {
            require(c.at("parameters").is_object(), errc::config_invalid, "'parameters' must be an object");
            out.parameters = c.at("parameters");
        }
        if (c.contains("output")) {
            require(c.at("output").is_string(), errc::config_invalid, "'output' must be a string");
            out.output = c.at("output").get<std::string>();
        }
        for (const auto& [key, value] : c.items())
            require(key == "experiment" || key == "parameters" || key == "output", errc::config_invalid,
                    "unknown config member '" + key + "'");
        return out;
    }

    static experiment_config parse(const std::string& text) {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            fail(errc::config_invalid, std::string("config is not valid JSON: ") + e.what());
        }
        return from_json(doc);
    }

    /// key=value; the value is read as JSON when it parses, else as a string.
    void set(const std::string& assignment) {
        const auto eq = assignment.find('=');
        require(eq != std::string::npos && eq > 0, errc::config_invalid, "--set expects key=value, got '" + assignment + "'");
        const std::string key = assignment.substr(0, eq);
        const std::string text = assignment.substr(eq + 1);
        json v;
        try {
            v = json::parse(text);
        } catch (const json::exception&) {
            v = text;
        }
        if (key == "experiment") {
            require(v.is_string(), errc::config_invalid, "experiment must be a string");
            experiment = v.get<std::string>();
        } else {
            parameters[key] = v;
        }
    }
};

/// Typed access to the parameters object. Unknown keys are rejected by finish().
class params {
public:
    explicit params(json in) : in_(std::move(in)) {
        require(in_.is_object(), errc::config_invalid, "parameters must be an object");
    }

    const json& resolved() const { return resolved_; }

    double real(const std::string& key, double def, double lo, double hi, bool lo_open = false, bool hi_open = false) {
        const json v = take(key, def);
        require(v.is_number(), errc::config_invalid, key + " must be a number");
        const double x = v.get<double>();
        const bool ok = std::isfinite(x) && (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
        require(ok, errc::config_invalid,
                key + " = " + render17(x) + " outside " + (lo_open ? "(" : "[") + render17(lo) + ", " + render17(hi) +
                    (hi_open ? ")" : "]"));
        return x;
    }

    std::uint64_t integer(const std::string& key, std::uint64_t def, std::uint64_t lo, std::uint64_t hi) {
        const json v = take(key, def);
        require(nonnegative_integer(v), errc::config_invalid, key + " must be a nonnegative integer");
        const auto x = v.get<std::uint64_t>();
        require(x >= lo && x <= hi, errc::config_invalid,
                key + " = " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    std::string text(const std::string& key, const std::string& def) {
        const json v = take(key, def);
        require(v.is_string(), errc::config_invalid, key + " must be a string");
        return v.get<std::string>();
    }

    std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& allowed) {
        const std::string s = text(key, def);
        for (const auto& a : allowed)
            if (a == s) return s;
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(errc::config_invalid, key + " = '" + s + "' is not one of " + list);
    }

    /// Strictly increasing integers in [lo, hi].
    std::vector<std::uint64_t> integers(const std::string& key, const std::vector<std::uint64_t>& def, std::uint64_t lo,
                                        std::uint64_t hi) {
        const json v = take(key, def);
        require(v.is_array() && !v.empty(), errc::config_invalid, key + " must be a nonempty array of integers");
        std::vector<std::uint64_t> out;
        for (const auto& e : v) {
            require(nonnegative_integer(e), errc::config_invalid, key + " entries must be nonnegative integers");
            const auto x = e.get<std::uint64_t>();
            require(x >= lo && x <= hi, errc::config_invalid,
                    key + " entry " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            require(out.empty() || x > out.back(), errc::config_invalid, key + " must be strictly increasing");
            out.push_back(x);
        }
        return out;
    }

    /// Strictly increasing reals in the open interval (lo, hi).
    std::vector<double> reals(const std::string& key, const std::vector<double>& def, double lo, double hi) {
        const json v = take(key, def);
        require(v.is_array() && !v.empty(), errc::config_invalid, key + " must be a nonempty array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            require(e.is_number(), errc::config_invalid, key + " entries must be numbers");
            const double x = e.get<double>();
            require(x > lo && x < hi, errc::config_invalid, key + " entry " + render17(x) + " outside the open range");
            require(out.empty() || x > out.back(), errc::config_invalid, key + " must be strictly increasing");
            out.push_back(x);
        }
        return out;
    }

    /// "p/q", a decimal string, or a JSON number (read exactly in binary).
    big_rational rational(const std::string& key, const std::string& def) {
        const json v = take(key, def);
        try {
            if (v.is_number()) return big_rational(v.get<double>());
            require(v.is_string(), errc::config_invalid, key + " must be a number or a string p/q");
            const std::string s = v.get<std::string>();
            const auto slash = s.find('/');
            if (slash != std::string::npos) {
                const big_int d(s.substr(slash + 1));
                require(d != 0, errc::config_invalid, key + " has a zero denominator");
                return big_rational(big_int(s.substr(0, slash)), d);
            }
            return irrational_spec::parse_decimal(s);
        } catch (const error&) {
            throw;
        } catch (const std::exception& e) {
            fail(errc::config_invalid, key + ": malformed rational (" + e.what() + ")");
        }
    }

    rotation_number rotation(const std::string& key, const std::string& def, std::size_t depth = 48) {
        const std::string s = text(key, def);
        try {
            return rotation_number::parse(s, depth);
        } catch (const error& e) {
            fail(errc::config_invalid, key + ": " + e.what());
        }
    }

    /// Raises ConfigInvalid for keys that no accessor read.
    void finish() const {
        for (const auto& [key, value] : in_.items())
            require(used_.count(key) != 0, errc::config_invalid, "unknown parameter '" + key + "'");
    }

private:
    static bool nonnegative_integer(const json& v) {
        return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    }

    template <class T>
    json take(const std::string& key, const T& def) {
        used_.insert(key);
        json v = in_.contains(key) ? in_.at(key) : json(def);
        resolved_[key] = v;
        return v;
    }

    json in_;
    json resolved_ = json::object();
    std::set<std::string> used_;
};

} // namespace ergolab::experiments
