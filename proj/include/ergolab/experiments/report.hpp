#pragma once

// Experiment reports: certificates, numeric tables, and their JSON/CSV
// renderings.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergolab/core/error.hpp"
#include "ergolab/core/numeric.hpp"

namespace ergolab::experiments {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;
inline constexpr const char* tool_name = "ergolab";
inline constexpr const char* tool_version = "0.1.0";

enum class relation { le, lt, ge, gt, eq };

inline const char* relation_symbol(relation r) {
    switch (r) {
    case relation::le: return "<=";
    case relation::lt: return "<";
    case relation::ge: return ">=";
    case relation::gt: return ">";
    case relation::eq: return "==";
    }
    return "?";
}

/// One checked inequality lhs (rel) rhs. margin is positive when it holds
/// with room: rhs - lhs for upper bounds, lhs - rhs for lower bounds,
/// tol - |lhs - rhs| for equalities.
struct certificate {
    std::string inequality;
    double lhs = 0;
    double rhs = 0;
    relation rel = relation::le;
    double tol = 0; // equalities only
    bool pass = false;
    double margin = 0;
    std::string note;
};

/// pass decided from the doubles.
inline certificate check(std::string inequality, double lhs, relation rel, double rhs, std::string note = {}) {
    certificate c;
    c.inequality = std::move(inequality);
    c.lhs = lhs;
    c.rhs = rhs;
    c.rel = rel;
    c.note = std::move(note);
    switch (rel) {
    case relation::le: c.pass = lhs <= rhs; c.margin = rhs - lhs; break;
    case relation::lt: c.pass = lhs < rhs; c.margin = rhs - lhs; break;
    case relation::ge: c.pass = lhs >= rhs; c.margin = lhs - rhs; break;
    case relation::gt: c.pass = lhs > rhs; c.margin = lhs - rhs; break;
    case relation::eq: c.pass = lhs == rhs; c.margin = -std::abs(lhs - rhs); break;
    }
    return c;
}

inline certificate check_close(std::string inequality, double lhs, double rhs, double tol, std::string note = {}) {
    certificate c;
    c.inequality = std::move(inequality);
    c.lhs = lhs;
    c.rhs = rhs;
    c.rel = relation::eq;
    c.tol = tol;
    c.margin = tol - std::abs(lhs - rhs);
    c.pass = std::abs(lhs - rhs) <= tol;
    c.note = std::move(note);
    return c;
}

/// pass decided elsewhere (exact arithmetic); lhs/rhs are the displayed values.
inline certificate decided(std::string inequality, double lhs, relation rel, double rhs, bool pass,
                           std::string note = {}) {
    certificate c = check(std::move(inequality), lhs, rel, rhs, std::move(note));
    c.pass = pass;
    return c;
}

struct table_row {
    std::string index;
    double value = 0;
    double error = 0;
    double bound = std::nan("");
};

struct table {
    std::string name;
    std::string description;
    std::vector<table_row> rows;

    void add(std::string index, double value, double error, double bound) {
        rows.push_back({std::move(index), value, error, bound});
    }
    template <class I>
    void add(I index, double value, double error, double bound) {
        add(std::to_string(index), value, error, bound);
    }
};

struct experiment_output {
    json results = json::object();
    std::vector<certificate> certificates;
    std::vector<std::string> anchors;
    std::vector<table> tables;
};

struct experiment_report {
    std::string id;
    json config;
    experiment_output output;
    double wall_time = 0;

    bool all_pass() const {
        for (const auto& c : output.certificates)
            if (!c.pass) return false;
        return true;
    }
};

/// %.17g, the shortest fixed-width rendering that round-trips every double.
inline std::string render17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline json number(double v) {
    if (std::isfinite(v)) return v;
    return render17(v);
}

inline json to_json(const certificate& c) {
    json j;
    j["inequality"] = c.inequality;
    j["lhs"] = number(c.lhs);
    j["relation"] = relation_symbol(c.rel);
    j["rhs"] = number(c.rhs);
    if (c.rel == relation::eq && c.tol > 0) j["tolerance"] = c.tol;
    j["pass"] = c.pass;
    j["margin"] = number(c.margin);
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

/// One line per certificate, e.g. "PASS  int|M_n f|^r <= bound: 0.1 <= 0.2".
inline std::string summary_line(const certificate& c) {
    std::string s = c.pass ? "PASS  " : "FAIL  ";
    s += c.inequality + ": " + render17(c.lhs) + " " + relation_symbol(c.rel) + " " + render17(c.rhs);
    if (c.rel == relation::eq && c.tol > 0) s += " (tol " + render17(c.tol) + ")";
    if (!c.note.empty()) s += "  [" + c.note + "]";
    return s;
}

/// The deterministic part of the report: everything except timing.
inline json results_block(const experiment_report& r) {
    json j;
    j["values"] = r.output.results;
    json certs = json::array();
    for (const auto& c : r.output.certificates) certs.push_back(to_json(c));
    j["certificates"] = certs;
    json tabs = json::array();
    for (const auto& t : r.output.tables) {
        json tj;
        tj["name"] = t.name;
        tj["description"] = t.description;
        tj["rows"] = t.rows.size();
        tabs.push_back(tj);
    }
    j["tables"] = tabs;
    return j;
}

inline json to_json(const experiment_report& r) {
    json j;
    j["schema_version"] = schema_version;
    j["tool"] = {{"name", tool_name}, {"version", tool_version}};
    j["experiment"] = r.id;
    j["config"] = r.config;
    j["results"] = results_block(r);
    j["anchors"] = r.output.anchors;
    j["all_pass"] = r.all_pass();
    j["wall_time_seconds"] = r.wall_time;
    return j;
}

inline std::string to_csv(const table& t) {
    std::string s = "index,value,error,bound\n";
    for (const auto& row : t.rows)
        s += row.index + "," + render17(row.value) + "," + render17(row.error) + "," + render17(row.bound) + "\n";
    return s;
}

/// Writes report.json and one <table>.csv per table into dir.
inline void write_report(const experiment_report& r, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec, errc::io_error, "cannot create output directory " + dir.string() + ": " + ec.message());
    const auto put = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(out), errc::io_error, "cannot write " + p.string());
        out << text;
        require(static_cast<bool>(out), errc::io_error, "write failed for " + p.string());
    };
    put(dir / "report.json", to_json(r).dump(2) + "\n");
    for (const auto& t : r.output.tables) put(dir / (t.name + ".csv"), to_csv(t));
}

} // namespace ergolab::experiments
