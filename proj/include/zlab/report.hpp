#pragma once

#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fit.hpp"
#include "lattice.hpp"

namespace zlab
{
/// Rows of already-formatted cells. Numbers go through format_real (shortest
/// round-trip) or std::to_string for integers, so equal results print equal.
struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> volatile_columns; // e.g. wall-clock seconds

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

    void write_csv(std::ostream& os) const
    {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                os << (i ? "," : "") << cells[i];
            os << '\n';
        };
        line(header);
        for (const auto& r : rows)
            line(r);
    }

    std::string csv() const
    {
        std::ostringstream os;
        write_csv(os);
        return os.str();
    }

    /// CSV without the volatile columns: the reproducible part of a run.
    std::string stable_csv() const
    {
        std::vector<bool> keep(header.size(), true);
        for (std::size_t i = 0; i < header.size(); ++i)
            for (const auto& v : volatile_columns)
                if (header[i] == v)
                    keep[i] = false;
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& cells) {
            bool first = true;
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (i >= keep.size() || keep[i])
                {
                    os << (first ? "" : ",") << cells[i];
                    first = false;
                }
            os << '\n';
        };
        line(header);
        for (const auto& r : rows)
            line(r);
        return os.str();
    }
};

inline std::string cell(double v) { return format_real(v); }
inline std::string cell(std::int64_t v) { return std::to_string(v); }
inline std::string cell(std::uint64_t v) { return std::to_string(v); }
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(std::string s) { return s; }
inline std::string cell(const char* s) { return s; }

inline nlohmann::json fit_json(const ExponentFit& f)
{
    nlohmann::json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r2"] = f.r_squared;
    j["n_points"] = f.points.size();
    nlohmann::json pts = nlohmann::json::array();
    for (auto [n, v] : f.points)
        pts.push_back({n, v});
    j["points"] = pts;
    return j;
}

/// Finished experiment: CSV rows, a JSON summary and the bound checks that
/// decide the exit status.
struct Outcome
{
    Table table;
    nlohmann::json summary = nlohmann::json::object();
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }

    void check(bool cond, const std::string& what)
    {
        if (!cond)
            violations.push_back(what);
    }
};

} // namespace zlab
