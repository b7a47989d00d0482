#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "diophantine.hpp"
#include "experiments.hpp"
#include "picard.hpp"
#include "report.hpp"
#include "trilinear.hpp"
#include "zakharov.hpp"

namespace zlab
{
inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 1,     // bad flags, schema violation, unreadable config
    exit_assertion = 2, // a checked bound was violated
    exit_budget = 3,    // refused by a pair, grid or time budget
    exit_unknown = 4,   // unknown experiment id
    exit_runtime = 5,   // numerical failure (e.g. solver blowup)
};

using json = nlohmann::json;

enum class ParamType
{
    integer,
    real, // number, "inf", or null when optional
    int_list,
    real_list,
    string,
};

struct ParamSpec
{
    std::string name;
    ParamType type;
    json def;
    std::string help;
};

struct Experiment
{
    std::string id;
    std::string summary;
    std::string csv_schema;
    std::vector<ParamSpec> params;
    std::function<Outcome(const json& params, std::uint64_t seed, const Budget& budget)> run;
};

namespace detail
{
[[noreturn]] inline void schema_error(const std::string& what) { fail(Errc::parse, "schema: " + what); }

inline double json_real(const json& v, const std::string& name)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_string())
    {
        const auto s = v.get<std::string>();
        if (s == "inf")
            return kInf;
        try
        {
            return parse_real(s);
        }
        catch (const std::exception&)
        {
        }
    }
    schema_error("'" + name + "' must be a number");
}

inline json check_value(const ParamSpec& spec, const json& v)
{
    switch (spec.type)
    {
    case ParamType::integer:
        if (!v.is_number_integer())
            schema_error("'" + spec.name + "' must be an integer");
        return v;
    case ParamType::real:
        if (v.is_null())
            return v;
        return std::isinf(json_real(v, spec.name)) ? json("inf") : json(json_real(v, spec.name));
    case ParamType::int_list: {
        if (!v.is_array())
            schema_error("'" + spec.name + "' must be a list of integers");
        for (const auto& e : v)
            if (!e.is_number_integer())
                schema_error("'" + spec.name + "' must be a list of integers");
        return v;
    }
    case ParamType::real_list: {
        if (!v.is_array())
            schema_error("'" + spec.name + "' must be a list of numbers");
        json out = json::array();
        for (const auto& e : v)
            out.push_back(json_real(e, spec.name));
        return out;
    }
    default:
        if (!v.is_string())
            schema_error("'" + spec.name + "' must be a string");
        return v;
    }
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;)
    {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos)
            return out;
        start = pos + 1;
    }
}
} // namespace detail

/// Flag text to a JSON value of the parameter's type.
inline json parse_flag(const ParamSpec& spec, const std::string& text)
{
    try
    {
        switch (spec.type)
        {
        case ParamType::integer:
            return json(static_cast<std::int64_t>(std::stoll(text)));
        case ParamType::real:
            return detail::check_value(spec, json(text));
        case ParamType::int_list: {
            json a = json::array();
            for (const auto& t : detail::split(text, ','))
                a.push_back(static_cast<std::int64_t>(std::stoll(t)));
            return a;
        }
        case ParamType::real_list: {
            json a = json::array();
            for (const auto& t : detail::split(text, ','))
                a.push_back(t);
            return detail::check_value(spec, a);
        }
        default:
            return json(text);
        }
    }
    catch (const Error&)
    {
        throw;
    }
    catch (const std::exception&)
    {
        detail::schema_error("cannot parse --" + spec.name + " '" + text + "'");
    }
}

/// Defaults filled in; unknown keys and ill-typed values rejected.
inline json resolve_params(const Experiment& e, const json& given)
{
    if (!given.is_null() && !given.is_object())
        detail::schema_error("params must be an object");
    json out = json::object();
    for (const auto& p : e.params)
        out[p.name] = p.def;
    if (given.is_object())
        for (const auto& [k, v] : given.items())
        {
            const ParamSpec* spec = nullptr;
            for (const auto& p : e.params)
                if (p.name == k)
                    spec = &p;
            if (!spec)
                detail::schema_error("unknown parameter '" + k + "' for " + e.id);
            out[k] = detail::check_value(*spec, v);
        }
    return out;
}

namespace detail
{
inline std::vector<std::int64_t> ints(const json& p, const char* k) { return p.at(k).get<std::vector<std::int64_t>>(); }
inline int integer(const json& p, const char* k) { return p.at(k).get<int>(); }
inline double real(const json& p, const char* k) { return json_real(p.at(k), k); }
inline std::string str(const json& p, const char* k) { return p.at(k).get<std::string>(); }
} // namespace detail

inline const std::vector<Experiment>& experiments()
{
    using namespace detail;
    static const std::vector<Experiment> reg = [] {
        std::vector<Experiment> r;
        const std::string norm_csv = "experiment,d,N,p,q,value,path,tolerance";

        r.push_back({"strichartz",
                     "||e^{it Delta} phi||_{L^q_t L^p_x(T^{d+1})} / ||phi||_{L^2} for all-ones or random +-1 data on "
                     "the origin ball of radius N, the shell N-w <= |k| <= N+w, or the dyadic annulus |k| ~ N; "
                     "log-log slope in N",
                     norm_csv,
                     {{"d", ParamType::integer, 2, "dimension"},
                      {"Ns", ParamType::int_list, {8, 16, 32, 64}, "frequency scales"},
                      {"region", ParamType::string, "ball", "ball | shell | annulus"},
                      {"width", ParamType::real, 1.0, "shell half-width"},
                      {"p", ParamType::real, 4.0, "space exponent"},
                      {"q", ParamType::real, 4.0, "time exponent"},
                      {"phase", ParamType::string, "schrodinger", "dispersion symbol"},
                      {"data", ParamType::string, "ones", "ones | random"},
                      {"max_slope", ParamType::real, nullptr, "fail if the fitted slope exceeds this"}},
                     [](const json& p, std::uint64_t seed, const Budget& b) {
                         StrichartzParams s;
                         s.d = integer(p, "d");
                         s.Ns = ints(p, "Ns");
                         s.region = parse_region_kind(str(p, "region"));
                         s.shell_width = real(p, "width");
                         s.spec = {real(p, "q"), real(p, "p")};
                         s.phase = PhaseFunction::parse(str(p, "phase"));
                         const auto data = str(p, "data");
                         require(data == "ones" || data == "random", "data must be ones or random");
                         s.random = data == "random";
                         s.seed = seed;
                         if (!p.at("max_slope").is_null())
                             s.max_slope = real(p, "max_slope");
                         NormOptions o;
                         o.budget = b;
                         return strichartz_sweep(s, o);
                     }});

        r.push_back({"shell-contrast",
                     "L^4 Strichartz ratios in d = 3 for the indicator of the ball |k| <= N and of the shell "
                     "N-1 <= |k| <= N+1, by quadruple counting; the shell slope must lie below the ball slope",
                     norm_csv,
                     {{"Ns", ParamType::int_list, {8, 12, 16, 24, 32, 48}, "frequency scales"}},
                     [](const json& p, std::uint64_t, const Budget& b) {
                         return ball_vs_shell_contrast(ints(p, "Ns"), b).outcome;
                     }});

        r.push_back({"wave-mixed",
                     "L^q_t L^p_x norm over the full period of half-wave evolved all-ones data on |k| ~ N, for "
                     "wave-admissible 1/q = (d-1)/2 (1/2 - 1/p); slope bounded by d/2 - d/p - 1/q + 0.1",
                     norm_csv,
                     {{"d", ParamType::integer, 3, "dimension"},
                      {"Ns", ParamType::int_list, {8, 16, 32}, "frequency scales"},
                      {"q", ParamType::real, 10.0, "time exponent"},
                      {"p", ParamType::real, 2.5, "space exponent"},
                      {"phase", ParamType::string, "half_wave_plus", "half_wave_plus | half_wave_minus"}},
                     [](const json& p, std::uint64_t, const Budget& b) {
                         WaveParams w;
                         w.d = integer(p, "d");
                         w.Ns = ints(p, "Ns");
                         w.q = real(p, "q");
                         w.p = real(p, "p");
                         w.phase = PhaseFunction::parse(str(p, "phase")).kind;
                         require(w.phase == PhaseKind::half_wave_plus || w.phase == PhaseKind::half_wave_minus,
                                 "wave-mixed needs a half-wave phase");
                         return wave_mixed_norm_check(w, b);
                     }});

        r.push_back({"decouple",
                     "||u||_p / (sum_blocks ||u_block||_p^2)^{1/2} for random +-1 data on the unit-width shell at "
                     "radius N, blocks of side N/4; checks growth below C N^growth",
                     "d,N,trial,block_side,blocks,p,ratio",
                     {{"d", ParamType::integer, 2, "dimension"},
                      {"Ns", ParamType::int_list, {8, 16, 32}, "frequency scales"},
                      {"p", ParamType::real, 4.0, "exponent"},
                      {"trials", ParamType::integer, 3, "random trials per N"},
                      {"growth", ParamType::real, 0.3, "allowed power growth"}},
                     [](const json& p, std::uint64_t seed, const Budget& b) {
                         DecoupleParams d;
                         d.d = integer(p, "d");
                         d.Ns = ints(p, "Ns");
                         d.p = real(p, "p");
                         d.trials = integer(p, "trials");
                         d.growth = real(p, "growth");
                         d.seed = seed;
                         NormOptions o;
                         o.budget = b;
                         return decoupling_sweep(d, o);
                     }});

        r.push_back({"trilinear-alpha",
                     "sup over trials of |int e^{it Delta}phi1 conj(e^{it Delta}phi2) e^{+-it|grad|}phi3| / "
                     "prod ||phi_j||_{L^2} over [-pi, pi] x T^d with supports at scale N; slope in N",
                     "d,N,trial,ratio,generator,seed",
                     {{"d", ParamType::integer, 3, "dimension"},
                      {"Ns", ParamType::int_list, {4, 8, 16}, "frequency scales"},
                      {"generator", ParamType::string, "paper_example",
                       "paper_example | random_shell | random_annulus"},
                      {"trials", ParamType::integer, 4, "random trials per N"}},
                     [](const json& p, std::uint64_t seed, const Budget& b) {
                         AlphaSweepParams a;
                         a.d = integer(p, "d");
                         a.Ns = ints(p, "Ns");
                         a.generator = parse_generator(str(p, "generator"));
                         a.trials = integer(p, "trials");
                         a.seed = seed;
                         return trilinear_alpha_sweep(a, b);
                     }});

        r.push_back({"slab-sharpness",
                     "ratio ||u||_p / ||a||_2 for the indicator of {(N, j) : 1 <= j_i <= (N/d)^{1/2}} at "
                     "p = 2(d+1)/(d-1); must be non-decreasing with slope in [0, 0.15]",
                     norm_csv,
                     {{"d", ParamType::integer, 3, "dimension (2 or 3)"},
                      {"Ns", ParamType::int_list, {16, 36, 64, 100}, "frequency scales"}},
                     [](const json& p, std::uint64_t, const Budget& b) {
                         NormOptions o;
                         o.budget = b;
                         return sharpness_slab_sweep(integer(p, "d"), ints(p, "Ns"), o);
                     }});

        r.push_back({"mixed-probe",
                     "exploratory: L^q_t L^p_x Schrodinger ratios on the scaling line 2/q = d(1/2 - 1/p) for "
                     "all-ones and random +-1 ball data; reports fits, asserts only finiteness",
                     norm_csv,
                     {{"d", ParamType::integer, 4, "dimension"},
                      {"Ns", ParamType::int_list, {2, 4, 6}, "ball radii"},
                      {"q", ParamType::real, 2.0, "time exponent"},
                      {"p", ParamType::real, 4.0, "space exponent"}},
                     [](const json& p, std::uint64_t seed, const Budget& b) {
                         MixedProbeParams m;
                         m.d = integer(p, "d");
                         m.Ns = ints(p, "Ns");
                         m.q = real(p, "q");
                         m.p = real(p, "p");
                         m.seed = seed;
                         NormOptions o;
                         o.budget = b;
                         return mixed_strichartz_probe(m, o);
                     }});

        r.push_back({"dio-sweep",
                     "exact number of ordered (x, y, z, w) in the shell N - delta <= |v| <= N of Z^3 with "
                     "x + y = z + w and |x|^2 + |y|^2 = |z|^2 + |w|^2; slope in [3, 5], count >= |S|^2",
                     "N,delta,count,method,seconds",
                     {{"Ns", ParamType::int_list, {8, 12, 16, 24}, "shell radii"},
                      {"delta", ParamType::integer, 2, "shell width"}},
                     [](const json& p, std::uint64_t, const Budget& b) {
                         return dio_exponent_sweep(ints(p, "Ns"), p.at("delta").get<std::int64_t>(), b).outcome;
                     }});

        r.push_back({"picard-inflation",
                     "H^s norm of the first Picard iterate B(f_N, g_N)(t_N), t_N = 1/(100 N^2), for "
                     "f_N, g_N normalised indicators of |k| ~ N; slope -s + (d-3)/2 within tolerance",
                     "d,s,N,t,Hs_norm",
                     {{"d", ParamType::integer, 3, "dimension"},
                      {"s", ParamType::real_list, {-0.5, 0.0, 0.5}, "Sobolev indices"},
                      {"Ns", ParamType::int_list, {8, 16, 32}, "frequency scales"},
                      {"tolerance", ParamType::real, 0.25, "allowed slope deviation"}},
                     [](const json& p, std::uint64_t, const Budget& b) {
                         InflationParams ip;
                         ip.d = integer(p, "d");
                         ip.s_values.clear();
                         for (const auto& v : p.at("s"))
                             ip.s_values.push_back(json_real(v, "s"));
                         ip.Ns = ints(p, "Ns");
                         ip.tolerance = real(p, "tolerance");
                         return inflation_sweep(ip, b);
                     }});

        r.push_back({"zakharov-run",
                     "pseudospectral Strang-split solver for the first-order Zakharov system on T^d; time series "
                     "of mass and energy with drifts relative to t = 0",
                     "step,t,mass,energy,mass_drift,energy_drift",
                     {{"d", ParamType::integer, 2, "dimension"},
                      {"grid", ParamType::integer, 64, "points per axis"},
                      {"dt", ParamType::real, 1e-3, "time step"},
                      {"steps", ParamType::integer, 200, "number of steps"},
                      {"report_every", ParamType::integer, 20, "rows every this many steps"},
                      {"data", ParamType::string, "random", "random | single_mode | file"},
                      {"u0", ParamType::string, "", "u0 spectrum file (data = file)"},
                      {"n0", ParamType::string, "", "n0 spectrum file (data = file)"},
                      {"n1", ParamType::string, "", "n1 spectrum file (data = file)"},
                      {"snapshot", ParamType::string, "", "write the final u spectrum here"},
                      {"max_mass_drift", ParamType::real, nullptr, "fail above this relative mass drift"},
                      {"max_energy_drift", ParamType::real, nullptr, "fail above this relative energy drift"}},
                     [](const json& p, std::uint64_t seed, const Budget& b) {
                         ZakharovRunConfig c;
                         c.d = integer(p, "d");
                         c.grid = integer(p, "grid");
                         c.dt = real(p, "dt");
                         c.steps = integer(p, "steps");
                         c.report_every = integer(p, "report_every");
                         c.data_kind = str(p, "data");
                         c.seed = seed;
                         c.u0_file = str(p, "u0");
                         c.n0_file = str(p, "n0");
                         c.n1_file = str(p, "n1");
                         c.snapshot_file = str(p, "snapshot");
                         auto res = zakharov_run(c, b);
                         if (!p.at("max_mass_drift").is_null())
                             res.outcome.check(res.max_mass_drift <= real(p, "max_mass_drift"), "mass drift above bound");
                         if (!p.at("max_energy_drift").is_null())
                             res.outcome.check(res.max_energy_drift <= real(p, "max_energy_drift"),
                                               "energy drift above bound");
                         return std::move(res.outcome);
                     }});
        return r;
    }();
    return reg;
}

inline const Experiment* find_experiment(const std::string& id)
{
    for (const auto& e : experiments())
        if (e.id == id)
            return &e;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Configs and run records
// ---------------------------------------------------------------------------

struct ExperimentConfig
{
    std::string experiment;
    json params = json::object();
    std::uint64_t seed = 0;
    Budget budget;
    std::string csv_path;
    std::string json_path;

    /// Fully resolved document (defaults filled); what the hash covers.
    json resolved() const
    {
        const Experiment* e = find_experiment(experiment);
        json j;
        j["experiment"] = experiment;
        j["params"] = e ? resolve_params(*e, params) : params;
        j["seed"] = seed;
        j["budgets"] = {{"max_pairs", budget.max_pairs},
                        {"max_grid_bytes", budget.max_grid_bytes},
                        {"max_seconds", budget.max_seconds}};
        j["output"] = {{"csv", csv_path}, {"json", json_path}};
        return j;
    }
};

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object())
        detail::schema_error(where + " must be an object");
    for (const auto& [k, v] : obj.items())
    {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || k == a;
        if (!ok)
            detail::schema_error("unknown key '" + k + "' in " + where);
    }
}

/// Overlays a config document onto cfg. Unknown keys are rejected.
inline void apply_config(ExperimentConfig& cfg, const json& doc)
{
    check_keys(doc, {"experiment", "params", "seed", "budgets", "output"}, "config");
    if (doc.contains("experiment"))
    {
        if (!doc["experiment"].is_string())
            detail::schema_error("experiment must be a string");
        cfg.experiment = doc["experiment"].get<std::string>();
    }
    if (doc.contains("params"))
    {
        if (!doc["params"].is_object())
            detail::schema_error("params must be an object");
        for (const auto& [k, v] : doc["params"].items())
            cfg.params[k] = v;
    }
    if (doc.contains("seed"))
    {
        if (!doc["seed"].is_number_unsigned())
            detail::schema_error("seed must be a non-negative integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("budgets"))
    {
        const auto& b = doc["budgets"];
        check_keys(b, {"max_pairs", "max_grid_bytes", "max_seconds"}, "budgets");
        auto count = [&](const char* k, std::uint64_t& dst) {
            if (!b.contains(k))
                return;
            if (!b[k].is_number_unsigned())
                detail::schema_error(std::string(k) + " must be a non-negative integer");
            dst = b[k].get<std::uint64_t>();
        };
        count("max_pairs", cfg.budget.max_pairs);
        count("max_grid_bytes", cfg.budget.max_grid_bytes);
        if (b.contains("max_seconds"))
        {
            if (!b["max_seconds"].is_number() || b["max_seconds"].get<double>() < 0.0)
                detail::schema_error("max_seconds must be a non-negative number");
            cfg.budget.max_seconds = b["max_seconds"].get<double>();
        }
    }
    if (doc.contains("output"))
    {
        const auto& o = doc["output"];
        check_keys(o, {"csv", "json"}, "output");
        for (const char* k : {"csv", "json"})
            if (o.contains(k) && !o[k].is_string())
                detail::schema_error(std::string("output.") + k + " must be a path string");
        if (o.contains("csv"))
            cfg.csv_path = o["csv"].get<std::string>();
        if (o.contains("json"))
            cfg.json_path = o["json"].get<std::string>();
    }
}

inline std::uint64_t fnv1a64(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunRecord
{
    json config;
    std::string config_hash;
    std::string started, finished;
    double seconds = 0.0;
    Outcome outcome;
    int exit_code = exit_ok;
    std::string error;

    json to_json() const
    {
        json j;
        j["tool"] = "zlab";
        j["version"] = kVersion;
        j["config"] = config;
        j["config_hash"] = config_hash;
        j["started"] = started;
        j["finished"] = finished;
        j["seconds"] = seconds;
        j["summary"] = outcome.summary;
        j["violations"] = outcome.violations;
        j["rows"] = outcome.table.rows.size();
        j["exit_code"] = exit_code;
        if (!error.empty())
            j["error"] = error;
        return j;
    }
};

inline int exit_code_for(const Error& e)
{
    if (e.is_budget())
        return exit_budget;
    if (e.code() == Errc::parse)
        return exit_usage;
    if (e.code() == Errc::invalid_argument || e.code() == Errc::unbounded || e.code() == Errc::aliasing)
        return exit_usage;
    return exit_runtime;
}

/// Validates, dispatches and times one experiment. Errors are captured in
/// the record; nothing is thrown.
inline RunRecord run(const ExperimentConfig& cfg)
{
    RunRecord rec;
    rec.started = utc_timestamp();
    Stopwatch sw;
    const Experiment* e = find_experiment(cfg.experiment);
    if (!e)
    {
        rec.exit_code = exit_unknown;
        rec.error = "unknown experiment '" + cfg.experiment + "'";
        rec.config = json{{"experiment", cfg.experiment}};
        rec.finished = utc_timestamp();
        return rec;
    }
    try
    {
        rec.config = cfg.resolved();
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(rec.config.dump())));
        rec.config_hash = hex;
        rec.outcome = e->run(rec.config["params"], cfg.seed, cfg.budget);
        rec.exit_code = rec.outcome.ok() ? exit_ok : exit_assertion;
        if (cfg.budget.max_seconds > 0.0 && sw.seconds() > cfg.budget.max_seconds)
        {
            rec.exit_code = exit_budget;
            rec.error = "time budget exceeded: " + format_real(sw.seconds()) + " s, cap "
                        + format_real(cfg.budget.max_seconds) + " s";
        }
    }
    catch (const Error& err)
    {
        rec.exit_code = exit_code_for(err);
        rec.error = err.what();
    }
    catch (const std::exception& err)
    {
        rec.exit_code = exit_runtime;
        rec.error = err.what();
    }
    rec.seconds = sw.seconds();
    rec.finished = utc_timestamp();
    return rec;
}

} // namespace zlab
