// zlab: experiment runner for exponential sums, counting problems and the
// Zakharov solver on the torus.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <zlab/zlab.hpp>

namespace
{
using zlab::json;

constexpr const char* kUsage = R"(usage:
  zlab list
  zlab run <experiment> [--param value ...] [--config file.json]
  zlab <experiment> [--param value ...] [--config file.json]
  zlab selftest [--only 1,2,...] [--max-pairs n] [--max-grid-bytes n]
  zlab --version

`zlab list` shows experiments, their parameters and CSV columns.
Worker threads: ZLAB_THREADS (default: hardware parallelism) or --threads.
)";

struct Common
{
    std::string config;
    std::optional<std::uint64_t> seed, max_pairs, max_grid_bytes;
    std::optional<double> max_seconds;
    std::string csv, json_out;
    unsigned threads = 0;
};

void add_common(CLI::App& app, Common& c)
{
    app.add_option("--config", c.config, "JSON config; its values override flags");
    app.add_option("--seed", c.seed, "64-bit seed");
    app.add_option("--max-pairs", c.max_pairs, "pair-visit budget");
    app.add_option("--max-grid-bytes", c.max_grid_bytes, "grid memory budget");
    app.add_option("--max-seconds", c.max_seconds, "wall-clock budget (0 = none)");
    app.add_option("--csv", c.csv, "write result rows here instead of stdout");
    app.add_option("--json", c.json_out, "write the run record here");
    app.add_option("--threads", c.threads, "worker threads (overrides ZLAB_THREADS)");
}

void apply_common(const Common& c, zlab::ExperimentConfig& cfg)
{
    if (c.seed)
        cfg.seed = *c.seed;
    if (c.max_pairs)
        cfg.budget.max_pairs = *c.max_pairs;
    if (c.max_grid_bytes)
        cfg.budget.max_grid_bytes = *c.max_grid_bytes;
    if (c.max_seconds)
        cfg.budget.max_seconds = *c.max_seconds;
    if (!c.csv.empty())
        cfg.csv_path = c.csv;
    if (!c.json_out.empty())
        cfg.json_path = c.json_out;
    if (c.threads)
        zlab::set_worker_count(c.threads);
}

json load_json(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        zlab::fail(zlab::Errc::parse, "cannot open config " + path);
    try
    {
        return json::parse(is);
    }
    catch (const json::parse_error& e)
    {
        zlab::fail(zlab::Errc::parse, "config " + path + ": " + e.what());
    }
}

std::string flag_names(const std::string& name)
{
    std::string dashed = name;
    for (auto& ch : dashed)
        if (ch == '_')
            ch = '-';
    return dashed == name ? "--" + name : "--" + dashed + ",--" + name;
}

int parse_error(CLI::App& app, const CLI::ParseError& e)
{
    const int rc = app.exit(e);
    return rc == 0 ? zlab::exit_ok : zlab::exit_usage;
}

int cmd_list()
{
    for (const auto& e : zlab::experiments())
    {
        std::cout << e.id << "\n  " << e.summary << "\n  csv: " << e.csv_schema << "\n";
        for (const auto& p : e.params)
            std::cout << "    --" << p.name << " (default " << p.def.dump() << "): " << p.help << "\n";
    }
    return zlab::exit_ok;
}

int cmd_run(const std::string& id_hint, std::vector<std::string> args)
{
    // The experiment decides which flags exist: positional id first, else the config.
    std::string id = id_hint;
    if (id.empty() && !args.empty() && args.back().rfind("--", 0) != 0)
    {
        id = args.back();
        args.pop_back();
    }
    // args is reversed: a flag's value sits just before it.
    json config_doc;
    for (std::size_t i = 0; i < args.size(); ++i)
    {
        if (args[i] == "--config" && i >= 1)
            config_doc = load_json(args[i - 1]);
        else if (args[i].rfind("--config=", 0) == 0)
            config_doc = load_json(args[i].substr(9));
    }
    if (id.empty() && config_doc.is_object() && config_doc.contains("experiment")
        && config_doc["experiment"].is_string())
        id = config_doc["experiment"].get<std::string>();
    if (id.empty())
    {
        std::cerr << "zlab: no experiment given\n" << kUsage;
        return zlab::exit_usage;
    }
    const zlab::Experiment* exp = zlab::find_experiment(id);
    if (!exp)
    {
        std::cerr << "zlab: unknown experiment '" << id << "' (see `zlab list`)\n";
        return zlab::exit_unknown;
    }

    CLI::App app{exp->summary, "zlab " + id};
    Common common;
    add_common(app, common);
    std::map<std::string, std::string> flag_values;
    for (const auto& p : exp->params)
        app.add_option(flag_names(p.name), flag_values[p.name], p.help + " (default " + p.def.dump() + ")");
    try
    {
        app.parse(args);
    }
    catch (const CLI::ParseError& e)
    {
        return parse_error(app, e);
    }

    zlab::ExperimentConfig cfg;
    cfg.experiment = id;
    try
    {
        for (const auto& p : exp->params)
            if (app.count(flag_names(p.name).substr(0, flag_names(p.name).find(','))) > 0)
                cfg.params[p.name] = zlab::parse_flag(p, flag_values[p.name]);
        apply_common(common, cfg);
        if (config_doc.is_object() || !common.config.empty())
        {
            zlab::apply_config(cfg, config_doc);
            if (cfg.experiment != id)
                zlab::fail(zlab::Errc::parse, "schema: config names experiment '" + cfg.experiment
                                                  + "' but '" + id + "' was requested");
        }
        (void)zlab::resolve_params(*exp, cfg.params);
    }
    catch (const zlab::Error& e)
    {
        std::cerr << "zlab: " << e.what() << "\n";
        return zlab::exit_code_for(e);
    }

    const zlab::RunRecord rec = zlab::run(cfg);
    if (rec.error.empty() || !rec.outcome.table.header.empty())
    {
        if (cfg.csv_path.empty())
            rec.outcome.table.write_csv(std::cout);
        else
        {
            std::ofstream os(cfg.csv_path);
            if (!os)
            {
                std::cerr << "zlab: cannot write " << cfg.csv_path << "\n";
                return zlab::exit_usage;
            }
            rec.outcome.table.write_csv(os);
        }
    }
    if (!cfg.json_path.empty())
    {
        std::ofstream os(cfg.json_path);
        if (!os)
        {
            std::cerr << "zlab: cannot write " << cfg.json_path << "\n";
            return zlab::exit_usage;
        }
        os << rec.to_json().dump(2) << "\n";
    }
    if (!rec.error.empty())
        std::cerr << "zlab: " << id << ": " << rec.error << "\n";
    for (const auto& v : rec.outcome.violations)
        std::cerr << "zlab: " << id << ": assertion failed: " << v << "\n";
    if (rec.exit_code == zlab::exit_ok)
        std::cerr << "zlab: " << id << " ok (" << rec.seconds << " s) " << rec.outcome.summary.dump() << "\n";
    return rec.exit_code;
}

int cmd_selftest(std::vector<std::string> args)
{
    CLI::App app{"run the acceptance suite", "zlab selftest"};
    std::vector<int> only;
    std::optional<std::uint64_t> max_pairs, max_grid_bytes;
    bool mutate = false;
    unsigned threads = 0;
    app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',');
    app.add_option("--max-pairs", max_pairs, "pair-visit budget");
    app.add_option("--max-grid-bytes", max_grid_bytes, "grid memory budget");
    app.add_option("--threads", threads, "worker threads (overrides ZLAB_THREADS)");
    app.add_flag("--mutate-kernel", mutate, "replace the time kernel by one with T(0) = 0 (must fail criterion 2)");
    try
    {
        app.parse(args);
    }
    catch (const CLI::ParseError& e)
    {
        return parse_error(app, e);
    }
    zlab::Budget budget;
    if (max_pairs)
        budget.max_pairs = *max_pairs;
    if (max_grid_bytes)
        budget.max_grid_bytes = *max_grid_bytes;
    if (threads)
        zlab::set_worker_count(threads);

    auto fns = zlab::criteria();
    if (mutate)
        fns[1] = [](const zlab::Budget& b) {
            return zlab::criterion_2(b, [](double omega) {
                return omega == 0.0 ? 0.0 : zlab::TimeKernel{}(omega);
            });
        };
    const auto results = zlab::run_acceptance(only, budget, std::cout, fns);
    bool failed = false, refused = false;
    for (const auto& r : results)
        if (!r.pass)
            (r.budget_refusal ? refused : failed) = true;
    std::size_t passed = 0;
    for (const auto& r : results)
        passed += r.pass;
    std::cout << passed << "/" << results.size() << " criteria passed\n";
    if (failed)
        return zlab::exit_assertion;
    return refused ? zlab::exit_budget : zlab::exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help")
    {
        std::cout << kUsage;
        return args.empty() ? zlab::exit_usage : zlab::exit_ok;
    }
    if (args[0] == "--version")
    {
        std::cout << "zlab " << zlab::kVersion << "\n";
        return zlab::exit_ok;
    }
    const std::string cmd = args[0];
    std::vector<std::string> rest(args.begin() + 1, args.end());
    // CLI11 consumes the vector from the back.
    std::reverse(rest.begin(), rest.end());
    try
    {
        if (cmd == "list")
            return cmd_list();
        if (cmd == "selftest")
            return cmd_selftest(rest);
        if (cmd == "run")
            return cmd_run("", rest);
        if (zlab::find_experiment(cmd))
            return cmd_run(cmd, rest);
        std::cerr << "zlab: unknown experiment or command '" << cmd << "' (see `zlab list`)\n";
        return zlab::exit_unknown;
    }
    catch (const zlab::Error& e)
    {
        std::cerr << "zlab: " << e.what() << "\n";
        return zlab::exit_code_for(e);
    }
    catch (const std::exception& e)
    {
        std::cerr << "zlab: " << e.what() << "\n";
        return zlab::exit_runtime;
    }
}
