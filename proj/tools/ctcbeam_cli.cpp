// Command-line front end over the ctcbeam C API.

#include "ctcbeam/ctcbeam.h"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

enum Exit : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kDiverged = 3,
    kMaxIterations = 4,
    kBlowup = 5,
};

struct ScenarioDeleter {
    void operator()(ctcb_scenario* s) const { ctcb_scenario_free(s); }
};
struct RunDeleter {
    void operator()(ctcb_run* r) const { ctcb_run_free(r); }
};
using ScenarioPtr = std::unique_ptr<ctcb_scenario, ScenarioDeleter>;
using RunPtr = std::unique_ptr<ctcb_run, RunDeleter>;

int exit_for_status(ctcb_status st) {
    switch (st) {
    case CTCB_OK:
        return kOk;
    case CTCB_ERR_INVALID_ARGUMENT:
    case CTCB_ERR_CONFIG:
    case CTCB_ERR_LOOKUP:
    case CTCB_ERR_IO:
        return kUsage;
    case CTCB_ERR_NUMERIC_BLOWUP:
        return kBlowup;
    default:
        return kFailure;
    }
}

int exit_for_convergence(ctcb_convergence c) {
    switch (c) {
    case CTCB_CONVERGED:
        return kOk;
    case CTCB_DIVERGED:
        return kDiverged;
    case CTCB_MAX_ITERATIONS:
        return kMaxIterations;
    }
    return kFailure;
}

const char* convergence_name(ctcb_convergence c) {
    switch (c) {
    case CTCB_CONVERGED:
        return "converged";
    case CTCB_DIVERGED:
        return "diverged";
    case CTCB_MAX_ITERATIONS:
        return "max-iterations";
    }
    return "unknown";
}

int report_error(const std::string& context, ctcb_status st) {
    std::cerr << "error: " << context << ": " << ctcb_last_error() << '\n';
    return exit_for_status(st);
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool is_preset_name(const std::string& name) {
    for (size_t i = 0; i < ctcb_preset_count(); ++i) {
        if (name == ctcb_preset_name(i)) {
            return true;
        }
    }
    return false;
}

// Resolves a preset name or a config file path into a scenario.
int load_scenario(const std::string& source, ScenarioPtr& out) {
    ctcb_scenario* raw = nullptr;
    ctcb_status st;
    if (is_preset_name(source)) {
        st = ctcb_scenario_from_preset(source.c_str(), &raw);
    } else if (std::filesystem::is_regular_file(source)) {
        st = ctcb_scenario_from_file(source.c_str(), &raw);
    } else {
        st = ctcb_scenario_from_preset(source.c_str(), &raw);
        if (st == CTCB_ERR_LOOKUP) {
            std::cerr << "error: '" << source << "' is neither a preset nor a readable config file: "
                      << ctcb_last_error() << '\n';
            return kUsage;
        }
    }
    if (st != CTCB_OK) {
        return report_error(source, st);
    }
    out.reset(raw);
    return kOk;
}

int apply_override(ctcb_scenario* s, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        std::cerr << "error: --set expects key=value, got '" << assignment << "'\n";
        return kUsage;
    }
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    if (const auto st = ctcb_scenario_set(s, key.c_str(), value.c_str()); st != CTCB_OK) {
        return report_error("--set " + assignment, st);
    }
    return kOk;
}

int check_valid(const ctcb_scenario* s) {
    size_t count = 0;
    size_t needed = 0;
    ctcb_scenario_validate(s, &count, nullptr, 0, &needed);
    if (count == 0) {
        return kOk;
    }
    std::string text(needed, '\0');
    ctcb_scenario_validate(s, &count, text.data(), text.size(), nullptr);
    text.resize(needed - 1);
    std::cerr << "error: invalid scenario:\n";
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        std::cerr << "  " << line << '\n';
    }
    return kUsage;
}

bool prepare_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory " << dir << ": " << ec.message() << '\n';
        return false;
    }
    return true;
}

// Worker count: requested jobs, capped by CTCBEAM_THREADS and the job count.
std::size_t worker_count(std::size_t requested, std::size_t jobs) {
    std::size_t n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    if (const char* env = std::getenv("CTCBEAM_THREADS"); env != nullptr && *env != '\0') {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) {
            n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
        }
    }
    return std::max<std::size_t>(1, std::min(n, jobs));
}

int cmd_presets() {
    for (size_t i = 0; i < ctcb_preset_count(); ++i) {
        std::printf("%-20s %s\n", ctcb_preset_name(i), ctcb_preset_description(i));
    }
    return kOk;
}

int cmd_run(const std::string& source, const std::string& out_dir,
            const std::vector<std::string>& overrides, bool csv) {
    ScenarioPtr scenario;
    if (const int rc = load_scenario(source, scenario); rc != kOk) {
        return rc;
    }
    for (const auto& o : overrides) {
        if (const int rc = apply_override(scenario.get(), o); rc != kOk) {
            return rc;
        }
    }
    if (const int rc = check_valid(scenario.get()); rc != kOk) {
        return rc;
    }
    if (!prepare_dir(out_dir)) {
        return kUsage;
    }

    ctcb_run* raw = nullptr;
    if (const auto st = ctcb_solve(scenario.get(), &raw); st != CTCB_OK) {
        return report_error("solve", st);
    }
    RunPtr run(raw);
    if (const auto st = ctcb_run_write_outputs(run.get(), out_dir.c_str(), csv ? 1 : 0);
        st != CTCB_OK) {
        return report_error("writing outputs", st);
    }
    const auto status = ctcb_run_status(run.get());
    const size_t iters = ctcb_run_iterations(run.get());
    double residual = 0.0;
    if (iters > 0) {
        ctcb_run_iteration(run.get(), iters - 1, &residual, nullptr, nullptr);
    }
    std::printf("status=%s iterations=%zu residual=%s window_norm=%s total_density=%s\n",
                convergence_name(status), iters, format_real(residual).c_str(),
                format_real(ctcb_run_final_window_norm(run.get())).c_str(),
                format_real(ctcb_run_final_total_density(run.get())).c_str());
    return exit_for_convergence(status);
}

std::vector<std::string> split_values(const std::string& list) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(list);
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first != std::string::npos) {
            out.push_back(item.substr(first, last - first + 1));
        }
    }
    return out;
}

struct SweepRow {
    std::string value;
    std::string status = "error";
    size_t iterations = 0;
    double window_norm = 0.0;
    double total_density = 0.0;
    int exit = kOk;
};

int cmd_sweep(const std::string& preset, const std::string& param, const std::string& values_arg,
              const std::string& out_dir, std::size_t jobs) {
    const auto values = split_values(values_arg);
    if (values.empty()) {
        std::cerr << "error: --values must list at least one value\n";
        return kUsage;
    }
    if (!ctcb_is_numeric_parameter(param.c_str())) {
        std::cerr << "error: '" << param << "' is not a sweepable numeric parameter\n";
        return kUsage;
    }
    ScenarioPtr base;
    if (const int rc = load_scenario(preset, base); rc != kOk) {
        return rc;
    }

    // Every point is materialised and validated before any solve starts.
    std::vector<ScenarioPtr> points;
    for (const auto& v : values) {
        ctcb_scenario* raw = nullptr;
        ctcb_scenario_clone(base.get(), &raw);
        ScenarioPtr point(raw);
        if (const auto st = ctcb_scenario_set(point.get(), param.c_str(), v.c_str());
            st != CTCB_OK) {
            return report_error(param + " = " + v, st);
        }
        if (const int rc = check_valid(point.get()); rc != kOk) {
            std::cerr << "  (at " << param << " = " << v << ")\n";
            return rc;
        }
        points.push_back(std::move(point));
    }
    if (!prepare_dir(out_dir)) {
        return kUsage;
    }

    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    const auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            SweepRow& row = rows[i];
            row.value = values[i];
            ctcb_run* raw = nullptr;
            if (const auto st = ctcb_solve(points[i].get(), &raw); st != CTCB_OK) {
                std::lock_guard lock(log_mutex);
                row.exit = report_error(param + " = " + values[i], st);
                row.status = st == CTCB_ERR_NUMERIC_BLOWUP ? "blowup" : "error";
                continue;
            }
            RunPtr run(raw);
            char sub[32];
            std::snprintf(sub, sizeof(sub), "point_%03zu", i);
            const auto dir = (std::filesystem::path(out_dir) / sub).string();
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (const auto st = ctcb_run_write_outputs(run.get(), dir.c_str(), 0); st != CTCB_OK) {
                std::lock_guard lock(log_mutex);
                row.exit = report_error("writing " + dir, st);
            }
            row.status = convergence_name(ctcb_run_status(run.get()));
            row.iterations = ctcb_run_iterations(run.get());
            row.window_norm = ctcb_run_final_window_norm(run.get());
            row.total_density = ctcb_run_final_total_density(run.get());
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_workers = worker_count(jobs, points.size());
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }

    std::string table = "value,status,iterations,window_norm,total_density\n";
    int rc = kOk;
    for (const auto& row : rows) {
        table += row.value + "," + row.status + "," + std::to_string(row.iterations) + "," +
                 format_real(row.window_norm) + "," + format_real(row.total_density) + "\n";
        if (row.exit != kOk && (rc == kOk || row.exit == kBlowup)) {
            rc = row.exit;
        }
    }
    const auto summary = std::filesystem::path(out_dir) / "summary.csv";
    if (std::FILE* f = std::fopen(summary.string().c_str(), "wb")) {
        std::fwrite(table.data(), 1, table.size(), f);
        std::fclose(f);
    } else {
        std::cerr << "error: cannot write " << summary.string() << '\n';
        return kUsage;
    }
    std::fputs(table.c_str(), stdout);
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-consistent wave histories with a closed time-like feedback loop"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ctcb_version()));

    auto* presets = app.add_subcommand("presets", "List registered presets");

    auto* run = app.add_subcommand("run", "Solve one scenario and write its maps and logs");
    std::string run_source;
    std::string run_out;
    std::vector<std::string> run_sets;
    bool run_csv = false;
    run->add_option("scenario", run_source, "Preset name or config file")->required();
    run->add_option("--out", run_out, "Output directory")->required();
    run->add_option("--set", run_sets, "Parameter override key=value (repeatable)")
        ->allow_extra_args(false);
    run->add_flag("--csv", run_csv, "Also write the maps as CSV");

    auto* sweep = app.add_subcommand("sweep", "Solve a scenario over a list of parameter values");
    std::string sweep_source;
    std::string sweep_param;
    std::string sweep_values;
    std::string sweep_out;
    std::size_t sweep_jobs = 1;
    sweep->add_option("scenario", sweep_source, "Preset name or config file")->required();
    sweep->add_option("--param", sweep_param, "Numeric parameter key")->required();
    sweep->add_option("--values", sweep_values, "Comma-separated values")->required();
    sweep->add_option("--out", sweep_out, "Output directory")->required();
    sweep->add_option("--jobs", sweep_jobs, "Parallel workers (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    if (presets->parsed()) {
        return cmd_presets();
    }
    if (run->parsed()) {
        return cmd_run(run_source, run_out, run_sets, run_csv);
    }
    if (sweep->parsed()) {
        return cmd_sweep(sweep_source, sweep_param, sweep_values, sweep_out, sweep_jobs);
    }
    return kUsage;
}
