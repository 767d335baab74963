#include "ctcbeam/run.hpp"

#include "ctcbeam/diagnostics.hpp"
#include "ctcbeam/error.hpp"
#include "ctcbeam/io.hpp"

namespace ctcbeam {

double RunOutcome::final_window_norm() const {
    const auto& w = result.report.window_norms;
    return w.empty() ? 0.0 : w.back();
}

double RunOutcome::final_total_density() const {
    const auto& d = result.report.total_densities;
    return d.empty() ? 0.0 : d.back();
}

RunOutcome run_scenario(const ScenarioSpec& spec) {
    RunOutcome out;
    out.spec = spec;
    const Scenario scenario = build_scenario(spec);
    out.result = solve_fixed_point(scenario, spec.tol, spec.max_iter);
    return out;
}

void write_run_outputs(const RunOutcome& outcome, const std::filesystem::path& dir, bool csv) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " +
                                       ec.message());
    }
    const Map2D ctc = density_map(outcome.result.record);
    const Map2D free = density_map(outcome.result.free_record);
    const Map2D diff = difference_map(outcome.result.record, outcome.result.free_record);

    write_ctcb(dir / "density_ctc.ctcb", ctc);
    write_ctcb(dir / "density_free.ctcb", free);
    write_ctcb(dir / "difference.ctcb", diff);
    if (csv) {
        write_map_csv(dir / "density_ctc.csv", ctc);
        write_map_csv(dir / "density_free.csv", free);
        write_map_csv(dir / "difference.csv", diff);
    }
    write_convergence_csv(dir / "convergence.csv", outcome.result.report);

    const auto& report = outcome.result.report;
    std::string manifest = to_manifest(outcome.spec);
    manifest += "# status = " + std::string(to_string(report.status)) + "\n";
    manifest += "# iterations = " + std::to_string(report.iterations) + "\n";
    manifest += "# final_window_norm = " + format_real(outcome.final_window_norm()) + "\n";
    manifest += "# final_total_density = " + format_real(outcome.final_total_density()) + "\n";
    write_text_file(dir / "manifest.cfg", manifest);
}

} // namespace ctcbeam
