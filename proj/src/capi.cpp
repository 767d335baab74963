#include "ctcbeam/ctcbeam.h"

#include "ctcbeam/error.hpp"
#include "ctcbeam/fixed_point.hpp"
#include "ctcbeam/io.hpp"
#include "ctcbeam/run.hpp"
#include "ctcbeam/scenario.hpp"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

struct ctcb_scenario {
    ctcbeam::ScenarioSpec spec;
};

struct ctcb_run {
    ctcbeam::RunOutcome outcome;
};

namespace {

thread_local std::string last_error;

ctcb_status status_of(ctcbeam::ErrorKind kind) {
    switch (kind) {
    case ctcbeam::ErrorKind::InvalidParameter:
        return CTCB_ERR_INVALID_ARGUMENT;
    case ctcbeam::ErrorKind::Configuration:
        return CTCB_ERR_CONFIG;
    case ctcbeam::ErrorKind::Lookup:
        return CTCB_ERR_LOOKUP;
    case ctcbeam::ErrorKind::NumericBlowup:
        return CTCB_ERR_NUMERIC_BLOWUP;
    case ctcbeam::ErrorKind::Io:
        return CTCB_ERR_IO;
    }
    return CTCB_ERR_INTERNAL;
}

ctcb_status fail(ctcb_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <typename F>
ctcb_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const ctcbeam::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(CTCB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CTCB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CTCB_ERR_INTERNAL, "unknown error");
    }
}

ctcb_status copy_out(const std::string& text, char* buf, size_t len, size_t* needed) {
    if (needed != nullptr) {
        *needed = text.size() + 1;
    }
    if (buf == nullptr) {
        return CTCB_OK;
    }
    if (len < text.size() + 1) {
        return fail(CTCB_ERR_BUFFER_TOO_SMALL, "output buffer too small");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return CTCB_OK;
}

ctcb_status null_arg(const char* what) {
    return fail(CTCB_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

ctcb_convergence convergence_of(ctcbeam::ConvergenceStatus s) {
    switch (s) {
    case ctcbeam::ConvergenceStatus::Converged:
        return CTCB_CONVERGED;
    case ctcbeam::ConvergenceStatus::Diverged:
        return CTCB_DIVERGED;
    case ctcbeam::ConvergenceStatus::MaxIterations:
        return CTCB_MAX_ITERATIONS;
    }
    return CTCB_MAX_ITERATIONS;
}

// Preset strings are string_views onto literals; expose NUL-terminated copies.
const std::vector<std::string>& preset_strings(bool names) {
    static const auto build = [](bool want_names) {
        std::vector<std::string> out;
        for (const auto& p : ctcbeam::preset_list()) {
            out.emplace_back(want_names ? p.name : p.description);
        }
        return out;
    };
    static const std::vector<std::string> name_list = build(true);
    static const std::vector<std::string> desc_list = build(false);
    return names ? name_list : desc_list;
}

} // namespace

extern "C" {

const char* ctcb_version(void) { return "0.1.0"; }

const char* ctcb_last_error(void) { return last_error.c_str(); }

size_t ctcb_preset_count(void) { return ctcbeam::preset_list().size(); }

const char* ctcb_preset_name(size_t index) {
    const auto& names = preset_strings(true);
    return index < names.size() ? names[index].c_str() : nullptr;
}

const char* ctcb_preset_description(size_t index) {
    const auto& desc = preset_strings(false);
    return index < desc.size() ? desc[index].c_str() : nullptr;
}

ctcb_status ctcb_scenario_from_preset(const char* name, ctcb_scenario** out) {
    if (name == nullptr || out == nullptr) {
        return null_arg("name/out");
    }
    return guarded([&] {
        *out = new ctcb_scenario{ctcbeam::preset_spec(name)};
        return CTCB_OK;
    });
}

ctcb_status ctcb_scenario_from_config(const char* text, ctcb_scenario** out) {
    if (text == nullptr || out == nullptr) {
        return null_arg("text/out");
    }
    return guarded([&] {
        *out = new ctcb_scenario{ctcbeam::parse_config(text)};
        return CTCB_OK;
    });
}

ctcb_status ctcb_scenario_from_file(const char* path, ctcb_scenario** out) {
    if (path == nullptr || out == nullptr) {
        return null_arg("path/out");
    }
    return guarded([&] {
        std::string text;
        try {
            text = ctcbeam::read_text_file(path);
        } catch (const ctcbeam::Error& e) {
            throw ctcbeam::Error(ctcbeam::ErrorKind::Configuration, e.what());
        }
        *out = new ctcb_scenario{ctcbeam::parse_config(text)};
        return CTCB_OK;
    });
}

ctcb_status ctcb_scenario_clone(const ctcb_scenario* s, ctcb_scenario** out) {
    if (s == nullptr || out == nullptr) {
        return null_arg("scenario/out");
    }
    return guarded([&] {
        *out = new ctcb_scenario{s->spec};
        return CTCB_OK;
    });
}

void ctcb_scenario_free(ctcb_scenario* s) { delete s; }

ctcb_status ctcb_scenario_set(ctcb_scenario* s, const char* key, const char* value) {
    if (s == nullptr || key == nullptr || value == nullptr) {
        return null_arg("scenario/key/value");
    }
    return guarded([&] {
        ctcbeam::set_parameter(s->spec, key, value);
        return CTCB_OK;
    });
}

ctcb_status ctcb_scenario_get(const ctcb_scenario* s, const char* key, char* buf, size_t len,
                              size_t* needed) {
    if (s == nullptr || key == nullptr) {
        return null_arg("scenario/key");
    }
    return guarded([&] { return copy_out(ctcbeam::get_parameter(s->spec, key), buf, len, needed); });
}

ctcb_status ctcb_scenario_manifest(const ctcb_scenario* s, char* buf, size_t len, size_t* needed) {
    if (s == nullptr) {
        return null_arg("scenario");
    }
    return guarded([&] { return copy_out(ctcbeam::to_manifest(s->spec), buf, len, needed); });
}

ctcb_status ctcb_scenario_validate(const ctcb_scenario* s, size_t* count, char* buf, size_t len,
                                   size_t* needed) {
    if (s == nullptr) {
        return null_arg("scenario");
    }
    return guarded([&] {
        const auto violations = ctcbeam::validate(s->spec);
        if (count != nullptr) {
            *count = violations.size();
        }
        std::string joined;
        for (const auto& v : violations) {
            if (!joined.empty()) {
                joined.push_back('\n');
            }
            joined += v;
        }
        return copy_out(joined, buf, len, needed);
    });
}

int ctcb_is_numeric_parameter(const char* key) {
    return key != nullptr && ctcbeam::is_numeric_parameter(key) ? 1 : 0;
}

ctcb_status ctcb_scenario_loop_gain(const ctcb_scenario* s, double probe_scale, double* gain) {
    if (s == nullptr || gain == nullptr) {
        return null_arg("scenario/gain");
    }
    return guarded([&] {
        *gain = ctcbeam::loop_gain_estimate(ctcbeam::build_scenario(s->spec), probe_scale);
        return CTCB_OK;
    });
}

ctcb_status ctcb_solve(const ctcb_scenario* s, ctcb_run** out) {
    if (s == nullptr || out == nullptr) {
        return null_arg("scenario/out");
    }
    return guarded([&] {
        *out = new ctcb_run{ctcbeam::run_scenario(s->spec)};
        return CTCB_OK;
    });
}

void ctcb_run_free(ctcb_run* r) { delete r; }

ctcb_convergence ctcb_run_status(const ctcb_run* r) {
    return r == nullptr ? CTCB_MAX_ITERATIONS : convergence_of(r->outcome.result.report.status);
}

size_t ctcb_run_iterations(const ctcb_run* r) {
    return r == nullptr ? 0 : r->outcome.result.report.iterations;
}

ctcb_status ctcb_run_iteration(const ctcb_run* r, size_t index, double* residual,
                               double* window_norm, double* total_density) {
    if (r == nullptr) {
        return null_arg("run");
    }
    const auto& rep = r->outcome.result.report;
    if (index >= rep.residuals.size()) {
        return fail(CTCB_ERR_INVALID_ARGUMENT, "iteration index out of range");
    }
    if (residual != nullptr) {
        *residual = rep.residuals[index];
    }
    if (window_norm != nullptr) {
        *window_norm = rep.window_norms[index];
    }
    if (total_density != nullptr) {
        *total_density = rep.total_densities[index];
    }
    return CTCB_OK;
}

double ctcb_run_final_window_norm(const ctcb_run* r) {
    return r == nullptr ? 0.0 : r->outcome.final_window_norm();
}

double ctcb_run_final_total_density(const ctcb_run* r) {
    return r == nullptr ? 0.0 : r->outcome.final_total_density();
}

ctcb_status ctcb_run_write_outputs(const ctcb_run* r, const char* dir, int csv) {
    if (r == nullptr || dir == nullptr) {
        return null_arg("run/dir");
    }
    return guarded([&] {
        ctcbeam::write_run_outputs(r->outcome, dir, csv != 0);
        return CTCB_OK;
    });
}

} // extern "C"
