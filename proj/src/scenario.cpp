#include "ctcbeam/scenario.hpp"

#include "ctcbeam/error.hpp"
#include "ctcbeam/io.hpp"
#include "ctcbeam/solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

namespace ctcbeam {

namespace {

constexpr double kDomainLength = 160.0;
constexpr std::size_t kDefaultNy = 1024;
constexpr double kEdgeDensityMargin = 1e-8;

GridSpec default_grid(std::size_t nt, double dt, std::size_t stride) {
    GridSpec g;
    g.ny = kDefaultNy;
    g.dy = kDomainLength / static_cast<double>(kDefaultNy);
    g.nt = nt;
    g.dt = dt;
    g.snapshot_stride = stride;
    return g;
}

// Diffracting Gaussian beside a narrow window at y = -20 um. The packet's
// tail reaching the window is the signal; diffraction carries the reinjected
// copy out of the window, so the loop contracts quickly.
ScenarioSpec fig2_diffraction() {
    ScenarioSpec s;
    s.grid = default_grid(2000, 0.0025, 20);
    s.initial = InitialKind::Gaussian;
    s.initial_y0 = 0.0;
    s.initial_sigma = 3.0;
    s.ctc.y_out = -20.0;
    s.ctc.y_in = -20.0;
    s.ctc.w = 0.5;
    s.ctc.alpha_mod = 1.0;
    s.ctc.alpha_phase = 0.0;
    s.log_scale_hint = true;
    return s;
}

// A packet moving down towards the window between smooth walls at |y| = 64.
// Its window copy re-enters below the window and returns to it off the lower
// wall; the second copy leaves upwards and never comes back, so the history
// holds exactly three packets, 40 um apart at t = T/2.
ScenarioSpec fig3_bouncing() {
    ScenarioSpec s;
    s.grid = default_grid(5000, 0.0032, 50);
    s.barrier_edge_offset = 16.0;
    s.barrier_height = 25.0;
    s.barrier_steepness = 2.0;
    s.initial = InitialKind::Gaussian;
    s.initial_y0 = 36.0;
    s.initial_sigma = 5.0;
    s.initial_ky = -5.0;
    s.ctc.y_out = -44.0;
    s.ctc.y_in = -4.0;
    s.ctc.w = 6.0;
    return s;
}

// Wide, barely diffracting beam sitting on the window. The uniform potential
// offset cancels the one-pass phase of the beam so that alpha_phase = 0 is
// the resonant (constructive) case and pi the anti-resonant one.
ScenarioSpec fig4_base(double phase) {
    ScenarioSpec s;
    s.grid = default_grid(6000, 0.003, 60);
    s.potential_offset = -0.0223;
    s.initial = InitialKind::Gaussian;
    s.initial_y0 = 0.0;
    s.initial_sigma = 3.5;
    s.ctc.y_out = 0.0;
    s.ctc.y_in = 0.0;
    s.ctc.w = 3.0;
    s.ctc.alpha_mod = 1.0;
    s.ctc.alpha_phase = phase;
    s.log_scale_hint = true;
    return s;
}

ScenarioSpec fig4_constructive() { return fig4_base(0.0); }

ScenarioSpec fig4_destructive() { return fig4_base(std::numbers::pi); }

// Density dip on a repulsive uniform background splitting into two gray
// solitons; the left one reaches the window at T and is sent back, as a
// deviation from the unperturbed background, further down its path. g is
// chosen so that g n0 T = 6 pi: the background phase at T then matches t = 0
// and the reinjected deviation keeps the shape of a soliton.
ScenarioSpec fig5_solitons() {
    ScenarioSpec s;
    s.grid = default_grid(6000, 0.0035, 50);
    s.g = 2.0 * std::numbers::pi / 7.0;
    s.initial = InitialKind::Dip;
    s.initial_normalize = false;
    s.initial_n0 = 1.0;
    s.initial_depth = 0.6;
    s.initial_width = 2.0;
    s.initial_y0 = 0.0;
    s.ctc.y_out = -16.0;
    s.ctc.y_in = -35.0;
    s.ctc.w = 3.0;
    s.ctc.alpha_mod = 1.0;
    s.ctc.mode = InjectionMode::MeanSubtracted;
    s.background = BackgroundKind::Uniform;
    s.background_n0 = 1.0;
    return s;
}

// Uniform field with a window wider than the domain: the loop reduces to the
// scalar map s_{n+1} = s_0 + alpha G s_n with G the one-pass phase.
ScenarioSpec toy_single_mode() {
    ScenarioSpec s;
    s.grid = default_grid(200, 0.0025, 200);
    s.initial = InitialKind::PlaneWave;
    s.initial_ky = 0.0;
    s.ctc.y_out = 0.0;
    s.ctc.y_in = 0.0;
    s.ctc.w = 1e9;
    s.ctc.alpha_mod = 0.5;
    s.ctc.alpha_phase = std::numbers::pi / 3.0;
    s.max_iter = 500;
    return s;
}

struct RegistryEntry {
    PresetInfo info;
    ScenarioSpec (*make)();
};

const std::vector<RegistryEntry>& registry() {
    static const std::vector<RegistryEntry> entries = {
        {{"fig2_diffraction", "diffracting Gaussian beam, narrow window at y=-20 um (linear)"},
         fig2_diffraction},
        {{"fig3_bouncing", "moving packet with reflecting walls, three coexisting copies (linear)"},
         fig3_bouncing},
        {{"fig4_constructive", "wide k=0 beam re-entering the window, phase 0 (self-amplification)"},
         fig4_constructive},
        {{"fig4_destructive", "wide k=0 beam re-entering the window, phase pi (self-suppression)"},
         fig4_destructive},
        {{"fig5_solitons", "gray solitons on a repulsive background, mean-subtracted feedback"},
         fig5_solitons},
        {{"toy_single_mode", "uniform k=0 mode, whole-domain window (geometric-series oracle)"},
         toy_single_mode},
    };
    return entries;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
    throw Error(ErrorKind::Configuration, "invalid value '" + std::string(value) + "' for " +
                                              std::string(key) + ": " + std::string(why));
}

double parse_double(std::string_view key, std::string_view text) {
    if (text == "pi") {
        return std::numbers::pi;
    }
    if (text == "-pi") {
        return -std::numbers::pi;
    }
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        bad_value(key, text, "expected a number");
    }
    return v;
}

std::size_t parse_size(std::string_view key, std::string_view text) {
    std::size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        bad_value(key, text, "expected a non-negative integer");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    bad_value(key, text, "expected true or false");
}

std::string_view initial_kind_name(InitialKind k) {
    switch (k) {
    case InitialKind::Gaussian:
        return "gaussian";
    case InitialKind::Dip:
        return "dip";
    case InitialKind::PlaneWave:
        return "plane";
    }
    return "gaussian";
}

struct Parameter {
    std::string_view key;
    bool numeric;
    std::function<void(ScenarioSpec&, std::string_view, std::string_view)> set;
    std::function<std::string(const ScenarioSpec&)> get;
};

Parameter real_param(std::string_view key, double ScenarioSpec::*field) {
    return {key, true,
            [field](ScenarioSpec& s, std::string_view k, std::string_view v) {
                s.*field = parse_double(k, v);
            },
            [field](const ScenarioSpec& s) { return format_real(s.*field); }};
}

template <typename Access>
Parameter real_param_with(std::string_view key, Access access) {
    return {key, true,
            [access](ScenarioSpec& s, std::string_view k, std::string_view v) {
                access(s) = parse_double(k, v);
            },
            [access](const ScenarioSpec& s) { return format_real(access(s)); }};
}

template <typename Access>
Parameter size_param_with(std::string_view key, Access access) {
    return {key, true,
            [access](ScenarioSpec& s, std::string_view k, std::string_view v) {
                access(s) = parse_size(k, v);
            },
            [access](const ScenarioSpec& s) { return std::to_string(access(s)); }};
}

const std::vector<Parameter>& parameters() {
    static const std::vector<Parameter> params = [] {
        std::vector<Parameter> p;
        p.push_back({"name", false,
                     [](ScenarioSpec& s, std::string_view, std::string_view v) { s.name = v; },
                     [](const ScenarioSpec& s) { return s.name; }});
        p.push_back(
            {"description", false,
             [](ScenarioSpec& s, std::string_view, std::string_view v) { s.description = v; },
             [](const ScenarioSpec& s) { return s.description; }});
        p.push_back(size_param_with("grid.ny", [](auto& s) -> auto& { return s.grid.ny; }));
        p.push_back(real_param_with("grid.dy", [](auto& s) -> auto& { return s.grid.dy; }));
        p.push_back(size_param_with("grid.nt", [](auto& s) -> auto& { return s.grid.nt; }));
        p.push_back(real_param_with("grid.dt", [](auto& s) -> auto& { return s.grid.dt; }));
        p.push_back(size_param_with("grid.snapshot_stride",
                                    [](auto& s) -> auto& { return s.grid.snapshot_stride; }));
        p.push_back(real_param("physics.mass", &ScenarioSpec::mass));
        p.push_back(real_param("physics.g", &ScenarioSpec::g));
        p.push_back(real_param("potential.offset", &ScenarioSpec::potential_offset));
        p.push_back(real_param("potential.barrier.edge_offset", &ScenarioSpec::barrier_edge_offset));
        p.push_back(real_param("potential.barrier.height", &ScenarioSpec::barrier_height));
        p.push_back(real_param("potential.barrier.steepness", &ScenarioSpec::barrier_steepness));
        p.push_back({"initial.kind", false,
                     [](ScenarioSpec& s, std::string_view k, std::string_view v) {
                         if (v == "gaussian") {
                             s.initial = InitialKind::Gaussian;
                         } else if (v == "dip") {
                             s.initial = InitialKind::Dip;
                         } else if (v == "plane") {
                             s.initial = InitialKind::PlaneWave;
                         } else {
                             bad_value(k, v, "expected gaussian, dip or plane");
                         }
                     },
                     [](const ScenarioSpec& s) { return std::string(initial_kind_name(s.initial)); }});
        p.push_back(real_param("initial.y0", &ScenarioSpec::initial_y0));
        p.push_back(real_param("initial.sigma", &ScenarioSpec::initial_sigma));
        p.push_back(real_param("initial.ky", &ScenarioSpec::initial_ky));
        p.push_back(real_param("initial.amplitude", &ScenarioSpec::initial_amplitude));
        p.push_back({"initial.normalize", false,
                     [](ScenarioSpec& s, std::string_view k, std::string_view v) {
                         s.initial_normalize = parse_bool(k, v);
                     },
                     [](const ScenarioSpec& s) {
                         return std::string(s.initial_normalize ? "true" : "false");
                     }});
        p.push_back(real_param("initial.n0", &ScenarioSpec::initial_n0));
        p.push_back(real_param("initial.depth", &ScenarioSpec::initial_depth));
        p.push_back(real_param("initial.width", &ScenarioSpec::initial_width));
        p.push_back(real_param_with("ctc.y_out", [](auto& s) -> auto& { return s.ctc.y_out; }));
        p.push_back(real_param_with("ctc.y_in", [](auto& s) -> auto& { return s.ctc.y_in; }));
        p.push_back(real_param_with("ctc.w", [](auto& s) -> auto& { return s.ctc.w; }));
        p.push_back(real_param_with("ctc.alpha_mod", [](auto& s) -> auto& { return s.ctc.alpha_mod; }));
        p.push_back(real_param_with("ctc.alpha_phase", [](auto& s) -> auto& { return s.ctc.alpha_phase; }));
        p.push_back({"ctc.mode", false,
                     [](ScenarioSpec& s, std::string_view, std::string_view v) {
                         s.ctc.mode = injection_mode_from_string(v);
                     },
                     [](const ScenarioSpec& s) { return std::string(to_string(s.ctc.mode)); }});
        p.push_back({"background.kind", false,
                     [](ScenarioSpec& s, std::string_view k, std::string_view v) {
                         if (v == "none") {
                             s.background = BackgroundKind::None;
                         } else if (v == "uniform") {
                             s.background = BackgroundKind::Uniform;
                         } else {
                             bad_value(k, v, "expected none or uniform");
                         }
                     },
                     [](const ScenarioSpec& s) {
                         return std::string(s.background == BackgroundKind::Uniform ? "uniform" : "none");
                     }});
        p.push_back(real_param("background.n0", &ScenarioSpec::background_n0));
        p.push_back(real_param("solver.tol", &ScenarioSpec::tol));
        p.push_back(size_param_with("solver.max_iter", [](auto& s) -> auto& { return s.max_iter; }));
        p.push_back({"output.log_scale", false,
                     [](ScenarioSpec& s, std::string_view k, std::string_view v) {
                         s.log_scale_hint = parse_bool(k, v);
                     },
                     [](const ScenarioSpec& s) {
                         return std::string(s.log_scale_hint ? "true" : "false");
                     }});
        return p;
    }();
    return params;
}

const Parameter& find_parameter(std::string_view key) {
    for (const Parameter& p : parameters()) {
        if (p.key == key) {
            return p;
        }
    }
    throw Error(ErrorKind::Configuration, "unknown parameter '" + std::string(key) + "'");
}

double edge_density_ratio(const Field& f, const std::optional<Field>& background) {
    Field dev = f;
    if (background) {
        dev -= *background;
    }
    const std::size_t n = dev.size();
    const std::size_t band = std::max<std::size_t>(4, n / 64);
    double peak = 0.0;
    double edge = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = std::norm(dev[j]);
        peak = std::max(peak, d);
        if (j < band || j >= n - band) {
            edge = std::max(edge, d);
        }
    }
    return peak > 0.0 ? edge / peak : 0.0;
}

} // namespace

const std::vector<PresetInfo>& preset_list() {
    static const std::vector<PresetInfo> list = [] {
        std::vector<PresetInfo> out;
        for (const auto& e : registry()) {
            out.push_back(e.info);
        }
        return out;
    }();
    return list;
}

ScenarioSpec preset_spec(std::string_view name) {
    for (const auto& e : registry()) {
        if (e.info.name == name) {
            ScenarioSpec spec = e.make();
            spec.name = e.info.name;
            spec.description = e.info.description;
            return spec;
        }
    }
    std::string valid;
    for (const auto& e : registry()) {
        valid += (valid.empty() ? "" : ", ") + std::string(e.info.name);
    }
    throw Error(ErrorKind::Lookup,
                "unknown preset '" + std::string(name) + "' (valid: " + valid + ")");
}

Scenario build_scenario(const ScenarioSpec& spec) {
    spec.grid.check();
    const GridSpec& grid = spec.grid;

    Scenario s;
    s.name = spec.name;
    s.grid = grid;
    s.T = spec.total_time();
    s.ctc = spec.ctc;
    s.has_barrier = spec.barrier_height != 0.0;
    s.periodic_initial = spec.initial == InitialKind::PlaneWave;

    s.params.hbar = 1.0;
    s.params.mass = spec.mass;
    s.params.g = spec.g;
    s.params.potential =
        build_barrier_potential(grid, spec.barrier_edge_offset, spec.barrier_height,
                                spec.barrier_steepness);
    for (double& u : s.params.potential) {
        u += spec.potential_offset;
    }
    s.params.check(grid);

    switch (spec.initial) {
    case InitialKind::Gaussian:
        s.base_initial = make_gaussian_packet(grid, spec.initial_y0, spec.initial_sigma,
                                              spec.initial_ky, spec.initial_amplitude);
        break;
    case InitialKind::Dip:
        s.base_initial = make_background_with_dip(grid, spec.initial_n0, spec.initial_depth,
                                                  spec.initial_width, spec.initial_y0);
        break;
    case InitialKind::PlaneWave:
        s.base_initial = make_plane_wave(grid, spec.initial_ky, spec.initial_amplitude);
        break;
    }
    if (spec.initial_normalize) {
        const double norm = l2_norm(s.base_initial);
        if (!(norm > 0.0)) {
            throw_invalid("cannot normalise a zero initial field");
        }
        s.base_initial *= 1.0 / norm;
    }

    if (spec.background == BackgroundKind::Uniform) {
        if (!(spec.background_n0 >= 0.0)) {
            throw_invalid("background.n0 must be non-negative");
        }
        s.background_reference = make_plane_wave(grid, 0.0, std::sqrt(spec.background_n0));
    }
    return s;
}

Scenario preset(std::string_view name) { return build_scenario(preset_spec(name)); }

std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> out;
    try {
        s.grid.check();
    } catch (const Error& e) {
        out.emplace_back(std::string("grid: ") + e.what());
        return out;
    }
    try {
        s.params.check(s.grid);
    } catch (const Error& e) {
        out.emplace_back(std::string("physics: ") + e.what());
    }
    if (!(s.base_initial.grid() == s.grid)) {
        out.emplace_back("initial: base field grid differs from scenario grid");
    } else if (!s.base_initial.all_finite()) {
        out.emplace_back("initial: base field has non-finite samples");
    }
    if (s.background_reference && !(s.background_reference->grid() == s.grid)) {
        out.emplace_back("background: reference grid differs from scenario grid");
    }
    if (std::abs(s.T - s.grid.total_time()) > 1e-9 * std::max(1.0, s.T)) {
        out.emplace_back("grid: T does not equal nt*dt");
    }

    if (!(s.ctc.w > 0.0)) {
        out.emplace_back("ctc.w: window width must be positive");
    }
    if (!(s.ctc.alpha_mod >= 0.0)) {
        out.emplace_back("ctc.alpha_mod: coupling modulus must be >= 0");
    }
    if (!s.grid.contains(s.ctc.y_out)) {
        out.emplace_back("ctc.y_out: extraction window centre " + format_real(s.ctc.y_out) +
                         " lies outside the domain");
    }
    if (!s.grid.contains(s.ctc.y_in)) {
        out.emplace_back("ctc.y_in: injection window centre " + format_real(s.ctc.y_in) +
                         " lies outside the domain");
    }
    if (s.ctc.mode == InjectionMode::MeanSubtracted && !s.background_reference) {
        out.emplace_back("ctc.mode: mean-subtracted injection needs a background reference");
    }

    const double k_max = std::numbers::pi / s.grid.dy;
    const double kinetic_phase = s.params.hbar * k_max * k_max * s.grid.dt / (2.0 * s.params.mass);
    if (!(kinetic_phase < std::numbers::pi / 4.0)) {
        out.emplace_back("grid.dt: kinetic phase per step " + format_real(kinetic_phase) +
                         " exceeds pi/4");
    }

    if (!s.has_barrier && !s.periodic_initial && s.base_initial.grid() == s.grid) {
        const double ratio = edge_density_ratio(s.base_initial, s.background_reference);
        if (ratio >= kEdgeDensityMargin) {
            out.emplace_back("initial: edge density " + format_real(ratio) +
                             " of peak exceeds the 1e-8 margin");
        }
    }
    return out;
}

std::vector<std::string> validate(const ScenarioSpec& spec) {
    std::vector<std::string> out;
    if (!spec.grid.contains(spec.initial_y0)) {
        out.emplace_back("initial.y0: packet centre lies outside the domain");
        return out;
    }
    try {
        return validate(build_scenario(spec));
    } catch (const Error& e) {
        out.emplace_back(e.what());
    }
    return out;
}

void set_parameter(ScenarioSpec& spec, std::string_view key, std::string_view value) {
    find_parameter(key).set(spec, key, value);
}

std::string get_parameter(const ScenarioSpec& spec, std::string_view key) {
    return find_parameter(key).get(spec);
}

const std::vector<std::string_view>& parameter_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> out;
        for (const Parameter& p : parameters()) {
            out.push_back(p.key);
        }
        return out;
    }();
    return keys;
}

bool is_numeric_parameter(std::string_view key) {
    for (const Parameter& p : parameters()) {
        if (p.key == key) {
            return p.numeric;
        }
    }
    return false;
}

} // namespace ctcbeam
