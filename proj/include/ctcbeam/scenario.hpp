#pragma once

// Named, fully parameterised experiments. A ScenarioSpec is the flat,
// serialisable description (what presets, config files and manifests hold);
// a Scenario is the materialised form the solver consumes.

#include "ctcbeam/core.hpp"
#include "ctcbeam/ctc.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctcbeam {

enum class InitialKind { Gaussian, Dip, PlaneWave };
enum class BackgroundKind { None, Uniform };

struct ScenarioSpec {
    std::string name = "custom";
    std::string description;

    GridSpec grid;

    double mass = 1.0;
    double g = 0.0;

    // U(y) = offset + smooth edge barrier (height 0 disables the barrier).
    double potential_offset = 0.0;
    double barrier_edge_offset = 0.0;
    double barrier_height = 0.0;
    double barrier_steepness = 1.0;

    InitialKind initial = InitialKind::Gaussian;
    double initial_y0 = 0.0;
    double initial_sigma = 1.0;
    double initial_ky = 0.0;
    double initial_amplitude = 1.0;
    bool initial_normalize = true; // rescale so the integrated density is 1
    double initial_n0 = 1.0;       // dip background density
    double initial_depth = 0.0;
    double initial_width = 1.0;

    CTCConfig ctc;

    BackgroundKind background = BackgroundKind::None;
    double background_n0 = 1.0;

    double tol = 1e-12;
    std::size_t max_iter = 200;

    // Presentation hint recorded in manifests; maps are always linear.
    bool log_scale_hint = false;

    double total_time() const { return grid.total_time(); }
};

struct Scenario {
    std::string name;
    GridSpec grid;
    PhysicsParams params;
    Field base_initial;
    CTCConfig ctc;
    std::optional<Field> background_reference;
    double T = 0.0;
    // Either one exempts the scenario from the edge-density margin.
    bool has_barrier = false;     // reflecting walls
    bool periodic_initial = false; // plane wave filling the periodic domain
};

struct PresetInfo {
    std::string_view name;
    std::string_view description;
};

// Registered presets in a fixed order.
const std::vector<PresetInfo>& preset_list();

// Throws Lookup listing the valid names when `name` is unknown.
ScenarioSpec preset_spec(std::string_view name);

// Materialises a spec. Throws InvalidParameter on inconsistent values.
Scenario build_scenario(const ScenarioSpec& spec);

Scenario preset(std::string_view name);

// Empty result means the scenario is valid.
std::vector<std::string> validate(const Scenario& s);
std::vector<std::string> validate(const ScenarioSpec& spec);

// Dotted-key access used by config files, manifests, CLI overrides and sweeps.
// Throws Configuration for unknown keys or unparsable values.
void set_parameter(ScenarioSpec& spec, std::string_view key, std::string_view value);
std::string get_parameter(const ScenarioSpec& spec, std::string_view key);
const std::vector<std::string_view>& parameter_keys();

bool is_numeric_parameter(std::string_view key);

} // namespace ctcbeam
