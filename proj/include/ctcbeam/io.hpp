#pragma once

// File formats: flat dotted-key configs/manifests, the CTCB binary map
// container, and CSV tables.

#include "ctcbeam/ctc.hpp"
#include "ctcbeam/diagnostics.hpp"
#include "ctcbeam/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace ctcbeam {

// CTCB container: "CTCB", u32 version, u32 rows, u32 cols, then rows*cols
// little-endian IEEE-754 doubles in row-major order.
inline constexpr char kCtcbMagic[4] = {'C', 'T', 'C', 'B'};
inline constexpr std::uint32_t kCtcbVersion = 1;

// Lines of `key = value`; '#' starts a comment. A leading `preset = NAME`
// seeds the spec from that preset; later keys override it. Errors carry the
// 1-based line number.
ScenarioSpec parse_config(std::string_view text);
ScenarioSpec load_config_file(const std::filesystem::path& path);

// Every parameter, one per line, in a form parse_config reproduces exactly.
std::string to_manifest(const ScenarioSpec& spec);

std::string encode_ctcb(const Map2D& map);
Map2D decode_ctcb(std::string_view bytes);

void write_ctcb(const std::filesystem::path& path, const Map2D& map);
Map2D read_ctcb(const std::filesystem::path& path);

void write_map_csv(const std::filesystem::path& path, const Map2D& map);
void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& report);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

// Shortest round-trip decimal form.
std::string format_real(double v);

} // namespace ctcbeam
