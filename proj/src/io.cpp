#include "ctcbeam/io.hpp"

#include "ctcbeam/error.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ctcbeam {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
void append_le(std::string& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
            std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
        }
    }
    out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::string_view bytes, std::size_t offset) {
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, bytes.data() + offset, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
            std::swap(raw[i], raw[sizeof(T) - 1 - i]);
        }
    }
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
}

[[noreturn]] void io_error(const std::string& what) { throw Error(ErrorKind::Io, what); }

} // namespace

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

ScenarioSpec parse_config(std::string_view text) {
    ScenarioSpec spec;
    std::size_t line_no = 0;
    bool seen_key = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Configuration,
                        "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        try {
            if (key == "preset") {
                if (seen_key) {
                    throw Error(ErrorKind::Configuration, "preset must precede all other keys");
                }
                spec = preset_spec(value);
            } else {
                set_parameter(spec, key, value);
            }
        } catch (const Error& e) {
            throw Error(ErrorKind::Configuration,
                        "line " + std::to_string(line_no) + ": " + std::string(key) + ": " +
                            e.what());
        }
        seen_key = true;
    }
    return spec;
}

ScenarioSpec load_config_file(const std::filesystem::path& path) {
    return parse_config(read_text_file(path));
}

std::string to_manifest(const ScenarioSpec& spec) {
    std::string out;
    for (std::string_view key : parameter_keys()) {
        out.append(key);
        out.append(" = ");
        out.append(get_parameter(spec, key));
        out.push_back('\n');
    }
    return out;
}

std::string encode_ctcb(const Map2D& map) {
    if (map.data.size() != map.rows * map.cols) {
        throw_invalid("map data size does not match its dimensions");
    }
    std::string out;
    out.reserve(16 + 8 * map.data.size());
    out.append(kCtcbMagic, 4);
    append_le<std::uint32_t>(out, kCtcbVersion);
    append_le<std::uint32_t>(out, static_cast<std::uint32_t>(map.rows));
    append_le<std::uint32_t>(out, static_cast<std::uint32_t>(map.cols));
    for (double v : map.data) {
        append_le<double>(out, v);
    }
    return out;
}

Map2D decode_ctcb(std::string_view bytes) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kCtcbMagic, 4) != 0) {
        io_error("not a CTCB container");
    }
    const auto version = read_le<std::uint32_t>(bytes, 4);
    if (version != kCtcbVersion) {
        io_error("unsupported CTCB version " + std::to_string(version));
    }
    Map2D map;
    map.rows = read_le<std::uint32_t>(bytes, 8);
    map.cols = read_le<std::uint32_t>(bytes, 12);
    const std::size_t count = map.rows * map.cols;
    if (bytes.size() != 16 + 8 * count) {
        io_error("CTCB payload size does not match its header");
    }
    map.data.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        map.data[i] = read_le<double>(bytes, 16 + 8 * i);
    }
    return map;
}

void write_ctcb(const std::filesystem::path& path, const Map2D& map) {
    write_text_file(path, encode_ctcb(map));
}

Map2D read_ctcb(const std::filesystem::path& path) { return decode_ctcb(read_text_file(path)); }

void write_map_csv(const std::filesystem::path& path, const Map2D& map) {
    std::string out;
    for (std::size_t r = 0; r < map.rows; ++r) {
        for (std::size_t c = 0; c < map.cols; ++c) {
            if (c != 0) {
                out.push_back(',');
            }
            out.append(format_real(map.at(r, c)));
        }
        out.push_back('\n');
    }
    write_text_file(path, out);
}

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& report) {
    std::string out = "iteration,residual,window_norm,total_density\n";
    for (std::size_t i = 0; i < report.residuals.size(); ++i) {
        out.append(std::to_string(i));
        out.push_back(',');
        out.append(format_real(report.residuals[i]));
        out.push_back(',');
        out.append(format_real(report.window_norms[i]));
        out.push_back(',');
        out.append(format_real(report.total_densities[i]));
        out.push_back('\n');
    }
    write_text_file(path, out);
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        io_error("cannot open " + path.string() + " for writing");
    }
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) {
        io_error("failed writing " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        io_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace ctcbeam
