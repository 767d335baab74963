#include "ctcbeam/error.hpp"
#include "ctcbeam/io.hpp"
#include "ctcbeam/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>

using namespace ctcbeam;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("ctcbeam_test_io_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

Map2D sample_map() {
    Map2D m;
    m.rows = 3;
    m.cols = 4;
    m.data = {0.0, -0.0, 1.0, -1.5, 1e-300, 6.02e23, std::numeric_limits<double>::max(),
              std::numeric_limits<double>::denorm_min(), 0.1, 1.0 / 3.0, -2.5e-17, 42.0};
    return m;
}

void expect_config_error_on_line(const std::string& text, int line) {
    try {
        parse_config(text);
        FAIL("expected a configuration error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Configuration);
        const std::string prefix = "line " + std::to_string(line) + ":";
        CHECK(std::string(e.what()).rfind(prefix, 0) == 0);
    }
}

} // namespace

TEST_CASE("format_real round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02e23, 1e-300, 3.0}) {
        CHECK(std::stod(format_real(v)) == v);
    }
    CHECK(format_real(3.0) == "3");
}

TEST_CASE("config parsing") {
    SUBCASE("preset seed with overrides and comments") {
        const auto spec = parse_config("# comment\n"
                                       "preset = fig2_diffraction\n"
                                       "\n"
                                       "ctc.alpha_mod = 0.25   # trailing\n"
                                       "  grid.nt=400\n");
        CHECK(spec.name == "fig2_diffraction");
        CHECK(spec.ctc.alpha_mod == 0.25);
        CHECK(spec.grid.nt == 400);
        CHECK(spec.ctc.y_out == preset_spec("fig2_diffraction").ctc.y_out);
    }
    SUBCASE("errors carry the line number") {
        expect_config_error_on_line("preset = fig2_diffraction\nnot a pair\n", 2);
        expect_config_error_on_line("\n\nbogus.key = 1\n", 3);
        expect_config_error_on_line("preset = fig2_diffraction\ngrid.nt = many\n", 2);
        expect_config_error_on_line("preset = nosuch\n", 1);
        expect_config_error_on_line("grid.nt = 10\npreset = fig2_diffraction\n", 2);
    }
    SUBCASE("empty text gives defaults") {
        CHECK(to_manifest(parse_config("")) == to_manifest(ScenarioSpec{}));
    }
}

TEST_CASE("manifest round-trip is exact") {
    for (const auto& info : preset_list()) {
        CAPTURE(info.name);
        const ScenarioSpec spec = preset_spec(info.name);
        const std::string text = to_manifest(spec);
        const ScenarioSpec back = parse_config(text);
        CHECK(to_manifest(back) == text);
        for (auto key : parameter_keys()) {
            CHECK(get_parameter(back, key) == get_parameter(spec, key));
        }
        CHECK(back.ctc.alpha_phase == spec.ctc.alpha_phase);
        CHECK(back.grid.dy == spec.grid.dy);
    }
}

TEST_CASE("CTCB container") {
    const Map2D m = sample_map();
    const std::string bytes = encode_ctcb(m);
    SUBCASE("layout") {
        REQUIRE(bytes.size() == 16 + 8 * 12);
        CHECK(bytes.substr(0, 4) == "CTCB");
        CHECK(static_cast<unsigned char>(bytes[4]) == 1);
        CHECK(static_cast<unsigned char>(bytes[8]) == 3);
        CHECK(static_cast<unsigned char>(bytes[12]) == 4);
        double third;
        std::memcpy(&third, bytes.data() + 16 + 8 * 2, 8);
        CHECK(third == 1.0); // little-endian host
    }
    SUBCASE("byte-exact round-trip") {
        const Map2D back = decode_ctcb(bytes);
        CHECK(back.rows == m.rows);
        CHECK(back.cols == m.cols);
        CHECK(std::memcmp(back.data.data(), m.data.data(), 8 * m.data.size()) == 0);
        CHECK(encode_ctcb(back) == bytes);
    }
    SUBCASE("malformed input is an IO error") {
        std::string bad_magic = bytes;
        bad_magic[0] = 'X';
        std::string bad_version = bytes;
        bad_version[4] = 2;
        const std::string truncated = bytes.substr(0, bytes.size() - 1);
        for (const auto& b : {bad_magic, bad_version, truncated, std::string("CTC")}) {
            try {
                decode_ctcb(b);
                FAIL("expected an IO error");
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::Io);
            }
        }
    }
    SUBCASE("inconsistent map is rejected") {
        Map2D bad = m;
        bad.data.pop_back();
        CHECK_THROWS_AS(encode_ctcb(bad), Error);
    }
    SUBCASE("files") {
        const auto dir = scratch_dir("ctcb");
        write_ctcb(dir / "m.ctcb", m);
        CHECK(read_ctcb(dir / "m.ctcb") == m);
        CHECK(read_text_file(dir / "m.ctcb") == bytes);
        try {
            read_ctcb(dir / "missing.ctcb");
            FAIL("expected an IO error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Io);
        }
        std::filesystem::remove_all(dir);
    }
}

TEST_CASE("CSV output") {
    const auto dir = scratch_dir("csv");
    SUBCASE("convergence table") {
        ConvergenceReport rep;
        rep.residuals = {0.5, 1e-13};
        rep.window_norms = {1.0, 1.25};
        rep.total_densities = {2.0, 2.5};
        write_convergence_csv(dir / "c.csv", rep);
        CHECK(read_text_file(dir / "c.csv") == "iteration,residual,window_norm,total_density\n"
                                                "0,0.5,1,2\n"
                                                "1,1e-13,1.25,2.5\n");
    }
    SUBCASE("map rows") {
        Map2D m;
        m.rows = 2;
        m.cols = 2;
        m.data = {1.0, 0.5, -2.0, 0.1};
        write_map_csv(dir / "m.csv", m);
        CHECK(read_text_file(dir / "m.csv") == "1,0.5\n-2,0.1\n");
    }
    std::filesystem::remove_all(dir);
}
