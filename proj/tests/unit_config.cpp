// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "bfdesign/config.hpp"
#include "bfdesign/reports.hpp"

using namespace bfd;

namespace {

const char* kExampleConfig = R"(
# loudspeaker-lab array
[array]
elements = 7
spacing_m = 0.04
sample_rate_hz = 8000
sound_speed_mps = 340

[bands]
freq_hz = 1500 3500
passband_deg = 80 100
stopband_deg = 0 60, 120 180
steering_deg = 90

[design]
type = v1
filter_length = 20
group_delay = zero
stopband_atten_db = 6.0
wng_db = 0

[grid]
freq_points = 16
angle_points = 16

[output]
dir = cfg_test_out
)";

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("config parsing and unit conversion") {
    const RunConfig cfg = parse_run_config_text(kExampleConfig);
    CHECK(cfg.elements == 7);
    CHECK(cfg.design == DesignType::v1);
    CHECK(cfg.freq_points == 16);
    const BandSpec bands = cfg.to_bands();
    CHECK(bands.omega_lo == doctest::Approx(2.0 * 3.14159265358979 * 1500.0 /
                                            8000.0));
    CHECK(bands.passband.lo == doctest::Approx(80.0 * 3.14159265358979 /
                                               180.0));
    REQUIRE(bands.stopband.size() == 2);
    CHECK(cfg.tau_d() == 0.0);
    const ConvexDesignSpec spec = cfg.to_convex_spec();
    CHECK(spec.stopband_ceiling == doctest::Approx(std::pow(10.0, -6.0 / 20.0)));
    CHECK(spec.wng_floor == doctest::Approx(1.0));
    CHECK(spec.lambda == 0.0);  // one-shot designs default to no regularization
}

TEST_CASE("group delay keywords") {
    RunConfig cfg = parse_run_config_text(kExampleConfig);
    cfg.group_delay = "half";
    CHECK(cfg.tau_d() == doctest::Approx(9.5));
    cfg.group_delay = "quarter";
    CHECK(cfg.tau_d() == doctest::Approx(4.75));
    cfg.group_delay = "3.25";
    CHECK(cfg.tau_d() == doctest::Approx(3.25));
}

TEST_CASE("validation lists every violated field") {
    std::string text = kExampleConfig;
    text += "\n[bands]\npassband_deg = 100 80\nsteering_deg = 200\n";
    text += "[design]\nfilter_length = 0\n";
    try {
        parse_run_config_text(text, "broken.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("passband_deg") != std::string::npos);
        CHECK(msg.find("steering_deg") != std::string::npos);
        CHECK(msg.find("filter_length") != std::string::npos);
    }
}

TEST_CASE("unknown keys and malformed values are reported") {
    try {
        parse_run_config_text("[array]\nelements = seven\nwat = 1\n",
                              "bad.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("not a number") != std::string::npos);
        CHECK(msg.find("unknown key") != std::string::npos);
    }
}

TEST_CASE("identical configs give byte-identical artifacts") {
    RunConfig cfg = parse_run_config_text(kExampleConfig);
    cfg.output_dir = "cfg_det_a";
    const RunArtifacts first = run_design_config(cfg);
    REQUIRE(first.exit_code == 0);
    cfg.output_dir = "cfg_det_b";
    const RunArtifacts second = run_design_config(cfg);
    REQUIRE(second.exit_code == 0);
    CHECK(slurp("cfg_det_a/coefficients.csv") ==
          slurp("cfg_det_b/coefficients.csv"));
    CHECK(slurp("cfg_det_a/beampattern.csv") ==
          slurp("cfg_det_b/beampattern.csv"));
    std::filesystem::remove_all("cfg_det_a");
    std::filesystem::remove_all("cfg_det_b");
}

TEST_CASE("coefficients round-trip through csv") {
    FilterBank bank(3, 4);
    std::mt19937 rng(127);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int n = 0; n < 3; ++n)
        for (int l = 0; l < 4; ++l) bank(n, l) = dist(rng);
    write_coefficients_csv("cfg_roundtrip.csv", bank);
    const FilterBank back = read_coefficients_csv("cfg_roundtrip.csv");
    REQUIRE(back.num_channels() == 3);
    REQUIRE(back.filter_length() == 4);
    CHECK((back.coeffs() - bank.coeffs()).cwiseAbs().maxCoeff() == 0.0);
    std::remove("cfg_roundtrip.csv");
}

TEST_CASE("report echoes the configuration losslessly") {
    RunConfig cfg = parse_run_config_text(kExampleConfig);
    cfg.output_dir = "cfg_echo_out";
    const RunArtifacts art = run_design_config(cfg);
    REQUIRE(art.exit_code == 0);
    const std::string report = slurp("cfg_echo_out/report.json");
    CHECK(report.find("\"freq_hz\"") != std::string::npos);
    CHECK(report.find("1500") != std::string::npos);
    CHECK(report.find("\"type\": \"v1\"") != std::string::npos);
    CHECK(report.find("\"stopband_atten_db\": 6") != std::string::npos);
    std::filesystem::remove_all("cfg_echo_out");
}
