#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "biphoton/errors.hpp"
#include "biphoton/hom.hpp"
#include "biphoton/noise.hpp"
#include "biphoton/run.hpp"

using namespace biphoton;
namespace fs = std::filesystem;

#ifndef BIPHOTON_DATA_DIR
#define BIPHOTON_DATA_DIR "data"
#endif

namespace {

const std::string data_dir = BIPHOTON_DATA_DIR;

std::string bundled(const std::string& name) { return data_dir + "/configs/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string write_temp_config(const std::string& name, const nlohmann::json& config) {
    fs::create_directories("test_out");
    const std::string path = "test_out/" + name;
    std::ofstream out(path);
    out << config.dump(2);
    return path;
}

nlohmann::json parse_file(const std::string& path) {
    return nlohmann::json::parse(slurp(path));
}

}  // namespace

TEST_CASE("poisson counts") {
    SUBCASE("zero rate never counts") {
        const auto counts = poisson_counts(std::vector<double>(50, 0.0), 1.0, 1e5, 3);
        for (long long c : counts) CHECK(c == 0);
    }

    SUBCASE("sample mean tracks a mean of 1e4") {
        const std::size_t n = 100;
        const auto counts = poisson_counts(std::vector<double>(n, 1.0), 1.0, 1e4, 99);
        double mean = 0.0;
        for (long long c : counts) mean += static_cast<double>(c);
        mean /= static_cast<double>(n);
        // 3 sigma / sqrt(N) with sigma = sqrt(1e4)
        CHECK(std::abs(mean - 1e4) < 3.0 * 100.0 / std::sqrt(double(n)));
    }

    SUBCASE("fixed seed reproduces the sequence; seeds differ") {
        const std::vector<double> rates = {0.2, 0.9, 0.5, 1.0, 0.7};
        const auto a = poisson_counts(rates, 1.0, 2e4, 1234);
        const auto b = poisson_counts(rates, 1.0, 2e4, 1234);
        const auto c = poisson_counts(rates, 1.0, 2e4, 1235);
        CHECK(a == b);
        CHECK(a != c);
    }

    SUBCASE("negative rate rejected") {
        CHECK_THROWS_AS(poisson_counts({-0.1}, 1.0, 1e4, 1), std::invalid_argument);
    }
}

TEST_CASE("bundled configs validate and run") {
    for (const char* name :
         {"hom_dip.json", "dispersion_sf11.json", "franson_chsh.json",
          "eraser_revival.json", "barrier_normal.json", "barrier_angle_scan.json",
          "collapse_filter.json"}) {
        CAPTURE(name);
        CHECK_NOTHROW(validate_config_file(bundled(name)));
    }
}

TEST_CASE("franson config reproduces the Bell violation") {
    const RunOutputs out = run_experiment(bundled("franson_chsh.json"));
    validate_summary(out.summary);
    const auto& chsh = out.summary.at("results").at("chsh");
    CHECK(chsh.at("s").get<double>() == doctest::Approx(-2.63).epsilon(0.01 / 2.63));
    CHECK(chsh.at("violated").get<bool>());

    // CSV header is normative
    const std::string csv = slurp(out.files.front());
    CHECK(csv.rfind("phi1_deg,phi2_deg,class,rate\n", 0) == 0);
}

TEST_CASE("barrier config reports the paper anchors") {
    const RunOutputs out = run_experiment(bundled("barrier_normal.json"));
    const auto& results = out.summary.at("results");
    CHECK(results.at("group_delay_fs").get<double>() > 1.3);
    CHECK(results.at("group_delay_fs").get<double>() < 2.1);
    CHECK(results.at("d_over_c_fs").get<double>() > 3.5);
    CHECK(results.at("d_over_c_fs").get<double>() < 3.75);
    CHECK(results.at("t_min").get<double>() < 0.015);
    const std::string csv = slurp(out.files.front());
    CHECK(csv.rfind("wavelength_nm,angle_deg,pol,T,group_delay_fs,semiclassical_fs,larmor_fs\n",
                    0) == 0);
}

TEST_CASE("determinism: same config and seed, byte-identical output") {
    nlohmann::json config = parse_file(bundled("hom_dip.json"));
    config["noise"] = {{"integration_time_s", 1.0}, {"peak_rate_cps", 5e4}, {"seed", 42}};
    config["output"]["csv"] = "test_out/det.csv";
    config["output"]["summary"] = "test_out/det.json";
    const std::string path = write_temp_config("det_config.json", config);

    run_experiment(path);
    const std::string first_csv = slurp("test_out/det.csv");
    const std::string first_sum = slurp("test_out/det.json");
    run_experiment(path);
    CHECK(slurp("test_out/det.csv") == first_csv);
    CHECK(slurp("test_out/det.json") == first_sum);
    CHECK(first_csv.rfind("delay_fs,rate,counts\n", 0) == 0);
}

TEST_CASE("thread count does not change the bytes") {
    nlohmann::json config = parse_file(bundled("barrier_angle_scan.json"));
    config["output"]["csv"] = "test_out/threads.csv";
    config["output"]["summary"] = "test_out/threads.json";
    const std::string path = write_temp_config("threads_config.json", config);

    RunOptions serial;
    serial.threads = 1;
    run_experiment(path, serial);
    const std::string bytes = slurp("test_out/threads.csv");

    RunOptions parallel;
    parallel.threads = 4;
    run_experiment(path, parallel);
    CHECK(slurp("test_out/threads.csv") == bytes);
}

TEST_CASE("noise neutrality: high-count fit matches the noiseless fit") {
    nlohmann::json config = parse_file(bundled("hom_dip.json"));
    config["output"]["csv"] = "test_out/clean.csv";
    config["output"]["summary"] = "test_out/clean.json";
    const RunOutputs clean = run_experiment(write_temp_config("clean.json", config));

    config["noise"] = {{"integration_time_s", 1.0}, {"peak_rate_cps", 1e5}, {"seed", 7}};
    config["output"]["csv"] = "test_out/noisy.csv";
    config["output"]["summary"] = "test_out/noisy.json";
    const RunOutputs noisy = run_experiment(write_temp_config("noisy.json", config));

    // refit the noisy counts column offline
    const std::string csv = slurp("test_out/noisy.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    std::vector<double> delays, counts;
    while (std::getline(lines, line)) {
        const auto c1 = line.find(','), c2 = line.rfind(',');
        delays.push_back(std::stod(line.substr(0, c1)));
        counts.push_back(std::stod(line.substr(c2 + 1)));
    }
    REQUIRE(counts.size() > 100);
    // compare fitted widths: noiseless summary vs a direct fit on counts
    const double clean_width =
        clean.summary.at("results").at("fit").at("rms_width_fs").get<double>();
    // normalize counts to the far baseline and reuse the library fitter
    double baseline = 0.0;
    for (std::size_t k = 0; k < 10; ++k)
        baseline += counts[k] + counts[counts.size() - 1 - k];
    baseline /= 20.0;
    HomScan scan;
    for (std::size_t k = 0; k < delays.size(); ++k) {
        scan.delays.push_back(delays[k] * 1e-15);
        scan.rates.push_back(counts[k] / baseline);
    }
    const auto fit = fit_dip(scan);
    REQUIRE(fit.has_value());
    CHECK(fit->rms_width * 1e15 == doctest::Approx(clean_width).epsilon(0.01));
    CHECK(fit->visibility ==
          doctest::Approx(
              clean.summary.at("results").at("fit").at("visibility").get<double>())
              .epsilon(0.01));
}

TEST_CASE("summary schema round-trip and normative headers") {
    const std::vector<std::pair<const char*, const char*>> cases = {
        {"hom_dip.json", "delay_fs,rate"},
        {"franson_chsh.json", "phi1_deg,phi2_deg,class,rate"},
        {"eraser_revival.json", "delay_fs,rate"},
        {"barrier_normal.json",
         "wavelength_nm,angle_deg,pol,T,group_delay_fs,semiclassical_fs,larmor_fs"},
        {"collapse_filter.json", "wavelength_nm,density"},
    };
    for (const auto& [name, header] : cases) {
        CAPTURE(name);
        nlohmann::json config = parse_file(bundled(name));
        const std::string base = std::string("test_out/rt_") + name;
        config["output"]["csv"] = base + ".csv";
        config["output"]["summary"] = base + ".summary.json";
        const RunOutputs out =
            run_experiment(write_temp_config(std::string("rt_") + name, config));
        CHECK_NOTHROW(validate_summary(out.summary));
        CHECK_NOTHROW(validate_summary(parse_file(base + ".summary.json")));
        CHECK(slurp(base + ".csv").rfind(std::string(header) + "\n", 0) == 0);
    }
}

TEST_CASE("sample mode emits one CSV per scan and the delay measurement") {
    nlohmann::json config = parse_file(bundled("dispersion_sf11.json"));
    config["output"]["csv"] = "test_out/sf11.csv";
    config["output"]["summary"] = "test_out/sf11.json";
    const RunOutputs out = run_experiment(write_temp_config("sf11_config.json", config));

    CHECK(fs::exists("test_out/sf11_reference.csv"));
    CHECK(fs::exists("test_out/sf11_sample.csv"));
    const auto& dm = out.summary.at("results").at("delay_measurement");
    CHECK(dm.at("delay_shift_fs").get<double>() ==
          doctest::Approx(35.2e3).epsilon(0.01));
    CHECK(dm.at("width_ratio").get<double>() < 1.1);
    CHECK(dm.at("classical_output_rms_fs").get<double>() >= 55.0);
    // with the glass in, the fitted dip keeps the 15.3 fs profile
    CHECK(dm.at("sample_fit").at("rms_width_fs").get<double>() ==
          doctest::Approx(15.3).epsilon(0.05));
}

TEST_CASE("config errors name the offending key") {
    nlohmann::json config = parse_file(bundled("hom_dip.json"));
    config["sourc"] = config["source"];
    const std::string path = write_temp_config("bad_key.json", config);
    try {
        run_experiment(path);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("sourc") != std::string::npos);
    }
}

TEST_CASE("cli exit codes") {
    SUBCASE("validate ok") {
        CHECK(cli_main({"validate", bundled("hom_dip.json")}) == 0);
    }
    SUBCASE("missing config file is an io error") {
        CHECK(cli_main({"run", "no_such_config.json"}) == 4);
    }
    SUBCASE("schema violation is a config error") {
        nlohmann::json config = parse_file(bundled("hom_dip.json"));
        config["hom"]["unexpected"] = 1;
        const std::string path = write_temp_config("unknown_key.json", config);
        CHECK(cli_main({"validate", path}) == 2);
        CHECK(cli_main({"run", path}) == 2);
    }
    SUBCASE("unparseable json is a config error") {
        fs::create_directories("test_out");
        std::ofstream("test_out/broken.json") << "{ not json";
        CHECK(cli_main({"validate", "test_out/broken.json"}) == 2);
    }
    SUBCASE("numerical failure: scan outside the material range") {
        nlohmann::json config = parse_file(bundled("hom_dip.json"));
        // SF11 slab evaluated far outside its Sellmeier range
        config["source"]["center_nm"] = 5000.0;
        config["source"]["pump_nm"] = 2500.0;
        config["hom"] = {{"arm_a", {{{"type", "slab"}, {"material", "SF11"},
                                     {"length_mm", 1.0}}}}};
        const std::string path = write_temp_config("range.json", config);
        CHECK(cli_main({"run", path}) == 3);
    }
    SUBCASE("materials list") {
        CHECK(cli_main({"materials", "list"}) == 0);
    }
    SUBCASE("run accepts a thread-count option") {
        nlohmann::json config = parse_file(bundled("barrier_angle_scan.json"));
        config["output"]["csv"] = "test_out/cli_threads.csv";
        config["output"]["summary"] = "test_out/cli_threads.json";
        const std::string path = write_temp_config("cli_threads.json", config);
        CHECK(cli_main({"run", path, "--threads", "3"}) == 0);
        CHECK(fs::exists("test_out/cli_threads.csv"));
    }
}
