#include <cstdio>
#include <stdexcept>

#include <CLI11.hpp>

#include "biphoton/errors.hpp"
#include "biphoton/materials.hpp"
#include "biphoton/run.hpp"

namespace biphoton {

namespace {

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"two-photon interference experiment simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string materials_path;
    int threads = 1;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "JSON experiment config")->required();
    run->add_option("--materials", materials_path, "materials database override");
    run->add_option("--threads", threads, "worker threads for scan points")
        ->check(CLI::PositiveNumber);

    CLI::App* validate = app.add_subcommand("validate", "validate a config without running");
    validate->add_option("config", config_path, "JSON experiment config")->required();
    validate->add_option("--materials", materials_path, "materials database override");

    CLI::App* materials = app.add_subcommand("materials", "materials database");
    CLI::App* list = materials->add_subcommand("list", "list known materials");
    list->add_option("--materials", materials_path, "materials database override");
    materials->require_subcommand(1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (run->parsed()) {
        RunOptions options;
        options.threads = threads;
        options.materials_path = materials_path;
        const RunOutputs out = run_experiment(config_path, options);
        for (const auto& file : out.files) std::printf("wrote %s\n", file.c_str());
        return 0;
    }
    if (validate->parsed()) {
        validate_config_file(config_path, materials_path);
        std::printf("ok\n");
        return 0;
    }
    // materials list
    const auto db = materials_path.empty() ? load_default_materials()
                                           : load_materials(materials_path);
    for (const auto& m : db)
        std::printf("%-14s %7.1f .. %9.1f nm\n", m.name.c_str(), m.lambda_min * 1e9,
                    m.lambda_max * 1e9);
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    }
}

}  // namespace biphoton
