#include <fstream>
#include <set>
#include <string>

#include "biphoton/errors.hpp"
#include "biphoton/materials.hpp"
#include "biphoton/run.hpp"

namespace biphoton {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw config_error(path + ": " + message);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& required,
                const std::set<std::string>& optional) {
    if (!obj.is_object()) fail(path, "must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!required.count(key) && !optional.count(key))
            fail(path, "unknown key '" + key + "'");
    }
    for (const auto& key : required)
        if (!obj.contains(key)) fail(path, "missing key '" + key + "'");
}

double need_number(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.at(key).is_number()) fail(path, "'" + key + "' must be a number");
    return obj.at(key).get<double>();
}

void check_positive(const json& obj, const std::string& path, const std::string& key) {
    if (need_number(obj, path, key) <= 0.0) fail(path, "'" + key + "' must be positive");
}

void check_bool(const json& obj, const std::string& path, const std::string& key) {
    if (obj.contains(key) && !obj.at(key).is_boolean())
        fail(path, "'" + key + "' must be a boolean");
}

void check_integer(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.at(key).is_number_integer()) fail(path, "'" + key + "' must be an integer");
}

// Either an explicit list of numbers or {min, max, points}.
void check_axis(const json& node, const std::string& path, bool allow_scalar) {
    if (node.is_number() && allow_scalar) return;
    if (node.is_array()) {
        if (node.empty()) fail(path, "must not be empty");
        for (const auto& v : node)
            if (!v.is_number()) fail(path, "entries must be numbers");
        return;
    }
    if (node.is_object()) {
        check_keys(node, path, {"min", "max", "points"}, {});
        need_number(node, path, "min");
        need_number(node, path, "max");
        check_integer(node, path, "points");
        if (node.at("points").get<long long>() < 2) fail(path, "'points' must be >= 2");
        if (!(node.at("max").get<double>() > node.at("min").get<double>()))
            fail(path, "'max' must exceed 'min'");
        return;
    }
    fail(path, allow_scalar ? "must be a number, list or {min,max,points}"
                            : "must be a list or {min,max,points}");
}

void check_source(const json& config) {
    if (!config.contains("source")) fail("config", "missing key 'source'");
    const json& src = config.at("source");
    check_keys(src, "source", {"pump_nm", "center_nm", "bandwidth_nm"},
               {"grid_points", "span_factor", "entangled"});
    check_positive(src, "source", "pump_nm");
    check_positive(src, "source", "center_nm");
    check_positive(src, "source", "bandwidth_nm");
    if (src.contains("grid_points")) {
        check_integer(src, "source", "grid_points");
        const long long n = src.at("grid_points").get<long long>();
        if (n < 64 || n % 2 == 0) fail("source", "'grid_points' must be odd and >= 64");
    }
    if (src.contains("span_factor") && need_number(src, "source", "span_factor") < 3.0)
        fail("source", "'span_factor' must be >= 3");
    check_bool(src, "source", "entangled");
}

void check_elements(const json& arm, const std::string& path,
                    const std::vector<Material>& materials) {
    if (!arm.is_array()) fail(path, "must be a list of elements");
    std::size_t index = 0;
    for (const auto& element : arm) {
        const std::string epath = path + "[" + std::to_string(index++) + "]";
        if (!element.is_object() || !element.contains("type"))
            fail(epath, "element needs a 'type'");
        const std::string type = element.at("type").get<std::string>();
        if (type == "slab" || type == "insertion") {
            check_keys(element, epath, {"type", "material", "length_mm"}, {});
            check_positive(element, epath, "length_mm");
            find_material(materials, element.at("material").get<std::string>());
        } else if (type == "delay") {
            check_keys(element, epath, {"type", "delay_fs"}, {});
            need_number(element, epath, "delay_fs");
        } else {
            fail(epath, "unknown element type '" + type + "'");
        }
    }
}

void check_noise(const json& config, const std::string& experiment) {
    if (!config.contains("noise")) return;
    if (experiment != "hom" && experiment != "eraser")
        fail("noise", "not supported for experiment '" + experiment + "'");
    const json& noise = config.at("noise");
    check_keys(noise, "noise", {"integration_time_s", "peak_rate_cps", "seed"}, {});
    check_positive(noise, "noise", "integration_time_s");
    check_positive(noise, "noise", "peak_rate_cps");
    check_integer(noise, "noise", "seed");
    if (noise.at("seed").get<long long>() < 0) fail("noise", "'seed' must be >= 0");
}

void check_stack(const json& stack, const std::vector<Material>&) {
    if (!stack.is_object()) fail("barrier.stack", "must be an object");
    if (stack.contains("layers")) {
        check_keys(stack, "barrier.stack", {"ambient_in", "ambient_out", "layers"}, {});
        check_positive(stack, "barrier.stack", "ambient_in");
        check_positive(stack, "barrier.stack", "ambient_out");
        std::size_t index = 0;
        for (const auto& layer : stack.at("layers")) {
            const std::string lpath = "barrier.stack.layers[" + std::to_string(index++) + "]";
            check_keys(layer, lpath, {"n", "d_nm"}, {});
            check_positive(layer, lpath, "d_nm");
            const json& n = layer.at("n");
            const bool complex_ok = n.is_array() && n.size() == 2 && n[0].is_number() &&
                                    n[1].is_number();
            if (!n.is_number() && !complex_ok)
                fail(lpath, "'n' must be a number or [re, im]");
        }
        return;
    }
    check_keys(stack, "barrier.stack", {"n_high", "n_low", "periods"},
               {"design_nm", "total_thickness_um"});
    check_positive(stack, "barrier.stack", "n_high");
    check_positive(stack, "barrier.stack", "n_low");
    check_integer(stack, "barrier.stack", "periods");
    if (stack.at("periods").get<long long>() < 1)
        fail("barrier.stack", "'periods' must be >= 1");
    const bool has_design = stack.contains("design_nm");
    const bool has_total = stack.contains("total_thickness_um");
    if (has_design == has_total)
        fail("barrier.stack", "give exactly one of 'design_nm' or 'total_thickness_um'");
    check_positive(stack, "barrier.stack", has_design ? "design_nm" : "total_thickness_um");
}

}  // namespace

void validate_config(const nlohmann::json& config, const std::string& materials_path) {
    const std::vector<Material> materials =
        materials_path.empty() ? load_default_materials() : load_materials(materials_path);

    if (!config.is_object()) fail("config", "must be a JSON object");
    if (!config.contains("experiment")) fail("config", "missing key 'experiment'");
    const std::string experiment = config.at("experiment").get<std::string>();

    static const std::set<std::string> experiments = {"hom", "franson", "eraser", "barrier",
                                                      "collapse"};
    if (!experiments.count(experiment))
        fail("experiment", "unknown experiment '" + experiment + "'");

    std::set<std::string> top_required = {"experiment", "output", experiment};
    std::set<std::string> top_optional;
    if (experiment == "hom" || experiment == "eraser" || experiment == "collapse")
        top_required.insert("source");
    if (experiment == "hom" || experiment == "eraser") top_optional.insert("noise");
    check_keys(config, "config", top_required, top_optional);

    const json& output = config.at("output");
    check_keys(output, "output", {"csv", "summary"}, {});
    if (!output.at("csv").is_string() || !output.at("summary").is_string())
        fail("output", "'csv' and 'summary' must be paths");

    if (config.contains("source")) check_source(config);
    check_noise(config, experiment);

    const json& block = config.at(experiment);
    if (experiment == "hom") {
        check_keys(block, "hom", {}, {"arm_a", "arm_b", "delays", "sample"});
        if (block.contains("sample")) {
            if (block.contains("arm_a") || block.contains("arm_b") || block.contains("delays"))
                fail("hom", "'sample' mode excludes 'arm_a'/'arm_b'/'delays'");
            const json& sample = block.at("sample");
            check_keys(sample, "hom.sample", {"material", "length_mm"},
                       {"classical_input_rms_fs"});
            check_positive(sample, "hom.sample", "length_mm");
            if (sample.contains("classical_input_rms_fs"))
                check_positive(sample, "hom.sample", "classical_input_rms_fs");
            find_material(materials, sample.at("material").get<std::string>());
        }
        if (block.contains("arm_a")) check_elements(block.at("arm_a"), "hom.arm_a", materials);
        if (block.contains("arm_b")) check_elements(block.at("arm_b"), "hom.arm_b", materials);
        if (block.contains("delays")) check_axis(block.at("delays"), "hom.delays", false);
    } else if (experiment == "franson") {
        check_keys(block, "franson", {"visibility", "phi1_deg", "phi2_deg"},
                   {"path_imbalance_cm", "coherence_length_um", "coincidence_window_ns",
                    "entangled", "chsh"});
        const double v = need_number(block, "franson", "visibility");
        if (v < 0.0 || v > 1.0) fail("franson", "'visibility' must be in [0, 1]");
        check_axis(block.at("phi1_deg"), "franson.phi1_deg", true);
        check_axis(block.at("phi2_deg"), "franson.phi2_deg", true);
        check_bool(block, "franson", "entangled");
        if (block.contains("chsh")) {
            check_keys(block.at("chsh"), "franson.chsh",
                       {"a_deg", "a_prime_deg", "b_deg", "b_prime_deg"}, {});
            for (const char* key : {"a_deg", "a_prime_deg", "b_deg", "b_prime_deg"})
                need_number(block.at("chsh"), "franson.chsh", key);
        }
        for (const char* key : {"path_imbalance_cm", "coherence_length_um",
                                "coincidence_window_ns"})
            if (block.contains(key)) check_positive(block, "franson", key);
    } else if (experiment == "eraser") {
        check_keys(block, "eraser", {"hwp_deg"}, {"pol1_deg", "pol2_deg", "delays"});
        need_number(block, "eraser", "hwp_deg");
        for (const char* key : {"pol1_deg", "pol2_deg"})
            if (block.contains(key) && !block.at(key).is_null() && !block.at(key).is_number())
                fail("eraser", std::string("'") + key + "' must be a number or null");
        if (block.contains("delays")) check_axis(block.at("delays"), "eraser.delays", false);
    } else if (experiment == "barrier") {
        check_keys(block, "barrier", {"stack", "wavelength_nm"}, {"angle_deg", "pol"});
        check_stack(block.at("stack"), materials);
        check_axis(block.at("wavelength_nm"), "barrier.wavelength_nm", true);
        if (block.contains("angle_deg")) check_axis(block.at("angle_deg"), "barrier.angle_deg", true);
        if (block.contains("pol")) {
            const std::string pol = block.at("pol").get<std::string>();
            if (pol != "s" && pol != "p" && pol != "both")
                fail("barrier", "'pol' must be \"s\", \"p\" or \"both\"");
        }
    } else if (experiment == "collapse") {
        check_keys(block, "collapse", {"filter_center_nm", "filter_rms_nm"}, {"arm"});
        check_positive(block, "collapse", "filter_center_nm");
        check_positive(block, "collapse", "filter_rms_nm");
        if (block.contains("arm")) {
            const std::string arm = block.at("arm").get<std::string>();
            if (arm != "A" && arm != "B") fail("collapse", "'arm' must be \"A\" or \"B\"");
        }
    }
}

void validate_config_file(const std::string& path, const std::string& materials_path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config: " + path);
    nlohmann::json config;
    try {
        in >> config;
    } catch (const nlohmann::json::exception& e) {
        throw config_error(path + ": " + e.what());
    }
    validate_config(config, materials_path);
}

void validate_summary(const nlohmann::json& summary) {
    using nlohmann::json;
    check_keys(summary, "summary", {"experiment", "metadata", "results"}, {});
    const json& meta = summary.at("metadata");
    check_keys(meta, "summary.metadata", {"config_hash", "version"},
               {"grid_points", "scan_points"});
    if (!meta.at("config_hash").is_string() || !meta.at("version").is_string())
        fail("summary.metadata", "hash and version must be strings");
    if (!summary.at("results").is_object()) fail("summary.results", "must be an object");

    const std::string experiment = summary.at("experiment").get<std::string>();
    const json& results = summary.at("results");
    auto need = [&](const char* key) {
        if (!results.contains(key))
            fail("summary.results", std::string("missing key '") + key + "'");
    };
    if (experiment == "hom") need("fit");
    else if (experiment == "franson") need("chsh");
    else if (experiment == "eraser") need("visibility");
    else if (experiment == "barrier") { need("t_min"); need("group_delay_fs"); }
    else if (experiment == "collapse") need("coherence_length_um");
    else fail("summary", "unknown experiment '" + experiment + "'");
}

}  // namespace biphoton
