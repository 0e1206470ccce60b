#include "biphoton/materials.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

#ifndef BIPHOTON_SOURCE_DATA_DIR
#define BIPHOTON_SOURCE_DATA_DIR "data"
#endif

namespace biphoton {

double Material::index(double wavelength) const {
    if (!(wavelength >= lambda_min && wavelength <= lambda_max))
        throw std::domain_error("wavelength outside Sellmeier range of material " + name);
    const double x = wavelength * wavelength;
    double n2 = 1.0;
    for (int i = 0; i < 3; ++i) n2 += b[i] * x / (x - c_m2[i]);
    return std::sqrt(n2);
}

namespace {

// Centered difference with one Richardson halving: (4 D(h/2) - D(h)) / 3.
template <typename F>
double richardson_first(const F& f, double x, double h) {
    auto d = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

template <typename F>
double richardson_second(const F& f, double x, double h) {
    auto d = [&](double step) {
        return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
    };
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

}  // namespace

DispersionSample material_dispersion(const Material& material, double wavelength) {
    auto n_of = [&](double lambda) { return material.index(lambda); };

    DispersionSample out;
    out.n = n_of(wavelength);
    const double dn = richardson_first(n_of, wavelength, wavelength * 1e-4);
    const double d2n = richardson_second(n_of, wavelength, wavelength * 1e-3);
    out.n_group = out.n - wavelength * dn;
    out.gvd = wavelength * wavelength * wavelength /
              (2.0 * pi * speed_of_light * speed_of_light) * d2n;
    return out;
}

std::vector<Material> load_materials(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open materials file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("materials file " + path + ": " + e.what());
    }
    if (!doc.is_array()) throw config_error("materials file must be a JSON array");

    std::vector<Material> materials;
    for (const auto& entry : doc) {
        for (const auto& [key, value] : entry.items()) {
            (void)value;
            if (key != "name" && key != "B" && key != "C_m2" && key != "range_nm")
                throw config_error("materials file: unknown key '" + key + "'");
        }
        Material m;
        m.name = entry.at("name").get<std::string>();
        const auto b = entry.at("B");
        const auto c = entry.at("C_m2");
        const auto range = entry.at("range_nm");
        if (b.size() != 3 || c.size() != 3 || range.size() != 2)
            throw config_error("materials file: B/C_m2 need 3 entries, range_nm needs 2");
        for (int i = 0; i < 3; ++i) {
            m.b[i] = b[i].get<double>();
            m.c_m2[i] = c[i].get<double>();
        }
        m.lambda_min = range[0].get<double>() * 1e-9;
        m.lambda_max = range[1].get<double>() * 1e-9;
        if (!(m.lambda_min > 0.0 && m.lambda_max > m.lambda_min))
            throw config_error("materials file: bad range_nm for " + m.name);
        for (double lambda : {m.lambda_min, 0.5 * (m.lambda_min + m.lambda_max), m.lambda_max}) {
            const double n = m.index(lambda);
            if (!(std::isfinite(n) && n >= 1.0))
                throw config_error("materials file: " + m.name +
                                   " index not real and >= 1 across range_nm");
        }
        materials.push_back(std::move(m));
    }
    return materials;
}

std::string default_materials_path() {
    if (const char* env = std::getenv("BIPHOTON_MATERIALS"); env && *env) return env;
    const std::filesystem::path local = "data/materials.json";
    std::error_code ec;
    if (std::filesystem::exists(local, ec)) return local.string();
    return std::string(BIPHOTON_SOURCE_DATA_DIR) + "/materials.json";
}

std::vector<Material> load_default_materials() {
    return load_materials(default_materials_path());
}

const Material& find_material(const std::vector<Material>& materials,
                              const std::string& name) {
    for (const auto& m : materials)
        if (m.name == name) return m;
    throw config_error("unknown material: " + name);
}

}  // namespace biphoton
