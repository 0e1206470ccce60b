#pragma once

#include <array>
#include <string>
#include <vector>

namespace biphoton {

// Three-term Sellmeier dispersion model,
//   n^2(lambda) = 1 + sum_i B_i lambda^2 / (lambda^2 - C_i),
// valid only inside [lambda_min, lambda_max].
struct Material {
    std::string name;
    std::array<double, 3> b{};     // dimensionless
    std::array<double, 3> c_m2{};  // m^2
    double lambda_min = 0.0;       // m
    double lambda_max = 0.0;       // m

    // Phase index; throws std::domain_error outside the valid range.
    double index(double wavelength) const;
};

struct DispersionSample {
    double n;        // phase index
    double n_group;  // n - lambda dn/dlambda
    double gvd;      // beta2 = lambda^3 / (2 pi c^2) * d2n/dlambda2, s^2/m
};

// Derivatives by centered finite differences with one Richardson halving;
// relative step 1e-4 in lambda for dn/dlambda and 1e-3 for d2n/dlambda2,
// fixed so that golden numbers stay bit-stable.
DispersionSample material_dispersion(const Material& material, double wavelength);

// Materials database file: a JSON array of
//   {"name": ..., "B": [3], "C_m2": [3], "range_nm": [2]}
// (field names normative).
std::vector<Material> load_materials(const std::string& path);

// Resolution order: BIPHOTON_MATERIALS env var, ./data/materials.json,
// then the bundled source-tree file.
std::string default_materials_path();
std::vector<Material> load_default_materials();

const Material& find_material(const std::vector<Material>& materials,
                              const std::string& name);

}  // namespace biphoton
