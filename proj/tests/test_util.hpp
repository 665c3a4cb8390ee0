#pragma once

#include <random>

#include "arcrom/fe_model.hpp"
#include "arcrom/types.hpp"

namespace arcrom::testing {

// 25 mm x 2 mm aluminium strip used by most fixtures.
inline fe::Material test_material() {
    fe::Material m;
    m.youngs_modulus = 70.0e9;
    m.density = 2700.0;
    m.area = 0.025 * 0.002;
    m.second_moment = 0.025 * 0.002 * 0.002 * 0.002 / 12.0;
    return m;
}

inline fe::FeModel clamped_flat_beam(int n_elements = 20, double length = 0.4) {
    return fe::make_arch_beam(n_elements, length, 0.0, test_material());
}

inline fe::FeModel clamped_arch_beam(int n_elements = 20, double length = 0.4,
                                     double rise_thicknesses = 4.0) {
    const fe::Material mat = test_material();
    return fe::make_arch_beam(n_elements, length, rise_thicknesses * mat.thickness_equivalent(),
                              mat);
}

inline Vec random_vec(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

/// Random element displacement with translations at thickness scale.
inline Vec6 random_element_disp(std::mt19937_64& rng, double translation_scale) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec6 q;
    for (int a : {0, 1, 3, 4}) q[a] = translation_scale * dist(rng);
    for (int a : {2, 5}) q[a] = 10.0 * translation_scale * dist(rng);
    return q;
}

}  // namespace arcrom::testing
