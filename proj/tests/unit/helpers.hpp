#pragma once

#include <random>

#include "pfreq/fields.hpp"

namespace testing_helpers {

inline pfreq::ScalarField random_field(const pfreq::DomainPtr& d, std::mt19937_64& rng, double lo = -1.0,
                                       double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    pfreq::ScalarField f(d);
    for (auto& x : f.values()) x = u(rng);
    return f;
}

inline pfreq::VectorField random_vector_field(const pfreq::DomainPtr& d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> fx(d->x_face_count()), fy(d->y_face_count());
    for (auto& x : fx) x = u(rng);
    for (auto& y : fy) y = u(rng);
    return pfreq::VectorField(d, fx, fy);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing_helpers
