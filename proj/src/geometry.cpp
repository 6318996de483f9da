// SPDX-License-Identifier: Apache-2.0
#include "bfdesign/geometry.hpp"

#include <cmath>

namespace bfd {

ArrayGeometry::ArrayGeometry(std::vector<double> positions_m,
                             double sample_rate_hz, double sound_speed_mps)
    : positions_(std::move(positions_m)),
      sample_rate_hz_(sample_rate_hz),
      sound_speed_mps_(sound_speed_mps) {
    if (positions_.size() < 2)
        throw DimensionMismatch("ArrayGeometry: need at least 2 elements");
    for (size_t n = 1; n < positions_.size(); ++n) {
        if (!(positions_[n] > positions_[n - 1]))
            throw DimensionMismatch(
                "ArrayGeometry: positions must be strictly increasing");
    }
    if (!(sample_rate_hz_ > 0.0))
        throw DimensionMismatch("ArrayGeometry: sample_rate must be > 0");
    if (!(sound_speed_mps_ > 0.0))
        throw DimensionMismatch("ArrayGeometry: sound_speed must be > 0");
}

ArrayGeometry ArrayGeometry::uniform(int num_elements, double spacing_m,
                                     double sample_rate_hz,
                                     double sound_speed_mps) {
    std::vector<double> pos(static_cast<size_t>(num_elements));
    const double mid = 0.5 * static_cast<double>(num_elements - 1);
    for (int n = 0; n < num_elements; ++n)
        pos[static_cast<size_t>(n)] = (static_cast<double>(n) - mid) * spacing_m;
    return ArrayGeometry(std::move(pos), sample_rate_hz, sound_speed_mps);
}

bool ArrayGeometry::is_symmetric() const {
    const int n_el = num_elements();
    for (int n = 0; n < n_el; ++n) {
        if (std::abs(positions_[static_cast<size_t>(n_el - 1 - n)] +
                     positions_[static_cast<size_t>(n)]) > 1e-12)
            return false;
    }
    return true;
}

FilterBank FilterBank::from_flat(const Eigen::VectorXd& flat, int num_channels,
                                 int filter_length) {
    if (flat.size() != static_cast<Eigen::Index>(num_channels) * filter_length)
        throw ShapeMismatch("FilterBank::from_flat: size mismatch");
    FilterBank bank(num_channels, filter_length);
    for (int n = 0; n < num_channels; ++n)
        for (int l = 0; l < filter_length; ++l)
            bank.coeffs_(n, l) = flat[flat_index(n, l, filter_length)];
    return bank;
}

Eigen::VectorXd FilterBank::flatten() const {
    const int n_ch = num_channels();
    const int len = filter_length();
    Eigen::VectorXd flat(static_cast<Eigen::Index>(n_ch) * len);
    for (int n = 0; n < n_ch; ++n)
        for (int l = 0; l < len; ++l) flat[flat_index(n, l, len)] = coeffs_(n, l);
    return flat;
}

}  // namespace bfd
