// SPDX-License-Identifier: Apache-2.0
#include "bfdesign/metrics.hpp"

#include <cmath>
#include <limits>

#include "bfdesign/response.hpp"

namespace bfd {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

DesignReport evaluate(const ArrayGeometry& geom, const FilterBank& x,
                      const BandSpec& bands, double tau_d, DesignFamily family,
                      const MetricsConfig& cfg) {
    bands.validate();
    DesignReport rep;
    const Eigen::VectorXd omegas =
        linspace(bands.omega_lo, bands.omega_hi, cfg.freq_points);
    const Eigen::VectorXd pb_thetas =
        linspace(bands.passband.lo, bands.passband.hi, cfg.angle_points);

    // Passband: ripple, group-delay statistics, cost at solution.
    const GridEvaluation pb = evaluate_grid(geom, x, omegas, pb_thetas);
    rep.delay_guard_skips += pb.num_guard_skips;
    double mag_max = 0.0, mag_min = std::numeric_limits<double>::infinity();
    double tau_min = std::numeric_limits<double>::infinity();
    double tau_max = -std::numeric_limits<double>::infinity();
    double j_sol = 0.0;
    for (int m = 0; m < pb.response.rows(); ++m) {
        for (int k = 0; k < pb.response.cols(); ++k) {
            const Complex b = pb.response(m, k);
            const double mag = std::abs(b);
            mag_max = std::max(mag_max, mag);
            mag_min = std::min(mag_min, mag);
            if (pb.delay_valid(m, k)) {
                tau_min = std::min(tau_min, pb.group_delay(m, k));
                tau_max = std::max(tau_max, pb.group_delay(m, k));
            }
            if (family == DesignFamily::convex) {
                const Complex bd = std::exp(Complex(0.0, -omegas[m] * tau_d));
                j_sol = std::max(j_sol, std::abs(b - bd));
            } else {
                j_sol = std::max(j_sol, std::abs(std::norm(b) - 1.0));
            }
        }
    }
    rep.passband_ripple_db = amp_to_db(mag_max / mag_min);
    rep.tau_avg_samples = 0.5 * (tau_min + tau_max);
    rep.sigma_tau_samples = tau_max - tau_min;
    rep.j_sol = j_sol;

    // Per-angle deviation curve, sharing the global tau_min.
    rep.pb_thetas = pb_thetas;
    rep.sigma_tau_theta.setConstant(pb_thetas.size(), kNaN);
    for (int k = 0; k < pb_thetas.size(); ++k) {
        double col_max = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (int m = 0; m < omegas.size(); ++m) {
            if (pb.delay_valid(m, k)) {
                col_max = std::max(col_max, pb.group_delay(m, k));
                any = true;
            }
        }
        if (any) rep.sigma_tau_theta[k] = col_max - tau_min;
    }

    // Stopband attenuation.
    double sb_peak = 0.0;
    if (!bands.stopband.empty()) {
        const std::vector<int> alloc =
            proportional_allocation(bands.stopband, cfg.angle_points);
        for (size_t i = 0; i < bands.stopband.size(); ++i) {
            const Eigen::VectorXd thetas = linspace(
                bands.stopband[i].lo, bands.stopband[i].hi, alloc[i]);
            const Eigen::MatrixXcd b = response_grid(geom, x, omegas, thetas);
            sb_peak = std::max(sb_peak, b.cwiseAbs().maxCoeff());
        }
    }
    rep.stopband_atten_db =
        bands.stopband.empty() ? kNaN : -amp_to_db(sb_peak);

    // White noise gain across the band.
    rep.wng_omegas = omegas;
    rep.wng_db.resize(omegas.size());
    double min_wng = std::numeric_limits<double>::infinity();
    for (int m = 0; m < omegas.size(); ++m) {
        double wng;
        try {
            wng = white_noise_gain(geom, x, omegas[m], bands.theta_d);
        } catch (const ZeroFilterEnergy&) {
            wng = 0.0;
        }
        rep.wng_db[m] = power_to_db(wng);
        min_wng = std::min(min_wng, wng);
    }
    rep.min_wng_db = power_to_db(min_wng);

    // Beampattern grid for export.
    rep.bp_omegas = omegas;
    rep.bp_thetas = cfg.beampattern_full_angle
                        ? linspace(0.0, kPi, cfg.angle_points)
                        : pb_thetas;
    const GridEvaluation full = evaluate_grid(geom, x, omegas, rep.bp_thetas);
    rep.bp_mag_db.resize(full.response.rows(), full.response.cols());
    rep.bp_phase_rad.resize(full.response.rows(), full.response.cols());
    rep.bp_delay_samples.setConstant(full.response.rows(), full.response.cols(),
                                     kNaN);
    for (int m = 0; m < full.response.rows(); ++m)
        for (int k = 0; k < full.response.cols(); ++k) {
            rep.bp_mag_db(m, k) = amp_to_db(std::abs(full.response(m, k)));
            rep.bp_phase_rad(m, k) = std::arg(full.response(m, k));
            if (full.delay_valid(m, k))
                rep.bp_delay_samples(m, k) = full.group_delay(m, k);
        }
    return rep;
}

}  // namespace bfd
