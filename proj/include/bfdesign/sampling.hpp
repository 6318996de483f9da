// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "bfdesign/errors.hpp"

namespace bfd {

struct AngleInterval {
    double lo;  // radians
    double hi;
    double width() const { return hi - lo; }
};

// Frequency band, angular passband/stopband sectors, and steering angle.
// Frequencies are normalized to radians/sample, angles are in radians.
struct BandSpec {
    double omega_lo;
    double omega_hi;
    AngleInterval passband;
    std::vector<AngleInterval> stopband;
    double theta_d;

    void validate() const;  // throws ConfigError listing every violation
};

enum class GridMode { uniform, nonuniform };

struct GridConfig {
    int virtual_freq = 200;   // P
    int virtual_angle = 500;  // Q
    int actual_freq = 22;     // M
    int actual_angle = 52;    // K
    int edge_points = 3;      // fixed virtual points kept at each band edge
    GridMode mode = GridMode::uniform;

    void validate() const;
};

enum class SampleRole { passband, stopband, wng_frequency };

struct SamplePoint {
    double omega;
    double theta;       // unused for wng_frequency rows
    SampleRole role;
    double weight = 1.0;
    int virtual_freq_index = -1;   // position on the virtual grid, when known
    int virtual_angle_index = -1;
    int block_id = -1;             // owning block in nonuniform selection
};

struct SampleSet {
    std::vector<SamplePoint> points;

    int count(SampleRole role) const;
};

// M equally spaced points on [lo, hi], endpoints included.
Eigen::VectorXd linspace(double lo, double hi, int count);

// Splits `count` points across intervals proportionally to width, at least 2
// per interval, preserving the total.
std::vector<int> proportional_allocation(const std::vector<AngleInterval>& ivs,
                                         int count);

// Uniform design grid: M x K passband points, M x K stopband points (K split
// across stopband intervals proportionally to width), and M WNG frequencies.
SampleSet uniform_grid(const BandSpec& band, int freq_count, int angle_count);

// One rectangular block of virtual-grid indices: [p_lo, p_hi) x [q_lo, q_hi).
struct GridBlock {
    int p_lo, p_hi, q_lo, q_hi;
};

// Partition of a P x Q virtual grid into blocks: `edge` single-index strips at
// each end of both axes, the interior split evenly (boundaries by rounded even
// division). With edge == 0 this is the plain M x K partition.
std::vector<GridBlock> block_partition(int virtual_rows, int virtual_cols,
                                       int block_rows, int block_cols, int edge);

// Index pair selected from each block of `surface` (P x Q, rows = frequency):
// the largest-|value| entry, ties broken by lowest flattened index (row-major).
// NaN entries are never selected unless a block contains nothing else.
struct SelectedPoint {
    int p;
    int q;
    int block_id;
};
std::vector<SelectedPoint> select_block_max(const Eigen::MatrixXd& surface,
                                            const std::vector<GridBlock>& blocks);

// Next-best point of `block` excluding the flat indices in `exclude`;
// returns {-1,-1,block_id} when the block is exhausted.
SelectedPoint block_next_best(const Eigen::MatrixXd& surface,
                              const GridBlock& block, int block_id,
                              const std::vector<std::pair<int, int>>& exclude);

// Nonuniform selection for one band region: virtual axes (omegas x thetas)
// carry the geometry, `surface` the |error| values. Produces cfg.actual_freq x
// cfg.actual_angle points with role `role`.
SampleSet select_nonuniform(const Eigen::MatrixXd& surface,
                            const Eigen::VectorXd& omegas,
                            const Eigen::VectorXd& thetas,
                            const GridConfig& cfg, SampleRole role);

}  // namespace bfd
