// SPDX-License-Identifier: Apache-2.0
#include "bfdesign/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bfd {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void BandSpec::validate() const {
    std::vector<std::string> bad;
    if (!(omega_lo > 0.0 && omega_lo < omega_hi && omega_hi < kPi))
        bad.push_back("freq_band: need 0 < omega_lo < omega_hi < pi");
    if (!(passband.lo >= 0.0 && passband.lo < passband.hi &&
          passband.hi <= kPi))
        bad.push_back("passband: need 0 <= theta_pl < theta_ph <= pi");
    for (size_t i = 0; i < stopband.size(); ++i) {
        const AngleInterval& iv = stopband[i];
        if (!(iv.lo >= 0.0 && iv.lo < iv.hi && iv.hi <= kPi)) {
            std::ostringstream os;
            os << "stopband[" << i << "]: need 0 <= lo < hi <= pi";
            bad.push_back(os.str());
        }
        if (std::max(iv.lo, passband.lo) < std::min(iv.hi, passband.hi)) {
            std::ostringstream os;
            os << "stopband[" << i << "]: overlaps the passband";
            bad.push_back(os.str());
        }
    }
    if (!(theta_d >= passband.lo && theta_d <= passband.hi))
        bad.push_back("steering: theta_d must lie inside the passband");
    if (!bad.empty()) {
        std::string msg = "invalid band specification:";
        for (const std::string& b : bad) msg += "\n  - " + b;
        throw ConfigError(msg);
    }
}

void GridConfig::validate() const {
    std::vector<std::string> bad;
    if (!(virtual_freq >= actual_freq && actual_freq >= 2))
        bad.push_back("grid: need virtual_freq >= actual_freq >= 2");
    if (!(virtual_angle >= actual_angle && actual_angle >= 2))
        bad.push_back("grid: need virtual_angle >= actual_angle >= 2");
    if (edge_points < 0) bad.push_back("grid: edge_points must be >= 0");
    if (edge_points > 0 &&
        (2 * edge_points >= actual_freq || 2 * edge_points >= actual_angle))
        bad.push_back("grid: edge_points too large for the block counts");
    if (!bad.empty()) {
        std::string msg = "invalid grid configuration:";
        for (const std::string& b : bad) msg += "\n  - " + b;
        throw ConfigError(msg);
    }
}

int SampleSet::count(SampleRole role) const {
    int c = 0;
    for (const SamplePoint& p : points)
        if (p.role == role) ++c;
    return c;
}

Eigen::VectorXd linspace(double lo, double hi, int count) {
    Eigen::VectorXd v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) v[i] = lo + step * static_cast<double>(i);
    v[count - 1] = hi;
    return v;
}

std::vector<int> proportional_allocation(const std::vector<AngleInterval>& ivs,
                                         int count) {
    const int n = static_cast<int>(ivs.size());
    if (n == 0) return {};
    double total = 0.0;
    for (const AngleInterval& iv : ivs) total += iv.width();
    std::vector<int> alloc(static_cast<size_t>(n), 2);
    std::vector<double> frac(static_cast<size_t>(n), 0.0);
    int used = 2 * n;
    for (int i = 0; i < n; ++i) {
        const double ideal =
            static_cast<double>(count) * ivs[static_cast<size_t>(i)].width() / total;
        const int extra = std::max(0, static_cast<int>(std::floor(ideal)) - 2);
        alloc[static_cast<size_t>(i)] += extra;
        used += extra;
        frac[static_cast<size_t>(i)] = ideal - std::floor(ideal);
    }
    // Hand out the remainder by largest fractional part, lowest index first.
    while (used < count) {
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (frac[static_cast<size_t>(i)] > frac[static_cast<size_t>(best)])
                best = i;
        alloc[static_cast<size_t>(best)] += 1;
        frac[static_cast<size_t>(best)] = -1.0;
        ++used;
    }
    while (used > count) {  // possible only when count < 2*n
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (alloc[static_cast<size_t>(i)] > alloc[static_cast<size_t>(best)])
                best = i;
        alloc[static_cast<size_t>(best)] -= 1;
        --used;
    }
    return alloc;
}

SampleSet uniform_grid(const BandSpec& band, int freq_count, int angle_count) {
    band.validate();
    if (freq_count < 2 || angle_count < 2)
        throw ConfigError("uniform_grid: need at least 2 points per dimension");

    SampleSet set;
    const Eigen::VectorXd omegas = linspace(band.omega_lo, band.omega_hi,
                                            freq_count);
    const Eigen::VectorXd pb_thetas =
        linspace(band.passband.lo, band.passband.hi, angle_count);

    std::vector<Eigen::VectorXd> sb_thetas;
    if (!band.stopband.empty()) {
        const std::vector<int> alloc =
            proportional_allocation(band.stopband, angle_count);
        for (size_t i = 0; i < band.stopband.size(); ++i)
            sb_thetas.push_back(linspace(band.stopband[i].lo, band.stopband[i].hi,
                                         alloc[i]));
    }

    for (int m = 0; m < freq_count; ++m) {
        for (int k = 0; k < angle_count; ++k)
            set.points.push_back({omegas[m], pb_thetas[k], SampleRole::passband,
                                  1.0, m, k, -1});
        int k_off = 0;
        for (const Eigen::VectorXd& thetas : sb_thetas) {
            for (int k = 0; k < thetas.size(); ++k)
                set.points.push_back({omegas[m], thetas[k], SampleRole::stopband,
                                      1.0, m, k_off + static_cast<int>(k), -1});
            k_off += static_cast<int>(thetas.size());
        }
    }
    for (int m = 0; m < freq_count; ++m)
        set.points.push_back(
            {omegas[m], band.theta_d, SampleRole::wng_frequency, 1.0, m, -1, -1});
    return set;
}

namespace {

// 1-D boundaries: `edge` single-index strips at both ends, interior split by
// rounded even division.
std::vector<int> axis_boundaries(int total, int blocks, int edge) {
    std::vector<int> b;
    for (int i = 0; i <= edge; ++i) b.push_back(i);
    const int interior_blocks = blocks - 2 * edge;
    const int interior_span = total - 2 * edge;
    for (int i = 1; i < interior_blocks; ++i)
        b.push_back(edge + static_cast<int>(std::lround(
                               static_cast<double>(i) * interior_span /
                               static_cast<double>(interior_blocks))));
    b.push_back(total - edge);
    for (int i = edge - 1; i >= 0; --i) b.push_back(total - i);
    return b;
}

}  // namespace

std::vector<GridBlock> block_partition(int virtual_rows, int virtual_cols,
                                       int block_rows, int block_cols,
                                       int edge) {
    if (block_rows > virtual_rows || block_cols > virtual_cols)
        throw ShapeMismatch("block_partition: more blocks than virtual points");
    if (edge < 0 || 2 * edge >= block_rows || 2 * edge >= block_cols)
        throw ShapeMismatch("block_partition: invalid edge strip count");
    const std::vector<int> pb = axis_boundaries(virtual_rows, block_rows, edge);
    const std::vector<int> qb = axis_boundaries(virtual_cols, block_cols, edge);
    std::vector<GridBlock> blocks;
    blocks.reserve(static_cast<size_t>(block_rows) * block_cols);
    for (int i = 0; i + 1 < static_cast<int>(pb.size()); ++i)
        for (int j = 0; j + 1 < static_cast<int>(qb.size()); ++j)
            blocks.push_back({pb[static_cast<size_t>(i)],
                              pb[static_cast<size_t>(i) + 1],
                              qb[static_cast<size_t>(j)],
                              qb[static_cast<size_t>(j) + 1]});
    return blocks;
}

std::vector<SelectedPoint> select_block_max(
    const Eigen::MatrixXd& surface, const std::vector<GridBlock>& blocks) {
    std::vector<SelectedPoint> out;
    out.reserve(blocks.size());
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
        const GridBlock& blk = blocks[bi];
        int best_p = blk.p_lo, best_q = blk.q_lo;
        double best = -1.0;
        for (int p = blk.p_lo; p < blk.p_hi; ++p) {
            for (int q = blk.q_lo; q < blk.q_hi; ++q) {
                const double v = std::abs(surface(p, q));
                if (std::isfinite(v) && v > best) {
                    best = v;
                    best_p = p;
                    best_q = q;
                }
            }
        }
        out.push_back({best_p, best_q, static_cast<int>(bi)});
    }
    return out;
}

SelectedPoint block_next_best(const Eigen::MatrixXd& surface,
                              const GridBlock& block, int block_id,
                              const std::vector<std::pair<int, int>>& exclude) {
    int best_p = -1, best_q = -1;
    double best = -1.0;
    for (int p = block.p_lo; p < block.p_hi; ++p) {
        for (int q = block.q_lo; q < block.q_hi; ++q) {
            bool skip = false;
            for (const auto& e : exclude)
                if (e.first == p && e.second == q) {
                    skip = true;
                    break;
                }
            if (skip) continue;
            const double v = std::abs(surface(p, q));
            if (std::isfinite(v) && v > best) {
                best = v;
                best_p = p;
                best_q = q;
            }
        }
    }
    return {best_p, best_q, block_id};
}

SampleSet select_nonuniform(const Eigen::MatrixXd& surface,
                            const Eigen::VectorXd& omegas,
                            const Eigen::VectorXd& thetas,
                            const GridConfig& cfg, SampleRole role) {
    if (surface.rows() != omegas.size() || surface.cols() != thetas.size())
        throw ShapeMismatch("select_nonuniform: surface/axes shape mismatch");
    if (surface.rows() != cfg.virtual_freq || surface.cols() != cfg.virtual_angle)
        throw ShapeMismatch("select_nonuniform: surface does not match GridConfig");
    const std::vector<GridBlock> blocks =
        block_partition(cfg.virtual_freq, cfg.virtual_angle, cfg.actual_freq,
                        cfg.actual_angle, cfg.edge_points);
    const std::vector<SelectedPoint> sel = select_block_max(surface, blocks);
    SampleSet set;
    set.points.reserve(sel.size());
    for (const SelectedPoint& s : sel)
        set.points.push_back(
            {omegas[s.p], thetas[s.q], role, 1.0, s.p, s.q, s.block_id});
    return set;
}

}  // namespace bfd
