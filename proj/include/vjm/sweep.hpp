#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vjm/kinetostatics.hpp"
#include "vjm/model_io.hpp"

namespace vjm {

/// Inclusive linear range along one axis; count == 1 pins the axis at min.
struct AxisRange {
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    double point(int i) const;
};

struct GridSpec {
    std::array<AxisRange, 3> axes;

    int total() const { return axes[0].count * axes[1].count * axes[2].count; }
};

/// Parse "min:max:count,min:max:count,min:max:count" (x, y, z order).
/// Throws std::invalid_argument on malformed input.
GridSpec parse_grid(const std::string& text);

enum class PointStatus { Ok, Singular, Unreachable };
const char* status_name(PointStatus s);

/// One evaluated grid point. Rows exist for every grid point; unreachable
/// points carry the status flag with empty numerics. cond is reported only at
/// full rank.
struct SweepRow {
    std::array<int, 3> index{0, 0, 0};
    Eigen::Vector3d point = Eigen::Vector3d::Zero();
    PointStatus status = PointStatus::Ok;
    double k_tran = 0.0;
    double k_rot = 0.0;
    int rank = 0;
    std::optional<double> cond;
    std::optional<Matrix6d> k_total;  // populated when include_full
};

/// Evaluate a builder model over the grid. Points are independent and are
/// evaluated concurrently; rows come back in lexicographic grid order
/// (x outer, z inner) regardless of scheduling. Explicit-chain models have no
/// inverse kinematics and are rejected with ModelError.
std::vector<SweepRow> run_sweep(const ModelDocument& model, const GridSpec& grid,
                                bool include_full = false, int threads = 0);

/// Deterministic serializations: shortest round-trip decimal text, fixed
/// column order, units in the CSV header.
std::string sweep_to_csv(const std::vector<SweepRow>& rows, bool include_full);
std::string sweep_to_json(const GridSpec& grid, const std::vector<SweepRow>& rows,
                          bool include_full);

/// Paired sweep of two models on one grid, with per-point index ratios
/// (second over first, at points both reach).
struct CompareRow {
    SweepRow a;
    SweepRow b;
    std::optional<double> tran_ratio;
    std::optional<double> rot_ratio;
};

std::vector<CompareRow> run_compare(const ModelDocument& model_a, const ModelDocument& model_b,
                                    const GridSpec& grid, int threads = 0);
std::string compare_to_csv(const std::vector<CompareRow>& rows);
std::string compare_to_json(const GridSpec& grid, const std::vector<CompareRow>& rows);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

}  // namespace vjm
