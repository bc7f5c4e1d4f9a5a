#include "vjm/sweep.hpp"

#include <charconv>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "vjm/errors.hpp"
#include "vjm/orthoglide.hpp"

namespace vjm {

namespace {

using nlohmann::json;

const BuilderModel& builder_or_fail(const ModelDocument& model) {
    if (!model.is_builder()) {
        throw ModelError("sweep requires a builder model (explicit chains carry no inverse "
                         "kinematics)");
    }
    return model.builder();
}

SweepRow evaluate_point(const Manipulator& manipulator, const std::array<int, 3>& index,
                        const Eigen::Vector3d& p, bool include_full) {
    SweepRow row;
    row.index = index;
    row.point = p;
    try {
        const PosturedManipulator pm = manipulator.at(p);
        const ManipulatorStiffness ms = pm.stiffness();
        const StiffnessIndices idx = stiffness_indices(ms);
        row.k_tran = idx.k_tran;
        row.k_rot = idx.k_rot;
        row.rank = matrix_rank(ms.k_total);
        row.status = row.rank < 6 ? PointStatus::Singular : PointStatus::Ok;
        if (row.rank == 6) {
            Eigen::JacobiSVD<Matrix6d> svd(ms.k_total);
            row.cond = svd.singularValues()(0) / svd.singularValues()(5);
        }
        if (include_full) row.k_total = ms.k_total;
    } catch (const WorkspaceError&) {
        row.status = PointStatus::Unreachable;
    }
    return row;
}

template <typename Row, typename Fn>
std::vector<Row> parallel_grid(const GridSpec& grid, int threads, Fn&& eval) {
    const int total = grid.total();
    std::vector<Row> rows(static_cast<std::size_t>(total));
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, total);

    const auto worker = [&](int begin, int end) {
        for (int flat = begin; flat < end; ++flat) {
            const int nz = grid.axes[2].count;
            const int ny = grid.axes[1].count;
            const std::array<int, 3> idx{flat / (ny * nz), (flat / nz) % ny, flat % nz};
            const Eigen::Vector3d p{grid.axes[0].point(idx[0]), grid.axes[1].point(idx[1]),
                                    grid.axes[2].point(idx[2])};
            rows[static_cast<std::size_t>(flat)] = eval(idx, p);
        }
    };

    if (threads == 1) {
        worker(0, total);
    } else {
        std::vector<std::future<void>> futures;
        const int chunk = (total + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(total, begin + chunk);
            if (begin >= end) break;
            futures.push_back(std::async(std::launch::async, worker, begin, end));
        }
        for (auto& f : futures) f.get();
    }
    return rows;
}

void append_csv_value(std::string& out, double v) { out += format_double(v); }

void append_row_fields(std::string& out, const SweepRow& row, bool include_full) {
    out += std::to_string(row.index[0]) + ',' + std::to_string(row.index[1]) + ',' +
           std::to_string(row.index[2]) + ',';
    append_csv_value(out, row.point.x());
    out += ',';
    append_csv_value(out, row.point.y());
    out += ',';
    append_csv_value(out, row.point.z());
    out += ',';
    out += status_name(row.status);
    if (row.status == PointStatus::Unreachable) {
        out += ",,,,";
        if (include_full) out.append(36, ',');
        return;
    }
    out += ',';
    append_csv_value(out, row.k_tran);
    out += ',';
    append_csv_value(out, row.k_rot);
    out += ',';
    out += std::to_string(row.rank);
    out += ',';
    if (row.cond.has_value()) append_csv_value(out, *row.cond);
    if (include_full) {
        for (int r = 0; r < 6; ++r) {
            for (int c = 0; c < 6; ++c) {
                out += ',';
                append_csv_value(out, (*row.k_total)(r, c));
            }
        }
    }
}

json row_to_json(const SweepRow& row, bool include_full) {
    json j;
    j["index"] = {row.index[0], row.index[1], row.index[2]};
    j["point_mm"] = {row.point.x(), row.point.y(), row.point.z()};
    j["status"] = status_name(row.status);
    if (row.status != PointStatus::Unreachable) {
        j["k_tran_n_per_mm"] = row.k_tran;
        j["k_rot_nmm_per_rad"] = row.k_rot;
        j["rank"] = row.rank;
        if (row.cond.has_value()) j["cond"] = *row.cond;
        if (include_full && row.k_total.has_value()) {
            json rows = json::array();
            for (int r = 0; r < 6; ++r) {
                json cols = json::array();
                for (int c = 0; c < 6; ++c) cols.push_back((*row.k_total)(r, c));
                rows.push_back(cols);
            }
            j["k_total"] = rows;
        }
    }
    return j;
}

json grid_to_json(const GridSpec& grid) {
    json g;
    const char* names[3] = {"x", "y", "z"};
    for (int i = 0; i < 3; ++i) {
        g[names[i]] = {{"min", grid.axes[i].min},
                       {"max", grid.axes[i].max},
                       {"count", grid.axes[i].count}};
    }
    return g;
}

}  // namespace

double AxisRange::point(int i) const {
    if (count <= 1) return min;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

GridSpec parse_grid(const std::string& text) {
    GridSpec grid;
    std::stringstream ss(text);
    std::string part;
    int axis = 0;
    while (std::getline(ss, part, ',')) {
        if (axis >= 3) throw std::invalid_argument("grid spec has more than three axes");
        double lo = 0.0, hi = 0.0;
        int count = 0;
        char c1 = 0, c2 = 0;
        std::stringstream ps(part);
        if (!(ps >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1 ||
            !(ps >> std::ws).eof()) {
            throw std::invalid_argument("grid axis must look like min:max:count, got '" + part +
                                        "'");
        }
        grid.axes[static_cast<std::size_t>(axis)] = {lo, hi, count};
        ++axis;
    }
    if (axis != 3) throw std::invalid_argument("grid spec needs three axes (x, y, z)");
    return grid;
}

const char* status_name(PointStatus s) {
    switch (s) {
        case PointStatus::Ok: return "ok";
        case PointStatus::Singular: return "singular";
        default: return "unreachable";
    }
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<SweepRow> run_sweep(const ModelDocument& model, const GridSpec& grid,
                                bool include_full, int threads) {
    const BuilderModel& bm = builder_or_fail(model);
    const Manipulator manipulator(bm.variant, bm.params);
    return parallel_grid<SweepRow>(
        grid, threads, [&](const std::array<int, 3>& idx, const Eigen::Vector3d& p) {
            return evaluate_point(manipulator, idx, p, include_full);
        });
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, bool include_full) {
    std::string out =
        "ix,iy,iz,x_mm,y_mm,z_mm,status,k_tran_N_per_mm,k_rot_Nmm_per_rad,rank,cond";
    if (include_full) {
        for (int r = 0; r < 6; ++r) {
            for (int c = 0; c < 6; ++c) {
                out += ",k" + std::to_string(r) + std::to_string(c);
            }
        }
    }
    out += '\n';
    for (const SweepRow& row : rows) {
        append_row_fields(out, row, include_full);
        out += '\n';
    }
    return out;
}

std::string sweep_to_json(const GridSpec& grid, const std::vector<SweepRow>& rows,
                          bool include_full) {
    json root;
    root["schema_version"] = "1";
    root["kind"] = "sweep";
    root["grid"] = grid_to_json(grid);
    json jr = json::array();
    for (const SweepRow& row : rows) jr.push_back(row_to_json(row, include_full));
    root["rows"] = jr;
    return root.dump(2) + "\n";
}

std::vector<CompareRow> run_compare(const ModelDocument& model_a, const ModelDocument& model_b,
                                    const GridSpec& grid, int threads) {
    const BuilderModel& ba = builder_or_fail(model_a);
    const BuilderModel& bb = builder_or_fail(model_b);
    const Manipulator ma(ba.variant, ba.params);
    const Manipulator mb(bb.variant, bb.params);

    return parallel_grid<CompareRow>(
        grid, threads, [&](const std::array<int, 3>& idx, const Eigen::Vector3d& p) {
            CompareRow row;
            row.a = evaluate_point(ma, idx, p, false);
            row.b = evaluate_point(mb, idx, p, false);
            if (row.a.status != PointStatus::Unreachable &&
                row.b.status != PointStatus::Unreachable) {
                if (row.a.k_tran != 0.0) row.tran_ratio = row.b.k_tran / row.a.k_tran;
                if (row.a.k_rot != 0.0) row.rot_ratio = row.b.k_rot / row.a.k_rot;
            }
            return row;
        });
}

std::string compare_to_csv(const std::vector<CompareRow>& rows) {
    std::string out =
        "ix,iy,iz,x_mm,y_mm,z_mm,status_a,status_b,k_tran_a_N_per_mm,k_tran_b_N_per_mm,"
        "tran_ratio,k_rot_a_Nmm_per_rad,k_rot_b_Nmm_per_rad,rot_ratio\n";
    for (const CompareRow& row : rows) {
        out += std::to_string(row.a.index[0]) + ',' + std::to_string(row.a.index[1]) + ',' +
               std::to_string(row.a.index[2]) + ',';
        append_csv_value(out, row.a.point.x());
        out += ',';
        append_csv_value(out, row.a.point.y());
        out += ',';
        append_csv_value(out, row.a.point.z());
        out += ',';
        out += status_name(row.a.status);
        out += ',';
        out += status_name(row.b.status);
        const auto emit = [&](bool present, double v) {
            out += ',';
            if (present) append_csv_value(out, v);
        };
        emit(row.a.status != PointStatus::Unreachable, row.a.k_tran);
        emit(row.b.status != PointStatus::Unreachable, row.b.k_tran);
        emit(row.tran_ratio.has_value(), row.tran_ratio.value_or(0.0));
        emit(row.a.status != PointStatus::Unreachable, row.a.k_rot);
        emit(row.b.status != PointStatus::Unreachable, row.b.k_rot);
        emit(row.rot_ratio.has_value(), row.rot_ratio.value_or(0.0));
        out += '\n';
    }
    return out;
}

std::string compare_to_json(const GridSpec& grid, const std::vector<CompareRow>& rows) {
    json root;
    root["schema_version"] = "1";
    root["kind"] = "compare";
    root["grid"] = grid_to_json(grid);
    json jr = json::array();
    for (const CompareRow& row : rows) {
        json j;
        j["index"] = {row.a.index[0], row.a.index[1], row.a.index[2]};
        j["point_mm"] = {row.a.point.x(), row.a.point.y(), row.a.point.z()};
        j["a"] = row_to_json(row.a, false);
        j["b"] = row_to_json(row.b, false);
        if (row.tran_ratio.has_value()) j["tran_ratio"] = *row.tran_ratio;
        if (row.rot_ratio.has_value()) j["rot_ratio"] = *row.rot_ratio;
        jr.push_back(j);
    }
    root["rows"] = jr;
    return root.dump(2) + "\n";
}

}  // namespace vjm
