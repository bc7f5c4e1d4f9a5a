// Command-line front end: evaluate Cartesian stiffness of multi-chain
// manipulator models, sweep workspaces, compare variants and run the
// numerical validation suite. Exit codes: 0 success, 1 validation failures,
// 2 bad model or I/O, 3 unreachable pose, 4 numerical failure.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vjm/errors.hpp"
#include "vjm/model_io.hpp"
#include "vjm/orthoglide.hpp"
#include "vjm/sweep.hpp"
#include "vjm/validation.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitBadModel = 2;
constexpr int kExitUnreachable = 3;
constexpr int kExitNumerical = 4;

std::string matrix_text(const vjm::Matrix6d& m, const std::string& indent) {
    std::string out;
    for (int r = 0; r < 6; ++r) {
        out += indent;
        for (int c = 0; c < 6; ++c) {
            if (c) out += ' ';
            out += vjm::format_double(m(r, c));
        }
        out += '\n';
    }
    return out;
}

json matrix_json(const vjm::Matrix6d& m) {
    json rows = json::array();
    for (int r = 0; r < 6; ++r) {
        json cols = json::array();
        for (int c = 0; c < 6; ++c) cols.push_back(m(r, c));
        rows.push_back(cols);
    }
    return rows;
}

void write_file_or_fail(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw vjm::ModelError("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw vjm::ModelError("failed writing output file '" + path + "'");
}

struct EvalArgs {
    std::string model_path;
    std::vector<double> pose;
    std::vector<double> load;
    std::string format = "text";
    double fd_step = 1e-6;
};

int run_eval(const EvalArgs& args) {
    const vjm::ModelDocument doc = vjm::load_model_file(args.model_path);

    std::vector<vjm::ChainDescription> chains;
    std::vector<vjm::ChainCoordinates> coords;
    std::array<bool, 3> near_singular{false, false, false};
    Eigen::Vector3d point = Eigen::Vector3d::Zero();

    if (doc.is_builder()) {
        if (args.pose.size() != 3) {
            throw vjm::ModelError("builder models need --pose x y z");
        }
        point = {args.pose[0], args.pose[1], args.pose[2]};
        const vjm::Manipulator manipulator(doc.builder().variant, doc.builder().params);
        vjm::PosturedManipulator pm = manipulator.at(point);
        chains = std::move(pm.chains);
        coords = std::move(pm.coords);
        near_singular = pm.near_singular;
    } else {
        if (!args.pose.empty()) {
            throw vjm::ModelError(
                "explicit-chain models are evaluated at their stored coordinates; omit --pose");
        }
        chains = doc.explicit_model().chains;
        coords = doc.explicit_model().coords;
        point = vjm::forward_transform(chains[0], coords[0]).translation();
    }

    std::optional<vjm::Wrench> load;
    if (!args.load.empty()) {
        if (args.load.size() != 6) {
            throw vjm::ModelError("--load needs six values: fx fy fz mx my mz");
        }
        vjm::Vector6d w;
        for (int i = 0; i < 6; ++i) w(i) = args.load[static_cast<std::size_t>(i)];
        const vjm::Wrench wrench = vjm::Wrench::from_vec(w);
        // A zero wrench follows the unloaded path so the report is
        // byte-identical to an eval without --load.
        if (!wrench.is_zero()) load = wrench;
    }

    std::vector<std::pair<const vjm::ChainDescription*, const vjm::ChainCoordinates*>> pairs;
    for (std::size_t i = 0; i < chains.size(); ++i) pairs.emplace_back(&chains[i], &coords[i]);
    const vjm::ManipulatorStiffness ms = vjm::manipulator_stiffness(pairs, load, args.fd_step);
    const vjm::StiffnessIndices idx = vjm::stiffness_indices(ms);
    const int rank = vjm::matrix_rank(ms.k_total);
    const vjm::Matrix6d compliance = vjm::symmetric_pseudo_inverse(ms.k_total).pinv;

    std::optional<double> cond;
    if (rank == 6) {
        Eigen::JacobiSVD<vjm::Matrix6d> svd(ms.k_total);
        cond = svd.singularValues()(0) / svd.singularValues()(5);
    }

    if (args.format == "json") {
        json root;
        root["schema_version"] = "1";
        root["kind"] = "eval";
        root["point_mm"] = {point.x(), point.y(), point.z()};
        root["loaded"] = load.has_value();
        root["k_total"] = matrix_json(ms.k_total);
        root["compliance"] = matrix_json(compliance);
        root["k_tran_n_per_mm"] = idx.k_tran;
        root["k_rot_nmm_per_rad"] = idx.k_rot;
        root["rank"] = rank;
        if (cond.has_value()) root["cond"] = *cond;
        json per_chain = json::array();
        for (std::size_t i = 0; i < chains.size(); ++i) {
            json c;
            c["name"] = chains[i].name();
            c["rank"] = ms.per_chain[i].rank;
            c["passive_rank"] = ms.per_chain[i].passive_rank;
            if (i < near_singular.size()) c["near_singular"] = near_singular[i];
            per_chain.push_back(c);
        }
        root["per_chain"] = per_chain;
        std::cout << root.dump(2) << "\n";
        return kExitOk;
    }

    std::cout << "point [mm]: " << vjm::format_double(point.x()) << ' '
              << vjm::format_double(point.y()) << ' ' << vjm::format_double(point.z()) << '\n';
    std::cout << "load: " << (load.has_value() ? "applied" : "none") << '\n';
    for (std::size_t i = 0; i < chains.size(); ++i) {
        std::cout << "chain " << chains[i].name() << ": rank " << ms.per_chain[i].rank
                  << ", passive rank " << ms.per_chain[i].passive_rank;
        if (i < near_singular.size() && near_singular[i]) std::cout << ", near-singular";
        std::cout << '\n';
    }
    std::cout << "k_total rank: " << rank << '\n';
    if (cond.has_value()) std::cout << "k_total condition number: " << vjm::format_double(*cond) << '\n';
    std::cout << "k_tran [N/mm]: " << vjm::format_double(idx.k_tran) << '\n';
    std::cout << "k_rot [N.mm/rad]: " << vjm::format_double(idx.k_rot) << '\n';
    std::cout << "k_total [N/mm, N.mm/rad blocks]:\n" << matrix_text(ms.k_total, "  ");
    std::cout << "compliance (pseudo-inverse at rank < 6) [mm/N, rad/(N.mm) blocks]:\n"
              << matrix_text(compliance, "  ");
    return kExitOk;
}

struct SweepArgs {
    std::string model_path;
    std::string model2_path;  // compare only
    std::string grid;
    std::string out_path;
    std::string format = "csv";
    bool full = false;
    int threads = 0;
};

int run_sweep_cmd(const SweepArgs& args) {
    const vjm::ModelDocument doc = vjm::load_model_file(args.model_path);
    const vjm::GridSpec grid = vjm::parse_grid(args.grid);
    const std::vector<vjm::SweepRow> rows = vjm::run_sweep(doc, grid, args.full, args.threads);
    const std::string text = args.format == "json" ? vjm::sweep_to_json(grid, rows, args.full)
                                                   : vjm::sweep_to_csv(rows, args.full);
    if (args.out_path.empty() || args.out_path == "-") {
        std::cout << text;
    } else {
        write_file_or_fail(args.out_path, text);
    }
    return kExitOk;
}

int run_compare_cmd(const SweepArgs& args) {
    const vjm::ModelDocument a = vjm::load_model_file(args.model_path);
    const vjm::ModelDocument b = vjm::load_model_file(args.model2_path);
    const vjm::GridSpec grid = vjm::parse_grid(args.grid);
    const std::vector<vjm::CompareRow> rows = vjm::run_compare(a, b, grid, args.threads);
    const std::string text = args.format == "json" ? vjm::compare_to_json(grid, rows)
                                                   : vjm::compare_to_csv(rows);
    if (args.out_path.empty() || args.out_path == "-") {
        std::cout << text;
    } else {
        write_file_or_fail(args.out_path, text);
    }
    return kExitOk;
}

struct ValidateArgs {
    std::string model_path;
    std::uint64_t seed = 0;
    int samples = 50;
    double fd_step = 1e-6;
};

int run_validate(const ValidateArgs& args) {
    const vjm::ModelDocument doc = vjm::load_model_file(args.model_path);

    std::vector<vjm::ChainDescription> storage;
    if (doc.is_builder()) {
        // The checks run on chain models; build them at a generic posture.
        const vjm::Manipulator manipulator(doc.builder().variant, doc.builder().params);
        vjm::PosturedManipulator pm = manipulator.at({20.0, -15.0, 10.0});
        storage = std::move(pm.chains);
    } else {
        storage = doc.explicit_model().chains;
    }
    std::vector<const vjm::ChainDescription*> chains;
    for (const auto& c : storage) chains.push_back(&c);

    vjm::ValidationOptions options;
    options.seed = args.seed;
    options.samples = args.samples;
    options.fd_step = args.fd_step;
    const vjm::ValidationReport report = vjm::validate_chains(chains, options);

    for (const vjm::ValidationCheck& check : report.checks) {
        std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": worst "
                  << vjm::format_double(check.worst);
        if (check.tolerance > 0.0) {
            std::cout << " (tolerance " << vjm::format_double(check.tolerance) << ")";
        }
        if (!check.failing_seeds.empty()) {
            std::cout << " failing sample seeds:";
            for (std::uint64_t s : check.failing_seeds) std::cout << ' ' << s;
        }
        std::cout << '\n';
    }
    return report.all_passed() ? kExitOk : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kinetostatic stiffness analysis of multi-chain parallel manipulators"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate stiffness at one pose");
    eval->add_option("--model", eval_args.model_path, "Model JSON file")->required();
    eval->add_option("--pose", eval_args.pose, "Target point x y z [mm]")->expected(3);
    eval->add_option("--load", eval_args.load, "External wrench fx fy fz [N] mx my mz [N.mm]")
        ->expected(6);
    eval->add_option("--format", eval_args.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    eval->add_option("--fd-step", eval_args.fd_step, "Step for load-derivative differences");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Evaluate stiffness over a grid");
    sweep->add_option("--model", sweep_args.model_path, "Model JSON file")->required();
    sweep->add_option("--grid", sweep_args.grid, "Grid spec min:max:count,min:max:count,min:max:count")
        ->required();
    sweep->add_option("--out", sweep_args.out_path, "Output file ('-' for stdout)");
    sweep->add_option("--format", sweep_args.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_flag("--full", sweep_args.full, "Include the flattened 6x6 stiffness per row");
    sweep->add_option("--threads", sweep_args.threads, "Worker threads (0 = hardware)");

    SweepArgs compare_args;
    CLI::App* compare = app.add_subcommand("compare", "Sweep two models and report ratios");
    compare->add_option("--model", compare_args.model_path, "First model JSON file")->required();
    compare->add_option("--model2", compare_args.model2_path, "Second model JSON file")
        ->required();
    compare->add_option("--grid", compare_args.grid, "Grid spec")->required();
    compare->add_option("--out", compare_args.out_path, "Output file ('-' for stdout)");
    compare->add_option("--format", compare_args.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    compare->add_option("--threads", compare_args.threads, "Worker threads (0 = hardware)");

    ValidateArgs validate_args;
    CLI::App* validate = app.add_subcommand("validate", "Run the numerical check suite");
    validate->add_option("--model", validate_args.model_path, "Model JSON file")->required();
    validate->add_option("--seed", validate_args.seed, "Base seed for random postures");
    validate->add_option("--samples", validate_args.samples, "Random postures per check");
    validate->add_option("--fd-step", validate_args.fd_step, "Finite-difference step");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) return run_eval(eval_args);
        if (sweep->parsed()) return run_sweep_cmd(sweep_args);
        if (compare->parsed()) return run_compare_cmd(compare_args);
        return run_validate(validate_args);
    } catch (const vjm::WorkspaceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnreachable;
    } catch (const vjm::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const vjm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadModel;
    }
}
