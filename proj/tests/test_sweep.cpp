#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "vjm/errors.hpp"
#include "vjm/model_io.hpp"
#include "vjm/orthoglide.hpp"
#include "vjm/sweep.hpp"

using namespace vjm;

namespace {

ModelDocument default_model(const char* builder) {
    ModelDocument doc;
    doc.schema_version = "1";
    BuilderModel bm;
    bm.variant = builder == std::string("puu") ? OrthoglideVariant::ThreePuu
                                               : OrthoglideVariant::ThreePrpar;
    bm.params = OrthoglideParams{};
    doc.manipulator = bm;
    return doc;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("grid parsing accepts the documented form and rejects others") {
    const GridSpec grid = parse_grid("-100:100:5,-50:50:3,0:0:1");
    CHECK(grid.axes[0].count == 5);
    CHECK(grid.axes[1].max == 50.0);
    CHECK(grid.axes[2].count == 1);
    CHECK(grid.total() == 15);
    CHECK(grid.axes[0].point(0) == -100.0);
    CHECK(grid.axes[0].point(4) == 100.0);

    CHECK_THROWS_AS(parse_grid("1:2:3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("1:2:0,1:2:1,1:2:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("a:b:c,1:2:1,1:2:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("1:2:2,1:2:2,1:2:2,1:2:2"), std::invalid_argument);
}

TEST_CASE("a single-point grid matches a direct evaluation") {
    const ModelDocument doc = default_model("prpar");
    const GridSpec grid = parse_grid("10:10:1,-20:-20:1,5:5:1");
    const std::vector<SweepRow> rows = run_sweep(doc, grid, true);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].status == PointStatus::Ok);

    const ManipulatorStiffness ms =
        build_3prpar(OrthoglideParams{}).at({10.0, -20.0, 5.0}).stiffness();
    const StiffnessIndices idx = stiffness_indices(ms);
    CHECK(rows[0].k_tran == idx.k_tran);
    CHECK(rows[0].k_rot == idx.k_rot);
    REQUIRE(rows[0].k_total.has_value());
    CHECK(vjm::testing::max_abs_diff(*rows[0].k_total, ms.k_total) == 0.0);
}

TEST_CASE("reachability flags match the discriminant predicate over a wide grid") {
    const ModelDocument doc = default_model("prpar");
    const GridSpec grid = parse_grid("-300:300:5,-300:300:5,-300:300:5");
    const std::vector<SweepRow> rows = run_sweep(doc, grid, false);
    REQUIRE(rows.size() == 125);

    const OrthoglideParams params{};
    int reachable_rows = 0;
    int reachable_pred = 0;
    for (const SweepRow& row : rows) {
        if (row.status != PointStatus::Unreachable) ++reachable_rows;
        if (reachable(params, row.point)) ++reachable_pred;
    }
    CHECK(reachable_rows == reachable_pred);
    CHECK(reachable_rows > 0);
    CHECK(reachable_rows < 125);
}

TEST_CASE("rows come back in lexicographic grid order") {
    const ModelDocument doc = default_model("prpar");
    const GridSpec grid = parse_grid("-30:30:2,-30:30:2,-30:30:2");
    const std::vector<SweepRow> rows = run_sweep(doc, grid, false, 4);
    REQUIRE(rows.size() == 8);
    int flat = 0;
    for (int ix = 0; ix < 2; ++ix) {
        for (int iy = 0; iy < 2; ++iy) {
            for (int iz = 0; iz < 2; ++iz, ++flat) {
                CHECK(rows[static_cast<std::size_t>(flat)].index ==
                      std::array<int, 3>{ix, iy, iz});
            }
        }
    }
}

TEST_CASE("sweeps are deterministic across runs and thread counts") {
    const ModelDocument doc = default_model("puu");
    const GridSpec grid = parse_grid("-40:40:3,-40:40:3,-40:40:3");
    const std::string a = sweep_to_csv(run_sweep(doc, grid, true, 1), true);
    const std::string b = sweep_to_csv(run_sweep(doc, grid, true, 4), true);
    CHECK(a == b);
    const std::string ja = sweep_to_json(grid, run_sweep(doc, grid, false, 2), false);
    const std::string jb = sweep_to_json(grid, run_sweep(doc, grid, false, 3), false);
    CHECK(ja == jb);
}

TEST_CASE("CSV numbers round-trip to the exact double") {
    const ModelDocument doc = default_model("prpar");
    const GridSpec grid = parse_grid("-35:35:2,0:0:1,11:11:1");
    const std::vector<SweepRow> rows = run_sweep(doc, grid, false);
    const std::string csv = sweep_to_csv(rows, false);

    const std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == rows.size() + 1);
    CHECK(lines[0].rfind("ix,iy,iz,x_mm,y_mm,z_mm,status,k_tran_N_per_mm", 0) == 0);

    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::stringstream ss(lines[r + 1]);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        REQUIRE(fields.size() >= 11);
        CHECK(std::strtod(fields[3].c_str(), nullptr) == rows[r].point.x());
        CHECK(std::strtod(fields[7].c_str(), nullptr) == rows[r].k_tran);
        CHECK(std::strtod(fields[8].c_str(), nullptr) == rows[r].k_rot);
    }
}

TEST_CASE("format_double emits shortest round-trip text") {
    for (const double v : {0.0, 1.0, -1.5, 1.0 / 3.0, 9648.199999999999, 1e-30, 2.78e-4}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(100.0) == "100");
}

TEST_CASE("comparison rows equal the ratio of separate sweeps") {
    const ModelDocument a = default_model("puu");
    const ModelDocument b = default_model("prpar");
    const GridSpec grid = parse_grid("-30:30:2,-30:30:2,0:0:1");

    const std::vector<CompareRow> cmp = run_compare(a, b, grid);
    const std::vector<SweepRow> sa = run_sweep(a, grid, false);
    const std::vector<SweepRow> sb = run_sweep(b, grid, false);
    REQUIRE(cmp.size() == sa.size());
    for (std::size_t i = 0; i < cmp.size(); ++i) {
        REQUIRE(cmp[i].rot_ratio.has_value());
        CHECK(*cmp[i].rot_ratio == sb[i].k_rot / sa[i].k_rot);
        CHECK(*cmp[i].tran_ratio == sb[i].k_tran / sa[i].k_tran);
    }
    const std::string csv = compare_to_csv(cmp);
    CHECK(split_lines(csv).size() == cmp.size() + 1);
}

TEST_CASE("explicit-chain models cannot be swept") {
    const char* doc_text = R"({
      "schema_version": "1",
      "manipulator": {
        "chains": [{
          "elements": [{"type": "spring",
            "stiffness": [[1e4,0,0,0,0,0],[0,1e4,0,0,0,0],[0,0,1e4,0,0,0],
                          [0,0,0,1e7,0,0],[0,0,0,0,1e7,0],[0,0,0,0,0,1e7]]}]
        }]
      }
    })";
    const ModelDocument doc = load_model_text(doc_text);
    CHECK_THROWS_AS(run_sweep(doc, parse_grid("0:0:1,0:0:1,0:0:1"), false), ModelError);
}
