#include <doctest.h>

#include "bfree/criterion.hpp"
#include "bfree/density.hpp"
#include "bfree/structure.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

using namespace bfree;

TEST_SUITE_BEGIN("formats");

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("density series csv re-parses to the in-memory rationals") {
    FamilySpec f = FamilySpec::all_primes(1, 2);
    DensitySeries s = davenport_erdos_series(f, {4, 9, 25, 100});
    auto rows = parse_csv(density_series_csv(s));
    REQUIRE(rows.size() == s.checkpoints.size() + 1);
    for (std::size_t i = 0; i < s.checkpoints.size(); ++i) {
        const auto& r = rows[i + 1];
        CHECK(std::stoull(r[0]) == s.checkpoints[i]);
        CHECK(r[1] == to_string(s.values[i].kind));
        Rat parsed = Rat(BigInt(r[2]), BigInt(r[3]));
        CHECK(parsed == *s.values[i].exact);
    }
}

TEST_CASE("criterion csv covers the whole grid and re-parses") {
    FamilySpec f = FamilySpec::explicit_set({2, 3, 7});
    CriterionReport rep = criterion_scan(f, {100, 1000}, {0.1, 0.4});
    auto rows = parse_csv(criterion_report_csv(rep));
    REQUIRE(rows.size() == 1 + 2 * 2);
    std::size_t idx = 1;
    for (std::size_t xi = 0; xi < 2; ++xi) {
        for (std::size_t ei = 0; ei < 2; ++ei, ++idx) {
            CHECK(std::stoull(rows[idx][0]) == rep.x_grid[xi]);
            CHECK(std::stod(rows[idx][1]) == doctest::Approx(rep.eps_grid[ei]));
            CHECK(std::stod(rows[idx][2]) == doctest::Approx(rep.statistic[xi][ei]).epsilon(1e-12));
        }
    }
    auto summary = nlohmann::json::parse(criterion_report_summary_json(rep));
    CHECK(summary["verdict"]["label"] == "heuristic");
    CHECK(summary["limsup_proxy"].size() == 2);
}

TEST_CASE("toeplitz csv marks defects") {
    // s_max 1 cannot resolve a nonconstant eta at member positions
    auto r = toeplitz_scan(FamilySpec::explicit_set({2}), 0, 3, 1, 50);
    CHECK(r.defects.size() == 4); // eta alternates, period 1 never fits
    auto rows = parse_csv(toeplitz_report_csv(r));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] == "defect");
}

TEST_CASE("structure verdict json carries witnesses") {
    auto v = check_pairwise_coprime(FamilySpec::explicit_set({6, 10}), 100);
    auto j = v.to_json();
    CHECK(j["verdict"] == "fails");
    CHECK(j["witness_pair"][0] == 6);
    CHECK(j["witness_pair"][1] == 10);
}

TEST_SUITE_END();
