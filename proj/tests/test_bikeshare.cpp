#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "permdiag/bikeshare.hpp"
#include "permdiag/copula.hpp"
#include "permdiag/csvio.hpp"
#include "permdiag/errors.hpp"
#include "permdiag/rng.hpp"

using namespace permdiag;

namespace {

std::string fixture_path() {
    return std::string(PERMDIAG_TEST_DATA_DIR) + "/hour_fixture.csv";
}

std::string write_temp_csv(const std::string& name, const std::string& text) {
    const auto path = (std::filesystem::temp_directory_path() / name).string();
    write_text_file(path, text);
    return path;
}

// True when `sub` rows appear in `full` in the same order (exact match of
// every feature value plus the response).
bool is_row_subsequence(const Dataset& sub, const Dataset& full) {
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < sub.n_rows(); ++i) {
        for (;; ++cursor) {
            if (cursor == full.n_rows()) return false;
            bool same = full.y[cursor] == sub.y[i];
            for (std::size_t j = 0; same && j < sub.n_cols(); ++j)
                same = full.x(cursor, j) == sub.x(i, j);
            if (same) {
                ++cursor;
                break;
            }
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("bikeshare") {

TEST_CASE("feature names cover the hourly predictors in order") {
    const auto& names = bikeshare_feature_names();
    REQUIRE(names.size() == 12);
    CHECK(names.front() == "season");
    CHECK(names[3] == "hr");
    CHECK(names[8] == "temp");
    CHECK(names.back() == "windspeed");
}

TEST_CASE("fixture load keeps log counts and drops zero-count hours") {
    const auto load = load_bikeshare({fixture_path(), std::nullopt, 0});
    CHECK(load.data.n_rows() == 279);
    CHECK(load.data.names == bikeshare_feature_names());
    CHECK(load.rejected.size() == 21);
    REQUIRE(load.rejected.size() >= 5);
    CHECK(load.rejected[0] == 4);
    CHECK(load.rejected[1] == 5);
    CHECK(load.rejected[2] == 24);
    CHECK(load.rejected[3] == 28);
    CHECK(load.rejected[4] == 49);

    // First kept source row: hr 0, temp 0.19, cnt 2.
    CHECK(load.data.y[0] == std::log(2.0));
    CHECK(load.data.x(0, 3) == 0.0);
    CHECK(load.data.x(0, 8) == 0.19);
    CHECK(load.data.x.all_finite());

    const auto again = load_bikeshare({fixture_path(), std::nullopt, 0});
    CHECK(again.rejected == load.rejected);
    CHECK(again.data.y == load.data.y);
}

TEST_CASE("a minimal thirteen-column file is enough") {
    std::string text = "season,yr,mnth,hr,holiday,weekday,workingday,weathersit,"
                       "temp,atemp,hum,windspeed,cnt\n";
    text += "1,0,1,0,0,6,0,1,0.24,0.28,0.81,0,2\n";
    text += "1,0,1,1,0,6,0,1,0.22,0.27,0.8,0,0\n";
    text += "2,1,7,15,0,3,1,2,0.7,0.66,0.5,0.19,7\n";
    const auto path = write_temp_csv("permdiag_bike_min.csv", text);
    const auto load = load_bikeshare({path, std::nullopt, 0});
    CHECK(load.data.n_rows() == 2);
    CHECK(load.rejected == std::vector<std::size_t>{2});
    CHECK(load.data.y[0] == std::log(2.0));
    CHECK(load.data.y[1] == std::log(7.0));
    CHECK(load.data.x(1, 0) == 2.0);
    CHECK(load.data.x(1, 11) == 0.19);
    std::filesystem::remove(path);
}

TEST_CASE("load failures carry a data error") {
    CHECK_THROWS_AS((void)load_bikeshare({"/nonexistent/hour.csv", std::nullopt, 0}),
                    DataError);

    const auto missing = write_temp_csv(
        "permdiag_bike_missing.csv",
        "season,yr,mnth,hr,holiday,weekday,workingday,weathersit,"
        "atemp,hum,windspeed,cnt\n");
    CHECK_THROWS_WITH_AS((void)load_bikeshare({missing, std::nullopt, 0}),
                         doctest::Contains("temp"), DataError);
    std::filesystem::remove(missing);

    const auto empty = write_temp_csv(
        "permdiag_bike_empty.csv",
        "season,yr,mnth,hr,holiday,weekday,workingday,weathersit,"
        "temp,atemp,hum,windspeed,cnt\n1,0,1,0,0,6,0,1,0.2,0.2,0.8,0,0\n");
    CHECK_THROWS_WITH_AS((void)load_bikeshare({empty, std::nullopt, 0}),
                         doctest::Contains("no usable rows"), DataError);
    std::filesystem::remove(empty);
}

TEST_CASE("subsampling is seeded and keeps source order") {
    const auto full = load_bikeshare({fixture_path(), std::nullopt, 0});
    const auto sub_a = load_bikeshare({fixture_path(), 50, 11});
    const auto sub_b = load_bikeshare({fixture_path(), 50, 11});
    const auto sub_c = load_bikeshare({fixture_path(), 50, 12});

    CHECK(sub_a.data.n_rows() == 50);
    CHECK(sub_a.data.y == sub_b.data.y);
    CHECK(sub_a.data.y != sub_c.data.y);
    CHECK(is_row_subsequence(sub_a.data, full.data));
    CHECK(is_row_subsequence(sub_c.data, full.data));

    // Asking for at least the full size is a no-op.
    const auto big = load_bikeshare({fixture_path(), 279, 11});
    CHECK(big.data.y == full.data.y);
}

TEST_CASE("rank comparison reports both rank vectors over the features") {
    CopulaSpec cspec;
    cspec.rho = 0.0;
    SeededStream rng(404);
    const Dataset d = make_dataset(cspec, ResponseSpec::benchmark_linear(), 250, rng);

    ForestConfig fc;
    fc.n_trees = 60;
    const PairedRanks ranks = rank_comparison(d, fc, 2, 505);
    REQUIRE(ranks.feature == d.names);
    REQUIRE(ranks.oob_rank.size() == 10);
    REQUIRE(ranks.relearn_rank.size() == 10);

    // Ranks are a permutation of 1..p under both measures.
    auto is_permutation = [](std::vector<int> r) {
        std::sort(r.begin(), r.end());
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i] != static_cast<int>(i) + 1) return false;
        return true;
    };
    CHECK(is_permutation(ranks.oob_rank));
    CHECK(is_permutation(ranks.relearn_rank));

    // The strongest and the null coefficient land where they should.
    CHECK(ranks.oob_rank[9] == 10);
    CHECK(ranks.oob_rank[5] <= 2);
    CHECK(ranks.relearn_rank[9] >= 9);
    CHECK(ranks.relearn_rank[5] <= 2);

    const PairedRanks again = rank_comparison(d, fc, 2, 505);
    CHECK(again.oob_rank == ranks.oob_rank);
    CHECK(again.relearn_rank == ranks.relearn_rank);
}

TEST_CASE("rank comparison with one feature is degenerate") {
    FeatureMatrix x(40, 1);
    std::vector<double> y(40);
    SeededStream rng(7);
    for (std::size_t i = 0; i < 40; ++i) {
        x(i, 0) = rng.uniform();
        y[i] = 2.0 * x(i, 0) + rng.normal(0.0, 0.05);
    }
    const Dataset d(x, y, {"only"});
    ForestConfig fc;
    fc.n_trees = 25;
    const PairedRanks ranks = rank_comparison(d, fc, 1, 1);
    CHECK(ranks.oob_rank == std::vector<int>{1});
    CHECK(ranks.relearn_rank == std::vector<int>{1});
}

}  // TEST_SUITE
