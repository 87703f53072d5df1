#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <vector>

#include "permdiag/csvio.hpp"
#include "permdiag/rng.hpp"

using namespace permdiag;

TEST_SUITE("csvio") {

TEST_CASE("format_double emits the shortest exact decimal") {
    for (double v : {0.1, 1.0 / 3.0, 2.5, -0.0625, 1e-300, 6.02214076e23,
                     3.141592653589793}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(2.0) == "2");
    SeededStream rng(3);
    for (int i = 0; i < 2000; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12, 12));
        CHECK(parse_double(format_double(v)) == v);
    }
}

TEST_CASE("parse_double rejects garbage") {
    CHECK_THROWS((void)parse_double(""));
    CHECK_THROWS((void)parse_double("abc"));
    CHECK_THROWS((void)parse_double("1.5x"));
}

TEST_CASE("split_csv_line splits on commas verbatim") {
    CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_line("1,,3") == std::vector<std::string>{"1", "", "3"});
    CHECK(split_csv_line("solo") == std::vector<std::string>{"solo"});
}

TEST_CASE("dataset csv round-trips bit-exactly") {
    FeatureMatrix x(2, 2);
    x(0, 0) = 0.1; x(0, 1) = 1.0 / 3.0;
    x(1, 0) = -2.0; x(1, 1) = 1e-9;
    const Dataset d(x, {1.5, -0.25}, {"alpha", "beta"});
    const std::string text = dataset_to_csv(d);
    CHECK(text.substr(0, text.find('\n')) == "alpha,beta,response");
    const Dataset back = dataset_from_csv(text);
    CHECK(back.names == d.names);
    CHECK(back.y == d.y);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(back.x(i, j) == d.x(i, j));
    CHECK(dataset_to_csv(back) == text);

    const auto path =
        (std::filesystem::temp_directory_path() / "permdiag_csv_test.csv").string();
    save_dataset_csv(d, path);
    const Dataset loaded = load_dataset_csv(path);
    CHECK(dataset_to_csv(loaded) == text);
    std::remove(path.c_str());
}

TEST_CASE("report csv has the documented schema") {
    ImportanceReport r;
    r.measure = Measure::PaP;
    r.scores = {0.5, 0.1};
    r.n_reps = 4;
    r.seed = 99;
    const std::string text = report_to_csv(r, {"f1", "f2"});
    CHECK(text ==
          "measure,feature,score,rank,n_reps,seed\n"
          "PaP,f1,0.5,2,4,99\n"
          "PaP,f2,0.1,1,4,99\n");
    CHECK_THROWS_AS((void)report_to_csv(r, {"only"}), std::invalid_argument);
}

TEST_CASE("curve csv distinguishes PD from ICE rows") {
    EffectCurve pd;
    pd.feature = 0;
    pd.grid = {0.0, 1.0};
    pd.values = {{2.0, 3.0}};
    pd.supported = {{true, true}};
    const std::string pd_text = curve_to_csv(pd);
    CHECK(pd_text ==
          "row_id,grid_value,prediction,supported\n"
          ",0,2,1\n"
          ",1,3,1\n");

    EffectCurve ice = pd;
    ice.row_ids = {7};
    ice.supported = {{true, false}};
    const std::string ice_text = curve_to_csv(ice);
    CHECK(ice_text ==
          "row_id,grid_value,prediction,supported\n"
          "7,0,2,1\n"
          "7,1,3,0\n");
}

TEST_CASE("field csv lists grid coordinates with mean and sd") {
    GridField f;
    f.bounds = {{{0.0, 1.0}, {0.0, 1.0}}};
    f.resolution = {2, 2};
    f.mean = {1.0, 2.0, 3.0, 4.0};
    f.sd = {0.0, 0.1, 0.2, 0.3};
    const std::string text = field_to_csv(f);
    CHECK(text ==
          "x1,x2,mean,sd\n"
          "0,0,1,0\n"
          "0,1,2,0.1\n"
          "1,0,3,0.2\n"
          "1,1,4,0.3\n");
}

TEST_CASE("oracle csv carries the target table") {
    const std::vector<OracleRow> rows{
        {"x1", 1, "vi", 4.0},
        {"x2", 2, "drop", 0.5},
    };
    CHECK(oracle_to_csv(rows) ==
          "feature,theorem,target_name,value\n"
          "x1,1,vi,4\n"
          "x2,2,drop,0.5\n");
}

TEST_CASE("paired ranks csv") {
    PairedRanks t;
    t.feature = {"temp", "hum"};
    t.oob_rank = {2, 1};
    t.relearn_rank = {1, 2};
    CHECK(paired_ranks_to_csv(t) ==
          "feature,oob_rank,relearn_rank\n"
          "temp,2,1\n"
          "hum,1,2\n");
}

TEST_CASE("text file io round-trips") {
    const auto path =
        (std::filesystem::temp_directory_path() / "permdiag_text_test.txt").string();
    const std::string content = "line one\nline two\n";
    write_text_file(path, content);
    CHECK(read_text_file(path) == content);
    std::remove(path.c_str());
    CHECK_THROWS((void)read_text_file(path));
}

}  // TEST_SUITE
