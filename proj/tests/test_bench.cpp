#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "nlgreen/bench.hpp"

using namespace nlgreen;

namespace {

BenchConfig small_config() {
    BenchConfig cfg;
    cfg.nonlin_src = "sinh(w)";
    cfg.forcing_src = "delta";
    cfg.s = 1.0;
    cfg.K_max = 2;
    cfg.strategy = FitStrategy::lsq;
    cfg.eta = 1e-3;
    cfg.grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    return cfg;
}

}  // namespace

TEST_CASE("CSV shape: header plus K_max x grid rows") {
    BenchConfig cfg = small_config();
    cfg.grid = {0.2, 0.5, 0.9};
    ErrorReport rep = run_benchmark(cfg);
    std::ostringstream os;
    emit_report(rep, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "nonlin,forcing,strategy,K,t,wK,wref,Er,flag");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 2 * 3);  // 2 K-values x 3 grid points
    CHECK(os.str().find('\r') == std::string::npos);
}

TEST_CASE("every Er entry is finite or flagged") {
    ErrorReport rep = run_benchmark(small_config());
    for (const ErrorCell& c : rep.cells) {
        if (!c.exact) CHECK(std::isfinite(c.Er));
    }
}

TEST_CASE("determinism: identical configs give byte-identical CSVs") {
    BenchConfig cfg = small_config();
    ErrorReport a = run_benchmark(cfg);
    ErrorReport b = run_benchmark(cfg);
    std::ostringstream sa, sb;
    emit_report(a, sa);
    emit_report(b, sb);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("file emission round-trips through disk byte-for-byte") {
    BenchConfig cfg = small_config();
    ErrorReport rep = run_benchmark(cfg);
    std::ostringstream expect;
    emit_report(rep, expect);
    const std::string path = "bench_test_out.csv";
    emit_report(rep, path);
    std::ifstream f(path, std::ios::binary);
    std::stringstream got;
    got << f.rdbuf();
    CHECK(got.str() == expect.str());
    std::remove(path.c_str());
}

TEST_CASE("reference dominance: 10x tighter reference moves the pooled median < 1%") {
    BenchConfig cfg = small_config();
    cfg.K_max = 3;
    ErrorReport base = run_benchmark(cfg);
    BenchConfig tight = cfg;
    tight.ref_rtol = cfg.ref_rtol / 10.0;
    tight.ref_atol = cfg.ref_atol / 10.0;
    ErrorReport refined = run_benchmark(tight);
    double rel = std::fabs(refined.pooled_median_Er - base.pooled_median_Er) /
                 std::fabs(base.pooled_median_Er);
    CHECK(rel < 0.01);
}

TEST_CASE("reference tolerance is far tighter than the smallest reported gap") {
    ErrorReport rep = run_benchmark(small_config());
    CHECK(rep.min_gap >= 100.0 * rep.config.ref_atol);
}

TEST_CASE("smooth-forcing benchmark under strategy (a): K = 4 beats K = 1 pointwise") {
    BenchConfig cfg;
    cfg.nonlin_src = "w^3";
    cfg.forcing_src = "cos(t)";
    cfg.strategy = FitStrategy::match;
    cfg.K_max = 4;
    cfg.grid.clear();
    for (int i = 1; i <= 30; ++i) cfg.grid.push_back(0.01 + (0.3 - 0.01) * (i - 1) / 29.0);
    ErrorReport rep = run_benchmark(cfg);
    // Er(4; t) <= Er(1; t) for all grid t (parity can make low orders tie)
    std::vector<double> er1, er4;
    for (const ErrorCell& c : rep.cells) {
        if (c.K == 1) er1.push_back(c.Er);
        if (c.K == 4) er4.push_back(c.Er);
    }
    REQUIRE(er1.size() == er4.size());
    for (std::size_t i = 0; i < er1.size(); ++i) CHECK(er4[i] <= er1[i] + 1e-9);
    // and strictly better in the median
    CHECK(rep.median_Er_per_K[3] < rep.median_Er_per_K[0]);
}

TEST_CASE("grid outside [0,1] is rejected") {
    BenchConfig cfg = small_config();
    cfg.grid = {0.0, 1.5};
    CHECK_THROWS_AS(run_benchmark(cfg), std::invalid_argument);
    cfg.grid = {-0.1};
    CHECK_THROWS_AS(run_benchmark(cfg), std::invalid_argument);
    cfg = small_config();
    cfg.K_max = 9;
    CHECK_THROWS_AS(run_benchmark(cfg), std::invalid_argument);
}
