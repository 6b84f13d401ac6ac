#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "qspp/metrics.hpp"
#include "reference.hpp"
#include "test_support.hpp"

using qspp::adjusted_mutual_info;
using qspp::adjusted_rand_index;

TEST_CASE("identical partitions score 1 under any relabeling") {
    const std::vector<int> a = {0, 0, 1, 1, 2, 2, 2};
    const std::vector<int> b = {5, 5, 3, 3, 9, 9, 9};
    CHECK(adjusted_rand_index(a, a) == 1.0);
    CHECK(adjusted_rand_index(a, b) == 1.0);
    CHECK(adjusted_mutual_info(a, a) == 1.0);
    CHECK(adjusted_mutual_info(a, b) == 1.0);
}

TEST_CASE("maximally crossed 2x2 split scores exactly -1/2") {
    const std::vector<int> a = {0, 0, 1, 1};
    const std::vector<int> b = {0, 1, 0, 1};
    CHECK(adjusted_rand_index(a, b) == -0.5);
    CHECK(adjusted_rand_index(a, b) == qspp::reference::ari_pair_counts(a, b));
}

TEST_CASE("both metrics are symmetric") {
    const std::vector<int> a = {0, 0, 0, 1, 1, 2, 2, 2, 2, 1};
    const std::vector<int> b = {1, 1, 0, 0, 2, 2, 1, 0, 2, 2};
    CHECK(adjusted_rand_index(a, b) == adjusted_rand_index(b, a));
    CHECK(adjusted_mutual_info(a, b) == doctest::Approx(adjusted_mutual_info(b, a)).epsilon(1e-12));
}

TEST_CASE("scores are invariant to permuting cluster ids") {
    const std::vector<int> a = {0, 0, 0, 1, 1, 2, 2, 2, 2, 1};
    const std::vector<int> b = {1, 1, 0, 0, 2, 2, 1, 0, 2, 2};
    std::vector<int> b_swapped(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) b_swapped[i] = (b[i] + 1) % 3;
    CHECK(adjusted_rand_index(a, b) == adjusted_rand_index(a, b_swapped));
    CHECK(adjusted_mutual_info(a, b) ==
          doctest::Approx(adjusted_mutual_info(a, b_swapped)).epsilon(1e-12));
}

TEST_CASE("constant prediction scores 0 against a real partition") {
    const std::vector<int> truth = {0, 0, 1, 1, 2, 2};
    const std::vector<int> pred(6, 0);
    CHECK(adjusted_rand_index(pred, truth) == 0.0);
    CHECK(adjusted_mutual_info(pred, truth) == 0.0);
}

TEST_CASE("two single-cluster partitions agree perfectly") {
    const std::vector<int> a(5, 3);
    const std::vector<int> b(5, 7);
    CHECK(adjusted_rand_index(a, b) == 1.0);
    CHECK(adjusted_mutual_info(a, b) == 1.0);
}

TEST_CASE("all singletons versus one cluster scores 0") {
    std::vector<int> a(8);
    std::iota(a.begin(), a.end(), 0);
    const std::vector<int> b(8, 0);
    CHECK(adjusted_rand_index(a, b) == 0.0);
    CHECK(adjusted_mutual_info(a, b) == 0.0);
}

TEST_CASE("main ARI matches the pair-count oracle bitwise") {
    for (unsigned seed = 0; seed < 40; ++seed) {
        const std::size_t n = 20 + seed * 13;
        const auto a = testsupport::random_labels(n, 2 + seed % 6, seed);
        const auto b = testsupport::random_labels(n, 2 + (seed / 2) % 5, seed + 999);
        CAPTURE(seed);
        CHECK(adjusted_rand_index(a, b) == qspp::reference::ari_pair_counts(a, b));
    }
}

TEST_CASE("main AMI matches the direct long-double oracle") {
    for (unsigned seed = 0; seed < 40; ++seed) {
        const std::size_t n = 20 + seed * 13;
        const auto a = testsupport::random_labels(n, 2 + seed % 6, seed);
        const auto b = testsupport::random_labels(n, 2 + (seed / 2) % 5, seed + 999);
        CAPTURE(seed);
        const double got = adjusted_mutual_info(a, b);
        const double want = qspp::reference::ami_direct(a, b);
        CHECK(std::fabs(got - want) < 1e-9);
    }
}

TEST_CASE("independent random labelings score near zero") {
    double sum_ari = 0.0;
    double sum_ami = 0.0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const auto a = testsupport::random_labels(1000, 10, 5000 + t);
        const auto b = testsupport::random_labels(1000, 8, 6000 + t);
        const double ari = adjusted_rand_index(a, b);
        const double ami = adjusted_mutual_info(a, b);
        CHECK(std::fabs(ari) < 0.1);
        CHECK(std::fabs(ami) < 0.1);
        sum_ari += ari;
        sum_ami += ami;
    }
    CHECK(std::fabs(sum_ari / trials) < 0.01);
    CHECK(std::fabs(sum_ami / trials) < 0.01);
}

TEST_CASE("near-identical partitions score close to 1") {
    std::vector<int> a(400);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<int>(i / 100);
    std::vector<int> b = a;
    b[0] = 3;
    b[399] = 0;
    const double ari = adjusted_rand_index(a, b);
    const double ami = adjusted_mutual_info(a, b);
    CHECK(ari > 0.95);
    CHECK(ari < 1.0);
    CHECK(ami > 0.95);
    CHECK(ami < 1.0);
}

TEST_CASE("input validation") {
    const std::vector<int> ok = {0, 1};
    CHECK_THROWS_AS(adjusted_rand_index({0, 1, 2}, ok), std::invalid_argument);
    CHECK_THROWS_AS(adjusted_rand_index({0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(adjusted_rand_index({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(adjusted_mutual_info({0, 1, 2}, ok), std::invalid_argument);
    CHECK_THROWS_AS(adjusted_mutual_info({0}, {0}), std::invalid_argument);
}

TEST_CASE("contingency table marginals are consistent") {
    const auto a = testsupport::random_labels(321, 5, 11);
    const auto b = testsupport::random_labels(321, 7, 12);
    const auto t = qspp::ContingencyTable::from_labels(a, b);
    CHECK(t.n == 321);
    CHECK(t.rows == 5);
    CHECK(t.cols == 7);
    std::int64_t total = 0;
    for (std::size_t r = 0; r < t.rows; ++r) {
        std::int64_t row = 0;
        for (std::size_t c = 0; c < t.cols; ++c) row += t.at(r, c);
        CHECK(row == t.row_sums[r]);
        total += row;
    }
    for (std::size_t c = 0; c < t.cols; ++c) {
        std::int64_t col = 0;
        for (std::size_t r = 0; r < t.rows; ++r) col += t.at(r, c);
        CHECK(col == t.col_sums[c]);
    }
    CHECK(total == static_cast<std::int64_t>(t.n));
}

TEST_CASE("labels are remapped in first-appearance order") {
    const std::vector<int> a = {7, 7, -2, 7, 100, -2};
    const std::vector<int> b = {1, 1, 1, 0, 0, 0};
    const auto t = qspp::ContingencyTable::from_labels(a, b);
    CHECK(t.rows == 3);
    CHECK(t.cols == 2);
    // row 0 is label 7, row 1 is -2, row 2 is 100; col 0 is label 1
    CHECK(t.at(0, 0) == 2);
    CHECK(t.at(0, 1) == 1);
    CHECK(t.at(1, 0) == 1);
    CHECK(t.at(1, 1) == 1);
    CHECK(t.at(2, 0) == 0);
    CHECK(t.at(2, 1) == 1);
}
