#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gsfw/dataset.hpp"
#include "gsfw/error.hpp"
#include "gsfw/losses.hpp"
#include "gsfw/metrics.hpp"
#include "oracles.hpp"

using namespace gsfw;

namespace {

Dataset parse(const std::string& text, bool binary = true) {
  std::istringstream in(text);
  return parse_libsvm(in, binary);
}

Dataset two_by_two() {
  const std::vector<double> x{1, 0, 0, 2};
  return Dataset::from_dense(2, x, {1.0, -1.0});
}

}  // namespace

TEST_CASE("parse_libsvm reads the two-line example") {
  const Dataset ds = parse("+1 1:0.5 3:2\n-1 2:1\n");
  CHECK(ds.n() == 2);
  CHECK(ds.p() == 3);
  CHECK(ds.y()[0] == 1.0);
  CHECK(ds.y()[1] == -1.0);
  const auto r0 = ds.row(0);
  REQUIRE(r0.nnz() == 2);
  CHECK(r0.cols[0] == 0);
  CHECK(r0.vals[0] == 0.5);
  CHECK(r0.cols[1] == 2);
  CHECK(r0.vals[1] == 2.0);
  const auto r1 = ds.row(1);
  REQUIRE(r1.nnz() == 1);
  CHECK(r1.cols[0] == 1);
  CHECK(r1.vals[0] == 1.0);
}

TEST_CASE("parse_libsvm rejects bad input") {
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("\n\n"), ParseError);
  CHECK_THROWS_AS(parse("1 1:0.5 x\n"), ParseError);
  CHECK_THROWS_AS(parse("1 1:abc\n"), ParseError);
  CHECK_THROWS_AS(parse("1 0:1\n"), ParseError);
  CHECK_THROWS_AS(parse("1 3:1 2:1\n"), ParseError);
  CHECK_THROWS_AS(parse("1 2:1 2:1\n"), ParseError);
  CHECK_THROWS_AS(parse("1 1:1\n2 1:1\n3 1:1\n"), ParseError);
  CHECK_THROWS_AS(parse("abc 1:1\n"), ParseError);
}

TEST_CASE("parse_libsvm label handling") {
  SUBCASE("two arbitrary values map smaller to -1") {
    const Dataset ds = parse("2 1:1\n1 1:1\n2 2:1\n");
    CHECK(ds.y()[0] == 1.0);
    CHECK(ds.y()[1] == -1.0);
    CHECK(ds.y()[2] == 1.0);
  }
  SUBCASE("regression labels are kept verbatim") {
    const Dataset ds = parse("2.5 1:1\n-0.25 1:1\n7 1:1\n", false);
    CHECK(ds.y()[0] == 2.5);
    CHECK(ds.y()[1] == -0.25);
    CHECK(ds.y()[2] == 7.0);
  }
  SUBCASE("a single class already in {-1,+1} is accepted") {
    const Dataset ds = parse("-1 1:1\n-1 2:1\n");
    CHECK(ds.y()[0] == -1.0);
  }
}

TEST_CASE("parse_libsvm accepts CRLF, blank lines and a larger minimum p") {
  std::istringstream in("+1 1:0.5\r\n\r\n-1 2:1\r\n");
  const Dataset ds = parse_libsvm(in, true, 10);
  CHECK(ds.n() == 2);
  CHECK(ds.p() == 10);
  CHECK(ds.row(1).vals[0] == 1.0);
}

TEST_CASE("LIBSVM write then parse is the identity") {
  const Dataset ds = synth_dataset(30, 12, 0.4, LossKind::kLogistic, 11);
  std::stringstream buf;
  write_libsvm(ds, buf);
  const Dataset back = parse_libsvm(buf, true, ds.p());
  REQUIRE(back.n() == ds.n());
  CHECK(back.p() == ds.p());
  CHECK(std::vector<double>(back.y().begin(), back.y().end()) ==
        std::vector<double>(ds.y().begin(), ds.y().end()));
  CHECK(std::vector<std::size_t>(back.row_ptr().begin(), back.row_ptr().end()) ==
        std::vector<std::size_t>(ds.row_ptr().begin(), ds.row_ptr().end()));
  CHECK(std::vector<std::uint32_t>(back.cols().begin(), back.cols().end()) ==
        std::vector<std::uint32_t>(ds.cols().begin(), ds.cols().end()));
  CHECK(std::vector<double>(back.vals().begin(), back.vals().end()) ==
        std::vector<double>(ds.vals().begin(), ds.vals().end()));
}

TEST_CASE("from_csr validates its invariants") {
  CHECK_THROWS(Dataset::from_csr(3, {1.0}, {0, 1}, {3}, {1.0}));
  CHECK_THROWS(Dataset::from_csr(3, {1.0}, {0, 2}, {2, 1}, {1.0, 1.0}));
  CHECK_THROWS(Dataset::from_csr(3, {1.0, 1.0}, {0, 1}, {0}, {1.0}));
  CHECK_THROWS(Dataset::from_csr(0, {1.0}, {0, 0}, {}, {}));
  CHECK_THROWS(Dataset::from_csr(2, {}, {0}, {}, {}));
  CHECK_NOTHROW(Dataset::from_csr(3, {1.0}, {0, 2}, {0, 2}, {0.0, 1.0}));
}

TEST_CASE("mushrooms has the published shape") {
  std::filesystem::path path = "data/mushrooms";
  if (const char* dir = std::getenv("GSFW_DATA_DIR")) path = std::filesystem::path(dir) / "mushrooms";
  if (!std::filesystem::exists(path)) {
    MESSAGE("mushrooms not available; shape check not run");
    return;
  }
  const Dataset ds = load_libsvm(path.string(), true);
  CHECK(ds.n() == 8124);
  CHECK(ds.p() == 112);
}

TEST_CASE("load_libsvm reports missing files as IoError") {
  CHECK_THROWS_AS(load_libsvm("/nonexistent/file.svm", true), IoError);
}

TEST_CASE("row_dot") {
  const Dataset ds = parse("+1 1:0.5 3:2\n-1 1:1 2:1 3:1 4:1\n");
  CHECK(row_dot(ds, 0, std::vector<double>{2, 9, 1, 0}) == doctest::Approx(3.0));
  CHECK(row_dot(ds, 0, std::vector<double>(4, 0.0)) == 0.0);
  CHECK(row_dot(ds, 1, std::vector<double>{1, 2, 3, 4}) == 10.0);
  CHECK_THROWS_AS(row_dot(ds, 2, std::vector<double>(4, 0.0)), std::out_of_range);
}

TEST_CASE("axpy_row") {
  const Dataset ds = parse("+1 1:2 3:-1\n");
  std::vector<double> d{1, 1, 1};
  axpy_row(d, ds, 0, 0.5);
  CHECK(d == std::vector<double>{2, 1, 0.5});
  axpy_row(d, ds, 0, 0.0);
  CHECK(d == std::vector<double>{2, 1, 0.5});
  CHECK_THROWS_AS(axpy_row(d, ds, 1, 1.0), std::out_of_range);
}

TEST_CASE("axpy_row with +c then -c stays within one ulp") {
  const Dataset ds = oracle::random_sparse(10, 8, 0.6, 5);
  std::mt19937_64 gen(9);
  std::normal_distribution<double> g(0.0, 1.0);
  auto ulp = [](double v) {
    v = std::abs(v);
    return std::nextafter(v, std::numeric_limits<double>::infinity()) - v;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> d(8);
    for (double& v : d) v = g(gen);
    const auto before = d;
    const std::size_t j = static_cast<std::size_t>(trial % 10);
    const double c = g(gen) * 3.0;
    axpy_row(d, ds, j, c);
    const auto mid = d;
    axpy_row(d, ds, j, -c);
    std::vector<bool> touched(8, false);
    for (std::uint32_t k : ds.row(j).cols) touched[k] = true;
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (!touched[k]) {
        CHECK(d[k] == before[k]);
        continue;
      }
      // Two roundings, each at most half an ulp of the larger magnitude involved.
      const double scale = std::max(std::abs(before[k]), std::abs(mid[k]));
      CHECK(std::abs(d[k] - before[k]) <= ulp(scale));
    }
  }
}

TEST_CASE("weighted_columns") {
  CHECK(weighted_columns(two_by_two(), std::vector<double>{2, 3}) == std::vector<double>{1, 3});
  CHECK(weighted_columns(two_by_two(), std::vector<double>{0, 0}) == std::vector<double>{0, 0});
  CHECK_THROWS(weighted_columns(two_by_two(), std::vector<double>{1, 2, 3}));

  const Dataset small = oracle::random_sparse(5, 3, 0.6, 17);
  const std::vector<double> w{0.3, -1.2, 2.0, 0.7, -0.1};
  const auto got = weighted_columns(small, w);
  const auto want = oracle::scaled_transpose(oracle::densify(small), w);
  for (std::size_t k = 0; k < 3; ++k) CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-14));
}

TEST_CASE("weighted_columns matches the dense product for all sizes up to 50") {
  std::mt19937_64 gen(123);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t n = 1; n <= 50; n += 7) {
    for (std::size_t p = 1; p <= 50; p += 7) {
      const Dataset ds = oracle::random_sparse(n, p, 0.3, n * 100 + p);
      std::vector<double> w(n);
      for (double& v : w) v = g(gen);
      const auto got = weighted_columns(ds, w);
      const auto want = oracle::scaled_transpose(oracle::densify(ds), w);
      for (std::size_t k = 0; k < p; ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-12);
    }
  }
}

TEST_CASE("synth_dataset") {
  SUBCASE("deterministic by seed") {
    const Dataset a = synth_dataset(50, 10, 1.0, LossKind::kLogistic, 7);
    const Dataset b = synth_dataset(50, 10, 1.0, LossKind::kLogistic, 7);
    CHECK(std::vector<double>(a.vals().begin(), a.vals().end()) ==
          std::vector<double>(b.vals().begin(), b.vals().end()));
    CHECK(std::vector<double>(a.y().begin(), a.y().end()) ==
          std::vector<double>(b.y().begin(), b.y().end()));
    const Dataset c = synth_dataset(50, 10, 1.0, LossKind::kLogistic, 8);
    CHECK(std::vector<double>(a.vals().begin(), a.vals().end()) !=
          std::vector<double>(c.vals().begin(), c.vals().end()));
  }
  SUBCASE("row density concentrates around density * p") {
    const std::size_t n = 400, p = 100;
    const double dens = 0.2;
    const Dataset ds = synth_dataset(n, p, dens, LossKind::kSquared, 3);
    const double mean = static_cast<double>(ds.nnz()) / n;
    const double sd_of_mean = std::sqrt(p * dens * (1 - dens) / n);
    CHECK(std::abs(mean - dens * p) <= 3 * sd_of_mean);
  }
  SUBCASE("logistic labels are signs") {
    const Dataset ds = synth_dataset(200, 5, 0.5, LossKind::kLogistic, 4);
    for (double y : ds.y()) CHECK((y == 1.0 || y == -1.0));
  }
  SUBCASE("invalid density") {
    CHECK_THROWS_AS(synth_dataset(10, 5, 0.0, LossKind::kLogistic, 1), std::invalid_argument);
    CHECK_THROWS_AS(synth_dataset(10, 5, 1.5, LossKind::kLogistic, 1), std::invalid_argument);
    CHECK_THROWS_AS(synth_dataset(0, 5, 0.5, LossKind::kLogistic, 1), std::invalid_argument);
  }
}

TEST_CASE("row_dot summed reproduces the loss term of P") {
  const Dataset ds = oracle::random_sparse(40, 6, 0.5, 21);
  const LossFamily lf = LossFamily::for_dataset(LossKind::kLogistic, ds);
  const Regularizer reg = L1Ball{2.0};
  const Problem prob(ds, lf, reg);
  std::mt19937_64 gen(5);
  for (int t = 0; t < 20; ++t) {
    const auto beta = oracle::random_feasible(reg, ds.p(), gen);
    double acc = 0.0;
    for (std::size_t j = 0; j < ds.n(); ++j) acc += lf.value(j, row_dot(ds, j, beta));
    CHECK(primal_value(prob, beta) == doctest::Approx(acc / ds.n()).epsilon(1e-13));
  }
}
