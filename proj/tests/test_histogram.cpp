#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hypervec/histogram.hpp"

using namespace hypervec;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_SUITE("histogram") {

TEST_CASE("equal-width bins with the maximum in the last bin") {
  const std::vector<double> vals = {0.0, 0.5, 1.0, 1.5, 2.0, 2.0};
  auto hist = make_histogram(vals, 4);
  REQUIRE(hist.size() == 4);
  CHECK(hist[0].left == doctest::Approx(0.0));
  CHECK(hist[3].right == doctest::Approx(2.0));
  CHECK(hist[0].count == 1);  // 0.0
  CHECK(hist[1].count == 1);  // 0.5 sits exactly on the bin edge
  CHECK(hist[2].count == 1);  // 1.0
  CHECK(hist[3].count == 3);  // 1.5 and both maxima
  std::uint64_t total = 0;
  for (const auto& row : hist) total += row.count;
  CHECK(total == vals.size());
}

TEST_CASE("degenerate range widens instead of dividing by zero") {
  const std::vector<double> vals = {3.0, 3.0, 3.0};
  auto hist = make_histogram(vals, 5);
  REQUIRE(hist.size() == 5);
  CHECK(hist[0].left == doctest::Approx(3.0));
  CHECK(hist[4].right == doctest::Approx(4.0));
  CHECK(hist[0].count == 3);
}

TEST_CASE("histogram input validation") {
  const std::vector<double> vals = {1.0, 2.0};
  CHECK_THROWS_AS(make_histogram(vals, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_histogram(std::vector<double>{}, 4), std::invalid_argument);
}

TEST_CASE("interior mode detection") {
  auto rows = [](std::vector<std::uint64_t> counts) {
    std::vector<HistogramRow> h;
    for (std::size_t i = 0; i < counts.size(); ++i)
      h.push_back({double(i), double(i + 1), counts[i]});
    return h;
  };
  CHECK(has_unique_interior_mode(rows({1, 5, 2})));
  CHECK(has_unique_interior_mode(rows({0, 2, 9, 4, 1})));
  CHECK_FALSE(has_unique_interior_mode(rows({5, 1, 1})));   // mode on the left edge
  CHECK_FALSE(has_unique_interior_mode(rows({1, 1, 5})));   // mode on the right edge
  CHECK_FALSE(has_unique_interior_mode(rows({1, 5, 5, 1})));  // tied mode
}

TEST_CASE("sample skewness matches the scipy oracle") {
  // scipy.stats.skew([0, 1, 1.5, 2, 2.5, 3, 10], bias=True)
  const std::vector<double> vals = {0.0, 1.0, 1.5, 2.0, 2.5, 3.0, 10.0};
  CHECK(sample_skewness(vals) == doctest::Approx(1.6600954837239208).epsilon(1e-12));
}

TEST_CASE("skewness signs and validation") {
  CHECK(sample_skewness(std::vector<double>{1.0, 2.0, 3.0}) == doctest::Approx(0.0));
  CHECK(sample_skewness(std::vector<double>{0.0, 0.0, 10.0}) > 0.0);
  CHECK(sample_skewness(std::vector<double>{0.0, 10.0, 10.0}) < 0.0);
  CHECK_THROWS_AS(sample_skewness(std::vector<double>{1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(sample_skewness(std::vector<double>{2.0, 2.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("histogram CSV round trip shape") {
  const std::vector<double> vals = {0.0, 0.25, 0.9, 1.0};
  auto hist = make_histogram(vals, 2);
  const std::string path = "hist_test_tmp.csv";
  save_histogram_csv(hist, path);
  const std::string text = slurp(path);
  std::remove(path.c_str());
  CHECK(text.rfind("bin_left,bin_right,count\n", 0) == 0);
  // header plus one line per bin
  std::size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == hist.size() + 1);
}

}  // TEST_SUITE
