#include "hypervec/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "hypervec/errors.hpp"

namespace hypervec {

std::vector<HistogramRow> make_histogram(std::span<const double> values, int bins) {
  if (bins < 2) throw std::invalid_argument("histogram needs at least 2 bins");
  if (values.empty()) throw std::invalid_argument("histogram of empty value set");
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) hi = lo + 1.0;
  const double width = (hi - lo) / bins;
  std::vector<HistogramRow> rows(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b)
    rows[b] = {lo + b * width, lo + (b + 1) * width, 0};
  rows.back().right = hi;
  for (double v : values) {
    auto b = static_cast<std::int64_t>((v - lo) / width);
    b = std::clamp<std::int64_t>(b, 0, bins - 1);
    ++rows[static_cast<std::size_t>(b)].count;
  }
  return rows;
}

bool has_unique_interior_mode(const std::vector<HistogramRow>& hist) {
  std::size_t arg = 0;
  std::uint64_t best = 0;
  int ties = 0;
  for (std::size_t b = 0; b < hist.size(); ++b) {
    if (hist[b].count > best) {
      best = hist[b].count;
      arg = b;
      ties = 1;
    } else if (hist[b].count == best) {
      ++ties;
    }
  }
  return ties == 1 && arg > 0 && arg + 1 < hist.size();
}

double sample_skewness(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  if (values.size() < 3) throw std::invalid_argument("skewness needs >= 3 values");
  double mean = 0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0, m3 = 0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 <= 0) throw std::invalid_argument("skewness of constant values");
  return m3 / std::pow(m2, 1.5);
}

void save_histogram_csv(const std::vector<HistogramRow>& hist, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write histogram: " + path);
  out << "bin_left,bin_right,count\n";
  out.precision(17);
  for (const auto& row : hist)
    out << row.left << ',' << row.right << ',' << row.count << '\n';
  if (!out) throw DataError("failed writing histogram: " + path);
}

}  // namespace hypervec
