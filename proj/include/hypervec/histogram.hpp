#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hypervec {

struct HistogramRow {
  double left;
  double right;
  std::uint64_t count;
};

// Equal-width histogram over [min(values), max(values)]. A degenerate range
// (all values equal) widens to [v, v+1] so every value lands in one bin.
// The maximum lands in the last bin.
std::vector<HistogramRow> make_histogram(std::span<const double> values, int bins);

// True when the global-maximum bin is unique and not the first or last bin.
bool has_unique_interior_mode(const std::vector<HistogramRow>& hist);

// Standardized third moment of the raw values.
double sample_skewness(std::span<const double> values);

// CSV with header "bin_left,bin_right,count".
void save_histogram_csv(const std::vector<HistogramRow>& hist, const std::string& path);

}  // namespace hypervec
