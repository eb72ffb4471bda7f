#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hypervec/histogram.hpp"

namespace hypervec::hyperbolic {

// Disk of the native model at curvature -1: radius R, radial density
// rho(r) = alpha sinh(alpha r) / (cosh(alpha R) - 1).
struct DiskConfig {
  double R = 0.0;
  double alpha = 1.0;
};

struct PolarPoint {
  double r = 0.0;      // hyperbolic distance from the origin, in [0, R]
  double theta = 0.0;  // angle in [0, 2pi)
};

struct RhgParams {
  std::uint32_t n = 0;
  double kbar = 10.0;   // target average degree, 0 < kbar < n-1
  double gamma = 2.5;   // target degree-distribution tail exponent, > 2
  std::uint64_t seed = 0;
};

struct Rhg {
  DiskConfig config;
  std::vector<PolarPoint> points;
  bool has_edges = false;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // i < j
};

// Law of cosines at curvature -1; the acosh argument is clamped to >= 1 to
// absorb roundoff for near-coincident points.
double hyperbolic_distance(const PolarPoint& p, const PolarPoint& q);

// Exact inverse CDF of rho: r = acosh(1 + u (cosh(alpha R) - 1)) / alpha.
double sample_radius(const DiskConfig& config, double u);

// theta ~ U[0, 2pi), r via sample_radius; per-point substreams keyed by
// index so the result is seed-deterministic under any thread count.
std::vector<PolarPoint> sample_points(const DiskConfig& config, std::uint32_t n,
                                      std::uint64_t seed);

// sigma(R - x): the connection probability. Equals 1/2 at x = R.
double edge_probability(double x, double R);

// alpha = (gamma - 1) / 2; R solves (n-1) E[sigma(R - X)] = kbar with the
// expectation taken over two rho-distributed radii and a uniform angle.
// Throws ConvergenceError when no root is bracketed in (0, 40].
DiskConfig calibrate(const RhgParams& params);

// Expected edge probability between two random points of the disk: radial
// Gauss-Legendre nodes with the density as weight, angular integral on
// octave-graded panels so the sigma transition is resolved at any R.
// `nodes` is the per-dimension radial count. Exposed for tests.
double mean_edge_probability(const DiskConfig& config, int nodes = 64);

// Points via sample_points, then each unordered pair realized independently
// with probability sigma(R - x_ij) using a counter-based draw per pair.
Rhg generate_rhg(const RhgParams& params);

// Matrix-free symmetric operator B_ij = sigma(R - x_ij), B_ii = sigma(R).
// apply() computes Y = B X from the coordinates without materializing B;
// each output row is accumulated in a fixed column-tile order, so results
// are bit-identical for any thread count.
class ConnectionOperator {
 public:
  ConnectionOperator(const std::vector<PolarPoint>& points, double R);

  Eigen::Index dim() const { return n_; }
  double entry(Eigen::Index i, Eigen::Index j) const;
  void apply(const Eigen::MatrixXd& X, Eigen::MatrixXd& Y) const;

 private:
  Eigen::Index n_;
  double exp_neg_R_;
  Eigen::VectorXd cosh_r_, sinh_r_, cos_t_, sin_t_;
};

// Distribution of the distance X between two random points of the disk.
// density() integrates the conditional-angle form over the admissible
// (r1, r2) region; the inverse-square-root boundary singularity is removed
// by an arcsine substitution in the inner variable.
class DistancePdf {
 public:
  struct Quadrature {
    int outer = 128;  // Gauss-Legendre nodes per outer segment
    int inner = 128;  // Gauss-Legendre nodes for the substituted inner integral
  };

  explicit DistancePdf(const DiskConfig& config);
  DistancePdf(const DiskConfig& config, Quadrature quad);

  double density(double x) const;  // f_X(x); throws std::domain_error for x <= 0

  // f_X evaluated on a uniform grid over (0, 2R]; also used for the CDF.
  struct Curve {
    std::vector<double> x;
    std::vector<double> pdf;
    std::vector<double> cdf;  // trapezoid-integrated, cdf.back() ~ 1
  };
  Curve curve(int grid_points = 1024) const;

  double normalization(int grid_points = 1024) const;

  const DiskConfig& config() const { return config_; }

 private:
  DiskConfig config_;
  Quadrature quad_;
  std::vector<double> outer_nodes_, outer_weights_;  // on [-1, 1]
  std::vector<double> inner_nodes_, inner_weights_;
};

// Histogram of R - x over independently sampled point pairs.
std::vector<HistogramRow> r_minus_x_histogram(const DiskConfig& config,
                                              std::uint64_t samples,
                                              std::uint64_t seed, int bins = 60);
// The raw R - x draws behind the histogram (for skewness/KS checks).
std::vector<double> sample_r_minus_x(const DiskConfig& config,
                                     std::uint64_t samples, std::uint64_t seed);

struct GraphStats {
  double mean_degree = 0.0;
  std::vector<std::uint64_t> degree_histogram;  // index = degree
  double tail_exponent = 0.0;                   // MLE power-law fit
  std::uint32_t tail_kmin = 0;                  // cutoff chosen by KS scan
  double mean_clustering = 0.0;                 // over nodes with degree >= 2
};

GraphStats graph_stats(const Rhg& g);

// Discrete MLE gamma_hat = 1 + m / sum log(k_i / (kmin - 0.5)) with kmin
// chosen to minimize the tail KS distance (Clauset-Shalizi-Newman style).
std::pair<double, std::uint32_t> fit_power_law_tail(
    const std::vector<std::uint32_t>& degrees, std::uint32_t min_tail = 25);

// Points: header "n R alpha seed", then "id r theta" rows (1-based ids).
void save_points(const Rhg& g, std::uint64_t seed, const std::string& path);
Rhg load_points(const std::string& path);
// Edges: "i j" rows, 1-based, i < j.
void save_edges(const Rhg& g, const std::string& path);
void load_edges(Rhg& g, const std::string& path);

}  // namespace hypervec::hyperbolic
