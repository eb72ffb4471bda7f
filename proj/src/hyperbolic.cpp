#include "hypervec/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hypervec/errors.hpp"
#include "hypervec/parallel.hpp"
#include "hypervec/rng.hpp"

namespace hypervec::hyperbolic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxRadius = 40.0;

void check_config(const DiskConfig& c) {
  if (!(c.R > 0) || !(c.alpha > 0))
    throw std::invalid_argument("disk requires R > 0 and alpha > 0");
}

// Gauss-Legendre nodes and weights on [-1, 1], Newton on the recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

// cosh of the distance between (r1, t1) and (r2, t2) given precomputed parts.
inline double cosh_distance(double cr1, double sr1, double cr2, double sr2,
                            double cos_dt) {
  return std::max(1.0, cr1 * cr2 - sr1 * sr2 * cos_dt);
}

// sigma(R - x) from a = cosh x, avoiding acosh/exp in hot loops:
// e^x = a + sqrt(a^2 - 1), so sigma(R - x) = 1 / (1 + e^-R e^x).
inline double sigma_from_cosh(double a, double exp_neg_R) {
  return 1.0 / (1.0 + exp_neg_R * (a + std::sqrt(a * a - 1.0)));
}

}  // namespace

double hyperbolic_distance(const PolarPoint& p, const PolarPoint& q) {
  const double a = cosh_distance(std::cosh(p.r), std::sinh(p.r), std::cosh(q.r),
                                 std::sinh(q.r), std::cos(p.theta - q.theta));
  return std::acosh(a);
}

double sample_radius(const DiskConfig& config, double u) {
  check_config(config);
  if (u < 0 || u > 1) throw std::invalid_argument("quantile must be in [0, 1]");
  const double half = std::sinh(config.alpha * config.R / 2);
  const double denom = 2 * half * half;  // cosh(alpha R) - 1, no cancellation
  return std::acosh(1.0 + u * denom) / config.alpha;
}

std::vector<PolarPoint> sample_points(const DiskConfig& config, std::uint32_t n,
                                      std::uint64_t seed) {
  check_config(config);
  const std::uint64_t root = substream(seed, "rhg-points");
  std::vector<PolarPoint> pts(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    SplitMix64 rng(mix64(root, i));
    pts[i].r = sample_radius(config, rng.u01());
    pts[i].theta = 2 * kPi * rng.u01();
  }
  return pts;
}

double edge_probability(double x, double R) {
  const double t = R - x;
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double mean_edge_probability(const DiskConfig& config, int nodes) {
  check_config(config);
  std::vector<double> gl_x, gl_w;
  gauss_legendre(nodes, gl_x, gl_w);

  // Radial nodes directly in r with the density as weight: the integrand's
  // features (the density ramp and the sigma ridge along r + r' ~ R) live on
  // an O(1) length scale there, where CDF space squeezes them into a corner.
  const double half_aR = std::sinh(0.5 * config.alpha * config.R);
  const double density_norm = 2.0 * half_aR * half_aR;  // cosh(alpha R) - 1
  std::vector<double> cr(nodes), sr(nodes), wr(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double r = 0.5 * config.R * (gl_x[i] + 1.0);
    cr[i] = std::cosh(r);
    sr[i] = std::sinh(r);
    wr[i] = 0.5 * config.R * gl_w[i] * config.alpha *
            std::sinh(config.alpha * r) / density_norm;
  }

  // The angular integrand sigma(R - d(theta)) flattens below a pair-dependent
  // scale theta* ~ 2 e^{(R - r - r')/2} and decays polynomially above it, so
  // any fixed rule on [0, pi] misses the transition once R is large. Geometric
  // octaves resolve every scale at bounded cost; cosines are shared across
  // radial pairs.
  constexpr int kOctaves = 52;  // down to pi * 2^-52, below double resolution
  std::vector<double> gl8_x, gl8_w;
  gauss_legendre(8, gl8_x, gl8_w);
  std::vector<double> pc(kOctaves * 8), pw(kOctaves * 8), plo(kOctaves);
  {
    double hi = kPi;
    for (int oct = 0; oct < kOctaves; ++oct) {
      const double lo = 0.5 * hi;
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int k = 0; k < 8; ++k) {
        pc[oct * 8 + k] = std::cos(mid + half * gl8_x[k]);
        pw[oct * 8 + k] = half * gl8_w[k];
      }
      plo[oct] = lo;
      hi = lo;
    }
  }

  const double exp_neg_R = std::exp(-config.R);
  double total = 0;
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double cc = cr[i] * cr[j];
      const double ss = sr[i] * sr[j];
      const double sigma_flat = sigma_from_cosh(std::max(1.0, cc - ss), exp_neg_R);
      double inner = 0;
      double lo = kPi;
      for (int oct = 0; oct < kOctaves; ++oct) {
        for (int k = 0; k < 8; ++k)
          inner += pw[oct * 8 + k] *
                   sigma_from_cosh(std::max(1.0, cc - ss * pc[oct * 8 + k]), exp_neg_R);
        lo = plo[oct];
        // Below the flat scale the integrand is sigma at theta = 0.
        if (ss * lo * lo < 1e-14 * std::max(1.0, cc - ss)) break;
      }
      inner += lo * sigma_flat;
      total += (j == i ? 1.0 : 2.0) * wr[i] * wr[j] * inner / kPi;
    }
  }
  return total;
}

DiskConfig calibrate(const RhgParams& params) {
  if (params.n < 2) throw std::invalid_argument("rhg needs n >= 2");
  if (!(params.kbar > 0) || params.kbar >= params.n - 1)
    throw std::invalid_argument("rhg needs 0 < kbar < n - 1");
  if (!(params.gamma > 2)) throw std::invalid_argument("rhg needs gamma > 2");

  const double alpha = (params.gamma - 1.0) / 2.0;
  const auto gap = [&](double R) {
    return (params.n - 1) * mean_edge_probability({R, alpha}) - params.kbar;
  };

  // Mean degree decreases in R; walk until the sign flips, then bisect.
  const double tol = 0.01 * params.kbar;
  double lo = 0.25, g_lo = gap(lo);
  if (std::abs(g_lo) < tol) return {lo, alpha};
  if (g_lo < 0) throw ConvergenceError("target degree unreachable: disk too sparse at R=0.25");
  double hi = lo, g_hi = g_lo;
  while (g_hi > 0) {
    if (hi >= kMaxRadius)
      throw ConvergenceError("no radius in (0, 40] reaches the target degree");
    lo = hi;
    g_lo = g_hi;
    hi = std::min(kMaxRadius, hi + 1.0);
    g_hi = gap(hi);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = gap(mid);
    if (std::abs(g) < tol) return {mid, alpha};
    if (g > 0)
      lo = mid;
    else
      hi = mid;
  }
  throw ConvergenceError("degree calibration did not converge");
}

Rhg generate_rhg(const RhgParams& params) {
  Rhg g;
  g.config = calibrate(params);
  g.points = sample_points(g.config, params.n, params.seed);

  const std::uint32_t n = params.n;
  std::vector<double> cr(n), sr(n), ct(n), st(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    cr[i] = std::cosh(g.points[i].r);
    sr[i] = std::sinh(g.points[i].r);
    ct[i] = std::cos(g.points[i].theta);
    st[i] = std::sin(g.points[i].theta);
  }
  const double exp_neg_R = std::exp(-g.config.R);
  const std::uint64_t root = substream(params.seed, "rhg-edges");
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const double cos_dt = ct[i] * ct[j] + st[i] * st[j];
      const double a = cosh_distance(cr[i], sr[i], cr[j], sr[j], cos_dt);
      const double p = sigma_from_cosh(a, exp_neg_R);
      SplitMix64 rng(mix64(root, static_cast<std::uint64_t>(i) * n + j));
      if (rng.u01() < p) g.edges.emplace_back(i, j);
    }
  }
  g.has_edges = true;
  return g;
}

// ------------------------------------------------------ connection operator

ConnectionOperator::ConnectionOperator(const std::vector<PolarPoint>& points,
                                       double R)
    : n_(static_cast<Eigen::Index>(points.size())), exp_neg_R_(std::exp(-R)) {
  if (!(R > 0)) throw std::invalid_argument("connection operator needs R > 0");
  cosh_r_.resize(n_);
  sinh_r_.resize(n_);
  cos_t_.resize(n_);
  sin_t_.resize(n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    cosh_r_[i] = std::cosh(points[static_cast<std::size_t>(i)].r);
    sinh_r_[i] = std::sinh(points[static_cast<std::size_t>(i)].r);
    cos_t_[i] = std::cos(points[static_cast<std::size_t>(i)].theta);
    sin_t_[i] = std::sin(points[static_cast<std::size_t>(i)].theta);
  }
}

double ConnectionOperator::entry(Eigen::Index i, Eigen::Index j) const {
  if (i == j) return 1.0 / (1.0 + exp_neg_R_);
  const double cos_dt = cos_t_[i] * cos_t_[j] + sin_t_[i] * sin_t_[j];
  const double a = cosh_distance(cosh_r_[i], sinh_r_[i], cosh_r_[j], sinh_r_[j], cos_dt);
  return sigma_from_cosh(a, exp_neg_R_);
}

void ConnectionOperator::apply(const Eigen::MatrixXd& X, Eigen::MatrixXd& Y) const {
  if (X.rows() != n_) throw std::invalid_argument("operand row count mismatch");
  constexpr Eigen::Index kTile = 256;
  Y.resize(n_, X.cols());

  // Each worker owns whole row tiles and walks column tiles in ascending
  // order, so every output row accumulates in the same order regardless of
  // the thread count.
  parallel_chunks(0, n_, kTile, [&, this](std::int64_t lo, std::int64_t hi) {
    const Eigen::Index rows = hi - lo;
    Y.middleRows(lo, rows).setZero();
    Eigen::MatrixXd block;
    for (Eigen::Index jlo = 0; jlo < n_; jlo += kTile) {
      const Eigen::Index cols = std::min<Eigen::Index>(jlo + kTile, n_) - jlo;
      const auto ci = cosh_r_.segment(lo, rows), cj = cosh_r_.segment(jlo, cols);
      const auto si = sinh_r_.segment(lo, rows), sj = sinh_r_.segment(jlo, cols);
      block.noalias() = cos_t_.segment(lo, rows) * cos_t_.segment(jlo, cols).transpose();
      block.noalias() += sin_t_.segment(lo, rows) * sin_t_.segment(jlo, cols).transpose();
      block = ((ci * cj.transpose()) - (si * sj.transpose()).cwiseProduct(block))
                  .cwiseMax(1.0);
      block = (1.0 + exp_neg_R_ *
                         (block.array() + (block.array().square() - 1.0).sqrt()))
                  .inverse()
                  .matrix();
      for (Eigen::Index i = std::max(lo, jlo), end = std::min(hi, jlo + cols);
           i < end; ++i)
        block(i - lo, i - jlo) = 1.0 / (1.0 + exp_neg_R_);  // exact sigma(R)
      Y.middleRows(lo, rows).noalias() += block * X.middleRows(jlo, cols);
    }
  });
}

// ------------------------------------------------------------ distance pdf

DistancePdf::DistancePdf(const DiskConfig& config)
    : DistancePdf(config, Quadrature{}) {}

DistancePdf::DistancePdf(const DiskConfig& config, Quadrature quad)
    : config_(config), quad_(quad) {
  check_config(config);
  if (quad_.outer < 2 || quad_.inner < 2)
    throw std::invalid_argument("quadrature needs at least 2 nodes per axis");
  gauss_legendre(quad_.outer, outer_nodes_, outer_weights_);
  gauss_legendre(quad_.inner, inner_nodes_, inner_weights_);
}

double DistancePdf::density(double x) const {
  if (!(x > 0)) throw std::domain_error("distance density is defined for x > 0");
  const double R = config_.R;
  const double alpha = config_.alpha;
  if (x >= 2 * R) return 0.0;

  // rho(r) = alpha sinh(alpha r) / (cosh(alpha R) - 1)
  const double half = std::sinh(alpha * R / 2);
  const double rho_norm = alpha / (2 * half * half);

  // Conditional on (r1, r2) the angle is uniform, and with
  // s = (x + r1 + r2) / 2 the density in x is
  //   sinh x / (2 pi sqrt(sinh s sinh(s-r1) sinh(s-r2) sinh(s-x))).
  // One factor vanishes linearly at each inner endpoint; r2 = lo + w sin^2(phi)
  // turns the inverse square roots into bounded integrands.
  const double lo1 = std::max(0.0, x - R);
  std::vector<double> cuts = {lo1, R};
  if (x > lo1 && x < R) cuts.push_back(x);
  if (R - x > lo1 && R - x < R) cuts.push_back(R - x);
  std::sort(cuts.begin(), cuts.end());

  const double sinh_x = std::sinh(x);
  double total = 0;
  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const double a = cuts[seg], b = cuts[seg + 1];
    if (b - a <= 0) continue;
    for (int oi = 0; oi < quad_.outer; ++oi) {
      const double r1 = 0.5 * (a + b) + 0.5 * (b - a) * outer_nodes_[oi];
      const double w1 = 0.5 * (b - a) * outer_weights_[oi];
      const double lo2 = std::abs(x - r1);
      const double hi2 = std::min(R, x + r1);
      const double width = hi2 - lo2;
      if (width <= 0) continue;
      const bool upper_closes = x + r1 <= R;  // sinh(s - r2) vanishes at hi2

      double inner = 0;
      for (int ii = 0; ii < quad_.inner; ++ii) {
        const double phi = kPi / 4 * (inner_nodes_[ii] + 1.0);
        const double sin_phi = std::sin(phi), cos_phi = std::cos(phi);
        const double from_lo = width * sin_phi * sin_phi;
        const double r2 = lo2 + from_lo;
        const double t_s = 0.5 * (x + r1 + r2);
        // the factor that hits zero at the active endpoint, in exact form
        const double t_lo = 0.5 * from_lo;                        // s-x or s-r1
        const double t_sr1 = r1 > x ? t_lo : 0.5 * (x - r1 + r2);
        const double t_sx = r1 > x ? 0.5 * (r1 + r2 - x) : t_lo;
        const double t_sr2 =
            upper_closes ? 0.5 * width * cos_phi * cos_phi : 0.5 * (x + r1 - r2);
        const double prod = std::sinh(t_s) * std::sinh(t_sr1) *
                            std::sinh(t_sx) * std::sinh(t_sr2);
        const double rho2 = rho_norm * std::sinh(alpha * r2);
        const double jac = width * 2 * sin_phi * cos_phi * (kPi / 4);
        inner += inner_weights_[ii] * jac * rho2 / std::sqrt(prod);
      }
      total += w1 * rho_norm * std::sinh(alpha * r1) * inner;
    }
  }
  return total * sinh_x / (2 * kPi);
}

DistancePdf::Curve DistancePdf::curve(int grid_points) const {
  if (grid_points < 2) throw std::invalid_argument("curve needs >= 2 grid points");
  Curve c;
  c.x.resize(grid_points);
  c.pdf.resize(grid_points);
  c.cdf.resize(grid_points);
  const double dx = 2 * config_.R / grid_points;
  for (int g = 0; g < grid_points; ++g) c.x[g] = dx * (g + 1);

  parallel_chunks(0, grid_points, 64, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t g = lo; g < hi; ++g)
      c.pdf[static_cast<std::size_t>(g)] = density(c.x[static_cast<std::size_t>(g)]);
  });

  c.cdf[0] = 0.5 * c.pdf[0] * dx;  // f(0+) = 0
  for (int g = 1; g < grid_points; ++g)
    c.cdf[g] = c.cdf[g - 1] + 0.5 * (c.pdf[g - 1] + c.pdf[g]) * dx;
  return c;
}

double DistancePdf::normalization(int grid_points) const {
  return curve(grid_points).cdf.back();
}

// ----------------------------------------------------------- R - X samples

std::vector<double> sample_r_minus_x(const DiskConfig& config,
                                     std::uint64_t samples, std::uint64_t seed) {
  check_config(config);
  const std::uint64_t root = substream(seed, "rx-pairs");
  std::vector<double> out(samples);
  parallel_chunks(0, static_cast<std::int64_t>(samples), 1 << 16,
                  [&](std::int64_t lo, std::int64_t hi) {
                    for (std::int64_t s = lo; s < hi; ++s) {
                      SplitMix64 rng(mix64(root, static_cast<std::uint64_t>(s)));
                      const double r1 = sample_radius(config, rng.u01());
                      const double r2 = sample_radius(config, rng.u01());
                      const double dt = 2 * kPi * rng.u01();
                      const double a =
                          cosh_distance(std::cosh(r1), std::sinh(r1), std::cosh(r2),
                                        std::sinh(r2), std::cos(dt));
                      out[static_cast<std::size_t>(s)] = config.R - std::acosh(a);
                    }
                  });
  return out;
}

std::vector<HistogramRow> r_minus_x_histogram(const DiskConfig& config,
                                              std::uint64_t samples,
                                              std::uint64_t seed, int bins) {
  return make_histogram(sample_r_minus_x(config, samples, seed), bins);
}

// ------------------------------------------------------------- graph stats

std::pair<double, std::uint32_t> fit_power_law_tail(
    const std::vector<std::uint32_t>& degrees, std::uint32_t min_tail) {
  std::vector<std::uint32_t> ks;
  ks.reserve(degrees.size());
  for (std::uint32_t k : degrees)
    if (k >= 1) ks.push_back(k);
  if (ks.empty()) throw DataError("power-law fit needs positive degrees");
  std::sort(ks.begin(), ks.end());

  std::vector<std::uint32_t> uniq(ks);
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

  double best_ks = std::numeric_limits<double>::infinity();
  double best_gamma = 0;
  std::uint32_t best_kmin = uniq.front();
  bool found = false;

  for (std::uint32_t kmin : uniq) {
    const auto tail_begin =
        std::lower_bound(ks.begin(), ks.end(), kmin);
    const std::size_t m = static_cast<std::size_t>(ks.end() - tail_begin);
    if (m < min_tail) break;  // tails only shrink as kmin grows

    const double shift = kmin - 0.5;
    double log_sum = 0;
    for (auto it = tail_begin; it != ks.end(); ++it)
      log_sum += std::log(static_cast<double>(*it) / shift);
    if (log_sum <= 0) continue;
    const double gamma_hat = 1.0 + static_cast<double>(m) / log_sum;

    // KS distance between the empirical tail survival and the fitted one.
    double dist = 0;
    std::size_t seen = 0;
    for (auto it = tail_begin; it != ks.end();) {
      auto run = it;
      while (run != ks.end() && *run == *it) ++run;
      const double emp = static_cast<double>(m - seen) / m;  // P(K >= k)
      const double model = std::pow((*it - 0.5) / shift, 1.0 - gamma_hat);
      dist = std::max(dist, std::abs(emp - model));
      seen += static_cast<std::size_t>(run - it);
      it = run;
    }
    if (dist < best_ks) {
      best_ks = dist;
      best_gamma = gamma_hat;
      best_kmin = kmin;
      found = true;
    }
  }

  if (!found) {
    // Not enough mass for the scan; fit the whole positive-degree sample.
    const double shift = ks.front() - 0.5;
    double log_sum = 0;
    for (std::uint32_t k : ks) log_sum += std::log(k / shift);
    if (log_sum <= 0) throw DataError("degenerate degree sample");
    return {1.0 + static_cast<double>(ks.size()) / log_sum, ks.front()};
  }
  return {best_gamma, best_kmin};
}

GraphStats graph_stats(const Rhg& g) {
  if (!g.has_edges) throw std::invalid_argument("graph stats need realized edges");
  const std::uint32_t n = static_cast<std::uint32_t>(g.points.size());
  std::vector<std::uint32_t> degree(n, 0);
  for (auto [i, j] : g.edges) {
    ++degree[i];
    ++degree[j];
  }

  GraphStats stats;
  stats.mean_degree = n == 0 ? 0.0 : 2.0 * g.edges.size() / n;
  const std::uint32_t max_deg = degree.empty()
                                    ? 0
                                    : *std::max_element(degree.begin(), degree.end());
  stats.degree_histogram.assign(max_deg + 1, 0);
  for (std::uint32_t k : degree) ++stats.degree_histogram[k];
  std::tie(stats.tail_exponent, stats.tail_kmin) = fit_power_law_tail(degree);

  std::vector<std::vector<std::uint32_t>> adj(n);
  for (auto [i, j] : g.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  double coeff_sum = 0;
  std::uint64_t eligible = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto& nb = adj[v];
    if (nb.size() < 2) continue;
    std::uint64_t links = 0;
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        const auto& small = adj[nb[a]].size() < adj[nb[b]].size() ? adj[nb[a]] : adj[nb[b]];
        const std::uint32_t want = adj[nb[a]].size() < adj[nb[b]].size() ? nb[b] : nb[a];
        if (std::binary_search(small.begin(), small.end(), want)) ++links;
      }
    }
    coeff_sum += 2.0 * links / (nb.size() * (nb.size() - 1.0));
    ++eligible;
  }
  stats.mean_clustering = eligible == 0 ? 0.0 : coeff_sum / eligible;
  return stats;
}

// ---------------------------------------------------------------------- io

void save_points(const Rhg& g, std::uint64_t seed, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write points: " + path);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu %.17g %.17g %llu\n", g.points.size(),
                g.config.R, g.config.alpha,
                static_cast<unsigned long long>(seed));
  out << buf;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", i + 1, g.points[i].r,
                  g.points[i].theta);
    out << buf;
  }
  if (!out) throw DataError("failed writing points: " + path);
}

Rhg load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open points: " + path);
  std::string header;
  if (!std::getline(in, header)) throw DataError("empty points file: " + path);
  std::istringstream hs(header);
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Rhg g;
  if (!(hs >> n >> g.config.R >> g.config.alpha >> seed))
    throw DataError(path + ": bad header, expected \"n R alpha seed\"");
  g.points.resize(n);
  std::string line;
  std::size_t row = 0;
  while (row < n && std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t id = 0;
    PolarPoint p;
    if (!(ls >> id >> p.r >> p.theta) || id != row + 1)
      throw DataError(path + ": bad point row " + std::to_string(row + 1));
    g.points[row++] = p;
  }
  if (row != n) throw DataError(path + ": expected " + std::to_string(n) + " points");
  return g;
}

void save_edges(const Rhg& g, const std::string& path) {
  if (!g.has_edges) throw std::invalid_argument("no realized edges to save");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write edges: " + path);
  for (auto [i, j] : g.edges) out << (i + 1) << ' ' << (j + 1) << '\n';
  if (!out) throw DataError("failed writing edges: " + path);
}

void load_edges(Rhg& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edges: " + path);
  g.edges.clear();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::uint64_t i = 0, j = 0;
    if (!(ls >> i >> j) || i < 1 || j <= i || j > g.points.size())
      throw DataError(path + ":" + std::to_string(line_no) + ": bad edge");
    g.edges.emplace_back(static_cast<std::uint32_t>(i - 1),
                         static_cast<std::uint32_t>(j - 1));
  }
  g.has_edges = true;
}

}  // namespace hypervec::hyperbolic
