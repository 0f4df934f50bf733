#pragma once

// Geometry of K = [0,inf)^2 and Khat = [0,inf) x N: homogeneous norm,
// dilations, the measures m_alpha and gamma_alpha, and the quadrature grids
// that discretize them.

#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lbharm/quadrature.hpp"
#include "lbharm/specfun.hpp"

namespace lbharm {

struct SpacePoint {
  double x = 0.0;
  double t = 0.0;
};

struct FreqPoint {
  double lambda = 0.0;
  int m = 0;
};

/// A function on K given in closed form, so it can be resampled on any grid.
using SpaceFunction = std::function<double(double x, double t)>;

/// |(x,t)| = (x^4 + 4t^2)^{1/4}.
double homogeneous_norm(const SpacePoint& p);
double homogeneous_norm(double x, double t);

/// delta_r(x,t) = (r x, r^2 t).
SpacePoint dilate(double r, const SpacePoint& p);

/// f_r(x,t) = r^{-(6 alpha + 4)} f(x/r, t/r^2).
SpaceFunction dilate_normalized(const AlphaContext& ctx, double r, SpaceFunction f);

/// Density of m_alpha with respect to dx dt.
double m_alpha_density(const AlphaContext& ctx, double x, double t);

// ---------------------------------------------------------------------------
// Space side

struct SpaceGridSpec {
  double x_max = 12.0;
  double t_max = 12.0;
  int panels_x = 8;
  int panels_t = 8;
  int nodes_per_panel = 16;
  // Geometric panels: the first has width graded_first_width and each next
  // one is graded_ratio times wider, up to x_max / t_max.
  bool graded = false;
  double graded_first_width = 0.25;
  double graded_ratio = 1.2;

  friend bool operator==(const SpaceGridSpec&, const SpaceGridSpec&) = default;
};

/// Tensor-product Gauss-Legendre grid. weights(i, j) is the quadrature weight
/// of (x_i, t_j) times the m_alpha density there.
class SpaceGrid {
 public:
  SpaceGrid(const AlphaContext& ctx, const SpaceGridSpec& spec);

  const AlphaContext& context() const noexcept { return ctx_; }
  const SpaceGridSpec& spec() const noexcept { return spec_; }
  const Eigen::VectorXd& x_nodes() const noexcept { return x_.nodes; }
  const Eigen::VectorXd& t_nodes() const noexcept { return t_.nodes; }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  Eigen::Index nx() const noexcept { return x_.size(); }
  Eigen::Index nt() const noexcept { return t_.size(); }
  Eigen::Index size() const noexcept { return nx() * nt(); }

  /// Radius of the largest homogeneous ball contained in the grid box.
  double inscribed_radius() const;

  /// Short text identifier of the grid parameters.
  std::string id() const;

  /// Samples of f on the grid, one row per x node.
  Eigen::MatrixXd sample(const SpaceFunction& f) const;

 private:
  AlphaContext ctx_;
  SpaceGridSpec spec_;
  QuadratureRule x_;
  QuadratureRule t_;
  Eigen::MatrixXd weights_;
};

std::shared_ptr<const SpaceGrid> build_space_grid(const AlphaContext& ctx, double x_max,
                                                  double t_max, int panels_x, int panels_t,
                                                  int nodes_per_panel);
std::shared_ptr<const SpaceGrid> build_space_grid(const AlphaContext& ctx,
                                                  const SpaceGridSpec& spec);

struct SampledFunction {
  std::shared_ptr<const SpaceGrid> grid;
  Eigen::MatrixXd values;

  SampledFunction() = default;
  SampledFunction(std::shared_ptr<const SpaceGrid> g, Eigen::MatrixXd v);

  static SampledFunction sample(std::shared_ptr<const SpaceGrid> g, const SpaceFunction& f);
};

double integrate_space(const SampledFunction& f);
double lp_norm_space(const SampledFunction& f, double p);
double inner_product_space(const SampledFunction& f, const SampledFunction& g);

// ---------------------------------------------------------------------------
// Spectral side

/// Normalization constant of gamma_alpha.
///   paper:      1 / (2^{2 alpha - 1} Gamma(alpha + 1/2))
///   plancherel: 4 pi / (4^alpha Gamma(alpha + 1/2)^2)
/// Only the second makes F_LB an isometry for the kernel and m_alpha used
/// here; both are kept so the literal constant can still be evaluated.
enum class GammaNorm { plancherel, paper };

double gamma_prefactor(const AlphaContext& ctx, GammaNorm norm);
std::string to_string(GammaNorm norm);
GammaNorm parse_gamma_norm(const std::string& name);

struct SpectralGridSpec {
  double lambda_max = 12.0;
  // Row m only extends to min(lambda_max, mu_max / (2m + alpha + 1)); the
  // eigenvalue of L is 2 lambda (2m + alpha + 1), so this bounds it by 2 mu_max.
  double mu_max = 48.0;
  int m_max = 32;
  int panels = 8;
  int nodes_per_panel = 16;
  // Indices m > m_max are grouped into geometrically growing blocks plus one
  // block reaching to infinity. Each block is one row evaluated at a
  // representative index, weighted by the block's sum of L_m(0)/(2m+alpha+1)^{3alpha+2}.
  bool m_tail = true;
  double tail_ratio = 1.15;
  double tail_extent = 8.0;
  GammaNorm norm = GammaNorm::plancherel;

  friend bool operator==(const SpectralGridSpec&, const SpectralGridSpec&) = default;
};

/// One Laguerre index (or block of indices) of a spectral grid.
struct SpectralRow {
  int m = 0;          // index at which the kernel and eigenvalue are evaluated
  int m_first = 0;    // block [m_first, m_last]; m_last = -1 means unbounded
  int m_last = 0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  Eigen::Index offset = 0;
  Eigen::Index count = 0;
};

/// Nodes (lambda, m) with gamma_alpha quadrature weights, stored row by row.
class SpectralGrid {
 public:
  SpectralGrid(const AlphaContext& ctx, std::vector<SpectralRow> rows,
               const Eigen::VectorXd& lambda, const Eigen::VectorXd& weights, GammaNorm norm,
               std::string id);

  const AlphaContext& context() const noexcept { return ctx_; }
  const std::vector<SpectralRow>& rows() const noexcept { return rows_; }
  const Eigen::VectorXd& lambda() const noexcept { return lambda_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  /// Representative Laguerre index of every node.
  const Eigen::VectorXi& m_index() const noexcept { return m_; }
  GammaNorm norm() const noexcept { return norm_; }
  Eigen::Index size() const noexcept { return lambda_.size(); }
  const std::string& id() const noexcept { return id_; }

  Eigen::VectorXd sample(const std::function<double(double lambda, int m)>& g) const;

 private:
  AlphaContext ctx_;
  std::vector<SpectralRow> rows_;
  Eigen::VectorXd lambda_;
  Eigen::VectorXd weights_;
  Eigen::VectorXi m_;
  GammaNorm norm_;
  std::string id_;
};

std::shared_ptr<const SpectralGrid> build_spectral_grid(const AlphaContext& ctx,
                                                        const SpectralGridSpec& spec);
std::shared_ptr<const SpectralGrid> build_spectral_grid(const AlphaContext& ctx,
                                                        double lambda_max, int m_max,
                                                        int panels, int nodes_per_panel);

/// E = [lambda_lo, lambda_hi] x m_set.
struct SpectralSet {
  double lambda_lo = 0.0;
  double lambda_hi = 1.0;
  std::set<int> m_set;

  void validate() const;
};

/// Exact-index grid covering only E, for E-restricted norms.
std::shared_ptr<const SpectralGrid> build_set_grid(const AlphaContext& ctx,
                                                   const SpectralSet& set, GammaNorm norm,
                                                   int panels = 4, int nodes_per_panel = 16);

struct SpectralFunction {
  std::shared_ptr<const SpectralGrid> grid;
  Eigen::VectorXd values;

  SpectralFunction() = default;
  SpectralFunction(std::shared_ptr<const SpectralGrid> g, Eigen::VectorXd v);
};

double integrate_spectral(const SpectralFunction& g);
double lp_norm_spectral(const SpectralFunction& g, double p);
double inner_product_spectral(const SpectralFunction& f, const SpectralFunction& g);

/// Sum over m >= m_first of L_m^alpha(0) / (2m + alpha + 1)^{3 alpha + 2}.
double laguerre_tail_sum(double alpha, int m_first);

double gamma_measure_of_set(const AlphaContext& ctx, const SpectralSet& set,
                            GammaNorm norm = GammaNorm::paper);

// ---------------------------------------------------------------------------
// Moments of the homogeneous norm

/// B((alpha+1)/2, (2alpha+1)/2) / (4^{alpha+1} pi Gamma(alpha+1)), the block
/// multiplying every ball moment as displayed in the paper.
double beta_block(const AlphaContext& ctx);

struct BallMoment {
  double oracle = 0.0;
  double paper = 0.0;
  double ratio() const { return oracle / paper; }
};

/// int_{B_r} |(x,t)|^{-2a} dm_alpha, by nested tanh-sinh quadrature in the
/// coordinates x^2 = rho cos(theta), t = (rho/2) sin(theta), together with the
/// paper's closed form.
BallMoment ball_moment(const AlphaContext& ctx, double a, double r);

/// int_K F(|(x,t)|) chi_{|(x,t)| < r_max} dm_alpha by nested tanh-sinh in the
/// same coordinates as ball_moment; r_max may be infinite.
double radial_integral(const AlphaContext& ctx, const std::function<double(double)>& F,
                       double r_max = std::numeric_limits<double>::infinity());

/// int_{|(x,t)| > R} |(x,t)|^{-q} dm_alpha in closed form (q > 6 alpha + 4).
double tail_moment(const AlphaContext& ctx, double q, double radius);

}  // namespace lbharm
