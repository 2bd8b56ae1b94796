#pragma once

// Narrowband clustered mmWave channel with ULA arrays, its SVD, and the
// fully digital (water-filled) reference precoder.

#include "hybridbeam/types.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace hybridbeam {

struct ArrayGeometry {
  int num_elements = 1;
  double element_spacing = 0.5;  // wavelengths

  void validate() const {
    if (num_elements < 1) throw std::invalid_argument("ArrayGeometry: num_elements must be >= 1");
    if (!(element_spacing > 0.0)) throw std::invalid_argument("ArrayGeometry: element_spacing must be > 0");
  }
};

struct ClusterParams {
  int num_clusters = 2;
  int rays_per_cluster = 3;
  std::vector<double> cluster_power;  // per cluster; empty means unit power for all
  double angular_spread = 0.1745;     // Laplacian scale about the cluster mean, radians

  double power_of(int cluster) const { return cluster_power.empty() ? 1.0 : cluster_power.at(cluster); }

  void validate() const {
    if (num_clusters < 1 || rays_per_cluster < 1) throw std::invalid_argument("ClusterParams: counts must be >= 1");
    if (!cluster_power.empty() && int(cluster_power.size()) != num_clusters)
      throw std::invalid_argument("ClusterParams: cluster_power needs one entry per cluster");
    for (double p : cluster_power)
      if (!(p > 0.0)) throw std::invalid_argument("ClusterParams: cluster powers must be > 0");
    if (!(angular_spread > 0.0)) throw std::invalid_argument("ClusterParams: angular_spread must be > 0");
  }
};

template <typename Real>
struct Ray {
  std::complex<Real> gain;
  Real aod;
  Real aoa;
};

/// Thin SVD M = U diag(s) V^H with s descending.
template <typename Real>
struct SvdCache {
  CMatrix<Real> u;
  RVector<Real> s;
  CMatrix<Real> v;

  /// Number of singular values above max(rows, cols) * eps * s_max.
  Eigen::Index rank() const {
    if (s.size() == 0 || s[0] <= Real(0)) return 0;
    const Real tol = Real(std::max(u.rows(), v.rows())) * std::numeric_limits<Real>::epsilon() * s[0];
    return (s.array() > tol).count();
  }
};

template <typename Real>
SvdCache<Real> thin_svd(const CMatrix<Real>& m) {
  Eigen::JacobiSVD<CMatrix<Real>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

template <typename Real>
struct ChannelRealization {
  CMatrix<Real> h;  // N_R x N_T
  std::vector<Ray<Real>> rays;
  SvdCache<Real> svd;
};

/// Unit-norm ULA response: entry k = exp(j 2 pi spacing k sin(angle)) / sqrt(N).
template <typename Real = double>
CVector<Real> array_response(const ArrayGeometry& geometry, Real angle) {
  geometry.validate();
  const int n = geometry.num_elements;
  const Real phase_step = Real(2) * std::numbers::pi_v<Real> * Real(geometry.element_spacing) * std::sin(angle);
  const Real scale = Real(1) / std::sqrt(Real(n));
  CVector<Real> a(n);
  for (int k = 0; k < n; ++k) a[k] = std::polar(scale, phase_step * Real(k));
  return a;
}

/// H = sqrt(N_T N_R / (N_cl N_ray)) sum alpha a_R(aoa) a_T(aod)^H, with the SVD cache filled.
template <typename Real = double>
ChannelRealization<Real> assemble_channel(const ArrayGeometry& tx, const ArrayGeometry& rx,
                                          const ClusterParams& clusters, std::vector<Ray<Real>> rays) {
  const Real scale = std::sqrt(Real(tx.num_elements) * Real(rx.num_elements) /
                               Real(clusters.num_clusters * clusters.rays_per_cluster));
  CMatrix<Real> h = CMatrix<Real>::Zero(rx.num_elements, tx.num_elements);
  for (const auto& ray : rays)
    h.noalias() += ray.gain * array_response<Real>(rx, ray.aoa) * array_response<Real>(tx, ray.aod).adjoint();
  h *= scale;
  ChannelRealization<Real> out{std::move(h), std::move(rays), {}};
  out.svd = thin_svd(out.h);
  return out;
}

template <typename Real, typename Rng>
Real sample_laplace(Rng& rng, Real scale) {
  std::uniform_real_distribution<Real> uni(Real(-0.5), Real(0.5));
  const Real u = uni(rng);
  const Real mag = std::max(Real(1) - Real(2) * std::abs(u), std::numeric_limits<Real>::min());
  return -scale * std::copysign(std::log(mag), u);
}

template <typename Real, typename Rng>
std::complex<Real> sample_complex_normal(Rng& rng, Real variance) {
  std::normal_distribution<Real> normal(Real(0), std::sqrt(variance / Real(2)));
  const Real re = normal(rng);
  const Real im = normal(rng);
  return {re, im};
}

template <typename Real = double, typename Rng>
ChannelRealization<Real> draw_channel(Rng& rng, const ArrayGeometry& tx, const ArrayGeometry& rx,
                                      const ClusterParams& clusters) {
  tx.validate();
  rx.validate();
  clusters.validate();
  std::uniform_real_distribution<Real> mean_angle(Real(0), Real(2) * std::numbers::pi_v<Real>);
  const Real spread = Real(clusters.angular_spread);
  std::vector<Ray<Real>> rays;
  rays.reserve(std::size_t(clusters.num_clusters * clusters.rays_per_cluster));
  for (int i = 0; i < clusters.num_clusters; ++i) {
    const Real mean_aod = mean_angle(rng);
    const Real mean_aoa = mean_angle(rng);
    for (int l = 0; l < clusters.rays_per_cluster; ++l) {
      Ray<Real> ray;
      ray.gain = sample_complex_normal<Real>(rng, Real(clusters.power_of(i)));
      ray.aod = mean_aod + sample_laplace<Real>(rng, spread);
      ray.aoa = mean_aoa + sample_laplace<Real>(rng, spread);
      rays.push_back(ray);
    }
  }
  return assemble_channel<Real>(tx, rx, clusters, std::move(rays));
}

/// Water-filling over eigenmodes: p_i = max(0, mu - noise_var / s_i^2) with sum p = budget.
template <typename Derived>
auto waterfill(const Eigen::MatrixBase<Derived>& singular_values, typename Derived::Scalar noise_var,
               typename Derived::Scalar budget) {
  using Real = typename Derived::Scalar;
  if (!(noise_var > Real(0)) || !(budget > Real(0)))
    throw std::invalid_argument("waterfill: noise variance and budget must be > 0");
  const Eigen::Index n = singular_values.size();
  std::vector<Eigen::Index> active;
  RVector<Real> floor_level(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real s2 = singular_values[i] * singular_values[i];
    floor_level[i] = s2 > Real(0) ? noise_var / s2 : std::numeric_limits<Real>::infinity();
    if (s2 > Real(0)) active.push_back(i);
  }
  if (active.empty()) throw DegenerateError("waterfill: degenerate channel");
  std::sort(active.begin(), active.end(),
            [&](Eigen::Index a, Eigen::Index b) { return floor_level[a] < floor_level[b]; });

  // Drop the weakest mode while it sits above the water level.
  Real level = 0;
  std::size_t k = active.size();
  for (; k > 0; --k) {
    Real sum = 0;
    for (std::size_t j = 0; j < k; ++j) sum += floor_level[active[j]];
    level = (budget + sum) / Real(k);
    if (level > floor_level[active[k - 1]]) break;
  }
  RVector<Real> p = RVector<Real>::Zero(n);
  for (std::size_t j = 0; j < k; ++j) p[active[j]] = level - floor_level[active[j]];
  return p;
}

template <typename Real>
struct DigitalReference {
  CMatrix<Real> f_dbf;  // N_T x N_s
  RVector<Real> waterfill_powers;
};

/// F_DBF = V_{:, 1:N_s} diag(p)^{1/2}.
template <typename Real>
DigitalReference<Real> digital_references(const ChannelRealization<Real>& ch, int num_streams, Real noise_var,
                                          Real budget) {
  if (num_streams < 1) throw std::invalid_argument("digital_references: need at least one stream");
  if (num_streams > ch.svd.rank())
    throw DegenerateError("digital_references: more streams than the channel rank");
  const RVector<Real> p = waterfill(ch.svd.s.head(num_streams), noise_var, budget);
  DigitalReference<Real> out;
  out.f_dbf = ch.svd.v.leftCols(num_streams) * p.cwiseSqrt().asDiagonal();
  out.waterfill_powers = p;
  return out;
}

}  // namespace hybridbeam
