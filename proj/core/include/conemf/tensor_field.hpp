#pragma once

#include "conemf/chart.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>

namespace conemf::tensor {

using Vec3 = Eigen::Vector3d;
using MetricFn = std::function<Eigen::Matrix3d(const Vec3&)>;

/// Dense covariant tensor of rank <= 4 over a 3-dimensional chart. The
/// Christoffel array reuses this container with index layout (upper, lower,
/// lower); the curvature tensor is fully covariant with layout chosen so
/// that constant-curvature charts give R_ijkl = kappa (g_ik g_jl - g_il g_jk).
class Ten {
  public:
    Ten() = default;
    explicit Ten(int rank) : rank_(rank) { data_.fill(0.0); }

    int rank() const { return rank_; }
    double& at(int i, int j = 0, int k = 0, int l = 0) { return data_[std::size_t(idx(i, j, k, l))]; }
    double at(int i, int j = 0, int k = 0, int l = 0) const { return data_[std::size_t(idx(i, j, k, l))]; }

    Ten& operator+=(const Ten& o);
    Ten& operator-=(const Ten& o);
    Ten& operator*=(double s);
    friend Ten operator+(Ten a, const Ten& b) { return a += b; }
    friend Ten operator-(Ten a, const Ten& b) { return a -= b; }
    friend Ten operator*(double s, Ten a) { return a *= s; }

    double max_abs() const;
    int size() const;

  private:
    int idx(int i, int j, int k, int l) const { return ((i * 3 + j) * 3 + k) * 3 + l; }

    int rank_ = 0;
    std::array<double, 81> data_{};
};

using TenFn = std::function<Ten(const Vec3&)>;

/// Grid- or closure-backed tensor field on a model chart.
struct ChartTensorField {
    ModelChart chart;
    int rank = 0;
    TenFn fn;
    std::string provenance;
};

Ten from_matrix(const Eigen::Matrix3d& m);
Eigen::Matrix3d to_matrix(const Ten& t);

/// Christoffel symbols Gamma^k_{ij} (layout k, i, j) by O(h^2) central
/// differences of the metric.
Ten christoffel(const MetricFn& g, const Vec3& x, double h);

/// Chart-facing variant; throws std::domain_error when the stencil leaves
/// the chart box.
Ten christoffel(const ModelChart& chart, const Vec3& x, double h = 1e-3);

/// Covariant derivative of a rank-r field: result rank r+1, derivative slot
/// first.
TenFn covariant_derivative(const MetricFn& g, const TenFn& T, int rank, double h);

/// Fully covariant curvature tensor R_ijkl(layout above), O(h^2).
Ten curvature_tensor(const MetricFn& g, const Vec3& x, double h);
Ten curvature_tensor(const ModelChart& chart, const Vec3& x, double h = 1e-3);

Eigen::Matrix3d ricci(const MetricFn& g, const Vec3& x, double h);

/// Pointwise norm induced by g on covariant tensors (orthonormal-frame norm).
double frame_norm(const Eigen::Matrix3d& g, const Ten& t);

} // namespace conemf::tensor
