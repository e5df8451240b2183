#include "conemf/tensor_field.hpp"

#include <cmath>
#include <stdexcept>

namespace conemf::tensor {

namespace {

int pow3(int r) { return r == 0 ? 1 : 3 * pow3(r - 1); }

// multi-index helpers over the flat layout
void unflatten(int flat, int rank, std::array<int, 4>& idx)
{
    idx = {0, 0, 0, 0};
    for (int p = rank - 1; p >= 0; --p) {
        idx[std::size_t(p)] = flat % 3;
        flat /= 3;
    }
}

double& entry(Ten& t, const std::array<int, 4>& idx)
{
    return t.at(idx[0], idx[1], idx[2], idx[3]);
}

double entry(const Ten& t, const std::array<int, 4>& idx)
{
    return t.at(idx[0], idx[1], idx[2], idx[3]);
}

} // namespace

Ten& Ten::operator+=(const Ten& o)
{
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

Ten& Ten::operator-=(const Ten& o)
{
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

Ten& Ten::operator*=(double s)
{
    for (double& v : data_) v *= s;
    return *this;
}

int Ten::size() const { return pow3(rank_); }

double Ten::max_abs() const
{
    double m = 0.0;
    std::array<int, 4> idx{};
    for (int f = 0; f < size(); ++f) {
        unflatten(f, rank_, idx);
        m = std::max(m, std::abs(entry(*this, idx)));
    }
    return m;
}

Ten from_matrix(const Eigen::Matrix3d& m)
{
    Ten t(2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t.at(i, j) = m(i, j);
    return t;
}

Eigen::Matrix3d to_matrix(const Ten& t)
{
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = t.at(i, j);
    return m;
}

Ten christoffel(const MetricFn& g, const Vec3& x, double h)
{
    std::array<Eigen::Matrix3d, 3> dg;
    for (int d = 0; d < 3; ++d) {
        Vec3 xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        dg[std::size_t(d)] = (g(xp) - g(xm)) / (2.0 * h);
    }
    const Eigen::Matrix3d ginv = g(x).inverse();
    Ten gamma(3);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int l = 0; l < 3; ++l)
                    s += ginv(k, l) * (dg[std::size_t(i)](j, l) + dg[std::size_t(j)](i, l) -
                                       dg[std::size_t(l)](i, j));
                gamma.at(k, i, j) = 0.5 * s;
            }
    return gamma;
}

namespace {

void check_stencil(const ModelChart& chart, const Vec3& x, double margin)
{
    for (int d = 0; d < 3; ++d)
        if (x[d] - margin < chart.box[std::size_t(d)].first ||
            x[d] + margin > chart.box[std::size_t(d)].second)
            throw std::domain_error("finite-difference stencil leaves the chart box");
}

} // namespace

Ten christoffel(const ModelChart& chart, const Vec3& x, double h)
{
    check_stencil(chart, x, h);
    return christoffel([&chart](const Vec3& p) { return chart.metric(p); }, x, h);
}

TenFn covariant_derivative(const MetricFn& g, const TenFn& T, int rank, double h)
{
    if (rank < 0 || rank > 3)
        throw std::domain_error("covariant_derivative: rank must be in [0, 3]");
    return [g, T, rank, h](const Vec3& x) {
        const Ten gamma = christoffel(g, x, h);
        std::array<Ten, 3> dT;
        for (int d = 0; d < 3; ++d) {
            Vec3 xp = x, xm = x;
            xp[d] += h;
            xm[d] -= h;
            Ten diff = T(xp);
            diff -= T(xm);
            diff *= 1.0 / (2.0 * h);
            dT[std::size_t(d)] = diff;
        }
        const Ten tx = T(x);
        Ten out(rank + 1);
        std::array<int, 4> idx{};
        const int block = pow3(rank);
        for (int a = 0; a < 3; ++a) {
            for (int f = 0; f < block; ++f) {
                unflatten(f, rank, idx);
                double v = entry(dT[std::size_t(a)], idx);
                for (int slot = 0; slot < rank; ++slot) {
                    std::array<int, 4> jdx = idx;
                    const int orig = idx[std::size_t(slot)];
                    for (int m = 0; m < 3; ++m) {
                        jdx[std::size_t(slot)] = m;
                        v -= gamma.at(m, a, orig) * entry(tx, jdx);
                    }
                }
                std::array<int, 4> odx{a, idx[0], idx[1], idx[2]};
                entry(out, odx) = v;
            }
        }
        return out;
    };
}

Ten curvature_tensor(const MetricFn& g, const Vec3& x, double h)
{
    // dGamma[d] = d/dx^d Gamma at x
    std::array<Ten, 3> dGamma;
    for (int d = 0; d < 3; ++d) {
        Vec3 xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        Ten diff = christoffel(g, xp, h);
        diff -= christoffel(g, xm, h);
        diff *= 1.0 / (2.0 * h);
        dGamma[std::size_t(d)] = diff;
    }
    const Ten gamma = christoffel(g, x, h);
    const Eigen::Matrix3d gx = g(x);

    // Rup(l, k, i, j) = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
    //                 + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
    Ten rup(4);
    for (int l = 0; l < 3; ++l)
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double v = dGamma[std::size_t(i)].at(l, j, k) -
                               dGamma[std::size_t(j)].at(l, i, k);
                    for (int m = 0; m < 3; ++m)
                        v += gamma.at(l, i, m) * gamma.at(m, j, k) -
                             gamma.at(l, j, m) * gamma.at(m, i, k);
                    rup.at(l, k, i, j) = v;
                }

    // R_ijkl = g_km Rup(m, l, i, j); then R(X,Y,X,Y) = kappa on space forms.
    Ten riem(4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double v = 0.0;
                    for (int m = 0; m < 3; ++m) v += gx(k, m) * rup.at(m, l, i, j);
                    riem.at(i, j, k, l) = v;
                }
    return riem;
}

Ten curvature_tensor(const ModelChart& chart, const Vec3& x, double h)
{
    check_stencil(chart, x, 2.0 * h);
    return curvature_tensor([&chart](const Vec3& p) { return chart.metric(p); }, x, h);
}

Eigen::Matrix3d ricci(const MetricFn& g, const Vec3& x, double h)
{
    const Ten riem = curvature_tensor(g, x, h);
    const Eigen::Matrix3d ginv = g(x).inverse();
    Eigen::Matrix3d ric;
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) {
            double v = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 3; ++k) v += ginv(i, k) * riem.at(i, j, k, l);
            ric(j, l) = v;
        }
    return ric;
}

double frame_norm(const Eigen::Matrix3d& g, const Ten& t)
{
    const Eigen::Matrix3d ginv = g.inverse();
    const int rank = t.rank();
    if (rank == 0) return std::abs(t.at(0));

    // contract every index pair with g^{-1}
    double sum = 0.0;
    std::array<int, 4> a{}, b{};
    const int n = pow3(rank);
    for (int fa = 0; fa < n; ++fa) {
        unflatten(fa, rank, a);
        for (int fb = 0; fb < n; ++fb) {
            unflatten(fb, rank, b);
            double w = 1.0;
            for (int s = 0; s < rank; ++s) w *= ginv(a[std::size_t(s)], b[std::size_t(s)]);
            sum += w * entry(t, a) * entry(t, b);
        }
    }
    return std::sqrt(std::max(0.0, sum));
}

} // namespace conemf::tensor
