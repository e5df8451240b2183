#pragma once

#include "conemf/dual.hpp"
#include "conemf/polyhedron.hpp"

#include <array>
#include <cmath>

// Templated geometric primitives shared by the value path (S = double) and
// the forward-mode Jacobian path (S = Dual). Euclidean data lives in slots
// 0..2 of the 4-arrays; Minkowski data uses the form diag(-1,1,1,1).

namespace conemf::rig::detail {

template <typename S> using V4 = std::array<S, 4>;

using conemf::value;
using std::acos;
using std::sqrt;

template <typename S> V4<S> sub(const V4<S>& a, const V4<S>& b)
{
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

template <typename S> S dot3(const V4<S>& a, const V4<S>& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <typename S> V4<S> cross3(const V4<S>& a, const V4<S>& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0], S(0.0)};
}

template <typename S> S mdot(const V4<S>& a, const V4<S>& b)
{
    return -(a[0] * b[0]) + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

template <typename S> S det3(const V4<S>& a, const V4<S>& b, const V4<S>& c)
{
    return dot3(a, cross3(b, c));
}

template <typename S> S det4(const V4<S>& a, const V4<S>& b, const V4<S>& c, const V4<S>& d)
{
    S result(0.0);
    const std::array<const V4<S>*, 4> rows{&a, &b, &c, &d};
    // Laplace expansion along the first row.
    for (int j = 0; j < 4; ++j) {
        std::array<std::array<S, 3>, 3> m;
        for (int r = 1; r < 4; ++r) {
            int cc = 0;
            for (int col = 0; col < 4; ++col) {
                if (col == j) continue;
                m[r - 1][cc++] = (*rows[r])[col];
            }
        }
        const S minor = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                        m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                        m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        result += S(sign) * (*rows[0])[j] * minor;
    }
    return result;
}

/// Spacelike vector Minkowski-orthogonal to a, b, c: eta^{-1} applied to the
/// Levi-Civita contraction of the three arguments.
template <typename S> V4<S> mcross(const V4<S>& a, const V4<S>& b, const V4<S>& c)
{
    V4<S> w;
    for (int mu = 0; mu < 4; ++mu) {
        std::array<std::array<S, 3>, 3> m;
        for (int r = 0; r < 3; ++r) {
            const V4<S>& src = r == 0 ? a : (r == 1 ? b : c);
            int cc = 0;
            for (int col = 0; col < 4; ++col) {
                if (col == mu) continue;
                m[r][cc++] = src[col];
            }
        }
        const S minor = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                        m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                        m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        const double cof = (mu % 2 == 0) ? 1.0 : -1.0;
        w[mu] = S(cof) * minor;
    }
    w[0] = -w[0]; // raise the index with diag(-1,1,1,1)
    return w;
}

template <typename S> S norm3(const V4<S>& a) { return sqrt(dot3(a, a)); }

/// Interior dihedral angle at the edge (a, b). w_ab follows b in the face
/// whose cycle runs a -> b, w_ba follows a in the other face. The sign pair
/// fixes each face normal outward and is evaluated at the base configuration.
template <typename S>
S dihedral_euclidean(const V4<S>& a, const V4<S>& b, const V4<S>& w_ab,
                     const V4<S>& w_ba, double sign_ab, double sign_ba)
{
    const V4<S> n1 = cross3(sub(b, a), sub(w_ab, b));
    const V4<S> n2 = cross3(sub(a, b), sub(w_ba, a));
    const S c = S(-sign_ab * sign_ba) * dot3(n1, n2) / (norm3(n1) * norm3(n2));
    return acos(c);
}

template <typename S>
S dihedral_hyperbolic(const V4<S>& a, const V4<S>& b, const V4<S>& w_ab,
                      const V4<S>& w_ba, double sign_ab, double sign_ba)
{
    const V4<S> u1 = mcross(a, b, w_ab);
    const V4<S> u2 = mcross(b, a, w_ba);
    const S c = S(-sign_ab * sign_ba) * mdot(u1, u2) /
                (sqrt(mdot(u1, u1)) * sqrt(mdot(u2, u2)));
    return acos(c);
}

/// Interior angle of a face at vertex v with cycle neighbours p and nx.
template <typename S>
S corner_euclidean(const V4<S>& p, const V4<S>& v, const V4<S>& nx)
{
    const V4<S> e1 = sub(p, v), e2 = sub(nx, v);
    return acos(dot3(e1, e2) / (norm3(e1) * norm3(e2)));
}

template <typename S>
S corner_hyperbolic(const V4<S>& p, const V4<S>& v, const V4<S>& nx)
{
    // project onto the tangent space at v: P_v w = w + <w,v> v
    auto project = [&v](const V4<S>& w) {
        const S c = mdot(w, v);
        return V4<S>{w[0] + c * v[0], w[1] + c * v[1], w[2] + c * v[2], w[3] + c * v[3]};
    };
    const V4<S> t1 = project(p), t2 = project(nx);
    return acos(mdot(t1, t2) / (sqrt(mdot(t1, t1)) * sqrt(mdot(t2, t2))));
}

/// Planarity defect of the face vertex k against the plane of v0, v1, v2;
/// `scale` is a fixed base-configuration normalization.
template <typename S>
S planarity_euclidean(const V4<S>& v0, const V4<S>& v1, const V4<S>& v2, const V4<S>& vk,
                      double scale)
{
    return det3(sub(v1, v0), sub(v2, v0), sub(vk, v0)) * S(1.0 / scale);
}

template <typename S>
S planarity_hyperbolic(const V4<S>& v0, const V4<S>& v1, const V4<S>& v2, const V4<S>& vk,
                       double scale)
{
    return det4(v0, v1, v2, vk) * S(1.0 / scale);
}

} // namespace conemf::rig::detail
