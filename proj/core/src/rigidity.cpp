#include "conemf/rigidity.hpp"

#include "detail/polyhedron_geometry.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace conemf::rig {

namespace {

using detail::V4;
using DualV4 = V4<Dual>;
using Vec = V4<double>;

Vec vert(const Polyhedron& poly, int i) { return poly.vertices[std::size_t(i)]; }

Vec interior_point(const Polyhedron& poly)
{
    Vec m{0, 0, 0, 0};
    for (const auto& v : poly.vertices)
        for (int i = 0; i < 4; ++i) m[i] += v[i];
    if (poly.space == AmbientSpace::euclidean3) {
        for (int i = 0; i < 4; ++i) m[i] /= double(poly.vertices.size());
        return m;
    }
    const double q = -detail::mdot(m, m);
    for (int i = 0; i < 4; ++i) m[i] /= std::sqrt(q);
    return m;
}

int cycle_at(const std::vector<int>& cycle, std::size_t i)
{
    return cycle[i % cycle.size()];
}

int successor(const std::vector<int>& cycle, int v)
{
    for (std::size_t i = 0; i < cycle.size(); ++i)
        if (cycle[i] == v) return cycle[(i + 1) % cycle.size()];
    throw std::logic_error("vertex not in face cycle");
}

// Static data of one dihedral row: wing vertices and outward signs, fixed at
// the base configuration.
struct EdgeRow {
    int a, b, w_ab, w_ba;
    double sign_ab, sign_ba;
};

struct CornerRow {
    int prev, v, next;
};

struct PlanarityRow {
    int v0, v1, v2, vk;
    double scale;
};

struct ConstraintSet {
    std::vector<PlanarityRow> planarity;
    std::vector<EdgeRow> dihedral;
    std::vector<CornerRow> face;
};

double outward_sign(const Polyhedron& poly, int pa, int pb, int pw, const Vec& c_int)
{
    if (poly.space == AmbientSpace::euclidean3) {
        const Vec n = detail::cross3(detail::sub(vert(poly, pb), vert(poly, pa)),
                                     detail::sub(vert(poly, pw), vert(poly, pb)));
        return detail::dot3(n, detail::sub(c_int, vert(poly, pa))) < 0.0 ? 1.0 : -1.0;
    }
    const Vec u = detail::mcross(vert(poly, pa), vert(poly, pb), vert(poly, pw));
    return detail::mdot(u, c_int) < 0.0 ? 1.0 : -1.0;
}

ConstraintSet build_constraints(const Polyhedron& poly)
{
    ConstraintSet cs;
    const Vec c_int = interior_point(poly);

    for (const auto& cyc : poly.faces) {
        for (std::size_t k = 3; k < cyc.size(); ++k) {
            PlanarityRow row{cyc[0], cyc[1], cyc[2], cyc[k], 1.0};
            auto n4 = [](const Vec& u) {
                return std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
            };
            const Vec v0 = vert(poly, row.v0);
            row.scale = n4(detail::sub(vert(poly, row.v1), v0)) *
                        n4(detail::sub(vert(poly, row.v2), v0)) *
                        n4(detail::sub(vert(poly, row.vk), v0));
            cs.planarity.push_back(row);
        }
    }
    for (const auto& e : poly.edges) {
        EdgeRow row;
        row.a = e.a;
        row.b = e.b;
        row.w_ab = successor(poly.faces[std::size_t(e.face_ab)], e.b);
        row.w_ba = successor(poly.faces[std::size_t(e.face_ba)], e.a);
        row.sign_ab = outward_sign(poly, e.a, e.b, row.w_ab, c_int);
        row.sign_ba = outward_sign(poly, e.b, e.a, row.w_ba, c_int);
        cs.dihedral.push_back(row);
    }
    for (const auto& cyc : poly.faces)
        for (std::size_t i = 0; i < cyc.size(); ++i)
            cs.face.push_back({cycle_at(cyc, i + cyc.size() - 1), cycle_at(cyc, i),
                               cycle_at(cyc, i + 1)});
    return cs;
}

template <typename S>
void eval_constraints(const Polyhedron& poly, const ConstraintSet& cs,
                      const std::vector<V4<S>>& x, std::vector<S>& planarity,
                      std::vector<S>& dihedral, std::vector<S>& face)
{
    const bool euclid = poly.space == AmbientSpace::euclidean3;
    planarity.clear();
    dihedral.clear();
    face.clear();
    for (const auto& r : cs.planarity) {
        if (euclid)
            planarity.push_back(detail::planarity_euclidean(
                x[std::size_t(r.v0)], x[std::size_t(r.v1)], x[std::size_t(r.v2)],
                x[std::size_t(r.vk)], r.scale));
        else
            planarity.push_back(detail::planarity_hyperbolic(
                x[std::size_t(r.v0)], x[std::size_t(r.v1)], x[std::size_t(r.v2)],
                x[std::size_t(r.vk)], r.scale));
    }
    for (const auto& r : cs.dihedral) {
        if (euclid)
            dihedral.push_back(detail::dihedral_euclidean(
                x[std::size_t(r.a)], x[std::size_t(r.b)], x[std::size_t(r.w_ab)],
                x[std::size_t(r.w_ba)], r.sign_ab, r.sign_ba));
        else
            dihedral.push_back(detail::dihedral_hyperbolic(
                x[std::size_t(r.a)], x[std::size_t(r.b)], x[std::size_t(r.w_ab)],
                x[std::size_t(r.w_ba)], r.sign_ab, r.sign_ba));
    }
    for (const auto& r : cs.face) {
        if (euclid)
            face.push_back(detail::corner_euclidean(x[std::size_t(r.prev)],
                                                    x[std::size_t(r.v)],
                                                    x[std::size_t(r.next)]));
        else
            face.push_back(detail::corner_hyperbolic(x[std::size_t(r.prev)],
                                                     x[std::size_t(r.v)],
                                                     x[std::size_t(r.next)]));
    }
}

} // namespace

std::vector<Eigen::Matrix<double, 4, 3>> tangent_bases(const Polyhedron& poly)
{
    if (poly.space != AmbientSpace::hyperbolic3)
        throw std::logic_error("tangent_bases: hyperbolic polyhedra only");
    std::vector<Eigen::Matrix<double, 4, 3>> bases;
    for (const auto& varr : poly.vertices) {
        Eigen::Vector4d v(varr[0], varr[1], varr[2], varr[3]);
        auto mdot = [](const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
            return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
        };
        Eigen::Matrix<double, 4, 3> basis;
        int got = 0;
        for (int k = 1; k < 4 && got < 3; ++k) {
            Eigen::Vector4d e = Eigen::Vector4d::Zero();
            e[k] = 1.0;
            Eigen::Vector4d t = e + mdot(e, v) * v; // project onto tangent space
            for (int j = 0; j < got; ++j) t -= mdot(t, basis.col(j)) * basis.col(j);
            const double n = std::sqrt(mdot(t, t));
            if (n < 1e-10) continue;
            basis.col(got++) = t / n;
        }
        if (got != 3) throw std::runtime_error("tangent_bases: degenerate vertex");
        bases.push_back(basis);
    }
    return bases;
}

Jacobians constraint_jacobians(const Polyhedron& poly)
{
    const ConstraintSet cs = build_constraints(poly);
    const int nv = int(poly.vertices.size());
    const int cols = 3 * nv;
    Jacobians jac;
    jac.planarity.resize(Eigen::Index(cs.planarity.size()), cols);
    jac.dihedral.resize(Eigen::Index(cs.dihedral.size()), cols);
    jac.face.resize(Eigen::Index(cs.face.size()), cols);

    const bool euclid = poly.space == AmbientSpace::euclidean3;
    std::vector<Eigen::Matrix<double, 4, 3>> bases;
    if (!euclid) bases = tangent_bases(poly);

    std::vector<DualV4> x(poly.vertices.size());
    for (std::size_t i = 0; i < poly.vertices.size(); ++i)
        for (int c = 0; c < 4; ++c) x[i][std::size_t(c)] = Dual(poly.vertices[i][std::size_t(c)]);

    std::vector<Dual> pl, di, fa;
    for (int i = 0; i < nv; ++i) {
        for (int k = 0; k < 3; ++k) {
            // seed velocity direction k at vertex i
            for (int c = 0; c < 4; ++c) {
                double dir;
                if (euclid)
                    dir = (c == k) ? 1.0 : 0.0;
                else
                    dir = bases[std::size_t(i)](c, k);
                x[std::size_t(i)][std::size_t(c)].d = dir;
            }
            eval_constraints(poly, cs, x, pl, di, fa);
            const int col = 3 * i + k;
            for (std::size_t r = 0; r < pl.size(); ++r)
                jac.planarity(Eigen::Index(r), col) = pl[r].d;
            for (std::size_t r = 0; r < di.size(); ++r)
                jac.dihedral(Eigen::Index(r), col) = di[r].d;
            for (std::size_t r = 0; r < fa.size(); ++r)
                jac.face(Eigen::Index(r), col) = fa[r].d;
            for (int c = 0; c < 4; ++c) x[std::size_t(i)][std::size_t(c)].d = 0.0;
        }
    }
    return jac;
}

Jacobians constraint_jacobians_fd(const Polyhedron& poly, double h)
{
    const ConstraintSet cs = build_constraints(poly);
    const int nv = int(poly.vertices.size());
    const int cols = 3 * nv;
    Jacobians jac;
    jac.planarity.resize(Eigen::Index(cs.planarity.size()), cols);
    jac.dihedral.resize(Eigen::Index(cs.dihedral.size()), cols);
    jac.face.resize(Eigen::Index(cs.face.size()), cols);

    const bool euclid = poly.space == AmbientSpace::euclidean3;
    std::vector<Eigen::Matrix<double, 4, 3>> bases;
    if (!euclid) bases = tangent_bases(poly);

    double scale = 0.0;
    for (const auto& v : poly.vertices)
        for (double c : v) scale = std::max(scale, std::abs(c));
    const double step = h * std::max(1.0, scale);

    std::vector<Vec> x(poly.vertices.begin(), poly.vertices.end());
    std::vector<double> plp, dip, fap, plm, dim, fam;
    for (int i = 0; i < nv; ++i) {
        for (int k = 0; k < 3; ++k) {
            Vec dir{0, 0, 0, 0};
            if (euclid)
                dir[std::size_t(k)] = 1.0;
            else
                for (int c = 0; c < 4; ++c) dir[std::size_t(c)] = bases[std::size_t(i)](c, k);

            const Vec saved = x[std::size_t(i)];
            for (int c = 0; c < 4; ++c) x[std::size_t(i)][std::size_t(c)] = saved[std::size_t(c)] + step * dir[std::size_t(c)];
            eval_constraints(poly, cs, x, plp, dip, fap);
            for (int c = 0; c < 4; ++c) x[std::size_t(i)][std::size_t(c)] = saved[std::size_t(c)] - step * dir[std::size_t(c)];
            eval_constraints(poly, cs, x, plm, dim, fam);
            x[std::size_t(i)] = saved;

            const int col = 3 * i + k;
            for (std::size_t r = 0; r < plp.size(); ++r)
                jac.planarity(Eigen::Index(r), col) = (plp[r] - plm[r]) / (2.0 * step);
            for (std::size_t r = 0; r < dip.size(); ++r)
                jac.dihedral(Eigen::Index(r), col) = (dip[r] - dim[r]) / (2.0 * step);
            for (std::size_t r = 0; r < fap.size(); ++r)
                jac.face(Eigen::Index(r), col) = (fap[r] - fam[r]) / (2.0 * step);
        }
    }
    return jac;
}

TrivialBasis trivial_motion_basis(const Polyhedron& poly)
{
    const int nv = int(poly.vertices.size());
    TrivialBasis tb;
    tb.fields.resize(3 * nv, 6);

    if (poly.space == AmbientSpace::euclidean3) {
        tb.similarity_extra.resize(3 * nv);
        for (int i = 0; i < nv; ++i) {
            const Vec v = vert(poly, i);
            for (int k = 0; k < 3; ++k) {
                // translations
                for (int c = 0; c < 3; ++c) tb.fields(3 * i + c, k) = (c == k) ? 1.0 : 0.0;
                // rotations: omega_k x v
                Vec omega{0, 0, 0, 0};
                omega[std::size_t(k)] = 1.0;
                const Vec w = detail::cross3(omega, v);
                for (int c = 0; c < 3; ++c) tb.fields(3 * i + c, 3 + k) = w[std::size_t(c)];
            }
            for (int c = 0; c < 3; ++c) tb.similarity_extra(3 * i + c) = v[std::size_t(c)];
        }
        return tb;
    }

    // Minkowski-antisymmetric generators: 3 boosts and 3 rotations.
    const auto bases = tangent_bases(poly);
    std::vector<Eigen::Matrix4d> gens;
    for (int k = 1; k < 4; ++k) { // boosts in the (0,k) plane
        Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
        a(0, k) = a(k, 0) = 1.0;
        gens.push_back(a);
    }
    const int rot_pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};
    for (const auto& p : rot_pairs) {
        Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
        a(p[0], p[1]) = 1.0;
        a(p[1], p[0]) = -1.0;
        gens.push_back(a);
    }
    auto mdot4 = [](const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
        return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    };
    for (int g = 0; g < 6; ++g) {
        for (int i = 0; i < nv; ++i) {
            const Vec varr = vert(poly, i);
            const Eigen::Vector4d v(varr[0], varr[1], varr[2], varr[3]);
            const Eigen::Vector4d w = gens[std::size_t(g)] * v;
            for (int k = 0; k < 3; ++k)
                tb.fields(3 * i + k, g) = mdot4(w, bases[std::size_t(i)].col(k));
        }
    }
    return tb;
}

std::string verdict_name(RigidityReport::Verdict v)
{
    switch (v) {
        case RigidityReport::Verdict::pass: return "pass";
        case RigidityReport::Verdict::fail: return "fail";
        case RigidityReport::Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

RigidityReport rigidity_check(const Polyhedron& poly, double tol_rel, double containment_tol,
                              double face_inclusion_tol)
{
    const Jacobians jac = constraint_jacobians(poly);
    const Eigen::Index cols = jac.dihedral.cols();
    Eigen::MatrixXd J(jac.planarity.rows() + jac.dihedral.rows(), cols);
    if (jac.planarity.rows() > 0) J.topRows(jac.planarity.rows()) = jac.planarity;
    J.bottomRows(jac.dihedral.rows()) = jac.dihedral;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullV);
    const Eigen::VectorXd sigma = svd.singularValues();
    const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
    const double thresh = tol_rel * smax;

    RigidityReport rep;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) rep.singular_values.push_back(sigma(i));

    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > thresh) ++rank;
    rep.kernel_dim = int(cols - rank);

    double kept_min = rank > 0 ? sigma(rank - 1) : 0.0;
    double dropped_max = rank < sigma.size() ? sigma(rank) : 0.0;
    rep.sigma_gap = dropped_max > 0.0 ? kept_min / dropped_max
                                      : std::numeric_limits<double>::infinity();

    rep.kernel = svd.matrixV().rightCols(cols - rank);

    const TrivialBasis tb = trivial_motion_basis(poly);
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> tsvd(tb.fields);
        const auto ts = tsvd.singularValues();
        Eigen::Index tr = 0;
        while (tr < ts.size() && ts(tr) > 1e-10 * ts(0)) ++tr;
        rep.trivial_dim = int(tr);
    }
    double contain = 0.0;
    for (Eigen::Index c = 0; c < tb.fields.cols(); ++c) {
        const Eigen::VectorXd t = tb.fields.col(c).normalized();
        contain = std::max(contain, (t - rep.kernel * (rep.kernel.transpose() * t)).norm());
    }
    rep.trivial_containment_residual = contain;

    if (poly.space == AmbientSpace::euclidean3) {
        double incl = 0.0;
        for (Eigen::Index c = 0; c < rep.kernel.cols(); ++c)
            incl = std::max(incl, (jac.face * rep.kernel.col(c)).norm());
        rep.face_angle_inclusion_residual = incl;
    }

    const bool gap_ok = !(rep.sigma_gap < 1e3);
    const bool contain_ok = contain <= containment_tol;
    if (!gap_ok) {
        rep.verdict = RigidityReport::Verdict::indeterminate;
        rep.diagnostics = "singular-value gap below 10^3; the kernel threshold is knife-edge";
        return rep;
    }
    if (poly.space == AmbientSpace::hyperbolic3) {
        rep.verdict = (rep.kernel_dim == 6 && contain_ok) ? RigidityReport::Verdict::pass
                                                          : RigidityReport::Verdict::fail;
        if (rep.verdict == RigidityReport::Verdict::fail)
            rep.diagnostics = "expected a 6-dimensional kernel of trivial motions";
    } else {
        rep.verdict = (rep.face_angle_inclusion_residual <= face_inclusion_tol && contain_ok)
                          ? RigidityReport::Verdict::pass
                          : RigidityReport::Verdict::fail;
        if (rep.verdict == RigidityReport::Verdict::fail)
            rep.diagnostics = "kernel vector changes face angles or misses trivial motions";
    }
    return rep;
}

std::string serialize_report(const RigidityReport& report)
{
    nlohmann::ordered_json j;
    j["verdict"] = verdict_name(report.verdict);
    j["kernel_dim"] = report.kernel_dim;
    j["trivial_dim"] = report.trivial_dim;
    j["sigma_gap"] = std::isfinite(report.sigma_gap) ? report.sigma_gap : -1.0;
    j["trivial_containment_residual"] = report.trivial_containment_residual;
    j["face_angle_inclusion_residual"] = report.face_angle_inclusion_residual;
    j["singular_values"] = report.singular_values;
    if (!report.diagnostics.empty()) j["diagnostics"] = report.diagnostics;
    return j.dump(2) + "\n";
}

} // namespace conemf::rig
