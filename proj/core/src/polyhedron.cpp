#include "conemf/polyhedron.hpp"

#include "detail/polyhedron_geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace conemf::rig {

using detail::V4;
using Vec = V4<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

Vec vert(const Polyhedron& poly, int i)
{
    return poly.vertices[static_cast<std::size_t>(i)];
}

int cycle_successor(const std::vector<int>& cycle, int v)
{
    for (std::size_t i = 0; i < cycle.size(); ++i)
        if (cycle[i] == v) return cycle[(i + 1) % cycle.size()];
    throw std::logic_error("vertex not in face cycle");
}

} // namespace

std::string space_name(AmbientSpace s)
{
    return s == AmbientSpace::euclidean3 ? "euclidean3" : "hyperbolic3";
}

AmbientSpace space_from_name(const std::string& name)
{
    if (name == "euclidean3") return AmbientSpace::euclidean3;
    if (name == "hyperbolic3") return AmbientSpace::hyperbolic3;
    throw std::invalid_argument("unknown ambient space '" + name + "'");
}

SolidKind solid_from_name(const std::string& name)
{
    if (name == "tetrahedron") return SolidKind::tetrahedron;
    if (name == "cube") return SolidKind::cube;
    if (name == "octahedron") return SolidKind::octahedron;
    if (name == "dodecahedron") return SolidKind::dodecahedron;
    throw std::invalid_argument("unknown solid '" + name + "'");
}

// Wing data for the dihedral at an edge, with outward-normal signs fixed at
// the current configuration.
namespace detail_edge {

struct EdgeContext {
    int a, b, w_ab, w_ba;
    double sign_ab, sign_ba;
};

double outward_sign(const Polyhedron& poly, int pa, int pb, int pw, const Vec& c_int)
{
    if (poly.space == AmbientSpace::euclidean3) {
        const Vec n = detail::cross3(detail::sub(vert(poly, pb), vert(poly, pa)),
                                     detail::sub(vert(poly, pw), vert(poly, pb)));
        const double side = detail::dot3(n, detail::sub(c_int, vert(poly, pa)));
        return side < 0.0 ? 1.0 : -1.0;
    }
    const Vec u = detail::mcross(vert(poly, pa), vert(poly, pb), vert(poly, pw));
    return detail::mdot(u, c_int) < 0.0 ? 1.0 : -1.0;
}

EdgeContext edge_context(const Polyhedron& poly, const Polyhedron::Edge& e, const Vec& c_int)
{
    EdgeContext ctx;
    ctx.a = e.a;
    ctx.b = e.b;
    ctx.w_ab = cycle_successor(poly.faces[static_cast<std::size_t>(e.face_ab)], e.b);
    ctx.w_ba = cycle_successor(poly.faces[static_cast<std::size_t>(e.face_ba)], e.a);
    ctx.sign_ab = outward_sign(poly, e.a, e.b, ctx.w_ab, c_int);
    ctx.sign_ba = outward_sign(poly, e.b, e.a, ctx.w_ba, c_int);
    return ctx;
}

} // namespace detail_edge

void Polyhedron::finalize()
{
    const std::size_t nv = vertices.size();
    if (nv < 4 || faces.size() < 4)
        throw std::invalid_argument("polyhedron: need at least 4 vertices and 4 faces");

    if (space == AmbientSpace::hyperbolic3) {
        for (const auto& v : vertices) {
            const double q = detail::mdot(v, v);
            if (std::abs(q + 1.0) > 1e-12 || v[0] <= 0.0)
                throw std::invalid_argument(
                    "polyhedron: hyperbolic vertex off the unit hyperboloid");
        }
    } else {
        for (const auto& v : vertices)
            if (v[3] != 0.0)
                throw std::invalid_argument("polyhedron: euclidean vertex has 4 components");
    }

    // Repair orientation so that every shared edge is traversed once in each
    // direction (flip faces greedily from the first one).
    {
        std::vector<bool> oriented(faces.size(), false), visited(faces.size(), false);
        oriented[0] = visited[0] = true;
        std::vector<std::size_t> queue{0};
        auto shares_directed = [&](std::size_t f, int x, int y) {
            const auto& c = faces[f];
            for (std::size_t i = 0; i < c.size(); ++i)
                if (c[i] == x && c[(i + 1) % c.size()] == y) return true;
            return false;
        };
        while (!queue.empty()) {
            const std::size_t f = queue.back();
            queue.pop_back();
            const auto& c = faces[f];
            for (std::size_t i = 0; i < c.size(); ++i) {
                const int x = c[i], y = c[(i + 1) % c.size()];
                for (std::size_t g = 0; g < faces.size(); ++g) {
                    if (g == f || visited[g]) continue;
                    if (shares_directed(g, x, y)) {
                        std::reverse(faces[g].begin(), faces[g].end());
                        visited[g] = true;
                        queue.push_back(g);
                    } else if (shares_directed(g, y, x)) {
                        visited[g] = true;
                        queue.push_back(g);
                    }
                }
            }
        }
    }

    // Derive edges.
    edges.clear();
    std::map<std::pair<int, int>, std::pair<int, int>> half; // (min,max) -> (face_ab, face_ba)
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& c = faces[f];
        if (c.size() < 3) throw std::invalid_argument("polyhedron: face with < 3 vertices");
        for (std::size_t i = 0; i < c.size(); ++i) {
            int x = c[i], y = c[(i + 1) % c.size()];
            if (x == y || x < 0 || y < 0 || x >= int(nv) || y >= int(nv))
                throw std::invalid_argument("polyhedron: bad face cycle");
            const bool fwd = x < y;
            const auto key = fwd ? std::make_pair(x, y) : std::make_pair(y, x);
            auto [it, inserted] = half.insert({key, {-1, -1}});
            int& slot = fwd ? it->second.first : it->second.second;
            if (slot != -1)
                throw std::invalid_argument("polyhedron: edge traversed twice in one direction");
            slot = int(f);
        }
    }
    for (const auto& [key, fs] : half) {
        if (fs.first < 0 || fs.second < 0)
            throw std::invalid_argument("polyhedron: edge does not bound exactly 2 faces");
        edges.push_back({key.first, key.second, fs.first, fs.second});
    }

    // Global outward orientation: a face normal must point away from the
    // interior; if the consistent orientation is inward, flip everything.
    const Vec c_int = interior_point(*this);
    {
        const auto& c = faces[0];
        const double s = detail_edge::outward_sign(*this, c[0], c[1], c[2], c_int);
        if (s < 0.0) {
            for (auto& f : faces) std::reverse(f.begin(), f.end());
            edges.clear();
            for (const auto& [key, fs] : half)
                edges.push_back({key.first, key.second, fs.second, fs.first});
        }
    }

    // Planarity of every face.
    for (const auto& c : faces) {
        for (std::size_t k = 3; k < c.size(); ++k) {
            double defect, scale;
            const Vec v0 = vert(*this, c[0]), v1 = vert(*this, c[1]),
                      v2 = vert(*this, c[2]), vk = vert(*this, c[k]);
            const Vec d1 = detail::sub(v1, v0), d2 = detail::sub(v2, v0),
                      dk = detail::sub(vk, v0);
            auto n4 = [](const Vec& u) {
                return std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
            };
            scale = n4(d1) * n4(d2) * n4(dk);
            if (space == AmbientSpace::euclidean3)
                defect = detail::det3(d1, d2, dk);
            else
                defect = detail::det4(v0, v1, v2, vk);
            if (std::abs(defect) > 1e-10 * std::max(scale, 1e-30))
                throw std::invalid_argument("polyhedron: face is not planar");
        }
    }

    // Convexity: interior dihedral angles in (0, pi).
    for (double th : dihedral_angles(*this))
        if (!(th > 0.0) || !(th < kPi))
            throw std::invalid_argument("polyhedron: dihedral angle outside (0, pi)");
}

std::vector<double> dihedral_angles(const Polyhedron& poly)
{
    const Vec c_int = interior_point(poly);
    std::vector<double> out;
    out.reserve(poly.edges.size());
    for (const auto& e : poly.edges) {
        const auto ctx = detail_edge::edge_context(poly, e, c_int);
        double th;
        if (poly.space == AmbientSpace::euclidean3)
            th = detail::dihedral_euclidean(vert(poly, ctx.a), vert(poly, ctx.b),
                                            vert(poly, ctx.w_ab), vert(poly, ctx.w_ba),
                                            ctx.sign_ab, ctx.sign_ba);
        else
            th = detail::dihedral_hyperbolic(vert(poly, ctx.a), vert(poly, ctx.b),
                                             vert(poly, ctx.w_ab), vert(poly, ctx.w_ba),
                                             ctx.sign_ab, ctx.sign_ba);
        if (!std::isfinite(th))
            throw std::runtime_error("dihedral_angles: degenerate face normal");
        out.push_back(th);
    }
    return out;
}

std::vector<std::vector<double>> face_angles(const Polyhedron& poly)
{
    std::vector<std::vector<double>> out(poly.faces.size());
    for (std::size_t f = 0; f < poly.faces.size(); ++f) {
        const auto& c = poly.faces[f];
        for (std::size_t i = 0; i < c.size(); ++i) {
            const int p = c[(i + c.size() - 1) % c.size()];
            const int v = c[i];
            const int nx = c[(i + 1) % c.size()];
            double ang;
            if (poly.space == AmbientSpace::euclidean3)
                ang = detail::corner_euclidean(vert(poly, p), vert(poly, v), vert(poly, nx));
            else
                ang = detail::corner_hyperbolic(vert(poly, p), vert(poly, v), vert(poly, nx));
            if (!std::isfinite(ang))
                throw std::runtime_error("face_angles: degenerate corner");
            out[f].push_back(ang);
        }
    }
    return out;
}

std::vector<double> edge_lengths(const Polyhedron& poly)
{
    std::vector<double> out;
    out.reserve(poly.edges.size());
    for (const auto& e : poly.edges) {
        const Vec a = vert(poly, e.a), b = vert(poly, e.b);
        if (poly.space == AmbientSpace::euclidean3) {
            out.push_back(detail::norm3(detail::sub(a, b)));
        } else {
            const double c = -detail::mdot(a, b);
            out.push_back(std::acosh(std::max(1.0, c)));
        }
    }
    return out;
}

Polyhedron build_regular(SolidKind kind, AmbientSpace space, double size)
{
    if (!(size > 0.0)) throw std::invalid_argument("build_regular: size must be positive");

    std::vector<Vec> dirs;           // unit vertex directions
    std::vector<Vec> face_dirs;      // face-plane support directions
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));

    auto push_unit = [](std::vector<Vec>& v, double x, double y, double z) {
        const double n = std::sqrt(x * x + y * y + z * z);
        v.push_back({x / n, y / n, z / n, 0.0});
    };

    switch (kind) {
        case SolidKind::tetrahedron:
            push_unit(dirs, 1, 1, 1);
            push_unit(dirs, 1, -1, -1);
            push_unit(dirs, -1, 1, -1);
            push_unit(dirs, -1, -1, 1);
            for (const auto& d : dirs) face_dirs.push_back({-d[0], -d[1], -d[2], 0.0});
            break;
        case SolidKind::cube:
            for (int sx : {-1, 1})
                for (int sy : {-1, 1})
                    for (int sz : {-1, 1}) push_unit(dirs, sx, sy, sz);
            for (int ax = 0; ax < 3; ++ax)
                for (int s : {-1, 1}) {
                    Vec d{0, 0, 0, 0};
                    d[ax] = s;
                    face_dirs.push_back(d);
                }
            break;
        case SolidKind::octahedron:
            for (int ax = 0; ax < 3; ++ax)
                for (int s : {-1, 1}) {
                    Vec d{0, 0, 0, 0};
                    d[ax] = s;
                    dirs.push_back(d);
                }
            for (int sx : {-1, 1})
                for (int sy : {-1, 1})
                    for (int sz : {-1, 1}) push_unit(face_dirs, sx, sy, sz);
            break;
        case SolidKind::dodecahedron: {
            for (int sx : {-1, 1})
                for (int sy : {-1, 1})
                    for (int sz : {-1, 1}) push_unit(dirs, sx, sy, sz);
            for (int s1 : {-1, 1})
                for (int s2 : {-1, 1}) {
                    push_unit(dirs, 0.0, s1 / phi, s2 * phi);
                    push_unit(dirs, s1 / phi, s2 * phi, 0.0);
                    push_unit(dirs, s1 * phi, 0.0, s2 / phi);
                }
            for (int s1 : {-1, 1})
                for (int s2 : {-1, 1}) {
                    push_unit(face_dirs, 0.0, s1 * 1.0, s2 * phi);
                    push_unit(face_dirs, s1 * 1.0, s2 * phi, 0.0);
                    push_unit(face_dirs, s1 * phi, 0.0, s2 * 1.0);
                }
            break;
        }
    }

    // Faces: vertices on the supporting plane of each face direction,
    // ordered by angle around that direction.
    std::vector<std::vector<int>> faces;
    for (const auto& u : face_dirs) {
        double best = -2.0;
        for (const auto& d : dirs) best = std::max(best, detail::dot3(u, d));
        std::vector<int> cyc;
        for (std::size_t i = 0; i < dirs.size(); ++i)
            if (detail::dot3(u, dirs[i]) > best - 1e-9) cyc.push_back(int(i));

        // in-plane frame
        Vec w1{-u[1], u[0], 0.0, 0.0};
        if (detail::norm3(w1) < 1e-6) w1 = {0.0, -u[2], u[1], 0.0};
        const double n1 = detail::norm3(w1);
        for (int i = 0; i < 4; ++i) w1[i] /= n1;
        const Vec w2 = detail::cross3(u, w1);
        std::sort(cyc.begin(), cyc.end(), [&](int a, int b) {
            const double aa = std::atan2(detail::dot3(dirs[size_t(a)], w2),
                                         detail::dot3(dirs[size_t(a)], w1));
            const double ab = std::atan2(detail::dot3(dirs[size_t(b)], w2),
                                         detail::dot3(dirs[size_t(b)], w1));
            return aa < ab;
        });
        faces.push_back(std::move(cyc));
    }

    Polyhedron poly;
    poly.space = space;
    poly.faces = std::move(faces);
    for (const auto& d : dirs) {
        if (space == AmbientSpace::euclidean3) {
            poly.vertices.push_back({size * d[0], size * d[1], size * d[2], 0.0});
        } else {
            const double ch = std::cosh(size), sh = std::sinh(size);
            Vec v{ch, sh * d[0], sh * d[1], sh * d[2]};
            const double q = -detail::mdot(v, v);
            for (int i = 0; i < 4; ++i) v[i] /= std::sqrt(q);
            poly.vertices.push_back(v);
        }
    }
    poly.finalize();
    return poly;
}

// --- JSON I/O ---------------------------------------------------------------

Polyhedron parse_polyhedron(const std::string& json_text)
{
    const auto j = nlohmann::json::parse(json_text);
    Polyhedron poly;
    poly.space = space_from_name(j.at("space").get<std::string>());
    for (const auto& row : j.at("vertices")) {
        Vec v{0, 0, 0, 0};
        const std::size_t want = poly.space == AmbientSpace::euclidean3 ? 3 : 4;
        if (row.size() != want)
            throw std::invalid_argument("polyhedron: wrong vertex coordinate count");
        for (std::size_t i = 0; i < want; ++i) v[i] = row[i].get<double>();
        poly.vertices.push_back(v);
    }
    for (const auto& row : j.at("faces")) poly.faces.push_back(row.get<std::vector<int>>());
    poly.finalize();
    return poly;
}

std::string serialize_polyhedron(const Polyhedron& poly)
{
    nlohmann::ordered_json j;
    j["space"] = space_name(poly.space);
    auto verts = nlohmann::ordered_json::array();
    for (const auto& v : poly.vertices) {
        auto row = nlohmann::ordered_json::array();
        const int want = poly.space == AmbientSpace::euclidean3 ? 3 : 4;
        for (int i = 0; i < want; ++i) row.push_back(v[static_cast<std::size_t>(i)]);
        verts.push_back(row);
    }
    j["vertices"] = verts;
    j["faces"] = poly.faces;
    return j.dump(2) + "\n";
}

Polyhedron load_polyhedron(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open polyhedron file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_polyhedron(ss.str());
}

void save_polyhedron(const Polyhedron& poly, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write polyhedron file '" + path + "'");
    out << serialize_polyhedron(poly);
}

} // namespace conemf::rig
