#include "conemf/germ.hpp"

#include "conemf/rigidity.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace conemf::germ {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAngleTol = 1e-12;

std::string edge_locus(int id) { return "edge " + std::to_string(id); }
std::string vertex_locus(int id) { return "vertex " + std::to_string(id); }

} // namespace

std::vector<double> SphericalLinkSpec::angles() const
{
    std::vector<double> out;
    out.reserve(cone_points.size());
    for (const auto& cp : cone_points) out.push_back(cp.angle);
    return out;
}

bool ValidationReport::ok() const
{
    return std::none_of(issues.begin(), issues.end(), [](const ValidationIssue& i) {
        return i.severity == ValidationIssue::Severity::error;
    });
}

bool ValidationReport::has(const std::string& code) const
{
    return std::any_of(issues.begin(), issues.end(),
                       [&](const ValidationIssue& i) { return i.code == code; });
}

double link_area(const std::vector<double>& angles)
{
    double deficit = 0.0;
    for (double a : angles) {
        if (!(a > 0.0) || !(a < 2.0 * kPi))
            throw std::domain_error("link_area: cone angle outside (0, 2*pi)");
        deficit += 2.0 * kPi - a;
    }
    return 4.0 * kPi - deficit;
}

int moduli_dim(int ell)
{
    if (ell < 2)
        throw std::domain_error("moduli_dim: a spherical cone-surface has at least two cone points");
    return ell == 2 ? 1 : 3 * ell - 6;
}

namespace {

// Structural pass: resolves references, counts valences, throws input_error
// on anything dangling. Returns edge-end -> (vertex, slot index) info.
struct Structure {
    std::map<int, int> valence;                         // vertex -> incident ends
    std::map<int, std::vector<std::pair<int, int>>> ends; // vertex -> (edge, end)
};

Structure resolve_structure(const SingularGerm& g)
{
    Structure st;
    std::set<int> vset(g.graph.vertices.begin(), g.graph.vertices.end());
    if (vset.size() != g.graph.vertices.size())
        throw input_error("duplicate vertex id");
    for (int v : g.graph.vertices) st.valence[v] = 0;

    std::set<int> eset;
    for (const auto& e : g.graph.edges) {
        if (!eset.insert(e.id).second) throw input_error("duplicate edge id");
        if (!g.edge_data.count(e.id))
            throw input_error("edge " + std::to_string(e.id) + " has no germ data");
        if (!e.endpoints) continue;
        for (int end = 0; end < 2; ++end) {
            const int v = end == 0 ? e.endpoints->first : e.endpoints->second;
            if (!vset.count(v))
                throw input_error("edge " + std::to_string(e.id) +
                                  " references unknown vertex " + std::to_string(v));
            st.valence[v] += 1;
            st.ends[v].push_back({e.id, end});
        }
    }
    for (const auto& [id, data] : g.edge_data) {
        (void)data;
        if (!eset.count(id))
            throw input_error("germ data for unknown edge " + std::to_string(id));
    }
    for (const auto& [v, link] : g.links) {
        (void)link;
        if (!vset.count(v)) throw input_error("link for unknown vertex " + std::to_string(v));
    }
    for (int v : g.graph.vertices)
        if (!g.links.count(v))
            throw input_error("vertex " + std::to_string(v) + " has no link");

    // Every non-loop edge end needs a slot; slots must be a bijection per
    // vertex onto the link cone points they reference.
    std::map<int, std::set<int>> used; // vertex -> cone point indices used
    for (const auto& [key, cp] : g.slots) {
        const auto [eid, end] = key;
        if (end != 0 && end != 1) throw input_error("slot end index must be 0 or 1");
        const auto it = std::find_if(g.graph.edges.begin(), g.graph.edges.end(),
                                     [eid = eid](const auto& e) { return e.id == eid; });
        if (it == g.graph.edges.end() || !it->endpoints)
            throw input_error("slot references unknown or closed edge " + std::to_string(eid));
        const int v = end == 0 ? it->endpoints->first : it->endpoints->second;
        const auto& link = g.links.at(v);
        if (cp < 0 || cp >= int(link.cone_points.size()))
            throw input_error("slot cone-point index out of range at vertex " +
                              std::to_string(v));
        if (!used[v].insert(cp).second)
            throw input_error("two edge-ends share one link cone point at vertex " +
                              std::to_string(v));
    }
    for (const auto& [v, list] : st.ends)
        for (const auto& key : list)
            if (!g.slots.count(key))
                throw input_error("edge " + std::to_string(key.first) + " end " +
                                  std::to_string(key.second) + " has no slot");

    // Link positions must be pairwise distinct.
    for (const auto& [v, link] : g.links) {
        for (std::size_t i = 0; i < link.cone_points.size(); ++i)
            for (std::size_t j = i + 1; j < link.cone_points.size(); ++j) {
                const auto& a = link.cone_points[i].position;
                const auto& b = link.cone_points[j].position;
                const double d2 = (a[0] - b[0]) * (a[0] - b[0]) +
                                  (a[1] - b[1]) * (a[1] - b[1]) +
                                  (a[2] - b[2]) * (a[2] - b[2]);
                if (d2 < 1e-20)
                    throw input_error("coincident link cone points at vertex " +
                                      std::to_string(v));
            }
    }
    return st;
}

} // namespace

ValidationReport validate_germ(const SingularGerm& g)
{
    const Structure st = resolve_structure(g);
    ValidationReport rep;
    using Sev = ValidationIssue::Severity;

    for (const auto& [id, data] : g.edge_data) {
        if (!(data.angle > 0.0) || !(data.angle < 2.0 * kPi))
            rep.issues.push_back({"V1", edge_locus(id),
                                  "cone angle outside (0, 2*pi)", Sev::error});
        if (!(data.length > 0.0))
            rep.issues.push_back({"V2", edge_locus(id), "edge length must be positive",
                                  Sev::error});
        if (data.twist < 0.0 || data.twist >= data.angle)
            rep.issues.push_back({"V3", edge_locus(id),
                                  "twist outside [0, angle)", Sev::error});
        if (g.kappa == Curvature::spherical && data.length >= kPi)
            rep.issues.push_back({"W2", edge_locus(id),
                                  "edge length >= pi exceeds the spherical cone radius",
                                  Sev::warning});
    }

    for (const auto& [v, link] : g.links) {
        for (const auto& cp : link.cone_points)
            if (!(cp.angle > 0.0) || !(cp.angle < 2.0 * kPi))
                rep.issues.push_back({"V1", vertex_locus(v),
                                      "link cone angle outside (0, 2*pi)", Sev::error});

        const int valence = st.valence.count(v) ? st.valence.at(v) : 0;
        const int npts = int(link.cone_points.size());
        if (valence == 2 && npts == 2) {
            rep.issues.push_back({"W1", vertex_locus(v),
                                  "two-point link: removable (football) vertex",
                                  Sev::warning});
        } else if (valence < 3 || valence != npts) {
            rep.issues.push_back(
                {"V4", vertex_locus(v),
                 "valence " + std::to_string(valence) + " must be >= 3 and equal the " +
                     std::to_string(npts) + " link cone points",
                 Sev::error});
        }

        bool angles_ok = true;
        for (const auto& cp : link.cone_points)
            angles_ok &= cp.angle > 0.0 && cp.angle < 2.0 * kPi;
        if (angles_ok && npts > 0) {
            const double area = link_area(link.angles());
            if (!(area > 0.0))
                rep.issues.push_back({"V6", vertex_locus(v),
                                      "link spherical area " + std::to_string(area) +
                                          " is not positive",
                                      Sev::error});
        }
    }

    for (const auto& [key, cp] : g.slots) {
        const auto [eid, end] = key;
        const auto& e = *std::find_if(g.graph.edges.begin(), g.graph.edges.end(),
                                      [eid = eid](const auto& ge) { return ge.id == eid; });
        const int v = end == 0 ? e.endpoints->first : e.endpoints->second;
        const double edge_angle = g.edge_data.at(eid).angle;
        const double link_angle = g.links.at(v).cone_points[std::size_t(cp)].angle;
        if (std::abs(edge_angle - link_angle) > kAngleTol * std::max(1.0, edge_angle))
            rep.issues.push_back(
                {"V5", edge_locus(eid) + " end " + std::to_string(end),
                 "edge angle " + std::to_string(edge_angle) + " differs from link angle " +
                     std::to_string(link_angle) + " at " + vertex_locus(v),
                 ValidationIssue::Severity::error});
    }
    return rep;
}

int germ_param_dim(const SingularGerm& g)
{
    const Structure st = resolve_structure(g);
    int dim = 3 * int(g.graph.edges.size());
    for (int v : g.graph.vertices) dim += moduli_dim(st.valence.at(v));
    return dim;
}

SingularGerm double_polyhedron(const rig::Polyhedron& poly)
{
    const auto dihedrals = rig::dihedral_angles(poly);
    const auto lengths = rig::edge_lengths(poly);
    for (double th : dihedrals)
        if (2.0 * th >= 2.0 * kPi)
            throw std::invalid_argument(
                "double_polyhedron: doubled dihedral angle reaches 2*pi (nonconvex input)");

    SingularGerm g;
    g.kappa = poly.space == rig::AmbientSpace::euclidean3 ? Curvature::flat
                                                          : Curvature::hyperbolic;

    const int nv = int(poly.vertices.size());
    for (int v = 0; v < nv; ++v) g.graph.vertices.push_back(v);
    for (std::size_t e = 0; e < poly.edges.size(); ++e) {
        g.graph.edges.push_back({int(e), std::make_pair(poly.edges[e].a, poly.edges[e].b)});
        g.edge_data[int(e)] = {lengths[e], 2.0 * dihedrals[e], 0.0};
    }

    // Unit tangent of edge (from -> to) at `from`, as a 3-vector (hyperbolic:
    // coefficients in the Minkowski-orthonormal tangent basis).
    std::vector<Eigen::Matrix<double, 4, 3>> bases;
    if (poly.space == rig::AmbientSpace::hyperbolic3) bases = rig::tangent_bases(poly);
    auto tangent_dir = [&](int from, int to) -> std::array<double, 3> {
        const auto& a = poly.vertices[std::size_t(from)];
        const auto& b = poly.vertices[std::size_t(to)];
        if (poly.space == rig::AmbientSpace::euclidean3) {
            std::array<double, 3> d{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
            const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            return {d[0] / n, d[1] / n, d[2] / n};
        }
        const Eigen::Vector4d va(a[0], a[1], a[2], a[3]), vb(b[0], b[1], b[2], b[3]);
        auto mdot = [](const Eigen::Vector4d& x, const Eigen::Vector4d& y) {
            return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
        };
        Eigen::Vector4d t = vb + mdot(vb, va) * va;
        t /= std::sqrt(mdot(t, t));
        std::array<double, 3> d{};
        for (int k = 0; k < 3; ++k) d[std::size_t(k)] = mdot(t, bases[std::size_t(from)].col(k));
        return d;
    };

    // Incident edge-ends per vertex, ordered cyclically around the vertex.
    std::map<int, std::vector<std::pair<int, int>>> incident;
    for (std::size_t e = 0; e < poly.edges.size(); ++e) {
        incident[poly.edges[e].a].push_back({int(e), 0});
        incident[poly.edges[e].b].push_back({int(e), 1});
    }
    for (int v = 0; v < nv; ++v) {
        auto& ends = incident[v];
        std::vector<std::array<double, 3>> dirs;
        for (const auto& [eid, end] : ends) {
            const auto& pe = poly.edges[std::size_t(eid)];
            dirs.push_back(tangent_dir(v, end == 0 ? pe.b : pe.a));
        }
        std::array<double, 3> axis{0, 0, 0};
        for (const auto& d : dirs)
            for (int k = 0; k < 3; ++k) axis[std::size_t(k)] += d[std::size_t(k)];
        const double an = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
        for (auto& c : axis) c /= an;
        std::array<double, 3> u1{-axis[1], axis[0], 0.0};
        double n1 = std::sqrt(u1[0] * u1[0] + u1[1] * u1[1]);
        if (n1 < 1e-9) {
            u1 = {0.0, -axis[2], axis[1]};
            n1 = std::sqrt(u1[1] * u1[1] + u1[2] * u1[2]);
        }
        for (auto& c : u1) c /= n1;
        const std::array<double, 3> u2{axis[1] * u1[2] - axis[2] * u1[1],
                                       axis[2] * u1[0] - axis[0] * u1[2],
                                       axis[0] * u1[1] - axis[1] * u1[0]};
        std::vector<std::size_t> order(ends.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        auto angle_of = [&](std::size_t i) {
            const auto& d = dirs[i];
            const double x = d[0] * u1[0] + d[1] * u1[1] + d[2] * u1[2];
            const double y = d[0] * u2[0] + d[1] * u2[1] + d[2] * u2[2];
            return std::atan2(y, x);
        };
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return angle_of(i) < angle_of(j); });

        SphericalLinkSpec link;
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            const auto [eid, end] = ends[order[rank]];
            link.cone_points.push_back({dirs[order[rank]], 2.0 * dihedrals[std::size_t(eid)]});
            g.slots[{eid, end}] = int(rank);
        }
        g.links[v] = std::move(link);
    }
    return g;
}

// --- JSON I/O ----------------------------------------------------------------

SingularGerm parse_germ(const std::string& json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("germ file is not valid JSON: ") + e.what());
    }
    SingularGerm g;
    try {
        g.kappa = curvature_from_int(j.at("kappa").get<int>());
        g.graph.vertices = j.at("vertices").get<std::vector<int>>();
        for (const auto& je : j.at("edges")) {
            SingularLocusGraph::Edge e;
            e.id = je.at("id").get<int>();
            if (je.contains("ends")) {
                const auto ends = je.at("ends").get<std::vector<int>>();
                if (ends.size() != 2) throw input_error("edge ends must have 2 entries");
                e.endpoints = {ends[0], ends[1]};
            }
            g.graph.edges.push_back(e);
            g.edge_data[e.id] = {je.at("length").get<double>(), je.at("angle").get<double>(),
                                 je.at("twist").get<double>()};
        }
        for (const auto& [key, jl] : j.at("links").items()) {
            SphericalLinkSpec link;
            for (const auto& jcp : jl.at("cone_points")) {
                LinkConePoint cp;
                const auto pos = jcp.at("position").get<std::vector<double>>();
                if (pos.size() != 3) throw input_error("link position must have 3 entries");
                cp.position = {pos[0], pos[1], pos[2]};
                cp.angle = jcp.at("angle").get<double>();
                link.cone_points.push_back(cp);
            }
            g.links[std::stoi(key)] = std::move(link);
        }
        for (const auto& js : j.at("slots")) {
            g.slots[{js.at("edge").get<int>(), js.at("end").get<int>()}] =
                js.at("cone_point").get<int>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("germ file is missing fields: ") + e.what());
    }
    return g;
}

std::string serialize_germ(const SingularGerm& g)
{
    nlohmann::ordered_json j;
    j["kappa"] = kappa_value(g.kappa);
    j["vertices"] = g.graph.vertices;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : g.graph.edges) {
        nlohmann::ordered_json je;
        je["id"] = e.id;
        if (e.endpoints)
            je["ends"] = {e.endpoints->first, e.endpoints->second};
        else
            je["closed"] = true;
        const auto& d = g.edge_data.at(e.id);
        je["length"] = d.length;
        je["angle"] = d.angle;
        je["twist"] = d.twist;
        edges.push_back(je);
    }
    j["edges"] = edges;
    nlohmann::ordered_json links;
    for (const auto& [v, link] : g.links) {
        nlohmann::ordered_json jl;
        auto pts = nlohmann::ordered_json::array();
        for (const auto& cp : link.cone_points) {
            nlohmann::ordered_json jcp;
            jcp["position"] = {cp.position[0], cp.position[1], cp.position[2]};
            jcp["angle"] = cp.angle;
            pts.push_back(jcp);
        }
        jl["cone_points"] = pts;
        links[std::to_string(v)] = jl;
    }
    j["links"] = links;
    auto slots = nlohmann::ordered_json::array();
    for (const auto& [key, cp] : g.slots) {
        nlohmann::ordered_json js;
        js["edge"] = key.first;
        js["end"] = key.second;
        js["cone_point"] = cp;
        slots.push_back(js);
    }
    j["slots"] = slots;
    return j.dump(2) + "\n";
}

SingularGerm load_germ(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open germ file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_germ(ss.str());
}

void save_germ(const SingularGerm& g, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write germ file '" + path + "'");
    out << serialize_germ(g);
}

} // namespace conemf::germ
