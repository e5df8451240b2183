#pragma once

#include "conemf/curvature.hpp"
#include "conemf/polyhedron.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace conemf::germ {

/// Malformed input (dangling ids, broken slot references); distinct from a
/// validation failure, which is reported through ValidationReport.
class input_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SingularLocusGraph {
    struct Edge {
        int id = 0;
        std::optional<std::pair<int, int>> endpoints; // nullopt: closed loop
    };
    std::vector<int> vertices;
    std::vector<Edge> edges;
};

struct EdgeGerm {
    double length = 0.0; // > 0
    double angle = 0.0;  // in (0, 2 pi)
    double twist = 0.0;  // in [0, angle)
};

struct LinkConePoint {
    std::array<double, 3> position{}; // unit vector
    double angle = 0.0;               // in (0, 2 pi)
};

struct SphericalLinkSpec {
    std::vector<LinkConePoint> cone_points;

    std::vector<double> angles() const;
};

/// Singular germ of a cone-manifold structure: curvature, singular graph,
/// per-edge (length, angle, twist), per-vertex spherical links and the slot
/// identification of edge-ends with link cone points.
struct SingularGerm {
    Curvature kappa = Curvature::flat;
    SingularLocusGraph graph;
    std::map<int, EdgeGerm> edge_data;            // edge id -> germ
    std::map<int, SphericalLinkSpec> links;       // vertex id -> link
    std::map<std::pair<int, int>, int> slots;     // (edge id, end 0/1) -> cone point
};

struct ValidationIssue {
    enum class Severity { error, warning };
    std::string code;  // V1..V6, W1, W2
    std::string locus; // "edge 3", "vertex 0", ...
    std::string message;
    Severity severity = Severity::error;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const; // no error-severity issues
    bool has(const std::string& code) const;
};

/// Checks every geometric realizability condition: V1 angle ranges, V2 edge
/// length positivity, V3 twist range, V4 vertex valence (>= 3, equal to the
/// link cone-point count), V5 edge-end angle equal to the link angle at its
/// slot, V6 positive link area, W1 removable two-point link, W2 spherical
/// edge length >= pi. Structurally malformed germs throw input_error.
ValidationReport validate_germ(const SingularGerm& g);

/// Gauss-Bonnet area 4 pi - sum(2 pi - alpha_i) of a spherical cone-surface;
/// every angle must lie in (0, 2 pi).
double link_area(const std::vector<double>& angles);

/// Dimension of the moduli space of spherical cone metrics with ell marked
/// points: 1 for ell = 2, otherwise 3 ell - 6. Requires ell >= 2.
int moduli_dim(int ell);

/// 3 |edges| + sum over vertices of moduli_dim(valence).
int germ_param_dim(const SingularGerm& g);

/// The singular germ of the double of a convex polyhedron across its faces:
/// edge angles are twice the dihedral angles, links are doubled vertex
/// polygons, twists vanish.
SingularGerm double_polyhedron(const rig::Polyhedron& poly);

// --- JSON file format {kappa, vertices, edges, links, slots} ---

SingularGerm parse_germ(const std::string& json_text);
std::string serialize_germ(const SingularGerm& g);
SingularGerm load_germ(const std::string& path);
void save_germ(const SingularGerm& g, const std::string& path);

} // namespace conemf::germ
