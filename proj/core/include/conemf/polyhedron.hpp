#pragma once

#include <array>
#include <string>
#include <vector>

namespace conemf::rig {

enum class AmbientSpace { euclidean3, hyperbolic3 };

std::string space_name(AmbientSpace s);
AmbientSpace space_from_name(const std::string& name);

/// Convex polyhedron with planar faces, in R^3 or in the hyperboloid model
/// of H^3 inside R^{1,3} with bilinear form diag(-1,1,1,1). Euclidean
/// vertices occupy slots 0..2 of each coordinate array.
struct Polyhedron {
    struct Edge {
        int a = 0, b = 0;        // vertex indices
        int face_ab = 0;         // face whose cycle runs a -> b
        int face_ba = 0;         // face whose cycle runs b -> a
    };

    AmbientSpace space = AmbientSpace::euclidean3;
    std::vector<std::array<double, 4>> vertices;
    std::vector<std::vector<int>> faces; // cycles, counter-clockwise from outside
    std::vector<Edge> edges;             // derived by finalize()

    int dim() const { return space == AmbientSpace::euclidean3 ? 3 : 4; }

    /// Derives the edge list, orients faces outward, and checks the
    /// construction invariants (hyperboloid residual, planarity, edge-face
    /// consistency, convexity). Throws std::invalid_argument on failure.
    void finalize();
};

enum class SolidKind { tetrahedron, cube, octahedron, dodecahedron };

SolidKind solid_from_name(const std::string& name);

/// Regular solid with circumradius `size` (Euclidean) or with vertices at
/// hyperbolic distance `size` from the centre of the hyperboloid.
Polyhedron build_regular(SolidKind kind, AmbientSpace space, double size);

/// Interior dihedral angle per edge, aligned with poly.edges; each lies in
/// (0, pi) for a convex polyhedron.
std::vector<double> dihedral_angles(const Polyhedron& poly);

/// Interior corner angle per (face, corner), aligned with poly.faces.
std::vector<std::vector<double>> face_angles(const Polyhedron& poly);

/// Geodesic edge lengths, aligned with poly.edges.
std::vector<double> edge_lengths(const Polyhedron& poly);

/// JSON file format {space, vertices, faces}; hyperbolic vertices are
/// validated on load.
Polyhedron load_polyhedron(const std::string& path);
void save_polyhedron(const Polyhedron& poly, const std::string& path);
Polyhedron parse_polyhedron(const std::string& json_text);
std::string serialize_polyhedron(const Polyhedron& poly);

} // namespace conemf::rig
