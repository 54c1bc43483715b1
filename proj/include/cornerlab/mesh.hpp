#pragma once
// Triangulation of the convex domain polygons: centroid fan plus uniform red
// refinement, optionally with an extra red-green split around the physical
// corners each round.  Deterministic and nested by construction, so meshes
// of consecutive levels share node ids (and Richardson extrapolation is on
// solid ground).
#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <vector>

#include "cornerlab/geometry.hpp"

namespace cornerlab {

struct BoundaryEdge {
  int a, b;
  EdgeTag tag;
};

struct TriMesh {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;  // CCW
  std::vector<BoundaryEdge> boundary_edges;
};

// Fan-triangulate from the centroid, then refine_levels rounds of uniform
// red refinement; with grade_corners each round additionally splits every
// triangle incident to a robin-robin corner (red, with green closure).
// Level-k nodes are a bitwise prefix of level-(k+1) nodes.
TriMesh triangulate(const Polygon& p, int refine_levels, bool grade_corners);

// Orientation, conformity and tag bookkeeping; throws std::runtime_error.
void validate_mesh(const TriMesh& m);

// Sorted ids of nodes on artificial edges.
std::vector<int> dirichlet_nodes(const TriMesh& m);

// Plain text: `nodes N` with N lines `x y`; `triangles T` with T index
// triples; `boundary E` with E lines `i j tag`, tag robin|artificial.
// Floats printed in the shortest form that round-trips exactly.
void write_mesh(const TriMesh& m, std::ostream& os);
TriMesh read_mesh(std::istream& is);

}  // namespace cornerlab
