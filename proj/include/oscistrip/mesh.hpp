#pragma once

#include "oscistrip/geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace oscistrip {

/// Conforming P1 triangulation of the disk with boundary vertices on the
/// exact circle. Boundary vertices carry their arclength coordinate.
struct Mesh {
  struct BoundaryEdge {
    int a = 0;
    int b = 0;
    double sa = 0.0;
    double sb = 0.0; // sb > sa; the closing edge ends at s = T
  };

  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary;
  std::vector<double> vertex_s; // NaN for interior vertices
  double h_boundary = 0.0;      // near-boundary sizing used at generation
  double radius = 1.0;

  std::size_t num_vertices() const { return vertices.size(); }
  double triangle_area(std::size_t t) const;
  double area() const;
  double boundary_length() const;
  /// Longest edge among triangles touching a boundary vertex.
  double max_boundary_element_diameter() const;
  /// Checks orientation, edge multiplicity, boundary vertex placement.
  /// Throws MeshError.
  void validate() const;
};

/// Concentric-ring mesh of the disk of given radius centred at the origin.
/// Element size is h_boundary within `fine_depth` of the boundary, then
/// grows linearly with slope `growth` up to h_interior.
Mesh generate_disk_mesh(double radius, double h_interior, double h_boundary,
                        double fine_depth = 0.0, double growth = 0.25);

/// Plain-text mesh format:
///   vertices N triangles M boundary B
///   x y [s]        (N lines; s only on boundary vertices)
///   i j k          (M lines)
///   i j s_i s_j    (B lines)
void write_mesh(const Mesh &mesh, const std::string &path);
Mesh read_mesh(const std::string &path);

/// Uniform bin grid over the mesh bounding box.
class PointLocator {
public:
  struct Location {
    int triangle = -1;
    std::array<double, 3> bary{};
  };

  PointLocator(const Mesh &mesh, double bin_size);

  /// Triangle containing p. Points just outside the polygonal boundary
  /// (between chord and arc) resolve to the nearest boundary triangle with
  /// linearly extended barycentrics. Empty when p is not near the mesh.
  std::optional<Location> locate(const Vec2 &p) const;

private:
  std::array<double, 3> barycentric(int tri, const Vec2 &p) const;

  const Mesh *mesh_;
  double bin_;
  double x0_, y0_;
  int nx_, ny_;
  std::vector<int> start_;
  std::vector<int> items_;
};

} // namespace oscistrip
