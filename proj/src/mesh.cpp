#include "oscistrip/mesh.hpp"

#include "oscistrip/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace oscistrip {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Vec2 &a, const Vec2 &b, const Vec2 &c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

} // namespace

double Mesh::triangle_area(std::size_t t) const {
  const auto &tri = triangles[t];
  return 0.5 * cross(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

double Mesh::area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t)
    a += triangle_area(t);
  return a;
}

double Mesh::boundary_length() const {
  double l = 0.0;
  for (const auto &e : boundary)
    l += (vertices[e.a] - vertices[e.b]).norm();
  return l;
}

double Mesh::max_boundary_element_diameter() const {
  double d = 0.0;
  for (const auto &tri : triangles) {
    const bool touches = std::any_of(tri.begin(), tri.end(),
                                     [&](int v) { return !std::isnan(vertex_s[v]); });
    if (!touches)
      continue;
    for (int k = 0; k < 3; ++k)
      d = std::max(d, (vertices[tri[k]] - vertices[tri[(k + 1) % 3]]).norm());
  }
  return d;
}

void Mesh::validate() const {
  if (vertex_s.size() != vertices.size())
    throw MeshError("vertex arclength table has wrong size");
  std::map<std::pair<int, int>, int> edge_count;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int v : triangles[t])
      if (v < 0 || static_cast<std::size_t>(v) >= vertices.size())
        throw MeshError("triangle " + std::to_string(t) + " references a missing vertex");
    if (!(triangle_area(t) > 0.0))
      throw MeshError("triangle " + std::to_string(t) + " is degenerate or inverted");
    for (int k = 0; k < 3; ++k) {
      int a = triangles[t][k], b = triangles[t][(k + 1) % 3];
      if (a > b)
        std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  std::size_t single = 0;
  for (const auto &[edge, count] : edge_count) {
    if (count > 2)
      throw MeshError("edge shared by more than two triangles");
    if (count == 1)
      ++single;
  }
  if (single != boundary.size())
    throw MeshError("boundary edge list does not match the triangulation");
  for (const auto &e : boundary) {
    int a = std::min(e.a, e.b), b = std::max(e.a, e.b);
    auto it = edge_count.find({a, b});
    if (it == edge_count.end() || it->second != 1)
      throw MeshError("listed boundary edge is not a boundary edge of the triangulation");
    for (int v : {e.a, e.b})
      if (std::abs(vertices[v].norm() - radius) > 1e-12 * std::max(1.0, radius))
        throw MeshError("boundary vertex is not on the circle");
    if (!(e.sb > e.sa))
      throw MeshError("boundary edge arclengths must increase");
  }
}

Mesh generate_disk_mesh(double radius, double h_interior, double h_boundary, double fine_depth,
                        double growth) {
  if (!(radius > 0.0) || !(h_boundary > 0.0) || !(h_boundary <= h_interior))
    throw ConfigError("disk mesh sizing requires 0 < h_boundary <= h_interior");
  if (!(growth > 0.0) || fine_depth < 0.0)
    throw ConfigError("disk mesh grading requires growth > 0 and fine_depth >= 0");
  if (h_interior > 0.5 * radius)
    throw ConfigError("h_interior too large for the disk radius");

  auto size_at = [&](double depth) {
    if (depth <= fine_depth)
      return h_boundary;
    return std::min(h_interior, h_boundary + growth * (depth - fine_depth));
  };

  Mesh mesh;
  mesh.radius = radius;
  mesh.h_boundary = h_boundary;

  struct Ring {
    int first = 0;
    int count = 0;
  };
  std::vector<Ring> rings;
  double depth = 0.0;
  double phase = 0.0;
  while (true) {
    const double r = radius - depth;
    const double h = size_at(depth);
    const int n = static_cast<int>(std::lround(kTwoPi * r / h));
    if (n < 6 || r < 0.75 * h)
      break;
    Ring ring{static_cast<int>(mesh.vertices.size()), n};
    for (int i = 0; i < n; ++i) {
      const double ang = phase + kTwoPi * i / n;
      if (rings.empty()) {
        mesh.vertices.emplace_back(radius * std::cos(ang), radius * std::sin(ang));
        mesh.vertex_s.push_back(radius * ang);
      } else {
        mesh.vertices.emplace_back(r * std::cos(ang), r * std::sin(ang));
        mesh.vertex_s.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    rings.push_back(ring);
    const double step = 0.5 * (h + size_at(depth + h));
    depth += step;
    phase += 0.5 * kTwoPi / n;
  }
  if (rings.size() < 2)
    throw ConfigError("disk mesh sizing infeasible: fewer than two rings");

  const int centre = static_cast<int>(mesh.vertices.size());
  mesh.vertices.emplace_back(0.0, 0.0);
  mesh.vertex_s.push_back(std::numeric_limits<double>::quiet_NaN());

  auto add_triangle = [&](int a, int b, int c) {
    if (cross(mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]) < 0.0)
      std::swap(b, c);
    mesh.triangles.push_back({a, b, c});
  };

  // Zip consecutive rings together in order of angle.
  double outer_phase = 0.0;
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
    const Ring &o = rings[k];
    const Ring &in = rings[k + 1];
    const double inner_phase = outer_phase + 0.5 * kTwoPi / o.count;
    auto ang_o = [&](int i) { return outer_phase + kTwoPi * i / o.count; };
    auto ang_i = [&](int j) { return inner_phase + kTwoPi * j / in.count; };
    int i = 0, j = 0;
    while (i < o.count || j < in.count) {
      const bool advance_outer =
          j == in.count || (i < o.count && ang_o(i + 1) <= ang_i(j + 1));
      const int oi = o.first + i % o.count;
      const int ij = in.first + j % in.count;
      if (advance_outer) {
        add_triangle(oi, o.first + (i + 1) % o.count, ij);
        ++i;
      } else {
        add_triangle(oi, in.first + (j + 1) % in.count, ij);
        ++j;
      }
    }
    outer_phase = inner_phase;
  }
  const Ring &last = rings.back();
  for (int i = 0; i < last.count; ++i)
    add_triangle(centre, last.first + i, last.first + (i + 1) % last.count);

  const Ring &b = rings.front();
  const double T = kTwoPi * radius;
  for (int i = 0; i < b.count; ++i) {
    const int a = b.first + i;
    const int c = b.first + (i + 1) % b.count;
    const double sa = mesh.vertex_s[a];
    const double sc = (i + 1 == b.count) ? T : mesh.vertex_s[c];
    mesh.boundary.push_back({a, c, sa, sc});
  }
  mesh.validate();
  return mesh;
}

void write_mesh(const Mesh &mesh, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot write mesh file " + path);
  out << std::setprecision(17);
  out << "vertices " << mesh.vertices.size() << " triangles " << mesh.triangles.size()
      << " boundary " << mesh.boundary.size() << '\n';
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    out << mesh.vertices[v].x() << ' ' << mesh.vertices[v].y();
    if (!std::isnan(mesh.vertex_s[v]))
      out << ' ' << mesh.vertex_s[v];
    out << '\n';
  }
  for (const auto &t : mesh.triangles)
    out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto &e : mesh.boundary)
    out << e.a << ' ' << e.b << ' ' << e.sa << ' ' << e.sb << '\n';
}

Mesh read_mesh(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read mesh file " + path);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string &what) {
    throw MeshError(path + ":" + std::to_string(line_no) + ": " + what);
  };
  auto next_line = [&]() {
    if (!std::getline(in, line))
      fail("unexpected end of file");
    ++line_no;
    return std::istringstream(line);
  };
  std::size_t nv = 0, nt = 0, nb = 0;
  {
    auto ss = next_line();
    std::string kv, kt, kb;
    if (!(ss >> kv >> nv >> kt >> nt >> kb >> nb) || kv != "vertices" || kt != "triangles" ||
        kb != "boundary")
      fail("expected header 'vertices N triangles M boundary B'");
  }
  Mesh mesh;
  for (std::size_t v = 0; v < nv; ++v) {
    auto ss = next_line();
    double x, y, s;
    if (!(ss >> x >> y))
      fail("expected vertex 'x y [s]'");
    mesh.vertices.emplace_back(x, y);
    mesh.vertex_s.push_back((ss >> s) ? s : std::numeric_limits<double>::quiet_NaN());
  }
  for (std::size_t t = 0; t < nt; ++t) {
    auto ss = next_line();
    std::array<int, 3> tri{};
    if (!(ss >> tri[0] >> tri[1] >> tri[2]))
      fail("expected triangle 'i j k'");
    mesh.triangles.push_back(tri);
  }
  double hb = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < nb; ++b) {
    auto ss = next_line();
    Mesh::BoundaryEdge e;
    if (!(ss >> e.a >> e.b >> e.sa >> e.sb))
      fail("expected boundary edge 'i j s_i s_j'");
    mesh.boundary.push_back(e);
    hb = std::min(hb, e.sb - e.sa);
  }
  double r = 0.0;
  for (const auto &e : mesh.boundary)
    r = std::max(r, mesh.vertices.at(e.a).norm());
  mesh.radius = r;
  mesh.h_boundary = std::isfinite(hb) ? hb : 0.0;
  mesh.validate();
  return mesh;
}

// ---------------------------------------------------------------------------

PointLocator::PointLocator(const Mesh &mesh, double bin_size) : mesh_(&mesh), bin_(bin_size) {
  if (!(bin_size > 0.0))
    throw ConfigError("point locator bin size must be positive");
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const Vec2 &v : mesh.vertices) {
    xmin = std::min(xmin, v.x());
    xmax = std::max(xmax, v.x());
    ymin = std::min(ymin, v.y());
    ymax = std::max(ymax, v.y());
  }
  x0_ = xmin - bin_;
  y0_ = ymin - bin_;
  nx_ = static_cast<int>(std::ceil((xmax - x0_) / bin_)) + 2;
  ny_ = static_cast<int>(std::ceil((ymax - y0_) / bin_)) + 2;

  auto bin_range = [&](const std::array<int, 3> &tri) {
    double bx0 = 1e300, by0 = 1e300, bx1 = -1e300, by1 = -1e300;
    for (int v : tri) {
      bx0 = std::min(bx0, mesh.vertices[v].x());
      bx1 = std::max(bx1, mesh.vertices[v].x());
      by0 = std::min(by0, mesh.vertices[v].y());
      by1 = std::max(by1, mesh.vertices[v].y());
    }
    // Pad so points just beyond a boundary chord still find the triangle.
    const double pad = 0.25 * bin_;
    return std::array<int, 4>{static_cast<int>((bx0 - pad - x0_) / bin_),
                              static_cast<int>((bx1 + pad - x0_) / bin_),
                              static_cast<int>((by0 - pad - y0_) / bin_),
                              static_cast<int>((by1 + pad - y0_) / bin_)};
  };
  std::vector<int> count(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
  for (const auto &tri : mesh.triangles) {
    const auto r = bin_range(tri);
    for (int i = r[0]; i <= r[1]; ++i)
      for (int j = r[2]; j <= r[3]; ++j)
        ++count[static_cast<std::size_t>(j) * nx_ + i + 1];
  }
  for (std::size_t k = 1; k < count.size(); ++k)
    count[k] += count[k - 1];
  start_ = count;
  items_.resize(count.back());
  std::vector<int> fill(start_.begin(), start_.end() - 1);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto r = bin_range(mesh.triangles[t]);
    for (int i = r[0]; i <= r[1]; ++i)
      for (int j = r[2]; j <= r[3]; ++j)
        items_[fill[static_cast<std::size_t>(j) * nx_ + i]++] = static_cast<int>(t);
  }
}

std::array<double, 3> PointLocator::barycentric(int tri, const Vec2 &p) const {
  const auto &t = mesh_->triangles[tri];
  const Vec2 &a = mesh_->vertices[t[0]];
  const Vec2 &b = mesh_->vertices[t[1]];
  const Vec2 &c = mesh_->vertices[t[2]];
  const double det = cross(a, b, c);
  const double l1 = cross(p, b, c) / det;
  const double l2 = cross(a, p, c) / det;
  return {l1, l2, 1.0 - l1 - l2};
}

std::optional<PointLocator::Location> PointLocator::locate(const Vec2 &p) const {
  const int i = static_cast<int>((p.x() - x0_) / bin_);
  const int j = static_cast<int>((p.y() - y0_) / bin_);
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_)
    return std::nullopt;
  const std::size_t b = static_cast<std::size_t>(j) * nx_ + i;
  Location best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (int k = start_[b]; k < start_[b + 1]; ++k) {
    const int t = items_[k];
    const auto bary = barycentric(t, p);
    const double m = std::min({bary[0], bary[1], bary[2]});
    if (m >= -1e-12)
      return Location{t, bary};
    if (m > best_min) {
      best_min = m;
      best = Location{t, bary};
    }
  }
  // Outside every candidate: accept only a thin sliver beyond a boundary chord.
  if (best.triangle >= 0 && best_min > -0.05 && p.norm() <= mesh_->radius * (1.0 + 1e-12))
    return best;
  return std::nullopt;
}

} // namespace oscistrip
