#include "../oracles.hpp"
#include "oscistrip/errors.hpp"
#include "oscistrip/fem.hpp"
#include "oscistrip/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace oscistrip;
using std::numbers::pi;

TEST_CASE("disk mesh places boundary vertices on the circle") {
  const Mesh m = generate_disk_mesh(1.0, 0.1, 0.01);
  CHECK_NOTHROW(m.validate());
  int count = 0;
  for (std::size_t i = 0; i < m.num_vertices(); ++i)
    if (!std::isnan(m.vertex_s[i])) {
      ++count;
      CHECK(std::abs(m.vertices[i].norm() - 1.0) < 1e-12);
    }
  CHECK(count == static_cast<int>(m.boundary.size()));
}

TEST_CASE("area and perimeter converge at second order") {
  std::vector<double> h, ea, ep;
  for (double hb : {0.04, 0.02, 0.01}) {
    const Mesh m = generate_disk_mesh(1.0, 0.1, hb);
    h.push_back(hb);
    ea.push_back(std::abs(m.area() - pi));
    double chords = 0.0;
    for (const auto &e : m.boundary)
      chords += (m.vertices[e.a] - m.vertices[e.b]).norm();
    ep.push_back(std::abs(chords - 2 * pi));
    CHECK(m.boundary_length() == doctest::Approx(chords).epsilon(1e-14));
    CHECK(m.boundary_length() < 2 * pi);
  }
  CHECK(oracle::loglog_fit(h, ea) > 1.8);
  CHECK(oracle::loglog_fit(h, ep) > 1.8);
}

TEST_CASE("mesh sizing errors") {
  CHECK_THROWS_AS(generate_disk_mesh(1.0, 0.1, 0.2), ConfigError);
  CHECK_THROWS_AS(generate_disk_mesh(1.0, 0.1, 0.0), ConfigError);
}

TEST_CASE("mesh text round trip") {
  const Mesh m = generate_disk_mesh(1.0, 0.25, 0.05);
  const auto path = std::filesystem::temp_directory_path() / "oscistrip_mesh_roundtrip.txt";
  write_mesh(m, path.string());
  const Mesh r = read_mesh(path.string());
  REQUIRE(r.num_vertices() == m.num_vertices());
  REQUIRE(r.triangles == m.triangles);
  REQUIRE(r.boundary.size() == m.boundary.size());
  for (std::size_t i = 0; i < m.num_vertices(); ++i)
    CHECK((r.vertices[i] - m.vertices[i]).norm() < 1e-14);
  std::filesystem::remove(path);
}

TEST_CASE("point locator reproduces linear fields") {
  auto mesh = std::make_shared<Mesh>(generate_disk_mesh(1.0, 0.2, 0.05));
  Vector v(static_cast<Eigen::Index>(mesh->num_vertices()));
  for (std::size_t i = 0; i < mesh->num_vertices(); ++i)
    v[static_cast<Eigen::Index>(i)] = 1.0 + 2.0 * mesh->vertices[i].x() - mesh->vertices[i].y();
  FemFieldEvaluator ev(mesh, v);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    Vec2 p(u(rng), u(rng));
    if (p.norm() > 0.999)
      continue;
    CHECK(ev(p) == doctest::Approx(1.0 + 2.0 * p.x() - p.y()).epsilon(1e-10));
  }
}
