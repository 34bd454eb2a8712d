#include "oscistrip/fem.hpp"

#include "oscistrip/errors.hpp"
#include "oscistrip/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oscistrip {

namespace {

// a + alpha * b for matrices sharing one sparsity pattern.
SparseMatrix axpy_same_pattern(const SparseMatrix &a, double alpha, const SparseMatrix &b) {
  SparseMatrix out = a;
  const Eigen::Index nnz = out.nonZeros();
  if (b.nonZeros() != nnz)
    throw NumericalError("operators do not share a sparsity pattern");
  double *v = out.valuePtr();
  const double *w = b.valuePtr();
  for (Eigen::Index k = 0; k < nnz; ++k)
    v[k] += alpha * w[k];
  return out;
}

} // namespace

SparsityPattern::SparsityPattern(const Mesh &mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.num_vertices());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.triangles.size() * 9 + mesh.num_vertices());
  for (const auto &t : mesh.triangles)
    for (int a : t)
      for (int b : t)
        trip.emplace_back(a, b, 0.0);
  for (Eigen::Index i = 0; i < n; ++i)
    trip.emplace_back(i, i, 0.0);
  zero_.resize(n, n);
  zero_.setFromTriplets(trip.begin(), trip.end());
  zero_.makeCompressed();
  std::fill(zero_.valuePtr(), zero_.valuePtr() + zero_.nonZeros(), 0.0);
}

int SparsityPattern::slot(int i, int j) const {
  const int *outer = zero_.outerIndexPtr();
  const int *inner = zero_.innerIndexPtr();
  const int *begin = inner + outer[j];
  const int *end = inner + outer[j + 1];
  const int *it = std::lower_bound(begin, end, i);
  if (it == end || *it != i)
    return -1;
  return static_cast<int>(it - inner);
}

// ---------------------------------------------------------------------------

namespace {

void fill_slots(const SparsityPattern &pattern, ConcentratedRule::Node &n) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const int s = pattern.slot(n.vertex[a], n.vertex[b]);
      if (s < 0)
        throw NumericalError("quadrature node couples vertices outside the mesh pattern");
      n.slots[a * 3 + b] = s;
    }
}

} // namespace

ConcentratedRule ConcentratedRule::strip(const Mesh &mesh, const PointLocator &locator,
                                         const SparsityPattern &pattern,
                                         const StripRegion &region, const QuadSpec &spec,
                                         const StripPotential &node_factor) {
  ConcentratedRule rule;
  const std::vector<StripNode> raw = strip_nodes(region, spec);
  rule.nodes_.reserve(raw.size());
  rule.node_s_.reserve(raw.size());
  rule.node_points_.reserve(raw.size());
  for (const StripNode &sn : raw) {
    const auto loc = locator.locate(sn.point);
    if (!loc) {
      std::ostringstream msg;
      msg << "strip quadrature node outside the mesh: point (" << sn.point.x() << ", "
          << sn.point.y() << "), s = " << sn.s << ", beta = " << sn.beta;
      throw NumericalError(msg.str());
    }
    Node n;
    n.vertex = mesh.triangles[loc->triangle];
    n.bary = loc->bary;
    n.weight = sn.weight * (node_factor ? node_factor(sn.point, sn.s) : 1.0);
    fill_slots(pattern, n);
    rule.nodes_.push_back(n);
    rule.node_s_.push_back(sn.s);
    rule.node_points_.push_back(sn.point);
  }
  return rule;
}

ConcentratedRule ConcentratedRule::boundary(const Mesh &mesh, const SparsityPattern &pattern,
                                            const BoundaryWeight &weight, int points) {
  ConcentratedRule rule;
  const GaussRule &gr = gauss_legendre(points);
  const double T = mesh.boundary.empty() ? 0.0 : mesh.boundary.back().sb;
  for (const auto &e : mesh.boundary) {
    const double len = e.sb - e.sa;
    for (int q = 0; q < points; ++q) {
      const double s = e.sa + 0.5 * len * (1.0 + gr.nodes[q]);
      const double phi_b = (s - e.sa) / len;
      Node n;
      n.vertex = {e.a, e.b, e.b};
      n.bary = {1.0 - phi_b, phi_b, 0.0};
      const double sw = s >= T ? s - T : s;
      n.weight = 0.5 * len * gr.weights[q] * (weight ? weight(sw) : 1.0);
      fill_slots(pattern, n);
      rule.nodes_.push_back(n);
      rule.node_s_.push_back(sw);
      rule.node_points_.push_back(mesh.vertices[e.a] * (1.0 - phi_b) +
                                  mesh.vertices[e.b] * phi_b);
    }
  }
  return rule;
}

Vector ConcentratedRule::load(const Nonlinearity &f, const Vector &u) const {
  Vector out = Vector::Zero(u.size());
  if (f.kind() == Nonlinearity::Kind::zero)
    return out;
  for (const Node &n : nodes_) {
    const double fw = n.weight * f.value(value_at(n, u));
    out[n.vertex[0]] += fw * n.bary[0];
    out[n.vertex[1]] += fw * n.bary[1];
    out[n.vertex[2]] += fw * n.bary[2];
  }
  return out;
}

double ConcentratedRule::primitive_sum(const Nonlinearity &f, const Vector &u) const {
  double total = 0.0;
  for (const Node &n : nodes_)
    total += n.weight * f.primitive(value_at(n, u));
  return total;
}

SparseMatrix ConcentratedRule::mass(const SparsityPattern &pattern,
                                    const std::vector<double> &coef) const {
  SparseMatrix out = pattern.zero();
  double *v = out.valuePtr();
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node &n = nodes_[k];
    const double c = n.weight * coef[k];
    if (c == 0.0)
      continue;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        v[n.slots[a * 3 + b]] += c * n.bary[a] * n.bary[b];
  }
  return out;
}

SparseMatrix ConcentratedRule::jacobian(const SparsityPattern &pattern, const Nonlinearity &f,
                                        const Vector &u) const {
  std::vector<double> coef(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k)
    coef[k] = f.derivative(value_at(nodes_[k], u));
  return mass(pattern, coef);
}

// ---------------------------------------------------------------------------

BaseOperators assemble_base(const Mesh &mesh, const SparsityPattern &pattern) {
  BaseOperators ops{pattern.zero(), pattern.zero()};
  double *kv = ops.stiffness.valuePtr();
  double *mv = ops.mass.valuePtr();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto &tri = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    if (!(area > 0.0))
      throw MeshError("degenerate triangle " + std::to_string(t) + " in assembly");
    std::array<double, 3> bx{}, cy{};
    for (int a = 0; a < 3; ++a) {
      const Vec2 &pj = mesh.vertices[tri[(a + 1) % 3]];
      const Vec2 &pk = mesh.vertices[tri[(a + 2) % 3]];
      bx[a] = pj.y() - pk.y();
      cy[a] = pk.x() - pj.x();
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const int s = pattern.slot(tri[a], tri[b]);
        kv[s] += (bx[a] * bx[b] + cy[a] * cy[b]) / (4.0 * area);
        mv[s] += area / 12.0 * (a == b ? 2.0 : 1.0);
      }
  }
  return ops;
}

SparseMatrix assemble_strip_potential(const Mesh &mesh, const StripRegion &region,
                                      const StripPotential &V, const QuadSpec &spec) {
  const SparsityPattern pattern(mesh);
  if (!V)
    return pattern.zero();
  const PointLocator locator(mesh, mesh.h_boundary > 0.0 ? mesh.h_boundary : 0.05);
  const ConcentratedRule rule = ConcentratedRule::strip(mesh, locator, pattern, region, spec, V);
  return rule.mass(pattern, std::vector<double>(rule.size(), 1.0));
}

// ---------------------------------------------------------------------------

FemSystem::FemSystem(std::shared_ptr<const Mesh> mesh, double lambda, Nonlinearity f)
    : mesh_(std::move(mesh)), lambda_(lambda), f_(std::move(f)) {
  pattern_ = std::make_shared<SparsityPattern>(*mesh_);
  BaseOperators base = assemble_base(*mesh_, *pattern_);
  k_ = std::move(base.stiffness);
  m_ = std::move(base.mass);
  n_ = axpy_same_pattern(k_, 1.0, m_);
  n_solver_ = SpdSolver(n_);
}

FemSystem FemSystem::strip(std::shared_ptr<const Mesh> mesh, const StripRegion &region,
                           const StripPotential &V, Nonlinearity f, double lambda,
                           const QuadSpec &spec) {
  FemSystem sys(std::move(mesh), lambda, std::move(f));
  sys.epsilon_ = region.epsilon();
  const double bin = sys.mesh_->h_boundary > 0.0 ? sys.mesh_->h_boundary : 0.05;
  const PointLocator locator(*sys.mesh_, bin);
  auto rule = std::make_shared<ConcentratedRule>(
      ConcentratedRule::strip(*sys.mesh_, locator, *sys.pattern_, region, spec));
  std::vector<double> coef(rule->size(), 0.0);
  if (V)
    for (std::size_t k = 0; k < rule->size(); ++k)
      coef[k] = V(rule->node_points_[k], rule->node_s_[k]);
  sys.p_ = V ? rule->mass(*sys.pattern_, coef) : sys.pattern_->zero();
  rule->node_points_ = {};
  rule->node_s_ = {};
  sys.rule_ = std::move(rule);
  sys.s_ = axpy_same_pattern(axpy_same_pattern(sys.k_, lambda, sys.m_), 1.0, sys.p_);
  return sys;
}

FemSystem FemSystem::limit(std::shared_ptr<const Mesh> mesh, const OscillationProfile &profile, const BoundaryWeight &V0,
                           Nonlinearity f, double lambda) {
  FemSystem sys(std::move(mesh), lambda, std::move(f));
  sys.epsilon_ = 0.0;
  sys.p_ = V0 ? sys.boundary_mass(V0) : sys.pattern_->zero();
  sys.rule_ = std::make_shared<ConcentratedRule>(ConcentratedRule::boundary(
      *sys.mesh_, *sys.pattern_, [&profile](double s) { return mu(profile, s); }));
  sys.s_ = axpy_same_pattern(axpy_same_pattern(sys.k_, lambda, sys.m_), 1.0, sys.p_);
  return sys;
}

SparseMatrix FemSystem::boundary_mass(const BoundaryWeight &w) const {
  const ConcentratedRule rule = ConcentratedRule::boundary(*mesh_, *pattern_, w);
  return rule.mass(*pattern_, std::vector<double>(rule.size(), 1.0));
}

void FemSystem::check_size(const Vector &u) const {
  if (static_cast<std::size_t>(u.size()) != mesh_->num_vertices())
    throw DomainError("nodal vector length does not match the mesh");
}

Vector FemSystem::apply_F(const Vector &u) const {
  check_size(u);
  return rule_->load(f_, u);
}

SparseMatrix FemSystem::apply_Fprime(const Vector &u) const {
  check_size(u);
  return rule_->jacobian(*pattern_, f_, u);
}

double FemSystem::h1(const Vector &u) const { return std::sqrt(std::max(0.0, u.dot(n_ * u))); }
double FemSystem::l2(const Vector &u) const { return std::sqrt(std::max(0.0, u.dot(m_ * u))); }
double FemSystem::dual(const Vector &r) const {
  check_size(r);
  return std::sqrt(std::max(0.0, r.dot(n_solver_.solve(r))));
}
double FemSystem::h1_inner(const Vector &u, const Vector &v) const {
  check_size(u);
  check_size(v);
  return u.dot(n_ * v);
}

double FemSystem::energy(const Vector &u) const {
  check_size(u);
  return 0.5 * u.dot(s_ * u) - rule_->primitive_sum(f_, u);
}

double FemSystem::coercivity_constant() const {
  return lowest_pencil_eigenvalue(s_, n_);
}

FemSystem FemSystem::with_nonlinearity(Nonlinearity f) const {
  FemSystem copy = *this;
  copy.f_ = std::move(f);
  return copy;
}

FemSystem FemSystem::with_lambda(double lambda) const {
  FemSystem copy = *this;
  copy.lambda_ = lambda;
  copy.s_ = axpy_same_pattern(axpy_same_pattern(k_, lambda, m_), 1.0, p_);
  return copy;
}

Vector FemSystem::interpolate(const ScalarField &field) const {
  Vector out(static_cast<Eigen::Index>(mesh_->num_vertices()));
  for (std::size_t v = 0; v < mesh_->num_vertices(); ++v)
    out[static_cast<Eigen::Index>(v)] = field(mesh_->vertices[v]);
  return out;
}

// ---------------------------------------------------------------------------

FemFieldEvaluator::FemFieldEvaluator(std::shared_ptr<const Mesh> mesh, Vector values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != mesh_->num_vertices())
    throw DomainError("nodal vector length does not match the mesh");
  locator_ = std::make_shared<PointLocator>(*mesh_, mesh_->h_boundary > 0.0 ? mesh_->h_boundary : 0.05);
}

double FemFieldEvaluator::operator()(const Vec2 &p) const {
  const auto loc = locator_->locate(p);
  if (!loc)
    throw NumericalError("point outside the mesh in nodal field evaluation");
  const auto &tri = mesh_->triangles[loc->triangle];
  return loc->bary[0] * values_[tri[0]] + loc->bary[1] * values_[tri[1]] +
         loc->bary[2] * values_[tri[2]];
}

ScalarField FemFieldEvaluator::as_field() const {
  auto self = std::make_shared<FemFieldEvaluator>(*this);
  return {[self](const Vec2 &p) { return (*self)(p); }, ScalarField::Smoothness::nodal_fem};
}

} // namespace oscistrip
