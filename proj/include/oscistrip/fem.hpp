#pragma once

#include "oscistrip/geometry.hpp"
#include "oscistrip/linalg.hpp"
#include "oscistrip/mesh.hpp"
#include "oscistrip/nonlinearity.hpp"
#include "oscistrip/quadrature.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace oscistrip {

/// Potential on the strip, given at a physical point and its arclength foot.
using StripPotential = std::function<double(const Vec2 &point, double s)>;
/// Potential (or weight) on the boundary as a function of arclength.
using BoundaryWeight = std::function<double(double s)>;

/// Shared sparsity of all P1 operators on a mesh (vertex adjacency).
class SparsityPattern {
public:
  explicit SparsityPattern(const Mesh &mesh);

  /// Zero-valued matrix with the full pattern.
  SparseMatrix zero() const { return zero_; }
  /// Position of (i, j) in the value array; -1 when absent.
  int slot(int i, int j) const;

private:
  SparseMatrix zero_;
};

/// Quadrature for a measure concentrated on the strip or on the boundary,
/// mapped to P1 basis functions. Each node stores its triangle vertices,
/// barycentric coordinates, weight and the 9 matrix slots of its vertex pairs.
class ConcentratedRule {
public:
  struct Node {
    std::array<int, 3> vertex{};
    std::array<double, 3> bary{};
    double weight = 0.0;
    std::array<int, 9> slots{};
  };

  /// Strip rule: weights approximate (1/eps) int_{omega_eps} . dxi.
  /// `node_factor` (optional) multiplies each node weight.
  static ConcentratedRule strip(const Mesh &mesh, const PointLocator &locator,
                                const SparsityPattern &pattern, const StripRegion &region,
                                const QuadSpec &spec, const StripPotential &node_factor = {});
  /// Boundary rule: Gauss points in arclength on every boundary edge,
  /// weights approximate int_{dOmega} weight(s) . ds.
  static ConcentratedRule boundary(const Mesh &mesh, const SparsityPattern &pattern,
                                   const BoundaryWeight &weight, int points = 3);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node> &nodes() const { return nodes_; }

  double value_at(const Node &n, const Vector &u) const {
    return n.bary[0] * u[n.vertex[0]] + n.bary[1] * u[n.vertex[1]] + n.bary[2] * u[n.vertex[2]];
  }

  /// <F(u), phi_i> = sum_nodes w f(u(x)) phi_i(x).
  Vector load(const Nonlinearity &f, const Vector &u) const;
  /// sum_nodes w F(u(x)) with F the primitive of f.
  double primitive_sum(const Nonlinearity &f, const Vector &u) const;
  /// Matrix sum_nodes w c(x) phi_i phi_j with c = node coefficient.
  SparseMatrix mass(const SparsityPattern &pattern, const std::vector<double> &coef) const;
  /// Same with c = f'(u(x)).
  SparseMatrix jacobian(const SparsityPattern &pattern, const Nonlinearity &f,
                        const Vector &u) const;

private:
  std::vector<Node> nodes_;
  std::vector<double> node_s_;
  std::vector<Vec2> node_points_;

  friend class FemSystem;
};

/// Assembled P1 system for one value of epsilon (0 = limit problem).
///
/// a_eps(u, v) = int grad u grad v + lambda int u v + <P u, v>, where P is
/// the strip potential (1/eps) int_{omega_eps} V u v for eps > 0, or the
/// boundary potential int V0 u v for eps = 0. The reaction F is taken over
/// the strip measure or over mu dS on the boundary.
class FemSystem {
public:
  /// eps > 0. V is the strip potential (pass {} for V == 0).
  static FemSystem strip(std::shared_ptr<const Mesh> mesh, const StripRegion &region,
                         const StripPotential &V, Nonlinearity f, double lambda,
                         const QuadSpec &spec);
  /// eps = 0. V0 is the limit boundary potential (pass {} for V0 == 0).
  static FemSystem limit(std::shared_ptr<const Mesh> mesh, const OscillationProfile &profile, const BoundaryWeight &V0,
                         Nonlinearity f, double lambda);

  double epsilon() const { return epsilon_; }
  bool is_limit() const { return epsilon_ == 0.0; }
  double lambda() const { return lambda_; }
  const Mesh &mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const SparsityPattern &pattern() const { return *pattern_; }
  const Nonlinearity &nonlinearity() const { return f_; }
  std::size_t size() const { return mesh_->num_vertices(); }

  const SparseMatrix &stiffness() const { return k_; }
  const SparseMatrix &mass() const { return m_; }
  const SparseMatrix &potential() const { return p_; }
  /// S = K + lambda M + P.
  const SparseMatrix &system() const { return s_; }
  /// N = K + M, the discrete H1 inner product.
  const SparseMatrix &norm_matrix() const { return n_; }
  const SpdSolver &norm_solver() const { return n_solver_; }
  const ConcentratedRule &reaction_rule() const { return *rule_; }

  Vector apply_F(const Vector &u) const;
  SparseMatrix apply_Fprime(const Vector &u) const;

  /// int_{dOmega} w u v dS with exact arclength on boundary edges.
  SparseMatrix boundary_mass(const BoundaryWeight &w) const;

  double h1(const Vector &u) const;
  double l2(const Vector &u) const;
  /// sqrt(r^T N^-1 r), the Riesz dual of the discrete H1 norm.
  double dual(const Vector &r) const;
  double h1_inner(const Vector &u, const Vector &v) const;

  /// 1/2 u^T S u - sum w F(u) over the reaction measure.
  double energy(const Vector &u) const;

  /// Smallest eigenvalue of the pencil (S, K + M).
  double coercivity_constant() const;

  /// Same mesh and operators with f replaced (used for F == 0 comparisons).
  FemSystem with_nonlinearity(Nonlinearity f) const;
  /// Same mesh, potential and reaction measure with lambda replaced.
  FemSystem with_lambda(double lambda) const;

  /// Interpolates a field at the mesh vertices.
  Vector interpolate(const ScalarField &field) const;

  void check_size(const Vector &u) const;

private:
  FemSystem(std::shared_ptr<const Mesh> mesh, double lambda, Nonlinearity f);

  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<const SparsityPattern> pattern_;
  double epsilon_ = 0.0;
  double lambda_ = 1.0;
  Nonlinearity f_;
  SparseMatrix k_, m_, p_, s_, n_;
  SpdSolver n_solver_;
  std::shared_ptr<const ConcentratedRule> rule_;
};

/// Stiffness and mass by exact P1 element integration.
struct BaseOperators {
  SparseMatrix stiffness;
  SparseMatrix mass;
};
BaseOperators assemble_base(const Mesh &mesh, const SparsityPattern &pattern);

/// (1/eps) int_{omega_eps} V phi_i phi_j on the given mesh.
SparseMatrix assemble_strip_potential(const Mesh &mesh, const StripRegion &region,
                                      const StripPotential &V, const QuadSpec &spec);

/// Evaluates a nodal field at a point by P1 interpolation.
class FemFieldEvaluator {
public:
  FemFieldEvaluator(std::shared_ptr<const Mesh> mesh, Vector values);
  double operator()(const Vec2 &p) const;
  ScalarField as_field() const;

private:
  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<const PointLocator> locator_;
  Vector values_;
};

} // namespace oscistrip
