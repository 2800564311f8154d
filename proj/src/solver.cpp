/*
 * Copyright 2026 The netgrip Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include "netgrip/net.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace netgrip
{
namespace
{

using Eigen::VectorXd;

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
// Largest coordinate change of one trial step, mm. Contact is node-based, so a
// longer step could carry the object through the net.
constexpr double kMaxTrialMove = 2.0;

double infNorm(const VectorXd& v)
{
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

// Packs the free node coordinates and the free object axes into one vector.
class EquilibriumProblem
{
public:
  EquilibriumProblem(const NetMesh& mesh, const std::array<Vec3, kClawCount>& rim_targets,
                     const ObjectLoad* load, const SolverParams& params,
                     const FrictionState* friction)
    : mesh_(mesh), load_(load), params_(params), friction_(friction)
  {
    positions_ = mesh.rest_positions;
    for (int k = 0; k < kClawCount; ++k)
      for (const int i : mesh.rim_groups[k])
        positions_[i] = rim_targets[k];

    for (std::size_t i = 0; i < mesh.node_count(); ++i)
      if (!mesh.fixed[i])
        free_nodes_.push_back(static_cast<int>(i));

    if (load && load->coupling.mode == ObjectCoupling::Mode::Free)
      for (int axis = 0; axis < 3; ++axis)
        if (load->coupling.free_axes[axis])
          object_axes_.push_back(axis);
  }

  int dimension() const
  {
    return static_cast<int>(3 * free_nodes_.size() + object_axes_.size());
  }

  VectorXd pack(const std::vector<Vec3>& positions, const Vec3& offset) const
  {
    VectorXd x(dimension());
    int k = 0;
    for (const int i : free_nodes_)
      for (int c = 0; c < 3; ++c)
        x[k++] = positions[i][c];
    for (const int axis : object_axes_)
      x[k++] = offset[axis];
    return x;
  }

  void unpack(const VectorXd& x, std::vector<Vec3>& positions, Vec3& offset) const
  {
    positions = positions_;
    int k = 0;
    for (const int i : free_nodes_)
    {
      positions[i] = Vec3(x[k], x[k + 1], x[k + 2]);
      k += 3;
    }
    offset.setZero();
    for (const int axis : object_axes_)
      offset[axis] = x[k++];
  }

  const std::vector<Vec3>& boundPositions() const { return positions_; }

  double evaluate(const VectorXd& x, VectorXd& gradient) const
  {
    std::vector<Vec3> positions;
    Vec3 offset;
    unpack(x, positions, offset);

    const ElasticEvaluation elastic = elastic_energy(mesh_, positions, params_.tension_only);
    double energy = elastic.energy;
    std::vector<Vec3> node_gradient = elastic.gradient;
    Vec3 object_gradient = Vec3::Zero();

    if (load_)
    {
      if (offset.norm() > load_->coupling.max_travel)
        throw ConvergenceError("object left the net (travel " + std::to_string(offset.norm()) +
                                 " mm)",
                               {});
      const ContactEvaluation contact =
        contact_forces(positions, load_->object, load_->contact, friction_, offset);
      energy += contact.energy;
      for (const int i : free_nodes_)
        node_gradient[i] -= contact.forces[i];
      object_gradient -= contact.object_force;

      if (!object_axes_.empty())
      {
        const double weight = load_->object.mass * load_->contact.gravity;
        energy += weight * offset.z();
        object_gradient.z() += weight;
        if (load_->coupling.support && offset.z() < 0.0)
        {
          energy += 0.5 * load_->coupling.k_support * offset.z() * offset.z();
          object_gradient.z() += load_->coupling.k_support * offset.z();
        }
      }
    }

    gradient.resize(dimension());
    int k = 0;
    for (const int i : free_nodes_)
    {
      gradient.segment<3>(k) = node_gradient[i];
      k += 3;
    }
    for (const int axis : object_axes_)
      gradient[k++] = object_gradient[axis];
    return energy;
  }

  // Diagonal preconditioner scale for steepest-descent restarts.
  double stepScale() const
  {
    double k_max = 0.0;
    for (const NetEdge& e : mesh_.edges)
      k_max = std::max(k_max, e.stiffness);
    double diag = 6.0 * k_max;
    if (load_)
      diag += load_->contact.k_contact + load_->contact.k_tangential;
    return 1.0 / diag;
  }

private:
  const NetMesh& mesh_;
  const ObjectLoad* load_;
  const SolverParams& params_;
  const FrictionState* friction_;
  std::vector<Vec3> positions_;
  std::vector<int> free_nodes_;
  std::vector<int> object_axes_;
};

// Initial guess without a warm start: stretch the rest cone radially and
// axially so its rim meets the claw tips.
std::vector<Vec3> coneGuess(const NetMesh& mesh, const std::array<Vec3, kClawCount>& targets)
{
  bool at_rest = true;
  for (int k = 0; k < kClawCount; ++k)
    for (const int i : mesh.rim_groups[k])
      at_rest = at_rest && (mesh.rest_positions[i] - targets[k]).norm() <= 1e-12;
  if (at_rest)
    return mesh.rest_positions;

  const Vec3& rest_rim = mesh.rest_positions[mesh.rim_groups[0].front()];
  const double rest_radius = rest_rim.head<2>().norm();
  const double rest_depth = -rest_rim.z();
  const double top_radius = mesh.rest_positions[mesh.node(0, 0)].head<2>().norm();

  double radius = 0.0, depth = 0.0;
  for (const Vec3& t : targets)
  {
    radius += t.head<2>().norm() / kClawCount;
    depth += -t.z() / kClawCount;
  }

  std::vector<Vec3> guess = mesh.rest_positions;
  for (std::size_t i = 0; i < guess.size(); ++i)
  {
    if (mesh.fixed[i])
      continue;
    const Vec3& p = mesh.rest_positions[i];
    const double r = p.head<2>().norm();
    const double t = rest_radius > top_radius ? (r - top_radius) / (rest_radius - top_radius)
                                              : (rest_depth > 0.0 ? -p.z() / rest_depth : 1.0);
    const double new_r = top_radius + (radius - top_radius) * t;
    const double scale = r > 0.0 ? new_r / r : 1.0;
    guess[i] = Vec3(p.x() * scale, p.y() * scale, -depth * t);
  }
  return guess;
}

}  // namespace

void validate(const SolverParams& params)
{
  if (!(params.tolerance > 0.0))
    throw ConstructionError("solver tolerance must be positive");
  if (params.max_iterations <= 0)
    throw ConstructionError("max_iterations must be positive");
  if (params.memory <= 0)
    throw ConstructionError("quasi-Newton memory must be positive");
}

EquilibriumResult solve_equilibrium(const NetMesh& mesh, const std::array<Vec3, kClawCount>& rim_targets,
                                    const ObjectLoad* load, const SolverParams& params,
                                    const std::vector<Vec3>* warm_start,
                                    const FrictionState* friction, const Vec3& warm_offset)
{
  validate(params);
  if (load)
  {
    validate(load->object);
    validate(load->contact);
  }
  if (warm_start && warm_start->size() != mesh.node_count())
    throw PreconditionError("warm start does not match the mesh");

  const EquilibriumProblem problem(mesh, rim_targets, load, params, friction);
  const std::vector<Vec3> start = warm_start ? *warm_start : coneGuess(mesh, rim_targets);
  VectorXd x = problem.pack(start, warm_offset);
  VectorXd g;
  double f = problem.evaluate(x, g);
  double gnorm = infNorm(g);

  const double restart_scale = problem.stepScale();
  const bool quasi_newton = params.method == SolverMethod::Lbfgs;
  std::deque<VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> residuals;
  double descent_step = 1.0;

  int iter = 0;
  while (gnorm > params.tolerance)
  {
    if (iter >= params.max_iterations)
      throw ConvergenceError("equilibrium did not converge in " + std::to_string(iter) +
                               " iterations (residual " + std::to_string(gnorm) + " N)",
                             residuals);

    VectorXd d;
    if (quasi_newton && !s_hist.empty())
    {
      // Two-loop recursion.
      VectorXd q = g;
      std::vector<double> alpha(s_hist.size());
      for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k)
      {
        alpha[k] = rho_hist[k] * s_hist[k].dot(q);
        q -= alpha[k] * y_hist[k];
      }
      const double gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
      for (std::size_t k = 0; k < s_hist.size(); ++k)
      {
        const double beta = rho_hist[k] * y_hist[k].dot(q);
        q += (alpha[k] - beta) * s_hist[k];
      }
      d = -q;
    }
    else
    {
      d = -restart_scale * g;
    }

    double slope = g.dot(d);
    if (!(slope < 0.0))
    {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -restart_scale * g;
      slope = g.dot(d);
    }

    double step = quasi_newton ? 1.0 : std::min(1.0, 2.0 * descent_step);
    step = std::min(step, kMaxTrialMove / infNorm(d));
    bool accepted = false;
    VectorXd x_new, g_new;
    double f_new = f;
    for (int ls = 0; ls < kMaxBacktracks; ++ls)
    {
      x_new = x + step * d;
      f_new = problem.evaluate(x_new, g_new);
      if (f_new <= f + kArmijo * step * slope)
      {
        accepted = true;
        break;
      }
      // Near convergence the energy change drops below round-off; fall back
      // to requiring progress in the residual instead.
      const double noise = 1e-13 * std::max(1.0, std::abs(f));
      if (f_new - f <= noise && infNorm(g_new) < gnorm)
      {
        accepted = true;
        break;
      }
      step *= 0.5;
    }

    if (!accepted)
    {
      if (!s_hist.empty())
      {
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
        ++iter;
        residuals.push_back(gnorm);
        continue;
      }
      throw ConvergenceError("line search failed at residual " + std::to_string(gnorm) + " N",
                             residuals);
    }

    descent_step = step;
    const VectorXd s = x_new - x;
    const VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (quasi_newton && sy > 1e-14 * s.norm() * y.norm())
    {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > params.memory)
      {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    gnorm = infNorm(g);
    ++iter;
    residuals.push_back(gnorm);
  }

  EquilibriumResult result;
  problem.unpack(x, result.positions, result.object_offset);
  result.converged = true;
  result.residual_norm = gnorm;
  result.iterations = iter;
  result.energy = f;

  const std::size_t n = mesh.node_count();
  result.contact_forces.assign(n, Vec3::Zero());
  result.normal_forces.assign(n, Vec3::Zero());
  result.tangential_forces.assign(n, Vec3::Zero());
  result.contact_normals.assign(n, Vec3::Zero());
  if (load)
  {
    const ContactEvaluation contact =
      contact_forces(result.positions, load->object, load->contact, friction, result.object_offset);
    result.normal_forces = contact.normal_forces;
    result.contact_normals = contact.normals;
    for (std::size_t i = 0; i < n; ++i)
    {
      // Friction caps lag one step behind the normal force; report the part
      // inside the current Coulomb cone.
      Vec3 ft = contact.tangential_forces[i];
      const double cone = load->object.mu * contact.normal_forces[i].norm();
      const double mag = ft.norm();
      if (mag > cone)
        ft *= mag > 0.0 ? cone / mag : 0.0;
      result.tangential_forces[i] = ft;
      result.contact_forces[i] = contact.normal_forces[i] + ft;
    }
    if (load->coupling.mode == ObjectCoupling::Mode::Free && load->coupling.support &&
        result.object_offset.z() < 0.0)
      result.support_force = -load->coupling.k_support * result.object_offset.z();
  }
  result.node_stress = node_stress(mesh, result, params.tension_only);
  return result;
}

}  // namespace netgrip
