#include "smrom/assembly.hpp"

#include "smrom/fe.hpp"
#include "smrom/quadrature.hpp"

namespace smrom {

namespace {

using Local12 = Eigen::Matrix<double, 12, 12>;
using Local3x12 = Eigen::Matrix<double, 3, 12>;
using Local3 = Eigen::Matrix3d;

template <typename LocalFn>
SparseMatrix assemble_velocity(const TaylorHoodSpace& space, Exec exec, LocalFn&& local_fn) {
  const int ne = space.mesh().n_elements();
  std::vector<Local12> locals(static_cast<std::size_t>(ne));
  for_each_index(exec, static_cast<std::size_t>(ne),
                 [&](std::size_t k) { locals[k] = local_fn(static_cast<int>(k)); });

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(ne) * 144);
  for (int k = 0; k < ne; ++k) {
    const auto dofs = space.element_vel_dofs(k);
    const Local12& a = locals[static_cast<std::size_t>(k)];
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) trips.emplace_back(dofs[i], dofs[j], a(i, j));
    }
  }
  SparseMatrix m(space.n_vel_dofs(), space.n_vel_dofs());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

template <typename LocalFn>
SparseMatrix assemble_pressure(const TaylorHoodSpace& space, Exec exec, LocalFn&& local_fn) {
  const int ne = space.mesh().n_elements();
  std::vector<Local3> locals(static_cast<std::size_t>(ne));
  for_each_index(exec, static_cast<std::size_t>(ne),
                 [&](std::size_t k) { locals[k] = local_fn(static_cast<int>(k)); });
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(ne) * 9);
  for (int k = 0; k < ne; ++k) {
    const auto& dofs = space.element_pres_dofs(k);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) trips.emplace_back(dofs[i], dofs[j], locals[static_cast<std::size_t>(k)](i, j));
    }
  }
  SparseMatrix m(space.n_pres_dofs(), space.n_pres_dofs());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

SparseMatrix assemble_mass_velocity(const TaylorHoodSpace& space, Exec exec) {
  const auto& rule = gauss7();
  return assemble_velocity(space, exec, [&](int k) {
    const ElementBasis basis(space.mesh(), k);
    Local12 a = Local12::Zero();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double w = rule.weights[q] * basis.area();
      const auto n = basis.p2_values(rule.points[q]);
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
          const double v = w * n[i] * n[j];
          a(i, j) += v;
          a(6 + i, 6 + j) += v;
        }
      }
    }
    return a;
  });
}

SparseMatrix assemble_stiffness_velocity(const TaylorHoodSpace& space, Exec exec) {
  const auto& rule = gauss7();
  return assemble_velocity(space, exec, [&](int k) {
    const ElementBasis basis(space.mesh(), k);
    Local12 a = Local12::Zero();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double w = rule.weights[q] * basis.area();
      const auto g = basis.p2_gradients(rule.points[q]);
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
          const double v = w * g[i].dot(g[j]);
          a(i, j) += v;
          a(6 + i, 6 + j) += v;
        }
      }
    }
    return a;
  });
}

SparseMatrix assemble_graddiv(const TaylorHoodSpace& space, Exec exec) {
  const auto& rule = gauss7();
  return assemble_velocity(space, exec, [&](int k) {
    const ElementBasis basis(space.mesh(), k);
    Local12 a = Local12::Zero();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double w = rule.weights[q] * basis.area();
      const auto g = basis.p2_gradients(rule.points[q]);
      // div of basis function (c, a) is the c-th partial of N_a
      Eigen::Matrix<double, 12, 1> div;
      for (int i = 0; i < 6; ++i) {
        div[i] = g[i].x();
        div[6 + i] = g[i].y();
      }
      a += w * div * div.transpose();
    }
    return a;
  });
}

SparseMatrix assemble_convection(const TaylorHoodSpace& space, const Vec& u, Exec exec) {
  const auto& rule = gauss7();
  return assemble_velocity(space, exec, [&](int k) {
    const ElementBasis basis(space.mesh(), k);
    const auto& nodes = space.element_nodes(k);
    Local12 a = Local12::Zero();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double w = rule.weights[q] * basis.area();
      const auto n = basis.p2_values(rule.points[q]);
      const auto g = basis.p2_gradients(rule.points[q]);
      Vec2 uq = Vec2::Zero();
      for (int i = 0; i < 6; ++i) {
        uq.x() += n[i] * u[space.vel_dof(0, nodes[i])];
        uq.y() += n[i] * u[space.vel_dof(1, nodes[i])];
      }
      std::array<double, 6> adv{};
      for (int i = 0; i < 6; ++i) adv[i] = uq.dot(g[i]);
      // row = test function b, column = trial function a
      for (int b = 0; b < 6; ++b) {
        for (int c = 0; c < 6; ++c) {
          const double v = 0.5 * w * (adv[c] * n[b] - adv[b] * n[c]);
          a(b, c) += v;
          a(6 + b, 6 + c) += v;
        }
      }
    }
    return a;
  });
}

SparseMatrix assemble_divergence(const TaylorHoodSpace& space, Exec exec) {
  const auto& rule = gauss7();
  const int ne = space.mesh().n_elements();
  std::vector<Local3x12> locals(static_cast<std::size_t>(ne));
  for_each_index(exec, static_cast<std::size_t>(ne), [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    const ElementBasis basis(space.mesh(), k);
    Local3x12 a = Local3x12::Zero();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double w = rule.weights[q] * basis.area();
      const auto g = basis.p2_gradients(rule.points[q]);
      const auto& l = rule.points[q];
      for (int p = 0; p < 3; ++p) {
        for (int i = 0; i < 6; ++i) {
          a(p, i) += w * l[p] * g[i].x();
          a(p, 6 + i) += w * l[p] * g[i].y();
        }
      }
    }
    locals[kk] = a;
  });
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(ne) * 36);
  for (int k = 0; k < ne; ++k) {
    const auto vd = space.element_vel_dofs(k);
    const auto& pd = space.element_pres_dofs(k);
    for (int p = 0; p < 3; ++p) {
      for (int i = 0; i < 12; ++i) trips.emplace_back(pd[p], vd[i], locals[static_cast<std::size_t>(k)](p, i));
    }
  }
  SparseMatrix b(space.n_pres_dofs(), space.n_vel_dofs());
  b.setFromTriplets(trips.begin(), trips.end());
  return b;
}

SparseMatrix assemble_mass_pressure(const TaylorHoodSpace& space, Exec exec) {
  return assemble_pressure(space, exec, [&](int k) {
    const double area = std::abs(space.mesh().signed_area(k));
    Local3 a;
    a << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    return Local3(a * (area / 12.0));
  });
}

SparseMatrix assemble_pressure_tau_stiffness(const TaylorHoodSpace& space, const std::vector<double>& tau,
                                             Exec exec) {
  if (static_cast<int>(tau.size()) != space.mesh().n_elements()) {
    throw Error(ErrorCode::dimension_mismatch, "tau needs one entry per element");
  }
  return assemble_pressure(space, exec, [&](int k) {
    const ElementBasis basis(space.mesh(), k);
    const auto& g = basis.p1_gradients();
    Local3 a;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a(i, j) = tau[static_cast<std::size_t>(k)] * basis.area() * g[i].dot(g[j]);
    }
    return a;
  });
}

Vec pressure_mean_weights(const TaylorHoodSpace& space) {
  Vec m = Vec::Zero(space.n_pres_dofs());
  for (int k = 0; k < space.mesh().n_elements(); ++k) {
    const double third = std::abs(space.mesh().signed_area(k)) / 3.0;
    for (int v : space.element_pres_dofs(k)) m[v] += third;
  }
  return m;
}

Vec assemble_load(const TaylorHoodSpace& space, const VelocityFunction& f, double t, Exec exec) {
  const auto& rule = gauss7();
  const int ne = space.mesh().n_elements();
  std::vector<Eigen::Matrix<double, 12, 1>> locals(static_cast<std::size_t>(ne));
  for_each_index(exec, static_cast<std::size_t>(ne), [&](std::size_t kk) {
    const ElementBasis basis(space.mesh(), static_cast<int>(kk));
    Eigen::Matrix<double, 12, 1> a = Eigen::Matrix<double, 12, 1>::Zero();
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double w = rule.weights[q] * basis.area();
      const auto n = basis.p2_values(rule.points[q]);
      const Vec2 fq = f(basis.point(rule.points[q]), t);
      for (int i = 0; i < 6; ++i) {
        a[i] += w * fq.x() * n[i];
        a[6 + i] += w * fq.y() * n[i];
      }
    }
    locals[kk] = a;
  });
  Vec out = Vec::Zero(space.n_vel_dofs());
  for (int k = 0; k < ne; ++k) {
    const auto dofs = space.element_vel_dofs(k);
    for (int i = 0; i < 12; ++i) out[dofs[i]] += locals[static_cast<std::size_t>(k)][i];
  }
  return out;
}

namespace {

struct LocalVelocity {
  Vec2 value;
  Mat2 grad;  // grad(r, c) = d u_r / d x_c
};

LocalVelocity eval_local(const TaylorHoodSpace& space, const Vec& u, int k, const std::array<double, 6>& n,
                         const std::array<Vec2, 6>& g) {
  const auto& nodes = space.element_nodes(k);
  LocalVelocity out{Vec2::Zero(), Mat2::Zero()};
  for (int i = 0; i < 6; ++i) {
    const double ux = u[space.vel_dof(0, nodes[i])];
    const double uy = u[space.vel_dof(1, nodes[i])];
    out.value += n[i] * Vec2(ux, uy);
    out.grad.row(0) += ux * g[i].transpose();
    out.grad.row(1) += uy * g[i].transpose();
  }
  return out;
}

}  // namespace

double trilinear_b(const TaylorHoodSpace& space, const Vec& u, const Vec& v, const Vec& w) {
  const auto& rule = gauss7();
  double sum = 0.0;
  for (int k = 0; k < space.mesh().n_elements(); ++k) {
    const ElementBasis basis(space.mesh(), k);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const double wq = rule.weights[q] * basis.area();
      const auto n = basis.p2_values(rule.points[q]);
      const auto g = basis.p2_gradients(rule.points[q]);
      const auto uq = eval_local(space, u, k, n, g);
      const auto vq = eval_local(space, v, k, n, g);
      const auto ww = eval_local(space, w, k, n, g);
      const Vec2 u_grad_v = vq.grad * uq.value;
      const Vec2 u_grad_w = ww.grad * uq.value;
      sum += 0.5 * wq * (u_grad_v.dot(ww.value) - u_grad_w.dot(vq.value));
    }
  }
  return sum;
}

std::vector<Vec2> elementwise_laplacian(const TaylorHoodSpace& space, const Vec& u) {
  std::vector<Vec2> lap(static_cast<std::size_t>(space.mesh().n_elements()));
  for (int k = 0; k < space.mesh().n_elements(); ++k) {
    const ElementBasis basis(space.mesh(), k);
    const auto h = basis.p2_hessians();
    const auto& nodes = space.element_nodes(k);
    Vec2 out = Vec2::Zero();
    for (int i = 0; i < 6; ++i) {
      const double tr = h[i].trace();
      out.x() += tr * u[space.vel_dof(0, nodes[i])];
      out.y() += tr * u[space.vel_dof(1, nodes[i])];
    }
    lap[static_cast<std::size_t>(k)] = out;
  }
  return lap;
}

double tau_inner_product(const TaylorHoodSpace& space, const std::vector<double>& tau, const Vec& a, const Vec& b) {
  const auto& rule = gauss7();
  double sum = 0.0;
  for (int k = 0; k < space.mesh().n_elements(); ++k) {
    const ElementBasis basis(space.mesh(), k);
    double local = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      local += rule.weights[q] * basis.area() *
               space.eval_velocity(a, k, rule.points[q]).dot(space.eval_velocity(b, k, rule.points[q]));
    }
    sum += tau[static_cast<std::size_t>(k)] * local;
  }
  return sum;
}

double tau_inner_product(const TaylorHoodSpace& space, const std::vector<double>& tau, const std::vector<Vec2>& a,
                         const std::vector<Vec2>& b) {
  double sum = 0.0;
  for (int k = 0; k < space.mesh().n_elements(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    sum += tau[kk] * std::abs(space.mesh().signed_area(k)) * a[kk].dot(b[kk]);
  }
  return sum;
}

std::vector<Vec2> pressure_gradients(const TaylorHoodSpace& space, const Vec& p) {
  std::vector<Vec2> out(static_cast<std::size_t>(space.mesh().n_elements()));
  for (int k = 0; k < space.mesh().n_elements(); ++k) {
    const ElementBasis basis(space.mesh(), k);
    const auto& g = basis.p1_gradients();
    const auto& d = space.element_pres_dofs(k);
    out[static_cast<std::size_t>(k)] = p[d[0]] * g[0] + p[d[1]] * g[1] + p[d[2]] * g[2];
  }
  return out;
}

}  // namespace smrom
