#include "smrom/pod.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

namespace smrom {

const char* to_string(FieldKind f) { return f == FieldKind::velocity ? "velocity" : "pressure"; }

const char* to_string(Centering c) {
  switch (c) {
    case Centering::none: return "none";
    case Centering::initial: return "initial";
    case Centering::mean: return "mean";
  }
  return "none";
}

FieldKind parse_field_kind(const std::string& s) {
  if (s == "velocity") return FieldKind::velocity;
  if (s == "pressure") return FieldKind::pressure;
  throw Error(ErrorCode::config, "unknown field '" + s + "'");
}

Centering parse_centering(const std::string& s) {
  if (s == "none" || s == "off") return Centering::none;
  if (s == "initial") return Centering::initial;
  if (s == "mean" || s == "on") return Centering::mean;
  throw Error(ErrorCode::config, "unknown centering '" + s + "'");
}

namespace {

Vec weighted(const SparseMatrix& w, const Vec& v) { return w * v; }

}  // namespace

PODBasis compute_pod(const Mat& snapshots, std::shared_ptr<const SparseMatrix> weight, double dt, int r,
                     Exec exec) {
  if (snapshots.cols() == 0) throw Error(ErrorCode::empty_snapshot_set, "no snapshots");
  if (!weight || weight->rows() != snapshots.rows() || weight->cols() != snapshots.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "weight does not match snapshot length");
  }
  if (!(dt > 0.0)) throw Error(ErrorCode::invalid_argument, "dt must be positive");
  {
    Eigen::SparseMatrix<double> wc = *weight;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(wc);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::non_spd_weight, "Cholesky of the weight failed");
  }

  const auto n = static_cast<std::size_t>(snapshots.cols());
  Mat ws(snapshots.rows(), snapshots.cols());
  for_each_index(exec, n, [&](std::size_t j) {
    ws.col(static_cast<Eigen::Index>(j)) = weighted(*weight, snapshots.col(static_cast<Eigen::Index>(j)));
  });
  Mat gram = dt * (snapshots.transpose() * ws);
  gram = 0.5 * (gram + gram.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  if (eig.info() != Eigen::Success) throw Error(ErrorCode::non_convergence, "Gram eigensolve failed");
  const Eigen::Index nn = gram.rows();
  Vec lambda(nn);
  Mat vecs(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    lambda[i] = eig.eigenvalues()[nn - 1 - i];
    vecs.col(i) = eig.eigenvectors().col(nn - 1 - i);
  }
  const double top = std::max(lambda[0], 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < nn; ++i) {
    if (lambda[i] < 0.0) lambda[i] = 0.0;
    if (top > 0.0 && lambda[i] > 1e-12 * top) ++rank;
  }

  PODBasis b;
  b.eigenvalues = lambda;
  b.rank = rank;
  b.dt = dt;
  b.weight = weight;
  b.offset = Vec::Zero(snapshots.rows());
  const int keep = (r < 0 || r > rank) ? rank : r;
  b.modes.resize(snapshots.rows(), keep);
  for (int i = 0; i < keep; ++i) {
    // a sign convention keeps the output independent of the eigensolver's choice
    Vec v = vecs.col(i);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    b.modes.col(i) = std::sqrt(dt / lambda[i]) * (snapshots * v);
  }
  // two passes of weighted modified Gram-Schmidt remove round-off drift
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < keep; ++i) {
      for (int j = 0; j < i; ++j) {
        const double c = b.modes.col(j).dot(*weight * b.modes.col(i));
        b.modes.col(i) -= c * b.modes.col(j);
      }
      const double nrm = std::sqrt(b.modes.col(i).dot(*weight * b.modes.col(i)));
      b.modes.col(i) /= nrm;
    }
  }
  return b;
}

Mat center_snapshots(const Mat& snapshots, Centering c, const Vec& initial, Vec& offset) {
  switch (c) {
    case Centering::none: offset = Vec::Zero(snapshots.rows()); break;
    case Centering::initial: offset = initial; break;
    case Centering::mean: offset = snapshots.rowwise().mean(); break;
  }
  return snapshots.colwise() - offset;
}

PODBasis truncate(const PODBasis& basis, int r) {
  if (r < 0 || r > basis.r()) throw Error(ErrorCode::dimension_mismatch, "truncation beyond the stored modes");
  PODBasis out = basis;
  out.modes = basis.modes.leftCols(r);
  return out;
}

Vec project(const PODBasis& basis, const Vec& field) {
  if (field.size() != basis.modes.rows()) throw Error(ErrorCode::dimension_mismatch, "field length");
  return basis.modes.transpose() * (*basis.weight * field);
}

Vec reconstruct(const PODBasis& basis, const Vec& coords) {
  if (coords.size() > basis.r()) throw Error(ErrorCode::dimension_mismatch, "too many coordinates");
  return basis.modes.leftCols(coords.size()) * coords;
}

Vec reconstruct_field(const PODBasis& basis, const Vec& coords) { return basis.offset + reconstruct(basis, coords); }

double contribution_ratio(const Vec& eigenvalues, int r) {
  const double total = eigenvalues.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::all_zero_spectrum, "eigenvalues sum to zero");
  if (r < 0 || r > eigenvalues.size()) throw Error(ErrorCode::invalid_argument, "r out of range");
  if (r == 0) return 1.0;
  // summing the tail avoids cancellation when the ratio is tiny
  const double tail = eigenvalues.tail(eigenvalues.size() - r).sum();
  return std::clamp(tail / total, 0.0, 1.0);
}

double projection_error(const Mat& snapshots, const PODBasis& basis, int r) {
  if (r < 0 || r > basis.r()) throw Error(ErrorCode::dimension_mismatch, "r exceeds stored modes");
  const Mat phi = basis.modes.leftCols(r);
  double sum = 0.0;
  for (Eigen::Index n = 0; n < snapshots.cols(); ++n) {
    const Vec u = snapshots.col(n);
    const Vec e = u - phi * (phi.transpose() * (*basis.weight * u));
    sum += e.dot(*basis.weight * e);
  }
  return basis.dt * sum;
}

int rank_for_ratio(const PODBasis& basis, double tol) {
  for (int r = 1; r <= basis.rank; ++r) {
    if (contribution_ratio(basis.eigenvalues, r) <= tol) return r;
  }
  return basis.rank;
}

int snap_to_eigenspace(const Vec& eigenvalues, int r, int rank, double rel_gap) {
  while (r >= 1 && r < rank && std::abs(eigenvalues[r - 1] - eigenvalues[r]) < rel_gap * eigenvalues[r - 1]) ++r;
  return r;
}

double orthonormality_defect(const PODBasis& basis) {
  if (basis.r() == 0) return 0.0;
  const Mat g = basis.modes.transpose() * (*basis.weight * basis.modes);
  return (g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace smrom
