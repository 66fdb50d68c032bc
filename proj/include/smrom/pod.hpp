#pragma once

#include "smrom/common.hpp"
#include "smrom/parallel.hpp"

#include <memory>
#include <string>

namespace smrom {

enum class FieldKind { velocity, pressure };
/// What was subtracted from the snapshots before the decomposition.
enum class Centering { none, initial, mean };

const char* to_string(FieldKind f);
const char* to_string(Centering c);
FieldKind parse_field_kind(const std::string& s);
Centering parse_centering(const std::string& s);

/// Weight-orthonormal POD modes (columns) with the full Gram spectrum.
/// Eigenvalues include the snapshot spacing dt, so that the tail identity
/// dt * sum_n |u_n - P_r u_n|^2 = sum_{i>r} lambda_i holds verbatim.
struct PODBasis {
  Mat modes;
  Vec eigenvalues;  ///< all N values, descending, clamped at zero
  int rank = 0;     ///< numerical rank M
  double dt = 0.0;
  FieldKind field = FieldKind::velocity;
  Centering centering = Centering::none;
  Vec offset;  ///< subtracted field (zero vector when centering is none)
  std::shared_ptr<const SparseMatrix> weight;

  int r() const { return static_cast<int>(modes.cols()); }
};

/// Method of snapshots. `r` < 0 keeps all M modes; larger values are clamped
/// to M. Throws EmptySnapshotSet or NonSPDWeight.
PODBasis compute_pod(const Mat& snapshots, std::shared_ptr<const SparseMatrix> weight, double dt, int r = -1,
                     Exec exec = default_exec);

/// Snapshots minus the chosen offset; `offset` receives the subtracted field.
Mat center_snapshots(const Mat& snapshots, Centering c, const Vec& initial, Vec& offset);

/// Basis restricted to its first r modes.
PODBasis truncate(const PODBasis& basis, int r);

/// a_i = phi_i^T W u.
Vec project(const PODBasis& basis, const Vec& field);
/// sum_i a_i phi_i (the offset is not added).
Vec reconstruct(const PODBasis& basis, const Vec& coords);
/// offset + sum_i a_i phi_i.
Vec reconstruct_field(const PODBasis& basis, const Vec& coords);

/// R = 1 - sum_{i<=r} lambda_i / sum_i lambda_i. Throws AllZeroSpectrum.
double contribution_ratio(const Vec& eigenvalues, int r);

/// dt * sum_n |u_n - P_r u_n|_W^2, evaluated directly from the snapshots.
double projection_error(const Mat& snapshots, const PODBasis& basis, int r);

/// Smallest r whose contribution ratio is <= tol (tol = 0 gives M).
int rank_for_ratio(const PODBasis& basis, double tol);

/// Moves r up past any nearly repeated eigenvalue pair (|l_r - l_{r+1}| <
/// rel_gap * l_r), so that two-dimensional eigenspaces are not split.
int snap_to_eigenspace(const Vec& eigenvalues, int r, int rank, double rel_gap = 1e-6);

/// Max-entry deviation of modes^T W modes from the identity.
double orthonormality_defect(const PODBasis& basis);

}  // namespace smrom
