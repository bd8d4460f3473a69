#pragma once

#include <functional>

#include "isospec/linalg.hpp"

namespace isospec {

// Deterministic cyclic Jacobi eigensolver for real symmetric matrices.
// Sweeps run row-major over p<q until the off-diagonal Frobenius norm drops
// below off_tol * ||M||_F (absolute floor 1e-300). Eigenvalues ascending,
// eigenvectors in columns.
struct EigenSym {
  Vec values;
  Mat vectors;
};
EigenSym jacobi_eigensym(const Mat& m, double off_tol = 1e-12, int max_sweeps = 100);

// Hermitian variant (two-sided unitary Jacobi with phase).
struct EigenHerm {
  Vec values;
  CMat vectors;
};
EigenHerm jacobi_eigenherm(const CMat& m, double off_tol = 1e-12, int max_sweeps = 100);

// Deterministic Lanczos with full reorthogonalization for the low end of the
// spectrum of a large Hermitian operator given as a matvec. Fixed start
// vector (normalized all-ones), fixed iteration budget; used only by the
// Hermite-truncated reduced operators where dense Jacobi is impractical.
std::vector<double> lanczos_lowest(const std::function<CVec(const CVec&)>& apply, int dim, int n_eigs,
                                   int max_iter = 400, double tol = 1e-12);

}  // namespace isospec
