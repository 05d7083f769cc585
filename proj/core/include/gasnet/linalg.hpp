#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace gasnet {

/// Zero pivot (relative to the column's largest magnitude) during factorization.
class SingularMatrix : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Relative residual still above tolerance after iterative refinement.
class ResidualTooLarge : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Square sparse system assembled from (i, j, value) contributions.
/// Duplicates are summed by finalize(), which produces sorted CSR storage.
class SparseSystem {
public:
  explicit SparseSystem(int n);

  int size() const { return n_; }

  void accumulate(int i, int j, double value);
  void add_rhs(int i, double value);
  void finalize();
  bool finalized() const { return finalized_; }

  const std::vector<double>& rhs() const { return rhs_; }
  std::vector<double>& rhs() { return rhs_; }

  // CSR access; valid after finalize().
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  int nonzeros() const { return static_cast<int>(values_.size()); }

  /// Stored entry (i, j) or 0.
  double coeff(int i, int j) const;
  std::vector<double> multiply(std::span<const double> x) const;
  std::vector<std::vector<double>> to_dense() const;

private:
  struct Triplet {
    int i;
    int j;
    double v;
  };

  void check_index(int i, int j) const;

  int n_;
  bool finalized_ = false;
  std::vector<Triplet> triplets_;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
  std::vector<double> rhs_;
};

struct SolveOptions {
  double pivot_tolerance = 1e-14;
  double residual_tolerance = 1e-10;
  int refinement_steps = 1;
};

/// Direct solve: reverse Cuthill-McKee ordering, banded LU with partial
/// pivoting, then iterative refinement. Requires a finalized system.
std::vector<double> solve(const SparseSystem& system, const SolveOptions& options = {});

/// Reverse Cuthill-McKee permutation of the symmetrized pattern; perm[new] = old.
std::vector<int> rcm_ordering(const SparseSystem& system);

}  // namespace gasnet
