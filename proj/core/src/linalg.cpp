#include "gasnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

namespace gasnet {

SparseSystem::SparseSystem(int n) : n_(n), rhs_(n > 0 ? n : 0, 0.0) {
  if (n < 0) throw std::invalid_argument("negative system size");
}

void SparseSystem::check_index(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::out_of_range("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside " + std::to_string(n_) + "x" + std::to_string(n_));
}

void SparseSystem::accumulate(int i, int j, double value) {
  if (finalized_) throw std::logic_error("accumulate after finalize");
  check_index(i, j);
  triplets_.push_back({i, j, value});
}

void SparseSystem::add_rhs(int i, double value) {
  check_index(i, i);
  rhs_[i] += value;
}

void SparseSystem::finalize() {
  if (finalized_) return;
  std::sort(triplets_.begin(), triplets_.end(), [](const Triplet& a, const Triplet& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  row_ptr_.assign(n_ + 1, 0);
  for (std::size_t k = 0; k < triplets_.size();) {
    const int i = triplets_[k].i;
    const int j = triplets_[k].j;
    double v = 0.0;
    for (; k < triplets_.size() && triplets_[k].i == i && triplets_[k].j == j; ++k)
      v += triplets_[k].v;
    col_idx_.push_back(j);
    values_.push_back(v);
    ++row_ptr_[i + 1];
  }
  std::partial_sum(row_ptr_.begin(), row_ptr_.end(), row_ptr_.begin());
  triplets_.clear();
  triplets_.shrink_to_fit();
  finalized_ = true;
}

double SparseSystem::coeff(int i, int j) const {
  if (!finalized_) throw std::logic_error("coeff before finalize");
  check_index(i, j);
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? values_[it - col_idx_.begin()] : 0.0;
}

std::vector<double> SparseSystem::multiply(std::span<const double> x) const {
  if (!finalized_) throw std::logic_error("multiply before finalize");
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("vector size mismatch");
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[i] += values_[k] * x[col_idx_[k]];
  return y;
}

std::vector<std::vector<double>> SparseSystem::to_dense() const {
  if (!finalized_) throw std::logic_error("to_dense before finalize");
  std::vector<std::vector<double>> a(n_, std::vector<double>(n_, 0.0));
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) a[i][col_idx_[k]] += values_[k];
  return a;
}

std::vector<int> rcm_ordering(const SparseSystem& system) {
  const int n = system.size();
  std::vector<std::vector<int>> adj(n);
  const auto& rp = system.row_ptr();
  const auto& ci = system.col_idx();
  for (int i = 0; i < n; ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      if (ci[k] != i) {
        adj[i].push_back(ci[k]);
        adj[ci[k]].push_back(i);
      }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  auto degree_less = [&](int a, int b) {
    return adj[a].size() != adj[b].size() ? adj[a].size() < adj[b].size() : a < b;
  };

  std::vector<int> order;
  order.reserve(n);
  std::vector<char> placed(n, 0);
  std::vector<int> level(n, -1);

  // BFS returning the last vertex of the deepest level (pseudo-peripheral search)
  auto farthest = [&](int start) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    q.push(start);
    level[start] = 0;
    int last = start;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      if (level[u] > level[last] || (level[u] == level[last] && degree_less(u, last))) last = u;
      for (int w : adj[u])
        if (level[w] < 0) {
          level[w] = level[u] + 1;
          q.push(w);
        }
    }
    return std::pair{last, level[last]};
  };

  std::vector<int> by_degree(n);
  std::iota(by_degree.begin(), by_degree.end(), 0);
  std::sort(by_degree.begin(), by_degree.end(), degree_less);

  for (int seed : by_degree) {
    if (placed[seed]) continue;
    int start = seed;
    auto [far, depth] = farthest(start);
    for (int iter = 0; iter < 4; ++iter) {
      auto [far2, depth2] = farthest(far);
      if (depth2 <= depth) break;
      start = far;
      far = far2;
      depth = depth2;
    }
    start = far;
    std::queue<int> q;
    q.push(start);
    placed[start] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      order.push_back(u);
      std::vector<int> next;
      for (int w : adj[u])
        if (!placed[w]) next.push_back(w);
      std::sort(next.begin(), next.end(), degree_less);
      for (int w : next) {
        placed[w] = 1;
        q.push(w);
      }
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

namespace {

// LU factors of P A(perm, perm) in band storage with room for pivoting fill.
class BandLU {
public:
  BandLU(const SparseSystem& a, std::vector<int> perm, double pivot_tol)
      : n_(a.size()), perm_(std::move(perm)) {
    std::vector<int> inv(n_);
    for (int k = 0; k < n_; ++k) inv[perm_[k]] = k;

    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    const auto& va = a.values();
    kl_ = ku_ = 0;
    std::vector<double> colmax(n_, 0.0);
    for (int i = 0; i < n_; ++i)
      for (int k = rp[i]; k < rp[i + 1]; ++k) {
        const int r = inv[i];
        const int c = inv[ci[k]];
        kl_ = std::max(kl_, r - c);
        ku_ = std::max(ku_, c - r);
        colmax[c] = std::max(colmax[c], std::abs(va[k]));
      }
    width_ = 2 * kl_ + ku_ + 1;
    band_.assign(static_cast<std::size_t>(n_) * width_, 0.0);
    for (int i = 0; i < n_; ++i)
      for (int k = rp[i]; k < rp[i + 1]; ++k) at(inv[i], inv[ci[k]]) += va[k];

    pivots_.resize(n_);
    const int reach = ku_ + kl_;
    for (int k = 0; k < n_; ++k) {
      const int last_row = std::min(n_ - 1, k + kl_);
      const int last_col = std::min(n_ - 1, k + reach);
      int p = k;
      double best = std::abs(at(k, k));
      for (int i = k + 1; i <= last_row; ++i)
        if (std::abs(at(i, k)) > best) {
          best = std::abs(at(i, k));
          p = i;
        }
      if (!(best > pivot_tol * colmax[k]) || colmax[k] == 0.0)
        throw SingularMatrix("singular matrix: pivot " + std::to_string(best) + " in column " +
                             std::to_string(perm_[k]));
      pivots_[k] = p;
      if (p != k)
        for (int j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
      const double inv_pivot = 1.0 / at(k, k);
      for (int i = k + 1; i <= last_row; ++i) {
        double& lik = at(i, k);
        if (lik == 0.0) continue;
        lik *= inv_pivot;
        for (int j = k + 1; j <= last_col; ++j) at(i, j) -= lik * at(k, j);
      }
    }
  }

  std::vector<double> solve(std::span<const double> b) const {
    std::vector<double> y(n_);
    for (int k = 0; k < n_; ++k) y[k] = b[perm_[k]];
    for (int k = 0; k < n_; ++k) {
      std::swap(y[k], y[pivots_[k]]);
      const int last_row = std::min(n_ - 1, k + kl_);
      for (int i = k + 1; i <= last_row; ++i) y[i] -= at(i, k) * y[k];
    }
    const int reach = ku_ + kl_;
    for (int k = n_ - 1; k >= 0; --k) {
      const int last_col = std::min(n_ - 1, k + reach);
      double s = y[k];
      for (int j = k + 1; j <= last_col; ++j) s -= at(k, j) * y[j];
      y[k] = s / at(k, k);
    }
    std::vector<double> x(n_);
    for (int k = 0; k < n_; ++k) x[perm_[k]] = y[k];
    return x;
  }

private:
  double& at(int i, int j) { return band_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)]; }
  double at(int i, int j) const {
    return band_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)];
  }

  int n_;
  std::vector<int> perm_;
  int kl_ = 0;
  int ku_ = 0;
  int width_ = 1;
  std::vector<double> band_;
  std::vector<int> pivots_;
};

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> solve(const SparseSystem& system, const SolveOptions& options) {
  if (!system.finalized()) throw std::logic_error("solve before finalize");
  if (system.size() == 0) throw SingularMatrix("singular: empty system");

  const BandLU lu(system, rcm_ordering(system), options.pivot_tolerance);
  const auto& b = system.rhs();
  std::vector<double> x = lu.solve(b);

  auto residual = [&](const std::vector<double>& xs) {
    std::vector<double> r = system.multiply(xs);
    for (int i = 0; i < system.size(); ++i) r[i] = b[i] - r[i];
    return r;
  };

  std::vector<double> r = residual(x);
  for (int step = 0; step < options.refinement_steps; ++step) {
    const std::vector<double> d = lu.solve(r);
    for (int i = 0; i < system.size(); ++i) x[i] += d[i];
    r = residual(x);
  }

  const double bnorm = norm2(b);
  const double rnorm = norm2(r);
  const bool ok = std::isfinite(rnorm) &&
                  (bnorm > 0.0 ? rnorm <= options.residual_tolerance * bnorm : rnorm == 0.0);
  if (!ok)
    throw ResidualTooLarge("linear solve residual " + std::to_string(rnorm) + " for |b| = " +
                           std::to_string(bnorm));
  return x;
}

}  // namespace gasnet
