#include "verbtensor/core/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "verbtensor/error.hpp"
#include "verbtensor/util/rng.hpp"

namespace verbtensor::core {

namespace {

using Columns = std::vector<std::vector<double>>;

double col_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Two passes of modified Gram-Schmidt against the first `count` columns.
void orthogonalize_against(std::vector<double>& v, const Columns& basis, std::size_t count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < count; ++j) {
      const double proj = col_dot(basis[j], v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * basis[j][i];
    }
  }
}

// Orthonormalizes columns in place. Columns flagged in `replace` (or that
// collapse numerically) are replaced by the first standard basis vector that
// survives orthogonalization against the columns before them.
void orthonormalize(Columns& cols, std::vector<bool> replace = {}) {
  if (replace.empty()) replace.assign(cols.size(), false);
  const std::size_t m = cols.empty() ? 0 : cols[0].size();
  std::size_t next_basis = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    bool ok = false;
    if (!replace[j]) {
      const double before = std::sqrt(col_dot(cols[j], cols[j]));
      orthogonalize_against(cols[j], cols, j);
      const double after = std::sqrt(col_dot(cols[j], cols[j]));
      if (before > 0.0 && after > 1e-10 * before) {
        for (double& x : cols[j]) x /= after;
        ok = true;
      }
    }
    while (!ok && next_basis < m) {
      std::vector<double> e(m, 0.0);
      e[next_basis++] = 1.0;
      orthogonalize_against(e, cols, j);
      const double n = std::sqrt(col_dot(e, e));
      if (n > 0.5) {
        for (double& x : e) x /= n;
        cols[j] = std::move(e);
        ok = true;
      }
    }
    if (!ok) throw Error("orthonormalize: cannot complete basis");
  }
}

struct FullSvd {
  Columns u;  // n columns of length m
  std::vector<double> sigma;
  Columns v;  // n columns of length n
};

// One-sided (Hestenes) Jacobi on an m x n matrix with m >= n.
FullSvd jacobi_svd(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Columns w(n, std::vector<double>(m));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) w[c][r] = a(r, c);
  }
  Columns v(n, std::vector<double>(n, 0.0));
  for (std::size_t c = 0; c < n; ++c) v[c][c] = 1.0;

  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = 2.0 * eps * static_cast<double>(std::max<std::size_t>(m, 4));
  constexpr int kMaxSweeps = 80;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = col_dot(w[p], w[p]);
        const double beta = col_dot(w[q], w[q]);
        const double gamma = col_dot(w[p], w[q]);
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        double t;
        if (std::abs(zeta) > 1e150) {
          t = 1.0 / (2.0 * zeta);
        } else {
          t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = w[p][i];
          const double y = w[q][i];
          w[p][i] = c * x - s * y;
          w[q][i] = s * x + c * y;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double x = v[p][i];
          const double y = v[q][i];
          v[p][i] = c * x - s * y;
          v[q][i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(n);
  for (std::size_t c = 0; c < n; ++c) norms[c] = std::sqrt(col_dot(w[c], w[c]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  FullSvd out;
  out.sigma.resize(n);
  out.u.resize(n);
  out.v.resize(n);
  const double smax = n == 0 ? 0.0 : norms[order[0]];
  const double cutoff = smax * eps * static_cast<double>(std::max(m, n)) * 16.0;
  std::vector<bool> replace(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t c = order[k];
    out.sigma[k] = norms[c];
    out.v[k] = std::move(v[c]);
    out.u[k] = std::move(w[c]);
    if (norms[c] <= cutoff || norms[c] == 0.0) {
      replace[k] = true;
    } else {
      for (double& x : out.u[k]) x /= norms[c];
    }
  }
  orthonormalize(out.u, replace);
  return out;
}

void normalize_signs(SvdResult& r) {
  for (std::size_t k = 0; k < r.rank(); ++k) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < r.V.rows(); ++i) {
      if (std::abs(r.V(i, k)) > best_abs) {
        best_abs = std::abs(r.V(i, k));
        best = i;
      }
    }
    if (r.V(best, k) < 0.0) {
      for (std::size_t i = 0; i < r.V.rows(); ++i) r.V(i, k) = -r.V(i, k);
      for (std::size_t i = 0; i < r.U.rows(); ++i) r.U(i, k) = -r.U(i, k);
    }
  }
}

void check_rank(std::size_t rows, std::size_t cols, std::size_t k) {
  if (k == 0 || k > std::min(rows, cols)) {
    throw InvalidArgument("truncated_svd: k=" + std::to_string(k) + " out of range [1, " +
                          std::to_string(std::min(rows, cols)) + "]");
  }
}

}  // namespace

DenseMatrix SvdResult::reconstruct() const {
  DenseMatrix out(U.rows(), V.rows());
  for (std::size_t k = 0; k < rank(); ++k) {
    const double s = singular_values[k];
    for (std::size_t i = 0; i < U.rows(); ++i) {
      const double us = U(i, k) * s;
      if (us == 0.0) continue;
      for (std::size_t j = 0; j < V.rows(); ++j) out(i, j) += us * V(j, k);
    }
  }
  return out;
}

SvdResult truncated_svd(const DenseMatrix& m, std::size_t k) {
  check_rank(m.rows(), m.cols(), k);
  const bool transpose = m.rows() < m.cols();
  const FullSvd full = transpose ? jacobi_svd(m.transposed()) : jacobi_svd(m);
  // In the transposed case the roles of u and v swap.
  const Columns& left = transpose ? full.v : full.u;
  const Columns& right = transpose ? full.u : full.v;

  SvdResult r;
  r.U = DenseMatrix(m.rows(), k);
  r.V = DenseMatrix(m.cols(), k);
  r.singular_values.assign(full.sigma.begin(), full.sigma.begin() + static_cast<std::ptrdiff_t>(k));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < m.rows(); ++i) r.U(i, c) = left[c][i];
    for (std::size_t i = 0; i < m.cols(); ++i) r.V(i, c) = right[c][i];
  }
  normalize_signs(r);
  return r;
}

SvdResult randomized_svd(const SparseMatrix& m, std::size_t k, const RandomizedSvdOptions& options) {
  check_rank(m.rows(), m.cols(), k);
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const std::size_t width = std::min(k + options.oversample, std::min(rows, cols));

  auto times = [&](const Columns& x) {  // A * X, X has `width` columns of length cols
    Columns y(x.size(), std::vector<double>(rows, 0.0));
    for (std::size_t r = 0; r < rows; ++r) {
      for (const auto& e : m.row(r)) {
        for (std::size_t j = 0; j < x.size(); ++j) y[j][r] += e.value * x[j][e.col];
      }
    }
    return y;
  };
  auto times_transposed = [&](const Columns& q) {  // A^T * Q
    Columns z(q.size(), std::vector<double>(cols, 0.0));
    for (std::size_t r = 0; r < rows; ++r) {
      for (const auto& e : m.row(r)) {
        for (std::size_t j = 0; j < q.size(); ++j) z[j][e.col] += e.value * q[j][r];
      }
    }
    return z;
  };

  util::Rng rng(options.seed);
  Columns omega(width, std::vector<double>(cols));
  for (auto& col : omega) {
    for (double& x : col) x = rng.uniform(-1.0, 1.0);
  }
  Columns q = times(omega);
  orthonormalize(q);
  for (std::size_t it = 0; it < options.power_iterations; ++it) {
    Columns z = times_transposed(q);
    orthonormalize(z);
    q = times(z);
    orthonormalize(q);
  }

  const Columns z = times_transposed(q);
  DenseMatrix b(width, cols);
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t c = 0; c < cols; ++c) b(j, c) = z[j][c];
  }
  SvdResult small = truncated_svd(b, k);

  SvdResult r;
  r.singular_values = std::move(small.singular_values);
  r.V = std::move(small.V);
  r.U = DenseMatrix(rows, k);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < width; ++j) acc += q[j][i] * small.U(j, c);
      r.U(i, c) = acc;
    }
  }
  return r;
}

SvdResult truncated_svd(const SparseMatrix& m, std::size_t k) {
  check_rank(m.rows(), m.cols(), k);
  const double lo = static_cast<double>(std::min(m.rows(), m.cols()));
  const double hi = static_cast<double>(std::max(m.rows(), m.cols()));
  constexpr double kDenseBudget = 4e8;
  const RandomizedSvdOptions options;
  if (lo * lo * hi <= kDenseBudget || k + options.oversample >= std::min(m.rows(), m.cols())) {
    return truncated_svd(m.to_dense(), k);
  }
  return randomized_svd(m, k, options);
}

}  // namespace verbtensor::core
