#include <omp.h>

#include <vector>

#include "wgpt/kernels.hpp"

namespace wgpt::kernels {

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

namespace parallel {

namespace {

// Per-row partials are summed serially so the result does not depend on the
// thread count.
double ordered_sum(const std::vector<double>& rows) {
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

}  // namespace

void laplacian(const Csr& adj, std::span<const double> m, std::span<const double> f, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(adj.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < n; ++x) {
    double acc = 0.0;
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k)
      acc += adj.weights[k] * (f[x] - f[adj.targets[k]]);
    out[x] = acc / m[x];
  }
}

double pairing(const Csr& adj, std::span<const double> f, std::span<const double> g) {
  const auto n = static_cast<std::ptrdiff_t>(adj.rows());
  std::vector<double> rows(adj.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < n; ++x) {
    double row = 0.0;
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
      const Index y = adj.targets[k];
      row += adj.weights[k] * (f[x] - f[y]) * (g[x] - g[y]);
    }
    rows[x] = row;
  }
  return 0.5 * ordered_sum(rows);
}

double energy(const Csr& adj, std::span<const double> f) { return pairing(adj, f, f); }

double weighted_inner(std::span<const double> m, std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<std::ptrdiff_t>(m.size());
  std::vector<double> rows(m.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < n; ++x) rows[x] = a[x] * b[x] * m[x];
  return ordered_sum(rows);
}

void transition_step(const Csr& adj, std::span<const double> inv_row_sum, std::span<const double> in,
                     std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(adj.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t y = 0; y < n; ++y) {
    double acc = 0.0;
    for (std::size_t k = adj.offsets[y]; k < adj.offsets[y + 1]; ++k) {
      const Index z = adj.targets[k];
      acc += in[z] * adj.weights[k] * inv_row_sum[z];
    }
    out[y] = acc;
  }
}

}  // namespace parallel
}  // namespace wgpt::kernels
