#include "wgpt/kernels.hpp"

namespace wgpt::kernels::serial {

void laplacian(const Csr& adj, std::span<const double> m, std::span<const double> f, std::span<double> out) {
  const std::size_t n = adj.rows();
  for (std::size_t x = 0; x < n; ++x) {
    double acc = 0.0;
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k)
      acc += adj.weights[k] * (f[x] - f[adj.targets[k]]);
    out[x] = acc / m[x];
  }
}

double pairing(const Csr& adj, std::span<const double> f, std::span<const double> g) {
  const std::size_t n = adj.rows();
  double total = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double row = 0.0;
    for (std::size_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
      const Index y = adj.targets[k];
      row += adj.weights[k] * (f[x] - f[y]) * (g[x] - g[y]);
    }
    total += row;
  }
  return 0.5 * total;
}

double energy(const Csr& adj, std::span<const double> f) { return pairing(adj, f, f); }

double weighted_inner(std::span<const double> m, std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t x = 0; x < m.size(); ++x) total += a[x] * b[x] * m[x];
  return total;
}

void transition_step(const Csr& adj, std::span<const double> inv_row_sum, std::span<const double> in,
                     std::span<double> out) {
  const std::size_t n = adj.rows();
  for (std::size_t y = 0; y < n; ++y) {
    double acc = 0.0;
    for (std::size_t k = adj.offsets[y]; k < adj.offsets[y + 1]; ++k) {
      const Index z = adj.targets[k];
      acc += in[z] * adj.weights[k] * inv_row_sum[z];
    }
    out[y] = acc;
  }
}

}  // namespace wgpt::kernels::serial
