#pragma once

#include <span>

#include "wgpt/graph.hpp"

// Data-parallel inner loops over the vertices of a window. The serial
// namespace is the reference; the parallel namespace distributes rows with
// OpenMP and must agree with it bit for bit (reductions sum per-row partials
// in vertex order).
namespace wgpt::kernels {

namespace serial {

/// out[x] = (1/m[x]) Sum_y mu(x,y) (f[x] - f[y]) over window edges.
void laplacian(const Csr& adj, std::span<const double> m, std::span<const double> f, std::span<double> out);
/// 1/2 Sum_{x,y} mu(x,y) (f[x]-f[y]) (g[x]-g[y]).
double pairing(const Csr& adj, std::span<const double> f, std::span<const double> g);
double energy(const Csr& adj, std::span<const double> f);
/// Sum_x a[x] b[x] m[x].
double weighted_inner(std::span<const double> m, std::span<const double> a, std::span<const double> b);
/// One step of the random walk on row vectors: out[y] = Sum_z in[z] mu(z,y) / n(z).
void transition_step(const Csr& adj, std::span<const double> inv_row_sum, std::span<const double> in,
                     std::span<double> out);

}  // namespace serial

namespace parallel {

void laplacian(const Csr& adj, std::span<const double> m, std::span<const double> f, std::span<double> out);
double pairing(const Csr& adj, std::span<const double> f, std::span<const double> g);
double energy(const Csr& adj, std::span<const double> f);
double weighted_inner(std::span<const double> m, std::span<const double> a, std::span<const double> b);
void transition_step(const Csr& adj, std::span<const double> inv_row_sum, std::span<const double> in,
                     std::span<double> out);

}  // namespace parallel

/// Sets the OpenMP thread count used by the parallel kernels (0 keeps the default).
void set_threads(int n);

}  // namespace wgpt::kernels
