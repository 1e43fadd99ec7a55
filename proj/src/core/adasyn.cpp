#include "core/adasyn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace ptb {

namespace {

// indices of the k nearest rows to `query` among `candidates` (Euclidean,
// ties broken by lower row index)
std::vector<std::size_t> k_nearest(const double* x, std::size_t d, std::size_t query,
                                   const std::vector<std::size_t>& candidates, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(candidates.size());
  for (std::size_t c : candidates) {
    if (c == query) continue;
    double s = 0.0;
    const double* a = x + query * d;
    const double* b = x + c * d;
    for (std::size_t j = 0; j < d; ++j) {
      double diff = a[j] - b[j];
      s += diff * diff;
    }
    dist.emplace_back(s, c);
  }
  std::sort(dist.begin(), dist.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, dist.size()); ++i) out.push_back(dist[i].second);
  return out;
}

}  // namespace

AdasynResult adasyn(const double* x, std::size_t n, std::size_t d, const int* y,
                    const AdasynConfig& cfg) {
  if (cfg.k < 1) fail_invalid("adasyn: K must be >= 1");
  if (!(cfg.beta > 0.0 && cfg.beta <= 1.0)) fail_invalid("adasyn: beta must be in (0,1]");

  std::vector<std::size_t> minority, majority;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != +1 && y[i] != -1) fail_invalid("adasyn: labels must be +1/-1");
    (y[i] == +1 ? minority : majority).push_back(i);
  }
  if (minority.empty() || majority.empty()) fail_invalid("adasyn: both classes must be present");
  int minority_label = +1;
  if (minority.size() > majority.size()) {
    std::swap(minority, majority);
    minority_label = -1;
  }
  const std::size_t ms = minority.size();
  const std::size_t ml = majority.size();

  AdasynResult out;
  out.n_cols = d;
  out.x.assign(x, x + n * d);
  out.y.assign(y, y + n);
  out.n_rows = n;

  double g_total = static_cast<double>(ml - ms) * cfg.beta;
  long target = static_cast<long>(std::floor(g_total + 0.5));
  if (target <= 0) return out;  // already balanced
  if (ms < 2) fail_invalid("adasyn: minority class needs at least 2 points");

  std::vector<std::size_t> everyone(n);
  std::iota(everyone.begin(), everyone.end(), 0);

  // r_i: majority fraction among the K nearest neighbors over the whole dataset
  const std::size_t k = static_cast<std::size_t>(cfg.k);
  std::vector<double> r(ms, 0.0);
  double r_sum = 0.0;
  for (std::size_t s = 0; s < ms; ++s) {
    auto nn = k_nearest(x, d, minority[s], everyone, k);
    std::size_t maj = 0;
    for (std::size_t idx : nn)
      if (y[idx] != minority_label) ++maj;
    r[s] = static_cast<double>(maj) / static_cast<double>(k);
    r_sum += r[s];
  }

  std::vector<double> r_hat(ms);
  if (r_sum > 0.0)
    for (std::size_t s = 0; s < ms; ++s) r_hat[s] = r[s] / r_sum;
  else
    std::fill(r_hat.begin(), r_hat.end(), 1.0 / static_cast<double>(ms));

  // per-seed counts, round-half-up, then distribute the global remainder
  // deterministically in descending r_hat order
  std::vector<long> g(ms);
  long g_sum = 0;
  for (std::size_t s = 0; s < ms; ++s) {
    g[s] = static_cast<long>(std::floor(r_hat[s] * g_total + 0.5));
    g_sum += g[s];
  }
  std::vector<std::size_t> order(ms);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r_hat[a] > r_hat[b]; });
  for (std::size_t pos = 0; g_sum < target; pos = (pos + 1) % ms) {
    ++g[order[pos]];
    ++g_sum;
  }
  for (std::size_t pos = 0; g_sum > target; pos = (pos + 1) % ms) {
    if (g[order[pos]] > 0) {
      --g[order[pos]];
      --g_sum;
    }
  }

  const std::size_t k_eff = std::min(k, ms - 1);
  for (std::size_t s = 0; s < ms; ++s) {
    if (g[s] == 0) continue;
    auto mn = k_nearest(x, d, minority[s], minority, k_eff);
    // per-seed RNG stream keeps parallel generation order-independent
    Rng rng(mix_seed(cfg.seed, 0xADA5, minority[s]));
    const double* xi = x + minority[s] * d;
    for (long t = 0; t < g[s]; ++t) {
      std::size_t z = mn[rng.below(mn.size())];
      double lambda = rng.uniform();
      const double* xz = x + z * d;
      for (std::size_t j = 0; j < d; ++j)
        out.x.push_back(xi[j] + lambda * (xz[j] - xi[j]));
      out.y.push_back(minority_label);
      ++out.n_rows;
      ++out.n_synthetic;
    }
  }
  return out;
}

}  // namespace ptb
