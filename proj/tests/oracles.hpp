#pragma once

// Slow, independent reference implementations used only by tests. These are
// written against the definitions, not against the library code paths.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline double entropy_nats(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

inline double entropy_bits(const std::vector<double>& p) {
  return entropy_nats(p) / std::log(2.0);
}

inline double log_choose(std::size_t n, std::size_t k) {
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
         std::lgamma(double(n - k) + 1.0);
}

inline double binom_at(std::size_t n, double p, std::size_t k) {
  if (k > n) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_choose(n, k) + double(k) * std::log(p) +
                  double(n - k) * std::log1p(-p));
}

// Brute-force triple sum for the clumped Poisson mixture. Truncation level
// chosen far beyond the library's 1e-12 tail rule.
inline std::vector<std::vector<double>> poisson_clumped(double lambda, double p,
                                                        std::size_t cap1,
                                                        std::size_t cap2) {
  std::size_t ncut = static_cast<std::size_t>(lambda + 60.0 * std::sqrt(lambda) + 60.0);
  std::vector<double> pois(ncut + 1);
  for (std::size_t n = 0; n <= ncut; ++n)
    pois[n] = std::exp(-lambda + double(n) * std::log(lambda) -
                       std::lgamma(double(n) + 1.0));
  double z = 0.0;
  for (double v : pois) z += v;
  // The library renormalizes its truncated Poisson; mirror that here so the
  // comparison is at matching normalization.
  double kept = 0.0;
  std::size_t keep_to = 0;
  for (std::size_t n = 0; n <= ncut; ++n) {
    kept += pois[n];
    keep_to = n;
    if (1.0 - kept < 1e-12) break;
  }
  std::vector<std::vector<double>> out(cap1 + 1,
                                       std::vector<double>(cap2 + 1, 0.0));
  for (std::size_t n = 0; n <= keep_to; ++n) {
    double pn = pois[n] / kept;
    for (std::size_t y1 = 0; y1 <= n; ++y1)
      for (std::size_t y2 = 0; y2 <= n; ++y2) {
        std::size_t a = y1 < cap1 ? y1 : cap1;
        std::size_t b = y2 < cap2 ? y2 : cap2;
        out[a][b] += pn * binom_at(n, p, y1) * binom_at(n, 1.0 - p, y2);
      }
  }
  (void)z;
  return out;
}

// Best deterministic channel: assign each vertex to one of the listed sets
// containing it and take the entropy of the induced set distribution. This
// upper-bounds the soft-channel optimum. `sets_of[x]` holds candidate set ids.
inline double det_channel_entropy(
    const std::vector<std::vector<std::size_t>>& sets_of, std::size_t nsets,
    const std::vector<double>& p) {
  std::size_t n = sets_of.size();
  std::vector<std::size_t> pick(n, 0);
  double best = -1.0;
  while (true) {
    std::vector<double> m(nsets, 0.0);
    for (std::size_t x = 0; x < n; ++x) m[sets_of[x][pick[x]]] += p[x];
    double h = entropy_bits(m);
    if (best < 0.0 || h < best) best = h;
    std::size_t i = 0;
    while (i < n && ++pick[i] == sets_of[i].size()) pick[i++] = 0;
    if (i == n) break;
  }
  return best;
}

// Same search for the conditional setting: minimize H(W | Y) where W is a
// deterministic feasible assignment and pxy[x][y] is the joint mass.
inline double det_channel_conditional_entropy(
    const std::vector<std::vector<std::size_t>>& sets_of, std::size_t nsets,
    const std::vector<std::vector<double>>& pxy) {
  std::size_t n = sets_of.size();
  std::size_t ny = pxy.empty() ? 0 : pxy[0].size();
  std::vector<double> py(ny, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < ny; ++y) py[y] += pxy[x][y];

  std::vector<std::size_t> pick(n, 0);
  double best = -1.0;
  while (true) {
    double h = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      if (py[y] <= 0.0) continue;
      std::vector<double> m(nsets, 0.0);
      for (std::size_t x = 0; x < n; ++x)
        m[sets_of[x][pick[x]]] += pxy[x][y] / py[y];
      h += py[y] * entropy_bits(m);
    }
    if (best < 0.0 || h < best) best = h;
    std::size_t i = 0;
    while (i < n && ++pick[i] == sets_of[i].size()) pick[i++] = 0;
    if (i == n) break;
  }
  return best;
}

// Minimum-entropy proper coloring by exhausting every set partition of the
// vertices (restricted growth strings), keeping only the proper ones.
// Exponential; callers keep instances at ~10 vertices.
template <typename EdgeFn>
inline double best_coloring_bits(std::size_t n, EdgeFn edge,
                                 const std::vector<double>& mass) {
  std::vector<std::size_t> rgs(n, 0);
  double best = -1.0;
  while (true) {
    bool proper = true;
    for (std::size_t u = 0; u < n && proper; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (rgs[u] == rgs[v] && edge(u, v)) {
          proper = false;
          break;
        }
    if (proper) {
      std::size_t k = 0;
      for (std::size_t c : rgs) k = k < c + 1 ? c + 1 : k;
      std::vector<double> m(k, 0.0);
      for (std::size_t v = 0; v < n; ++v) m[rgs[v]] += mass[v];
      double h = entropy_bits(m);
      if (best < 0.0 || h < best) best = h;
    }
    // Next restricted growth string.
    std::size_t i = n;
    while (i-- > 1) {
      std::size_t maxprev = 0;
      for (std::size_t j = 0; j < i; ++j) maxprev = maxprev < rgs[j] ? rgs[j] : maxprev;
      if (rgs[i] <= maxprev) {
        ++rgs[i];
        for (std::size_t j = i + 1; j < n; ++j) rgs[j] = 0;
        break;
      }
      rgs[i] = 0;
    }
    bool back_to_start = true;
    for (std::size_t c : rgs)
      if (c != 0) back_to_start = false;
    if (back_to_start) break;
  }
  return best;
}

}  // namespace oracle
