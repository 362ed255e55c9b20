#include "fcomp/probability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "fcomp/error.hpp"

namespace fcomp {

std::string label_text(const Label& l) {
  if (std::holds_alternative<std::int64_t>(l))
    return std::to_string(std::get<std::int64_t>(l));
  return std::get<std::string>(l);
}

std::optional<std::int64_t> label_int(const Label& l) {
  if (std::holds_alternative<std::int64_t>(l)) return std::get<std::int64_t>(l);
  return std::nullopt;
}

Alphabet::Alphabet(std::vector<Label> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ValidationError("alphabet must not be empty");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto [_, fresh] = index_.emplace(symbols_[i], i);
    if (!fresh)
      throw ValidationError("duplicate alphabet symbol: " + label_text(symbols_[i]));
  }
}

Alphabet Alphabet::iota(std::int64_t first, std::size_t count) {
  std::vector<Label> syms;
  syms.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    syms.emplace_back(first + static_cast<std::int64_t>(i));
  return Alphabet(std::move(syms));
}

bool Alphabet::contains(const Label& l) const { return index_.count(l) != 0; }

std::size_t Alphabet::index_of(const Label& l) const {
  auto it = index_.find(l);
  if (it == index_.end())
    throw ValidationError("symbol not in alphabet: " + label_text(l));
  return it->second;
}

std::optional<std::size_t> Alphabet::find(const Label& l) const {
  auto it = index_.find(l);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double entropy(const Dist& p) {
  double h = 0.0;
  for (double v : p) {
    if (v < 0.0) throw ValidationError("negative probability in entropy()");
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0)
    throw ValidationError("binary_entropy argument outside [0,1]");
  return entropy(Dist{p, 1.0 - p});
}

Dist normalized(const Dist& p) {
  double s = 0.0;
  for (double v : p) {
    if (v < 0.0) throw ValidationError("negative probability in normalized()");
    s += v;
  }
  if (s <= 0.0) throw ValidationError("cannot normalize an all-zero vector");
  Dist out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] / s;
  return out;
}

JointPMF::JointPMF(Alphabet x1, Alphabet x2, std::vector<std::vector<double>> p)
    : x1_(std::move(x1)), x2_(std::move(x2)), p_(std::move(p)) {
  if (p_.size() != x1_.size())
    throw ValidationError("pmf row count does not match first alphabet");
  double total = 0.0;
  for (const auto& row : p_) {
    if (row.size() != x2_.size())
      throw ValidationError("pmf column count does not match second alphabet");
    for (double v : row) {
      if (v < 0.0) throw ValidationError("negative pmf entry");
      total += v;
    }
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("pmf mass " + std::to_string(total) +
                          " outside 1e-9 of 1; not renormalizing");
}

Dist JointPMF::marginal1() const {
  Dist m(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) m[i] += p_[i][j];
  return m;
}

Dist JointPMF::marginal2() const {
  Dist m(cols(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) m[j] += p_[i][j];
  return m;
}

std::vector<Cell> JointPMF::support() const {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      if (p_[i][j] > 0.0) out.push_back({i, j});
  return out;
}

std::size_t JointPMF::support_size() const { return support().size(); }

std::vector<std::size_t> JointPMF::row_support(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < cols(); ++j)
    if (p_[i][j] > 0.0) out.push_back(j);
  return out;
}

std::vector<std::size_t> JointPMF::col_support(std::size_t j) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows(); ++i)
    if (p_[i][j] > 0.0) out.push_back(i);
  return out;
}

double JointPMF::cell_mass(const std::vector<Cell>& cells) const {
  double s = 0.0;
  for (const Cell& c : cells) {
    if (c.row >= rows() || c.col >= cols())
      throw ValidationError("cell index outside pmf");
    s += p_[c.row][c.col];
  }
  return s;
}

JointPMF JointPMF::restricted(const std::vector<Cell>& cells) const {
  double total = cell_mass(cells);
  if (total <= 0.0)
    throw ValidationError("restriction to zero-mass cell set");
  std::vector<std::vector<double>> q(rows(), std::vector<double>(cols(), 0.0));
  for (const Cell& c : cells) q[c.row][c.col] = p_[c.row][c.col] / total;
  return JointPMF(x1_, x2_, std::move(q));
}

Dist marginal(const JointPMF& j, int source) {
  if (source == 1) return j.marginal1();
  if (source == 2) return j.marginal2();
  throw ValidationError("source must be 1 or 2");
}

double joint_entropy(const JointPMF& j) {
  double h = 0.0;
  for (std::size_t i = 0; i < j.rows(); ++i)
    for (std::size_t k = 0; k < j.cols(); ++k) {
      double v = j.p(i, k);
      if (v > 0.0) h -= v * std::log2(v);
    }
  return h;
}

double marginal_entropy(const JointPMF& j, int source) {
  return entropy(marginal(j, source));
}

double conditional_entropy(const JointPMF& j, int target) {
  if (target != 1 && target != 2)
    throw ValidationError("target must be 1 or 2");
  return joint_entropy(j) - marginal_entropy(j, target == 1 ? 2 : 1);
}

Dist binomial_pmf(std::size_t n, double p) {
  if (p < 0.0 || p > 1.0)
    throw ValidationError("binomial parameter outside [0,1]");
  Dist out(n + 1, 0.0);
  // Iterate the recurrence from the dominant endpoint for stability.
  out[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    out[k] = 0.0;
    for (std::size_t i = k; i >= 1; --i)
      out[i] = out[i] * (1.0 - p) + out[i - 1] * p;
    out[0] *= (1.0 - p);
  }
  return out;
}

Dist zipf_pmf(std::size_t k, double gamma) {
  if (k == 0) throw ValidationError("zipf needs at least one rank");
  Dist out(k);
  double s = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    out[r] = std::pow(static_cast<double>(r + 1), -gamma);
    s += out[r];
  }
  for (double& v : out) v /= s;
  return out;
}

JointPMF product_joint(const Dist& p1, const Dist& p2) {
  std::vector<std::vector<double>> p(p1.size(), std::vector<double>(p2.size()));
  for (std::size_t i = 0; i < p1.size(); ++i)
    for (std::size_t j = 0; j < p2.size(); ++j) p[i][j] = p1[i] * p2[j];
  return JointPMF(Alphabet::iota(0, p1.size()), Alphabet::iota(0, p2.size()),
                  std::move(p));
}

JointPMF poisson_clumped_joint(double lambda, double p, std::size_t cap1,
                               std::size_t cap2) {
  if (lambda <= 0.0) throw ValidationError("poisson rate must be positive");
  if (p < 0.0 || p > 1.0)
    throw ValidationError("load split probability outside [0,1]");

  // Truncate N where the remaining tail is below 1e-12, then renormalize.
  std::vector<double> pois;
  double term = std::exp(-lambda);
  double cum = term;
  pois.push_back(term);
  std::size_t n = 0;
  while (1.0 - cum >= 1e-12) {
    ++n;
    term *= lambda / static_cast<double>(n);
    cum += term;
    pois.push_back(term);
    if (n > 4000)
      throw ValidationError("poisson truncation did not terminate");
  }
  double z = std::accumulate(pois.begin(), pois.end(), 0.0);
  for (double& v : pois) v /= z;

  auto clump = [](const Dist& d, std::size_t cap) {
    Dist out(cap + 1, 0.0);
    for (std::size_t y = 0; y < d.size(); ++y) out[std::min(y, cap)] += d[y];
    return out;
  };

  std::vector<std::vector<double>> joint(cap1 + 1,
                                         std::vector<double>(cap2 + 1, 0.0));
  for (std::size_t m = 0; m < pois.size(); ++m) {
    Dist b1 = clump(binomial_pmf(m, p), cap1);
    Dist b2 = clump(binomial_pmf(m, 1.0 - p), cap2);
    for (std::size_t a = 0; a <= cap1; ++a)
      for (std::size_t b = 0; b <= cap2; ++b)
        joint[a][b] += pois[m] * b1[a] * b2[b];
  }
  return JointPMF(Alphabet::iota(0, cap1 + 1), Alphabet::iota(0, cap2 + 1),
                  std::move(joint));
}

namespace {

Label label_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Label{v.get<std::int64_t>()};
  if (v.is_string()) return Label{v.get<std::string>()};
  throw ValidationError("labels must be integers or strings");
}

nlohmann::json label_to_json(const Label& l) {
  if (auto i = label_int(l)) return *i;
  return std::get<std::string>(l);
}

Alphabet alphabet_from_json(const nlohmann::json& arr, const char* key) {
  if (!arr.is_array())
    throw ValidationError(std::string("field '") + key + "' must be an array");
  std::vector<Label> syms;
  for (const auto& v : arr) syms.push_back(label_from_json(v));
  return Alphabet(std::move(syms));
}

}  // namespace

JointPMF joint_pmf_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("pmf json parse error: ") + e.what());
  }
  if (!doc.contains("x1") || !doc.contains("x2") || !doc.contains("p"))
    throw ValidationError("pmf json needs fields x1, x2, p");
  Alphabet a1 = alphabet_from_json(doc["x1"], "x1");
  Alphabet a2 = alphabet_from_json(doc["x2"], "x2");
  if (!doc["p"].is_array())
    throw ValidationError("field 'p' must be a matrix");
  std::vector<std::vector<double>> p;
  for (const auto& row : doc["p"]) {
    if (!row.is_array()) throw ValidationError("field 'p' must be a matrix");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ValidationError("pmf entries must be numbers");
      r.push_back(v.get<double>());
    }
    p.push_back(std::move(r));
  }
  return JointPMF(std::move(a1), std::move(a2), std::move(p));
}

std::string joint_pmf_to_json(const JointPMF& j) {
  nlohmann::json doc;
  for (const auto& s : j.x1().symbols()) doc["x1"].push_back(label_to_json(s));
  for (const auto& s : j.x2().symbols()) doc["x2"].push_back(label_to_json(s));
  for (std::size_t i = 0; i < j.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < j.cols(); ++k) row.push_back(j.p(i, k));
    doc["p"].push_back(std::move(row));
  }
  return doc.dump(2);
}

}  // namespace fcomp
