#include "fcomp/function_table.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include <json.hpp>

#include "fcomp/error.hpp"

namespace fcomp {

std::string rule_name(FunctionRule r) {
  switch (r) {
    case FunctionRule::sum: return "sum";
    case FunctionRule::abs_sum: return "abs_sum";
    case FunctionRule::xor_rule: return "xor";
    case FunctionRule::identity: return "identity";
    case FunctionRule::table: return "table";
  }
  throw ValidationError("unknown function rule");
}

FunctionRule rule_from_name(const std::string& name) {
  if (name == "sum") return FunctionRule::sum;
  if (name == "abs_sum") return FunctionRule::abs_sum;
  if (name == "xor") return FunctionRule::xor_rule;
  if (name == "identity") return FunctionRule::identity;
  if (name == "table") return FunctionRule::table;
  throw ValidationError("unknown function rule: " + name);
}

FunctionTable::FunctionTable(
    Alphabet x1, Alphabet x2,
    std::vector<std::vector<std::optional<Label>>> outcomes, FunctionRule rule)
    : x1_(std::move(x1)), x2_(std::move(x2)), outcomes_(std::move(outcomes)),
      rule_(rule) {
  if (outcomes_.size() != x1_.size())
    throw ValidationError("outcome row count does not match first alphabet");
  for (const auto& row : outcomes_)
    if (row.size() != x2_.size())
      throw ValidationError("outcome column count does not match second alphabet");
}

bool FunctionTable::defined(std::size_t i, std::size_t j) const {
  return outcomes_[i][j].has_value();
}

const Label& FunctionTable::outcome(std::size_t i, std::size_t j) const {
  if (!outcomes_[i][j])
    throw ValidationError("function undefined at (" + label_text(x1_[i]) + "," +
                          label_text(x2_[j]) + ")");
  return *outcomes_[i][j];
}

std::vector<Label> FunctionTable::range() const {
  std::vector<Label> out;
  for (const auto& row : outcomes_)
    for (const auto& cell : row)
      if (cell && std::find(out.begin(), out.end(), *cell) == out.end())
        out.push_back(*cell);
  return out;
}

namespace {

std::int64_t numeric(const Label& l, const char* rule) {
  auto v = label_int(l);
  if (!v)
    throw ValidationError(std::string("rule '") + rule +
                          "' needs integer labels, got " + label_text(l));
  return *v;
}

}  // namespace

FunctionTable build_from_rule(FunctionRule rule, const Alphabet& a1,
                              const Alphabet& a2) {
  if (rule == FunctionRule::table)
    throw ValidationError("custom rule needs an explicit outcome table");
  std::vector<std::vector<std::optional<Label>>> out(
      a1.size(), std::vector<std::optional<Label>>(a2.size()));
  for (std::size_t i = 0; i < a1.size(); ++i) {
    for (std::size_t j = 0; j < a2.size(); ++j) {
      switch (rule) {
        case FunctionRule::sum:
          out[i][j] = Label{numeric(a1[i], "sum") + numeric(a2[j], "sum")};
          break;
        case FunctionRule::abs_sum:
          out[i][j] = Label{std::abs(numeric(a1[i], "abs_sum")) +
                            std::abs(numeric(a2[j], "abs_sum"))};
          break;
        case FunctionRule::xor_rule:
          out[i][j] = Label{numeric(a1[i], "xor") ^ numeric(a2[j], "xor")};
          break;
        case FunctionRule::identity:
          out[i][j] =
              Label{"(" + label_text(a1[i]) + "," + label_text(a2[j]) + ")"};
          break;
        case FunctionRule::table:
          break;
      }
    }
  }
  return FunctionTable(a1, a2, std::move(out), rule);
}

void check_defined_on_support(const FunctionTable& f, const JointPMF& j) {
  if (!(f.x1() == j.x1()) || !(f.x2() == j.x2()))
    throw ValidationError("function table alphabets do not match the pmf");
  for (const Cell& c : j.support())
    if (!f.defined(c.row, c.col))
      throw ValidationError("function undefined on support cell (" +
                            label_text(j.x1()[c.row]) + "," +
                            label_text(j.x2()[c.col]) + ")");
}

std::pair<OutcomeDistribution, double> function_entropy(const FunctionTable& f,
                                                        const JointPMF& j) {
  check_defined_on_support(f, j);
  OutcomeDistribution dist;
  std::map<Label, std::size_t> at;
  for (const Cell& c : j.support()) {
    const Label& o = f.outcome(c.row, c.col);
    auto it = at.find(o);
    if (it == at.end()) {
      at.emplace(o, dist.outcomes.size());
      dist.outcomes.push_back(o);
      dist.probs.push_back(0.0);
      it = at.find(o);
    }
    dist.probs[it->second] += j.p(c.row, c.col);
  }
  return {dist, entropy(dist.probs)};
}

bool is_permutation_invariant(const FunctionTable& f, const JointPMF& j) {
  check_defined_on_support(f, j);
  for (const Cell& c : j.support()) {
    const Label& l1 = j.x1()[c.row];
    const Label& l2 = j.x2()[c.col];
    auto i2 = j.x1().find(l2);
    auto j2 = j.x2().find(l1);
    if (!i2 || !j2) continue;
    if (!j.in_support(*i2, *j2)) continue;
    if (!(f.outcome(c.row, c.col) == f.outcome(*i2, *j2))) return false;
  }
  return true;
}

ClassPartition equivalence_classes(const FunctionTable& f, const JointPMF& j,
                                   int source) {
  if (source != 1 && source != 2)
    throw ValidationError("source must be 1 or 2");
  check_defined_on_support(f, j);

  std::size_t n = source == 1 ? j.rows() : j.cols();
  using Signature = std::vector<std::pair<std::size_t, Label>>;
  std::vector<Signature> sig(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto counterparts = source == 1 ? j.row_support(s) : j.col_support(s);
    for (std::size_t t : counterparts) {
      const Label& o = source == 1 ? f.outcome(s, t) : f.outcome(t, s);
      sig[s].emplace_back(t, o);
    }
  }

  ClassPartition part;
  part.source = source;
  part.class_of.assign(n, 0);
  std::map<Signature, std::size_t> ids;
  for (std::size_t s = 0; s < n; ++s) {
    auto [it, fresh] = ids.emplace(sig[s], part.classes.size());
    if (fresh) part.classes.emplace_back();
    part.class_of[s] = it->second;
    part.classes[it->second].push_back(s);
  }

  Dist m = source == 1 ? j.marginal1() : j.marginal2();
  part.class_mass.assign(part.classes.size(), 0.0);
  for (std::size_t s = 0; s < n; ++s) part.class_mass[part.class_of[s]] += m[s];
  return part;
}

namespace {

Label label_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Label{v.get<std::int64_t>()};
  if (v.is_string()) return Label{v.get<std::string>()};
  throw ValidationError("outcome labels must be integers or strings");
}

nlohmann::json label_to_json(const Label& l) {
  if (auto i = label_int(l)) return *i;
  return std::get<std::string>(l);
}

}  // namespace

FunctionTable function_table_from_json(const std::string& text,
                                       const Alphabet& a1, const Alphabet& a2) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("function json parse error: ") + e.what());
  }
  if (!doc.contains("rule") || !doc["rule"].is_string())
    throw ValidationError("function json needs a string 'rule' field");
  FunctionRule rule = rule_from_name(doc["rule"].get<std::string>());
  if (!doc.contains("outcomes")) {
    if (rule == FunctionRule::table)
      throw ValidationError("rule 'table' needs an 'outcomes' matrix");
    return build_from_rule(rule, a1, a2);
  }
  const auto& rows = doc["outcomes"];
  if (!rows.is_array())
    throw ValidationError("'outcomes' must be a matrix");
  std::vector<std::vector<std::optional<Label>>> out;
  for (const auto& row : rows) {
    if (!row.is_array()) throw ValidationError("'outcomes' must be a matrix");
    std::vector<std::optional<Label>> r;
    for (const auto& v : row) {
      if (v.is_null())
        r.push_back(std::nullopt);
      else
        r.push_back(label_from_json(v));
    }
    out.push_back(std::move(r));
  }
  return FunctionTable(a1, a2, std::move(out), rule);
}

std::string function_table_to_json(const FunctionTable& f) {
  nlohmann::json doc;
  doc["rule"] = rule_name(f.rule());
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < f.x1().size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < f.x2().size(); ++j) {
      if (f.defined(i, j))
        row.push_back(label_to_json(f.outcome(i, j)));
      else
        row.push_back(nullptr);
    }
    rows.push_back(std::move(row));
  }
  doc["outcomes"] = std::move(rows);
  return doc.dump(2);
}

}  // namespace fcomp
