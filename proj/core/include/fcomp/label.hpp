#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fcomp {

// Symbols and function outcomes are either integers or short strings.
using Label = std::variant<std::int64_t, std::string>;

inline Label make_label(std::int64_t v) { return Label{v}; }
inline Label make_label(int v) { return Label{static_cast<std::int64_t>(v)}; }
inline Label make_label(std::string v) { return Label{std::move(v)}; }
inline Label make_label(const char* v) { return Label{std::string(v)}; }

std::string label_text(const Label& l);
std::optional<std::int64_t> label_int(const Label& l);

// Ordered list of distinct symbols; index lookups are O(log n).
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Label> symbols);

  static Alphabet iota(std::int64_t first, std::size_t count);

  std::size_t size() const { return symbols_.size(); }
  const Label& operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<Label>& symbols() const { return symbols_; }

  bool contains(const Label& l) const;
  std::size_t index_of(const Label& l) const;  // throws ValidationError if absent
  std::optional<std::size_t> find(const Label& l) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<Label> symbols_;
  std::map<Label, std::size_t> index_;
};

}  // namespace fcomp
