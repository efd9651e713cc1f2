#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "halg/error.hpp"

namespace halg {

struct OperationSymbol {
  std::string name;
  std::size_t arity = 0;

  bool operator==(const OperationSymbol&) const = default;
};

namespace detail {

// Names of the form x<digits> are reserved for variables.
inline bool looks_like_variable(std::string_view name) {
  return name.size() > 1 && name[0] == 'x' &&
         std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline bool is_identifier(std::string_view name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  return std::all_of(name.begin(), name.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace detail

/// A similarity type: an ordered list of operation symbols with arities.
/// The position of a symbol in the list is its index everywhere else in the
/// library (terms, tables, hypersubstitutions).
class Signature {
 public:
  Signature() = default;

  explicit Signature(std::vector<OperationSymbol> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      const auto& name = symbols_[i].name;
      if (!detail::is_identifier(name)) throw Error("invalid operation symbol name '" + name + "'");
      if (detail::looks_like_variable(name))
        throw Error("operation symbol '" + name + "' collides with variable syntax");
      for (std::size_t j = 0; j < i; ++j)
        if (symbols_[j].name == name) throw Error("duplicate operation symbol '" + name + "'");
    }
  }

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const OperationSymbol& operator[](std::size_t i) const { return symbols_.at(i); }
  std::size_t arity(std::size_t i) const { return symbols_.at(i).arity; }
  const std::string& name(std::size_t i) const { return symbols_.at(i).name; }
  const std::vector<OperationSymbol>& symbols() const { return symbols_; }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].name == name) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> first_of_arity(std::size_t arity) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].arity == arity) return i;
    return std::nullopt;
  }

  std::size_t max_arity() const {
    std::size_t m = 0;
    for (const auto& s : symbols_) m = std::max(m, s.arity);
    return m;
  }

  bool has_nullary() const { return first_of_arity(0).has_value(); }

  /// Copy of this signature with one more symbol at the end.
  Signature with_symbol(OperationSymbol symbol) const {
    auto symbols = symbols_;
    symbols.push_back(std::move(symbol));
    return Signature(std::move(symbols));
  }

  bool operator==(const Signature&) const = default;

 private:
  std::vector<OperationSymbol> symbols_;
};

}  // namespace halg
