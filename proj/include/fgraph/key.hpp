#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

namespace fgraph {

// Variable identifier: a symbol character plus an unsigned index, e.g. x1.
struct Key {
  char symbol = 'x';
  std::uint64_t index = 0;

  friend constexpr auto operator<=>(const Key&, const Key&) = default;

  std::string str() const { return symbol + std::to_string(index); }
};

constexpr Key key(char symbol, std::uint64_t index) { return Key{symbol, index}; }

inline std::ostream& operator<<(std::ostream& os, const Key& k) {
  return os << k.symbol << k.index;
}

}  // namespace fgraph

template <>
struct std::hash<fgraph::Key> {
  std::size_t operator()(const fgraph::Key& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.index * 131u + static_cast<unsigned char>(k.symbol));
  }
};
