#pragma once

#include <compare>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "meso/exponent.hpp"

namespace meso {

enum class OrderKind { grlex, grevlex, lex };

inline std::string to_string(OrderKind k) {
  switch (k) {
    case OrderKind::grlex: return "grlex";
    case OrderKind::grevlex: return "grevlex";
    case OrderKind::lex: return "lex";
  }
  return "?";
}

inline OrderKind order_kind_from_string(std::string const& s) {
  if (s == "grlex") return OrderKind::grlex;
  if (s == "grevlex") return OrderKind::grevlex;
  if (s == "lex") return OrderKind::lex;
  throw PreconditionError("unknown monomial order '" + s + "'");
}

// A term order on N^n built from consecutive blocks. Blocks are compared in
// sequence; each block lists its variables from highest to lowest precedence.
// A single block gives an ordinary order, several blocks give an elimination
// order in which the earlier blocks dominate.
class MonomialOrder {
 public:
  struct Block {
    OrderKind kind = OrderKind::grlex;
    std::vector<std::size_t> vars;
  };

  MonomialOrder() = default;

  // Single block over variables 0..n-1 with variable 0 highest.
  static MonomialOrder standard(std::size_t n,
                                OrderKind kind = OrderKind::grlex) {
    Block b;
    b.kind = kind;
    b.vars.resize(n);
    std::iota(b.vars.begin(), b.vars.end(), std::size_t{0});
    MonomialOrder o;
    o.blocks_.push_back(std::move(b));
    return o;
  }

  static MonomialOrder with_precedence(std::vector<std::size_t> precedence,
                                       OrderKind kind = OrderKind::grlex) {
    MonomialOrder o;
    o.blocks_.push_back(Block{kind, std::move(precedence)});
    return o;
  }

  static MonomialOrder from_blocks(std::vector<Block> blocks) {
    MonomialOrder o;
    o.blocks_ = std::move(blocks);
    return o;
  }

  std::vector<Block> const& blocks() const noexcept { return blocks_; }

  std::strong_ordering compare(Exponent const& a, Exponent const& b) const {
    for (auto const& blk : blocks_) {
      if (blk.kind != OrderKind::lex) {
        Exponent::value_type da = 0, db = 0;
        for (auto v : blk.vars) {
          da += a[v];
          db += b[v];
        }
        if (da != db) return da <=> db;
      }
      if (blk.kind == OrderKind::grevlex) {
        for (std::size_t k = blk.vars.size(); k-- > 0;) {
          auto v = blk.vars[k];
          if (a[v] != b[v]) return b[v] <=> a[v];
        }
      } else {
        for (auto v : blk.vars) {
          if (a[v] != b[v]) return a[v] <=> b[v];
        }
      }
    }
    return std::strong_ordering::equal;
  }

  bool less(Exponent const& a, Exponent const& b) const {
    return compare(a, b) == std::strong_ordering::less;
  }

  // Comparator object usable with standard containers.
  auto comparator() const {
    return [this](Exponent const& a, Exponent const& b) { return less(a, b); };
  }

 private:
  std::vector<Block> blocks_;
};

}  // namespace meso
