#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace meso {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::string const& what, std::size_t line, std::size_t column)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  explicit ParseError(std::string const& what) : ParseError(what, 0, 0) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A search or completion bound was hit, or a region could not be certified.
class CertificationError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A point of Z^n. In the global context all coordinates are >= 0; localized
// exponents may carry negative entries on inverted coordinates.
class Exponent {
 public:
  using value_type = std::int64_t;

  Exponent() = default;
  explicit Exponent(std::size_t n) : c_(n, 0) {}
  Exponent(std::initializer_list<value_type> il) : c_(il) {}
  explicit Exponent(std::vector<value_type> v) : c_(std::move(v)) {}

  static Exponent unit(std::size_t n, std::size_t i) {
    Exponent e(n);
    e.c_[i] = 1;
    return e;
  }

  std::size_t size() const noexcept { return c_.size(); }
  value_type operator[](std::size_t i) const { return c_[i]; }
  value_type& operator[](std::size_t i) { return c_[i]; }
  std::vector<value_type> const& coords() const noexcept { return c_; }
  std::span<value_type const> span() const noexcept { return c_; }
  auto begin() const noexcept { return c_.begin(); }
  auto end() const noexcept { return c_.end(); }

  value_type degree() const {
    value_type d = 0;
    for (auto v : c_) d += v;
    return d;
  }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](auto v) { return v == 0; });
  }

  bool nonnegative() const {
    return std::all_of(c_.begin(), c_.end(), [](auto v) { return v >= 0; });
  }

  // Componentwise <=, i.e. divisibility of monomials.
  bool divides(Exponent const& other) const {
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] > other.c_[i]) return false;
    }
    return true;
  }

  bool disjoint_support(Exponent const& other) const {
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] != 0 && other.c_[i] != 0) return false;
    }
    return true;
  }

  Exponent& operator+=(Exponent const& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Exponent& operator-=(Exponent const& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend Exponent operator+(Exponent a, Exponent const& b) { return a += b; }
  friend Exponent operator-(Exponent a, Exponent const& b) { return a -= b; }
  friend Exponent operator-(Exponent a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }

  friend bool operator==(Exponent const&, Exponent const&) = default;
  friend auto operator<=>(Exponent const&, Exponent const&) = default;

  // Positive and negative parts: a = pos() - neg().
  Exponent pos() const {
    Exponent r(*this);
    for (auto& v : r.c_) v = std::max<value_type>(v, 0);
    return r;
  }
  Exponent neg() const {
    Exponent r(*this);
    for (auto& v : r.c_) v = std::max<value_type>(-v, 0);
    return r;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(c_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<value_type> c_;
};

inline Exponent lcm(Exponent const& a, Exponent const& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

// Restriction to an ordered list of coordinates.
inline Exponent restrict_to(Exponent const& a,
                            std::vector<std::size_t> const& idx) {
  Exponent r(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) r[k] = a[idx[k]];
  return r;
}

// Inverse of restrict_to: place `part` at `idx` inside a zero vector of size n.
inline Exponent embed(Exponent const& part, std::vector<std::size_t> const& idx,
                      std::size_t n) {
  Exponent r(n);
  for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = part[k];
  return r;
}

inline std::ostream& operator<<(std::ostream& os, Exponent const& e) {
  return os << e.to_string();
}

struct ExponentHash {
  std::size_t operator()(Exponent const& e) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : e) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

// All points of the box [0, bound_0] x ... x [0, bound_{n-1}] in
// lexicographic order of coordinates.
inline std::vector<Exponent> box_points(Exponent const& bound) {
  std::vector<Exponent> out;
  Exponent cur(bound.size());
  if (!bound.nonnegative()) return out;
  bool more = true;
  while (more) {
    out.push_back(cur);
    more = false;
    for (std::size_t i = bound.size(); i-- > 0;) {
      if (cur[i] < bound[i]) {
        ++cur[i];
        for (std::size_t j = i + 1; j < bound.size(); ++j) cur[j] = 0;
        more = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace meso
