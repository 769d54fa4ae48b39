#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "meso/exponent.hpp"

namespace meso {

// A finitely presented congruence on N^n: pair generators a ~ b and nil
// generators m (m is nil, and so is everything above it).
struct CongruencePresentation {
  std::size_t n = 0;
  std::vector<std::string> names;
  std::vector<std::pair<Exponent, Exponent>> pairs;
  std::vector<Exponent> nils;

  CongruencePresentation() = default;
  explicit CongruencePresentation(std::vector<std::string> vars)
      : n(vars.size()), names(std::move(vars)) {}

  static CongruencePresentation with_default_names(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("x" + std::to_string(i + 1));
    return CongruencePresentation(std::move(v));
  }

  // Adds a pair unless it is trivial or already present (in either
  // orientation).
  void add_pair(Exponent a, Exponent b) {
    check_exponent(a);
    check_exponent(b);
    if (a == b) return;
    for (auto const& [x, y] : pairs) {
      if ((x == a && y == b) || (x == b && y == a)) return;
    }
    pairs.emplace_back(std::move(a), std::move(b));
  }

  void add_nil(Exponent m) {
    check_exponent(m);
    if (std::find(nils.begin(), nils.end(), m) != nils.end()) return;
    nils.push_back(std::move(m));
  }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(CongruencePresentation const&,
                         CongruencePresentation const&) = default;

 private:
  void check_exponent(Exponent const& e) const {
    if (e.size() != n) {
      throw PreconditionError("exponent " + e.to_string() + " has length " +
                              std::to_string(e.size()) + ", expected " +
                              std::to_string(n));
    }
    if (!e.nonnegative()) {
      throw PreconditionError("exponent " + e.to_string() +
                              " has a negative coordinate");
    }
  }
};

inline std::string format_monomial(Exponent const& e,
                                   std::vector<std::string> const& names) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += names[i];
    if (e[i] != 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

inline std::string serialize(CongruencePresentation const& p) {
  std::ostringstream os;
  os << "vars ";
  for (std::size_t i = 0; i < p.names.size(); ++i) {
    if (i) os << ", ";
    os << p.names[i];
  }
  os << ";\n";
  for (auto const& [a, b] : p.pairs) {
    os << format_monomial(a, p.names) << " - " << format_monomial(b, p.names)
       << ";\n";
  }
  for (auto const& m : p.nils) os << format_monomial(m, p.names) << ";\n";
  return os.str();
}

namespace detail {

// Recursive-descent reader for the presentation format. Expressions are
// expanded into sparse integer polynomials and then classified.
class PresentationParser {
 public:
  explicit PresentationParser(std::string_view text) : text_(text) {}

  CongruencePresentation parse() {
    skip_ws();
    auto kw = ident();
    if (kw != "vars") fail("expected 'vars' declaration");
    std::vector<std::string> names;
    while (true) {
      skip_ws();
      auto [l, c] = here();
      auto name = ident();
      if (name.empty()) fail("expected variable name");
      if (std::find(names.begin(), names.end(), name) != names.end()) {
        throw ParseError("duplicate variable '" + name + "'", l, c);
      }
      names.push_back(name);
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(';');
      break;
    }
    CongruencePresentation pres(names);
    vars_ = &pres.names;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) break;
      auto [l, c] = here();
      Poly poly = expr();
      skip_ws();
      expect(';');
      classify(pres, poly, l, c);
    }
    return pres;
  }

 private:
  using Poly = std::map<Exponent, long long>;

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> const* vars_ = nullptr;

  std::pair<std::size_t, std::size_t> here() const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  [[noreturn]] void fail(std::string const& msg) const {
    auto [l, c] = here();
    throw ParseError(msg, l, c);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (ch == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char ch) {
    skip_ws();
    if (peek() != ch) fail(std::string("expected '") + ch + "'");
    ++pos_;
  }

  std::string ident() {
    std::size_t start = pos_;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
         text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  long long number() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected number");
    long long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1'000'000'000) fail("number too large");
      ++pos_;
    }
    return v;
  }

  Exponent zero() const { return Exponent(vars_->size()); }

  static Poly add(Poly a, Poly const& b, long long sign) {
    for (auto const& [m, c] : b) {
      a[m] += sign * c;
      if (a[m] == 0) a.erase(m);
    }
    return a;
  }

  static Poly mul(Poly const& a, Poly const& b) {
    Poly r;
    for (auto const& [m1, c1] : a) {
      for (auto const& [m2, c2] : b) {
        auto m = m1 + m2;
        r[m] += c1 * c2;
        if (r[m] == 0) r.erase(m);
      }
    }
    return r;
  }

  Poly expr() {
    skip_ws();
    long long sign = 1;
    if (peek() == '-' || peek() == '+') {
      sign = peek() == '-' ? -1 : 1;
      ++pos_;
    }
    Poly acc = add(Poly{}, term(), sign);
    while (true) {
      skip_ws();
      char ch = peek();
      if (ch != '+' && ch != '-') break;
      ++pos_;
      acc = add(acc, term(), ch == '-' ? -1 : 1);
    }
    return acc;
  }

  Poly term() {
    Poly acc = factor();
    while (true) {
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
      acc = mul(acc, factor());
    }
    return acc;
  }

  Poly factor() {
    skip_ws();
    char ch = peek();
    if (ch == '(') {
      ++pos_;
      Poly p = expr();
      expect(')');
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      long long v = number();
      Poly p;
      if (v != 0) p[zero()] = v;
      return p;
    }
    auto [l, c] = here();
    auto name = ident();
    if (name.empty()) fail("expected monomial");
    auto it = std::find(vars_->begin(), vars_->end(), name);
    if (it == vars_->end()) {
      throw ParseError("undeclared variable '" + name + "'", l, c);
    }
    long long e = 1;
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      e = number();
    }
    Exponent m = zero();
    m[static_cast<std::size_t>(it - vars_->begin())] = e;
    return Poly{{m, 1}};
  }

  static void classify(CongruencePresentation& pres, Poly const& poly,
                       std::size_t line, std::size_t col) {
    for (auto const& [m, c] : poly) {
      if (c != 1 && c != -1) throw ParseError("non-unital binomial", line, col);
    }
    if (poly.empty()) return;
    if (poly.size() > 2) {
      throw ParseError("generator is neither a binomial nor a monomial", line,
                       col);
    }
    if (poly.size() == 1) {
      pres.add_nil(poly.begin()->first);
      return;
    }
    // Keep the written orientation: the first term with positive coefficient
    // (or the first term) becomes the left side.
    auto first = poly.begin();
    auto second = std::next(first);
    if (first->second < 0 && second->second > 0) std::swap(first, second);
    pres.add_pair(first->first, second->first);
  }
};

}  // namespace detail

inline CongruencePresentation parse_presentation(std::string_view text) {
  return detail::PresentationParser(text).parse();
}

}  // namespace meso
