#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cascade {

// Exact fraction with int64 parts, normalized (den > 0, gcd = 1).
// Intermediate products go through __int128, so values arising from
// b-adic endpoints (den = b^n with n*log2(b) <= 62) are always exact.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);
  static Rational from_int(std::int64_t n) { return Rational(n, 1); }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }
};

// Word over the alphabet {0, ..., b-1}; the empty word is the root.
struct Word {
  int base = 2;
  std::vector<std::uint32_t> digits;

  Word() = default;
  Word(int b, std::vector<std::uint32_t> d);

  int length() const { return static_cast<int>(digits.size()); }
  // Index of the word among A^n in lexicographic order; doubles as the
  // cell index of its interval at generation n.
  std::uint64_t node_index() const;
  Word prefix(int k) const;  // first k digits
  Word child(std::uint32_t digit) const;
  std::string to_string() const;

  friend bool operator==(const Word& a, const Word& b);
};

// Half-open b-adic interval [left, left + b^-n).
struct BadicInterval {
  Word word;
  Rational left;
  Rational width;

  Rational right() const { return left + width; }
  bool contains(const Rational& t) const;  // left <= t < right
  bool contains(double t) const;
};

// b^n as int64; throws std::overflow_error past 2^62.
std::int64_t ipow(std::int64_t b, int n);

// t_w = sum w_i b^-i and width b^-|w|, exactly.
BadicInterval word_to_interval(const Word& w);

// Digits of the generation-n interval containing t. Requires t in [0,1).
Word locate(double t, int n, int base);
Word locate(const Rational& t, int n, int base);

// Word with the given cell index at generation n.
Word word_from_index(int base, int n, std::uint64_t index);

// Endpoints of T_n: b^n + 1 points j*b^-n.
struct Grid {
  int base = 2;
  int n = 0;
  std::vector<Rational> points;

  std::size_t size() const { return points.size(); }
};

Grid make_grid(int base, int n);

}  // namespace cascade
