#include "cascade/badic.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cascade {

namespace {

using i128 = __int128;

std::int64_t checked_cast(i128 v, const char* what) {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN)) {
    throw std::overflow_error(std::string("rational overflow in ") + what);
  }
  return static_cast<std::int64_t>(v);
}

void check_base(int base) {
  if (base < 2 || base > 64) {
    throw std::invalid_argument("base must be in [2, 64]");
  }
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

namespace {

// reduce n/d (d > 0) by their gcd in 128 bits before narrowing
Rational reduced(i128 nn, i128 dd, const char* what) {
  if (nn == 0) return Rational(0, 1);
  i128 x = nn < 0 ? -nn : nn, y = dd;
  while (y != 0) {
    const i128 r = x % y;
    x = y;
    y = r;
  }
  return Rational(checked_cast(nn / x, what), checked_cast(dd / x, what));
}

}  // namespace

Rational operator+(const Rational& a, const Rational& b) {
  return reduced(i128(a.num) * b.den + i128(b.num) * a.den,
                 i128(a.den) * b.den, "add");
}

Rational operator-(const Rational& a, const Rational& b) {
  return a + Rational(-b.num, b.den);
}

Rational operator*(const Rational& a, const Rational& b) {
  return reduced(i128(a.num) * b.num, i128(a.den) * b.den, "mul");
}

bool operator==(const Rational& a, const Rational& b) {
  return a.num == b.num && a.den == b.den;
}

bool operator<(const Rational& a, const Rational& b) {
  return i128(a.num) * b.den < i128(b.num) * a.den;
}

bool operator<=(const Rational& a, const Rational& b) {
  return i128(a.num) * b.den <= i128(b.num) * a.den;
}

Word::Word(int b, std::vector<std::uint32_t> d) : base(b), digits(std::move(d)) {
  check_base(base);
  for (std::uint32_t digit : digits) {
    if (digit >= static_cast<std::uint32_t>(base)) {
      throw std::invalid_argument("word digit out of range for base");
    }
  }
}

std::uint64_t Word::node_index() const {
  std::uint64_t idx = 0;
  for (std::uint32_t d : digits) idx = idx * base + d;
  return idx;
}

Word Word::prefix(int k) const {
  if (k < 0 || k > length()) throw std::out_of_range("prefix length");
  return Word(base, std::vector<std::uint32_t>(digits.begin(), digits.begin() + k));
}

Word Word::child(std::uint32_t digit) const {
  Word w = *this;
  if (digit >= static_cast<std::uint32_t>(base)) {
    throw std::invalid_argument("child digit out of range");
  }
  w.digits.push_back(digit);
  return w;
}

std::string Word::to_string() const {
  if (digits.empty()) return "()";
  std::string s = "(";
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(digits[i]);
  }
  s += ')';
  return s;
}

bool operator==(const Word& a, const Word& b) {
  return a.base == b.base && a.digits == b.digits;
}

bool BadicInterval::contains(const Rational& t) const {
  return left <= t && t < right();
}

bool BadicInterval::contains(double t) const {
  return left.value() <= t && t < right().value();
}

std::int64_t ipow(std::int64_t b, int n) {
  if (n < 0) throw std::invalid_argument("negative exponent");
  std::int64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > INT64_MAX / b) throw std::overflow_error("b^n exceeds int64");
    r *= b;
  }
  return r;
}

BadicInterval word_to_interval(const Word& w) {
  const int n = w.length();
  const std::int64_t den = ipow(w.base, n);
  std::int64_t num = 0;
  for (std::uint32_t d : w.digits) num = num * w.base + d;
  BadicInterval iv;
  iv.word = w;
  iv.left = Rational(num, den);
  iv.width = Rational(1, den);
  return iv;
}

Word locate(double t, int n, int base) {
  check_base(base);
  if (n < 0) throw std::invalid_argument("generation must be >= 0");
  if (!(t >= 0.0) || t >= 1.0) {
    throw std::domain_error("locate requires t in [0, 1)");
  }
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(n));
  double x = t;
  for (int i = 0; i < n; ++i) {
    x *= base;
    int d = static_cast<int>(x);
    if (d >= base) d = base - 1;  // guard against rounding at cell boundaries
    if (d < 0) d = 0;
    digits[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(d);
    x -= d;
  }
  return Word(base, std::move(digits));
}

Word locate(const Rational& t, int n, int base) {
  check_base(base);
  if (n < 0) throw std::invalid_argument("generation must be >= 0");
  if (t < Rational(0, 1) || Rational(1, 1) <= t) {
    throw std::domain_error("locate requires t in [0, 1)");
  }
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(n));
  Rational x = t;
  for (int i = 0; i < n; ++i) {
    x = x * Rational(base, 1);
    // floor(x) for x in [0, base)
    std::int64_t d = x.num / x.den;
    digits[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(d);
    x = x - Rational(d, 1);
  }
  return Word(base, std::move(digits));
}

Word word_from_index(int base, int n, std::uint64_t index) {
  check_base(base);
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    digits[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(index % base);
    index /= base;
  }
  if (index != 0) throw std::out_of_range("cell index exceeds b^n");
  return Word(base, std::move(digits));
}

Grid make_grid(int base, int n) {
  check_base(base);
  const std::int64_t cells = ipow(base, n);
  if (cells > (std::int64_t(1) << 26)) {
    throw std::invalid_argument("grid too large");
  }
  Grid g;
  g.base = base;
  g.n = n;
  g.points.reserve(static_cast<std::size_t>(cells) + 1);
  for (std::int64_t j = 0; j <= cells; ++j) {
    g.points.push_back(Rational(j, cells));
  }
  return g;
}

}  // namespace cascade
