#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace endoscopy {

// Reduced fraction with positive denominator.
class Rat {
public:
  constexpr Rat() = default;
  constexpr Rat(long long n) : num_(n), den_(1) {}
  Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return from128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_, (__int128)a.den_ * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return from128((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_, (__int128)a.den_ * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    return from128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
  }
  Rat operator-() const { Rat r; r.num_ = -num_; r.den_ = den_; return r; }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  bool is_integer() const { return den_ == 1; }
  long long floor() const {
    long long q = num_ / den_;
    if ((num_ % den_ != 0) && ((num_ < 0) != (den_ < 0))) --q;
    return q;
  }
  // Representative of this value modulo 1 in [0,1).
  Rat frac() const { return *this - Rat(floor()); }
  double to_double() const { return (double)num_ / (double)den_; }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

  static Rat parse(const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rat(std::stoll(s));
      return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("not a rational number: '" + s + "'");
    }
  }

private:
  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { __int128 t = a % b; a = b; b = t; }
    return a;
  }
  static Rat from128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n, d);
    if (g > 1) { n /= g; d /= g; }
    constexpr __int128 lim = (__int128)INT64_MAX;
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rat: overflow");
    Rat r;
    r.num_ = (long long)n;
    r.den_ = (long long)d;
    return r;
  }
  void normalize() {
    if (den_ == 0) throw std::domain_error("Rat: zero denominator");
    *this = from128(num_, den_);
  }

  long long num_ = 0;
  long long den_ = 1;
};

using RVec = std::vector<Rat>;

// A point e^{2 pi i angle} of the unit circle, angle kept in [0,1).
class Circle {
public:
  Circle() = default;
  explicit Circle(const Rat& angle) : angle_(angle.frac()) {}

  const Rat& angle() const { return angle_; }

  friend Circle operator*(const Circle& a, const Circle& b) { return Circle(a.angle_ + b.angle_); }
  friend Circle operator/(const Circle& a, const Circle& b) { return Circle(a.angle_ - b.angle_); }
  Circle& operator*=(const Circle& o) { return *this = *this * o; }
  Circle inv() const { return Circle(-angle_); }
  Circle pow(long long k) const { return Circle(angle_ * Rat(k)); }
  bool is_one() const { return angle_ == Rat(0); }

  friend bool operator==(const Circle& a, const Circle& b) { return a.angle_ == b.angle_; }
  friend bool operator<(const Circle& a, const Circle& b) { return a.angle_ < b.angle_; }

  static Circle minus_one() { return Circle(Rat(1, 2)); }
  static Circle sign(int s) { return s < 0 ? minus_one() : Circle(); }

  friend std::ostream& operator<<(std::ostream& os, const Circle& c) { return os << "e(" << c.angle_ << ")"; }

private:
  Rat angle_;
};

// Floating complex value; compare only through close() with an explicit tolerance.
struct Cx {
  double re = 0.0;
  double im = 0.0;

  Cx() = default;
  Cx(double r, double i = 0.0) : re(r), im(i) {}
  Cx(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}

  std::complex<double> z() const { return {re, im}; }
  friend Cx operator+(const Cx& a, const Cx& b) { return a.z() + b.z(); }
  friend Cx operator-(const Cx& a, const Cx& b) { return a.z() - b.z(); }
  friend Cx operator*(const Cx& a, const Cx& b) { return a.z() * b.z(); }
  friend Cx operator/(const Cx& a, const Cx& b) { return a.z() / b.z(); }
  Cx operator-() const { return Cx(-re, -im); }
  Cx& operator+=(const Cx& o) { return *this = *this + o; }
  Cx& operator*=(const Cx& o) { return *this = *this * o; }
  double abs() const { return std::hypot(re, im); }
  Cx conj() const { return Cx(re, -im); }

  friend bool close(const Cx& a, const Cx& b, double tol) { return (a - b).abs() <= tol; }
  friend std::ostream& operator<<(std::ostream& os, const Cx& c) {
    std::ostringstream s;
    s.precision(12);
    s << c.re << (c.im < 0 ? "-" : "+") << std::abs(c.im) << "i";
    return os << s.str();
  }
};

// cos/sin of 2 pi angle. The angle is folded into [-1/8,1/8] around the nearest
// multiple of 1/4 first, so symmetric angles give bitwise symmetric results.
inline Cx circle_to_cx(const Circle& c) {
  const Rat& a = c.angle();
  Rat q = a * Rat(4);
  long long k = (q + Rat(1, 2)).floor();
  double r = (a - Rat(k, 4)).to_double() * 2.0 * M_PI;
  double cr = std::cos(r), sr = std::sin(r);
  switch (((k % 4) + 4) % 4) {
    case 0: return Cx(cr, sr);
    case 1: return Cx(-sr, cr);
    case 2: return Cx(-cr, -sr);
    default: return Cx(sr, -cr);
  }
}

inline Cx one_minus(const Circle& c) {
  Cx z = circle_to_cx(c);
  return Cx(1.0 - z.re, -z.im);
}

// Unit complex number z/|z|.
inline Cx sgn_c(const Cx& z) {
  double m = z.abs();
  if (m == 0.0) throw std::domain_error("sgn_C of zero");
  return Cx(z.re / m, z.im / m);
}

inline Rat dot(const RVec& a, const RVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rat s;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::string to_string(const RVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + ")";
}

}  // namespace endoscopy
