#pragma once

// Exact arithmetic on P^1(Q) and on 2x2 integer matrices.
//
// Everything here is division free except cusp canonicalization. No floating
// point: vertex heights of normalized symbols reach hundreds of bits.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "farey/errors.hpp"

namespace farey {

using Int = mpz_class;

inline int sgn(const Int& x) { return mpz_sgn(x.get_mpz_t()); }

/// A point (num : den) of P^1(Q), stored in lowest terms with den >= 0.
/// Infinity is (1 : 0).
class Cusp {
 public:
  Cusp() : num_(1), den_(0) {}
  Cusp(Int p, Int q) : num_(std::move(p)), den_(std::move(q)) { canonicalize(); }
  Cusp(long p, long q) : Cusp(Int(p), Int(q)) {}

  static Cusp infinity() { return Cusp(); }
  static Cusp integer(long n) { return Cusp(n, 1); }

  /// Builds from a primitive vector (gcd already 1); only fixes the sign.
  static Cusp from_primitive(Int p, Int q) {
    Cusp c(unchecked_tag{}, std::move(p), std::move(q));
    c.fix_sign();
    return c;
  }

  const Int& num() const { return num_; }
  const Int& den() const { return den_; }
  bool is_infinity() const { return sgn(den_) == 0; }

  /// "p/q", with "1/0" for infinity.
  std::string str() const { return num_.get_str() + "/" + den_.get_str(); }

  /// Accepts "p/q", "p" or "oo"/"inf".
  static Cusp parse(std::string_view text);

  friend bool operator==(const Cusp& x, const Cusp& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend bool operator!=(const Cusp& x, const Cusp& y) { return !(x == y); }
  friend std::ostream& operator<<(std::ostream& os, const Cusp& c) {
    return os << c.str();
  }

 private:
  struct unchecked_tag {};
  Cusp(unchecked_tag, Int p, Int q) : num_(std::move(p)), den_(std::move(q)) {}

  void canonicalize() {
    if (sgn(num_) == 0 && sgn(den_) == 0) {
      throw Error(ErrorKind::InvalidPoint, "(0 : 0) is not a point of P^1(Q)");
    }
    Int g;
    mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
    if (g != 1) {
      mpz_divexact(num_.get_mpz_t(), num_.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
    fix_sign();
  }

  void fix_sign() {
    if (sgn(den_) < 0 || (sgn(den_) == 0 && sgn(num_) < 0)) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  Int num_;
  Int den_;
};

inline Cusp Cusp::parse(std::string_view text) {
  std::string s(text);
  if (s == "oo" || s == "inf" || s == "infinity") return Cusp::infinity();
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Cusp(Int(s), Int(1));
    return Cusp(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::Parse, "not a cusp: '" + s + "'");
  }
}

struct CuspHash {
  std::size_t operator()(const Cusp& c) const noexcept {
    auto limb = [](const Int& x) -> std::size_t {
      if (sgn(x) == 0) return 0;
      return static_cast<std::size_t>(mpz_getlimbn(x.get_mpz_t(), 0)) *
                 (sgn(x) < 0 ? 31u : 17u) +
             mpz_size(x.get_mpz_t());
    };
    return limb(c.num()) * 1000003u ^ limb(c.den());
  }
};

/// D((p:q), (p':q')) = p q' - p' q.
inline Int cross(const Cusp& x, const Cusp& y) {
  return x.num() * y.den() - y.num() * x.den();
}

/// Row-major 2x2 integer matrix [[a, b], [c, d]].
struct IMat {
  Int a{1}, b{0}, c{0}, d{1};

  IMat() = default;
  IMat(Int a_, Int b_, Int c_, Int d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}
  IMat(long a_, long b_, long c_, long d_) : a(a_), b(b_), c(c_), d(d_) {}

  static IMat identity() { return IMat(); }

  Int det() const { return a * d - b * c; }
  Int trace() const { return a + d; }

  /// Adjugate; equals the inverse when det = 1.
  IMat adjugate() const { return IMat(d, -b, -c, a); }

  IMat operator-() const { return IMat(-a, -b, -c, -d); }

  friend IMat operator*(const IMat& x, const IMat& y) {
    return IMat(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d);
  }
  friend IMat operator+(const IMat& x, const IMat& y) {
    return IMat(x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d);
  }
  friend bool operator==(const IMat& x, const IMat& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  friend bool operator!=(const IMat& x, const IMat& y) { return !(x == y); }

  bool is_zero() const {
    return sgn(a) == 0 && sgn(b) == 0 && sgn(c) == 0 && sgn(d) == 0;
  }

  /// Representative modulo +-1 whose first nonzero entry (reading order)
  /// is positive.
  IMat psl_normalized() const {
    const Int* first = sgn(a) != 0 ? &a : sgn(b) != 0 ? &b : sgn(c) != 0 ? &c : &d;
    return sgn(*first) < 0 ? -*this : *this;
  }

  /// Sum of absolute values of the entries.
  Int size_measure() const { return abs(a) + abs(b) + abs(c) + abs(d); }

  std::string str() const {
    return "[[" + a.get_str() + ", " + b.get_str() + "], [" + c.get_str() +
           ", " + d.get_str() + "]]";
  }
  friend std::ostream& operator<<(std::ostream& os, const IMat& m) {
    return os << m.str();
  }
};

/// Equality in PSL2: up to a global sign.
inline bool psl_equal(const IMat& x, const IMat& y) {
  return x == y || x == -y;
}

inline bool is_pm_identity(const IMat& m) {
  return sgn(m.b) == 0 && sgn(m.c) == 0 &&
         ((m.a == 1 && m.d == 1) || (m.a == -1 && m.d == -1));
}

/// Inverse of a det-1 matrix.
inline IMat inverse_sl2(const IMat& m) { return m.adjugate(); }

/// x * adj(y) / det(y), exact; throws if the quotient is not integral.
inline IMat mul_by_inverse(const IMat& x, const IMat& y) {
  const Int det = y.det();
  if (sgn(det) == 0) throw Error(ErrorKind::InvalidInput, "singular matrix");
  IMat p = x * y.adjugate();
  if (det == 1) return p;
  if (det == -1) return -p;
  for (Int* e : {&p.a, &p.b, &p.c, &p.d}) {
    if (!mpz_divisible_p(e->get_mpz_t(), det.get_mpz_t())) {
      throw Error(ErrorKind::InvalidSymbol, "non-integral gluing matrix");
    }
    mpz_divexact(e->get_mpz_t(), e->get_mpz_t(), det.get_mpz_t());
  }
  return p;
}

inline IMat power(const IMat& m, long e) {
  IMat base = e < 0 ? inverse_sl2(m) : m;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  IMat r;
  while (k) {
    if (k & 1u) r = r * base;
    base = base * base;
    k >>= 1u;
  }
  return r;
}

/// (p : q) -> (a p + b q : c p + d q), reduced.
inline Cusp moebius(const IMat& g, const Cusp& x) {
  return Cusp(g.a * x.num() + g.b * x.den(), g.c * x.num() + g.d * x.den());
}

/// Same as moebius() for g in SL2(Z): primitivity is preserved, so no gcd.
inline Cusp moebius_sl2(const IMat& g, const Cusp& x) {
  return Cusp::from_primitive(g.a * x.num() + g.b * x.den(),
                              g.c * x.num() + g.d * x.den());
}

/// +1 when (r, s, t) is counterclockwise on the Cayley circle, -1 otherwise.
inline int circular_order(const Cusp& r, const Cusp& s, const Cusp& t) {
  const int prod = sgn(cross(r, s)) * sgn(cross(s, t)) * sgn(cross(t, r));
  if (prod == 0) {
    throw Error(ErrorKind::InvalidInput, "circular_order needs distinct points");
  }
  return prod;
}

/// Primitive positive-determinant matrix whose columns are r and s. The first
/// column is the canonical form of r; the sign of the second is forced.
inline IMat arc_matrix(const Cusp& r, const Cusp& s) {
  const Int det = cross(r, s);
  const int sign = sgn(det);
  if (sign == 0) throw Error(ErrorKind::DegenerateArc, "arc endpoints coincide: " + r.str());
  if (sign > 0) return IMat(r.num(), s.num(), r.den(), s.den());
  return IMat(r.num(), -s.num(), r.den(), -s.den());
}

/// A^- = A [[0, -1], [1, 0]]: the reversed arc.
inline IMat arc_matrix_minus(const IMat& A) { return IMat(A.b, -A.a, A.d, -A.c); }

/// Width of the arc (r, s): det of its arc matrix.
inline Int arc_width(const Cusp& r, const Cusp& s) { return abs(cross(r, s)); }

/// Order-3 rotation of the triangle (oo, 0, 1).
inline IMat tau3() { return IMat(0, -1, 1, -1); }
/// [[0, 1], [-1, 0]], the order-2 element fixing i.
inline IMat s_conj() { return IMat(0, 1, -1, 0); }

/// Order-2 element of SL2(Q) reversing arc A (may be non-integral).
inline IMat order2_element(const IMat& A) { return mul_by_inverse(A * s_conj(), A); }
/// Order-3 element rotating the triangle on the reversed arc A^-.
inline IMat order3_element(const IMat& A) {
  const IMat Am = arc_matrix_minus(A);
  return mul_by_inverse(Am * tau3(), Am);
}

struct MatClass {
  enum class Kind { Identity, Elliptic, Parabolic, Hyperbolic };
  Kind kind = Kind::Identity;
  int order = 0;  ///< 2, 3 or 0 (other) for elliptic

  friend bool operator==(const MatClass&, const MatClass&) = default;
};

inline MatClass classify(const IMat& g) {
  if (g.det() != 1) throw Error(ErrorKind::Unsupported, "classify needs det 1");
  const Int t = abs(g.trace());
  if (t < 2) return {MatClass::Kind::Elliptic, t == 0 ? 2 : 3};
  if (t == 2) {
    return {is_pm_identity(g) ? MatClass::Kind::Identity : MatClass::Kind::Parabolic, 0};
  }
  return {MatClass::Kind::Hyperbolic, 0};
}

/// Bits of max(|p|, |q|).
inline std::size_t height_bits(const Cusp& c) {
  const Int m = abs(c.num()) > abs(c.den()) ? abs(c.num()) : abs(c.den());
  return sgn(m) == 0 ? 0 : mpz_sizeinbase(m.get_mpz_t(), 2);
}

}  // namespace farey
