#include "rlnc/galois.hpp"

#include <sstream>
#include <stdexcept>

namespace rlnc {
namespace {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) {
  // Fermat; p is prime.
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo b over F_p; b nonzero after trimming.
Poly poly_rem(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  const std::uint32_t lead_inv = mod_inv(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = std::uint64_t{a.back()} * lead_inv % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::uint64_t sub = factor * b[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Poly unpack(Symbol v, std::uint32_t p, std::uint32_t m) {
  Poly digits(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    digits[i] = v % p;
    v /= p;
  }
  return digits;
}

Symbol pack(const Poly& digits, std::uint32_t p) {
  Symbol v = 0;
  for (std::size_t i = digits.size(); i-- > 0;) v = v * p + digits[i];
  return v;
}

}  // namespace

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint32_t q) {
  if (q < 2) throw std::invalid_argument("field order must be at least 2");
  std::uint32_t p = 2;
  while (q % p != 0) ++p;
  std::uint32_t m = 0;
  std::uint32_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1)
    throw std::invalid_argument(std::to_string(q) + " is not a prime power");
  return {p, m};
}

bool is_irreducible(const Poly& coeffs, std::uint32_t p) {
  const std::size_t m = coeffs.size() - 1;
  if (m == 0) return false;
  if (m == 1) return true;
  for (std::size_t d = 1; d <= m / 2; ++d) {
    // Every monic divisor candidate of degree d.
    Poly g(d + 1, 0);
    g[d] = 1;
    for (;;) {
      if (poly_rem(coeffs, g, p).empty()) return false;
      std::size_t i = 0;
      while (i < d && ++g[i] == p) g[i++] = 0;
      if (i == d) break;
    }
  }
  return true;
}

FieldPtr Field::make(std::uint32_t p, std::uint32_t m) {
  if (!is_prime(p))
    throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (m == 0) throw std::invalid_argument("extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < m; ++i) {
    q *= p;
    if (q > kMaxFieldOrder)
      throw std::invalid_argument("field order exceeds 2^16");
  }
  return FieldPtr(new Field(p, m));
}

FieldPtr Field::from_order(std::uint32_t q) {
  if (q > kMaxFieldOrder)
    throw std::invalid_argument("field order exceeds 2^16");
  auto [p, m] = prime_power(q);
  return make(p, m);
}

Field::Field(std::uint32_t p, std::uint32_t m) : p_(p), m_(m), q_(1) {
  for (std::uint32_t i = 0; i < m; ++i) q_ *= p;
  std::uint32_t bits = 0;
  while ((1u << bits) < q_) ++bits;
  sample_mask_ = (std::uint64_t{1} << bits) - 1;

  if (m_ > 1) {
    // Odometer with c_0 as the most significant digit, so candidates come
    // out in lexicographic order from the constant term upward.
    Poly c(m_ + 1, 0);
    c[m_] = 1;
    for (;;) {
      if (is_irreducible(c, p_)) break;
      std::uint32_t i = m_;
      do {
        --i;
        if (++c[i] < p_) break;
        c[i] = 0;
      } while (i > 0);
    }
    poly_ = c;
  }

  if (q_ <= 256) {
    add_.resize(std::size_t{q_} * q_);
    mul_.resize(std::size_t{q_} * q_);
    inv_.assign(q_, 0);
    for (Symbol a = 0; a < q_; ++a) {
      for (Symbol b = 0; b < q_; ++b) {
        add_[a * q_ + b] = static_cast<std::uint16_t>(add_slow(a, b));
        const Symbol prod = mul_slow(a, b);
        mul_[a * q_ + b] = static_cast<std::uint16_t>(prod);
        if (prod == 1) inv_[a] = static_cast<std::uint16_t>(b);
      }
    }
  }
}

std::string Field::reduction_poly_string() const {
  if (poly_.empty()) return "";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = poly_.size(); i-- > 0;) {
    if (poly_[i] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (poly_[i] != 1 || i == 0) os << poly_[i];
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

Symbol Field::add_slow(Symbol a, Symbol b) const {
  if (m_ == 1) return (a + b) % p_;
  if (p_ == 2) return a ^ b;
  Symbol out = 0, scale = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    out += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return out;
}

Symbol Field::mul_slow(Symbol a, Symbol b) const {
  if (m_ == 1)
    return static_cast<Symbol>(std::uint64_t{a} * b % p_);
  if (p_ == 2) {
    // Carry-less product, then reduce by the packed polynomial.
    std::uint64_t prod = 0;
    for (std::uint32_t i = 0; i < m_; ++i)
      if (b >> i & 1) prod ^= std::uint64_t{a} << i;
    const std::uint64_t red = pack(poly_, 2);
    for (std::uint32_t i = 2 * m_ - 1; i-- > m_;)
      if (prod >> i & 1) prod ^= red << (i - m_);
    return static_cast<Symbol>(prod);
  }
  const Poly x = unpack(a, p_, m_), y = unpack(b, p_, m_);
  Poly prod(2 * m_ - 1, 0);
  for (std::uint32_t i = 0; i < m_; ++i)
    for (std::uint32_t j = 0; j < m_; ++j)
      prod[i + j] = static_cast<std::uint32_t>(
          (prod[i + j] + std::uint64_t{x[i]} * y[j]) % p_);
  Poly rem = poly_rem(prod, poly_, p_);
  rem.resize(m_, 0);
  return pack(rem, p_);
}

Symbol Field::add(Symbol a, Symbol b) const {
  if (!add_.empty()) return add_[a * q_ + b];
  return add_slow(a, b);
}

Symbol Field::neg(Symbol a) const {
  if (p_ == 2) return a;
  if (m_ == 1) return a == 0 ? 0 : p_ - a;
  Symbol out = 0, scale = 1;
  for (std::uint32_t i = 0; i < m_; ++i) {
    const Symbol d = a % p_;
    out += (d == 0 ? 0 : p_ - d) * scale;
    a /= p_;
    scale *= p_;
  }
  return out;
}

Symbol Field::sub(Symbol a, Symbol b) const { return add(a, neg(b)); }

Symbol Field::pow(Symbol a, std::uint64_t e) const {
  Symbol result = 1;
  while (e > 0) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

Symbol Field::inv(Symbol a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  if (!inv_.empty()) return inv_[a];
  return pow(a, q_ - 2);
}

FieldElement::FieldElement(FieldPtr field, Symbol value)
    : field_(std::move(field)), value_(value) {
  if (!field_) throw std::invalid_argument("null field");
  if (value_ >= field_->order())
    throw std::invalid_argument("element value out of range");
}

namespace {
void check_same(const FieldElement& a, const FieldElement& b) {
  if (!a.field()->same_as(*b.field()))
    throw std::invalid_argument("elements belong to different fields");
}
}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  check_same(a, b);
  return FieldElement(a.field_, a.field_->add(a.value_, b.value_));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  check_same(a, b);
  return FieldElement(a.field_, a.field_->sub(a.value_, b.value_));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  check_same(a, b);
  return FieldElement(a.field_, a.field_->mul(a.value_, b.value_));
}

FieldElement FieldElement::inv() const {
  return FieldElement(field_, field_->inv(value_));
}

FieldElement FieldElement::operator-() const {
  return FieldElement(field_, field_->neg(value_));
}

}  // namespace rlnc
