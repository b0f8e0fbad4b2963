#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace rlnc {

/// Canonical representative of a field element in 0..q-1. For extension
/// fields the value packs the residue polynomial's coefficients in base p,
/// constant term in the least significant digit.
using Symbol = std::uint32_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

inline constexpr std::uint32_t kMaxFieldOrder = 1u << 16;

/// Finite field of order q = p^m. Immutable after construction and safe
/// to share between threads.
class Field {
 public:
  /// Builds GF(p^m). The reduction polynomial is the lexicographically
  /// smallest monic irreducible of degree m, comparing coefficients from the
  /// constant term upward. Throws std::invalid_argument for a composite p,
  /// m == 0 or an order above 2^16.
  static FieldPtr make(std::uint32_t p, std::uint32_t m);

  /// Builds the field of the given prime-power order.
  static FieldPtr from_order(std::uint32_t q);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return m_; }
  std::uint32_t order() const { return q_; }

  /// Coefficients c_0..c_m of the monic reduction polynomial; empty for
  /// prime fields.
  const std::vector<std::uint32_t>& reduction_poly() const { return poly_; }
  std::string reduction_poly_string() const;

  bool has_tables() const { return !mul_.empty(); }

  Symbol add(Symbol a, Symbol b) const;
  Symbol sub(Symbol a, Symbol b) const;
  Symbol neg(Symbol a) const;
  Symbol mul(Symbol a, Symbol b) const {
    if (!mul_.empty()) return mul_[a * q_ + b];
    return mul_slow(a, b);
  }
  /// Throws std::domain_error for a == 0.
  Symbol inv(Symbol a) const;
  Symbol pow(Symbol a, std::uint64_t e) const;

  /// Uniform draw by rejection from the smallest power-of-two range >= q.
  template <class Rng>
  Symbol uniform(Rng& rng) const {
    for (;;) {
      const Symbol v = static_cast<Symbol>(rng() & sample_mask_);
      if (v < q_) return v;
    }
  }

  bool same_as(const Field& other) const {
    return p_ == other.p_ && m_ == other.m_;
  }

 private:
  Field(std::uint32_t p, std::uint32_t m);

  Symbol mul_slow(Symbol a, Symbol b) const;
  Symbol add_slow(Symbol a, Symbol b) const;

  std::uint32_t p_;
  std::uint32_t m_;
  std::uint32_t q_;
  std::uint64_t sample_mask_;
  std::vector<std::uint32_t> poly_;
  // Lookup tables, populated only for q <= 256.
  std::vector<std::uint16_t> add_;
  std::vector<std::uint16_t> mul_;
  std::vector<std::uint16_t> inv_;
};

bool is_prime(std::uint32_t n);

/// Splits q into (p, m) with q = p^m; throws std::invalid_argument when q is
/// not a prime power.
std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint32_t q);

/// Monic polynomial irreducibility over F_p by trial division. Coefficients
/// run from the constant term up; the last one must be 1.
bool is_irreducible(const std::vector<std::uint32_t>& coeffs, std::uint32_t p);

/// An element bound to its field. Arithmetic between elements of different
/// fields throws std::invalid_argument.
class FieldElement {
 public:
  FieldElement(FieldPtr field, Symbol value);

  const FieldPtr& field() const { return field_; }
  Symbol value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement inv() const;
  FieldElement operator-() const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_->same_as(*b.field_) && a.value_ == b.value_;
  }

 private:
  FieldPtr field_;
  Symbol value_;
};

template <class Rng>
FieldElement uniform_element(const FieldPtr& field, Rng& rng) {
  return FieldElement(field, field->uniform(rng));
}

}  // namespace rlnc
