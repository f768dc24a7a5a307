#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cdt {

/// Exact rational number, always kept in canonical form (gcd 1, positive denominator).
using Rational = mpq_class;

/// Dense vector over the shared (world, primitive) layout.
using Vector = std::vector<Rational>;

/// Renders `q` as "p/q", including integers ("3/1", "0/1").
std::string to_string(const Rational& q);

/// Accepts "p/q" or a bare integer "p". Throws InputError on malformed text or zero denominator.
Rational parse_rational(std::string_view text);

Rational dot(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator+(const Vector& a, const Vector& b);
Vector operator*(const Rational& s, const Vector& v);
Vector negate(const Vector& v);
bool is_zero(const Vector& v);
Vector zeros(std::size_t dim);

/// Scales a nonzero vector by a positive factor so that its entries are coprime integers.
/// The zero vector is returned unchanged.
Vector primitive_integer(const Vector& v);

/// Lexicographic comparison on rational entries; shorter vectors order first on a common prefix.
bool lex_less(const Vector& a, const Vector& b);

}  // namespace cdt
