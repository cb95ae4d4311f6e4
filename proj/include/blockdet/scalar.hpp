#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <type_traits>

namespace blockdet {

using Integer = mpz_class;
using Rational = mpq_class;

/// Arithmetic used for one run. Exact runs use Integer or Rational entries.
enum class Arithmetic { exact, floating };

template <class T>
inline constexpr bool is_scalar_v =
    std::is_same_v<T, Integer> || std::is_same_v<T, Rational> || std::is_same_v<T, double>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Integer> || std::is_same_v<T, Rational>;

inline bool is_zero(const Integer& x) { return sgn(x) == 0; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

/// Decimal integer, "p/q" for non-integral rationals, 17 significant digits for doubles.
std::string to_string(const Integer& x);
std::string to_string(const Rational& x);
std::string to_string(double x);

/// Parses "-12", "3/4", "1.25", "2.5e-3" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Round-to-nearest conversion (mpq_get_d truncates).
double nearest_double(const Rational& q);

/// Exact rational value of a finite double.
Rational exact_rational(double x);

template <class To, class From>
To scalar_cast(const From& x);

template <>
inline Integer scalar_cast<Integer, Integer>(const Integer& x) { return x; }
template <>
inline Rational scalar_cast<Rational, Integer>(const Integer& x) { return Rational(x); }
template <>
inline double scalar_cast<double, Integer>(const Integer& x) { return nearest_double(Rational(x)); }
template <>
inline Rational scalar_cast<Rational, Rational>(const Rational& x) { return x; }
template <>
inline double scalar_cast<double, Rational>(const Rational& x) { return nearest_double(x); }
template <>
inline double scalar_cast<double, double>(const double& x) { return x; }
/// Throws ContractError when the denominator is not 1.
template <>
Integer scalar_cast<Integer, Rational>(const Rational& x);

}  // namespace blockdet
