#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// Boost 1.74's rational == integer recurses forever under C++20 rewritten
// comparisons. Exact non-template overloads win resolution and avoid it.
namespace boost {
#define DAM_RATIONAL_EQ(I)                                                        \
  inline bool operator==(const rational<std::int64_t>& r, I i) {                  \
    return r.denominator() == 1 && r.numerator() == static_cast<std::int64_t>(i); \
  }                                                                               \
  inline bool operator==(I i, const rational<std::int64_t>& r) { return r == i; } \
  inline bool operator!=(const rational<std::int64_t>& r, I i) { return !(r == i); } \
  inline bool operator!=(I i, const rational<std::int64_t>& r) { return !(r == i); }
DAM_RATIONAL_EQ(int)
DAM_RATIONAL_EQ(long)
DAM_RATIONAL_EQ(long long)
#undef DAM_RATIONAL_EQ
}  // namespace boost

namespace dam {

// Exact rational, kept in lowest terms with a positive denominator.
using Rational = boost::rational<std::int64_t>;

// Accepts "7", "-3", "1/2", "-10/4". Throws dam::Error on bad input.
Rational parse_rational(std::string_view text);

// Integers print bare, everything else as "p/q".
std::string to_string(const Rational& value);

std::int64_t lcm(std::int64_t a, std::int64_t b);

}  // namespace dam
