#pragma once

#include <boost/dynamic_bitset.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rtt {

using Vertex = std::uint32_t;
using Bits = boost::dynamic_bitset<std::uint64_t>;
using Rational = boost::rational<std::int64_t>;
using Rng = std::mt19937_64;

inline constexpr std::uint64_t default_node_budget = 10'000'000;

/// Three-valued answer for decision procedures that can run out of budget.
enum class Verdict { no, yes, unknown };

std::string_view to_string(Verdict v);

// --- errors -----------------------------------------------------------------

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class HostMismatch : public Error {
public:
  HostMismatch() : Error("vertex sets belong to different host graphs") {}
};

/// A search ran out of its node budget. Carries the bounds known at that point.
class ResourceError : public Error {
public:
  ResourceError(const std::string& what, std::int64_t lower, std::int64_t upper)
      : Error(what), lower_bound(lower), upper_bound(upper) {}
  std::int64_t lower_bound;
  std::int64_t upper_bound;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at " + std::to_string(position) + ")"), position(position) {}
  std::size_t position;
};

// --- rationals --------------------------------------------------------------

/// Accepts "3/10", "7", "0.3", "-1/2"; decimals are converted exactly.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);
std::int64_t floor_of(const Rational& r);
std::int64_t ceil_of(const Rational& r);
double to_double(const Rational& r);

// --- bits -------------------------------------------------------------------

std::vector<Vertex> members(const Bits& bits);
Bits bits_of(std::size_t n, const std::vector<Vertex>& vs);

template <typename F>
void for_each_bit(const Bits& bits, F&& f) {
  for (auto i = bits.find_first(); i != Bits::npos; i = bits.find_next(i))
    f(static_cast<Vertex>(i));
}

// --- randomness -------------------------------------------------------------
// Draws built directly on the engine output so results do not depend on the
// standard library's distribution implementations.

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);
bool bernoulli(Rng& rng, const Rational& p);

template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

/// Derives an independent stream seed from a base seed and a tag.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);

}  // namespace rtt
