#include "rtt/common.hpp"

#include <charconv>
#include <limits>
#include <numeric>

namespace rtt {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

std::int64_t parse_int(std::string_view s, std::size_t offset) {
  std::int64_t value = 0;
  if (s.empty()) throw ParseError("expected an integer", offset);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("malformed integer '" + std::string(s) + "'", offset);
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational", 0);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash), 0);
    auto den = parse_int(text.substr(slash + 1), slash + 1);
    if (den == 0) throw ParseError("zero denominator", slash + 1);
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    bool negative = !text.empty() && text.front() == '-';
    auto whole_part = text.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
    auto frac_part = text.substr(dot + 1);
    if (frac_part.size() > 17) throw ParseError("too many decimal digits", dot + 1);
    std::int64_t whole = whole_part.empty() ? 0 : parse_int(whole_part, 0);
    std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part, dot + 1);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    Rational r = Rational(whole) + Rational(frac, scale);
    return negative ? -r : r;
  }
  return Rational(parse_int(text, 0));
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t floor_of(const Rational& r) {
  auto q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

std::int64_t ceil_of(const Rational& r) {
  auto q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
  return q;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::vector<Vertex> members(const Bits& bits) {
  std::vector<Vertex> out;
  out.reserve(bits.count());
  for_each_bit(bits, [&](Vertex v) { out.push_back(v); });
  return out;
}

Bits bits_of(std::size_t n, const std::vector<Vertex>& vs) {
  Bits b(n);
  for (auto v : vs) b.set(v);
  return b;
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Rejection sampling on the top of the range removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

bool bernoulli(Rng& rng, const Rational& p) {
  if (p <= 0) return false;
  if (p >= 1) return true;
  return uniform_below(rng, static_cast<std::uint64_t>(p.denominator())) <
         static_cast<std::uint64_t>(p.numerator());
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace rtt
