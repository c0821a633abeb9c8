#include <stdexcept>
#include <string>

#include "matchmix/matching.hpp"

namespace matchmix::core {

std::uint64_t matching_count(std::int32_t n) {
  std::uint64_t c = 1;
  for (std::uint64_t odd = 3; odd <= 2 * static_cast<std::uint64_t>(n) - 1; odd += 2) {
    if (c > UINT64_MAX / odd) throw std::overflow_error("(2n-1)!! overflows 64 bits");
    c *= odd;
  }
  return c;
}

namespace {

void check_cap(std::int32_t n, const EnumerationLimits& limits) {
  if (n < 1) throw std::invalid_argument("enumeration needs n >= 1");
  if (n > limits.cap && !limits.override_cap)
    throw std::length_error("enumeration of n=" + std::to_string(n) + " exceeds the cap of " +
                            std::to_string(limits.cap));
}

struct Enumerator {
  std::vector<Object> partner;
  const std::function<void(const PerfectMatching&)>* visit;

  void run(Object m) {
    Object a = 1;
    while (a <= m && partner[a - 1]) ++a;
    if (a > m) {
      (*visit)(PerfectMatching(partner));
      return;
    }
    for (Object b = a + 1; b <= m; ++b) {
      if (partner[b - 1]) continue;
      partner[a - 1] = b;
      partner[b - 1] = a;
      run(m);
      partner[a - 1] = partner[b - 1] = 0;
    }
  }
};

}  // namespace

void for_each_matching(std::int32_t n, const std::function<void(const PerfectMatching&)>& visit,
                       EnumerationLimits limits) {
  check_cap(n, limits);
  Enumerator e{std::vector<Object>(2 * static_cast<std::size_t>(n), 0), &visit};
  e.run(2 * n);
}

std::vector<PerfectMatching> enumerate_matchings(std::int32_t n, EnumerationLimits limits) {
  check_cap(n, limits);
  std::vector<PerfectMatching> out;
  out.reserve(matching_count(n));
  for_each_matching(n, [&](const PerfectMatching& pm) { out.push_back(pm); }, limits);
  return out;
}

// Mixed radix: the lowest unmatched object picks its partner among the
// 2m-1 remaining ones; earlier picks are more significant.
std::uint64_t matching_rank(const PerfectMatching& pm) {
  const Object m = 2 * pm.n();
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  std::uint64_t rank = 0;
  Object a = 1;
  for (Object left = m; left > 0; left -= 2) {
    while (used[a - 1]) ++a;
    Object b = pm.partner(a);
    std::uint64_t digit = 0;
    for (Object x = a + 1; x < b; ++x) digit += !used[x - 1];
    rank = rank * static_cast<std::uint64_t>(left - 1) + digit;
    used[a - 1] = used[b - 1] = 1;
  }
  return rank;
}

PerfectMatching matching_unrank(std::int32_t n, std::uint64_t rank) {
  if (rank >= matching_count(n)) throw std::out_of_range("rank out of range");
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(n));
  for (std::int32_t i = n; i-- > 0;) {
    std::uint64_t radix = 2 * static_cast<std::uint64_t>(n - i) - 1;
    digits[static_cast<std::size_t>(i)] = rank % radix;
    rank /= radix;
  }
  std::vector<Object> partner(2 * static_cast<std::size_t>(n), 0);
  Object a = 1;
  for (std::int32_t i = 0; i < n; ++i) {
    while (partner[a - 1]) ++a;
    std::uint64_t skip = digits[static_cast<std::size_t>(i)];
    Object b = a + 1;
    for (;; ++b) {
      if (partner[b - 1]) continue;
      if (skip == 0) break;
      --skip;
    }
    partner[a - 1] = b;
    partner[b - 1] = a;
  }
  return PerfectMatching(std::move(partner));
}

}  // namespace matchmix::core
