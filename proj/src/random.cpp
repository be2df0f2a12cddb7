#include "gpach/random.hpp"

namespace gpach {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

RandomSource RandomSource::trial_stream(std::uint64_t master, std::uint64_t index) {
  return RandomSource(splitmix64(master ^ splitmix64(index + 1)));
}

std::uint64_t RandomSource::below(std::uint64_t n) {
  // rejection sampling keeps the draw uniform and implementation-independent
  std::uint64_t limit = ~0ull - ~0ull % n;
  std::uint64_t r;
  do {
    r = gen_();
  } while (r >= limit);
  return r % n;
}

long RandomSource::int_in(long lo, long hi) {
  return lo + long(below(std::uint64_t(hi - lo + 1)));
}

mpq_class RandomSource::rational(long max_num, long max_den) {
  mpq_class q(int_in(-max_num, max_num), int_in(1, max_den));
  q.canonicalize();
  return q;
}

mpq_class RandomSource::nonzero_rational(long max_num, long max_den) {
  for (;;) {
    mpq_class q = rational(max_num, max_den);
    if (q != 0) return q;
  }
}

}  // namespace gpach
