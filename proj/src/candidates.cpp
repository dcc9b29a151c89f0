#include "hpe/candidates.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace hpe {

int count_center_dofs_2d(int p1, int p2, int p3, int p4) {
  if (p1 < 1 || p2 < 1 || p3 < 1 || p4 < 1) throw std::invalid_argument("count_center_dofs_2d: degrees must be >= 1");
  const std::array<int, 3> corner{p1, p2, p3};
  int n = 6;
  for (int p : corner) n += std::min(p, p4) - 1 + 2 * (p - 1);
  for (int p : {p1, p2, p3, p4}) n += (p - 1) * (p - 2) / 2;
  return n;
}

int p_target_dofs(int p, int dim) {
  if (p < 1) throw std::invalid_argument("p_target_dofs: degree must be >= 1");
  return dim == 1 ? p + 2 : (p + 2) * (p + 3) / 2;
}

std::vector<DegreeTuple> enumerate_candidates(int p, int dim) {
  if (p < 1) throw std::invalid_argument("enumerate_candidates: degree must be >= 1");
  std::vector<DegreeTuple> out;
  if (dim == 1) {
    for (int a = 1; a <= p; ++a) out.push_back({a, p + 1 - a});
    return out;
  }
  const int target = p_target_dofs(p, 2);
  const int hi = p + 2;
  for (int a = 1; a <= hi; ++a)
    for (int b = 1; b <= hi; ++b)
      for (int c = 1; c <= hi; ++c)
        for (int d = 1; d <= hi; ++d)
          if (count_center_dofs_2d(a, b, c, d) == target) out.push_back({a, b, c, d});
  return out;
}

std::vector<DegreeTuple> subsample(const std::vector<DegreeTuple>& candidates, int n_max, std::uint64_t seed) {
  if (n_max < 1) throw std::invalid_argument("subsample: n_max must be >= 1");
  if (static_cast<int>(candidates.size()) <= n_max) return candidates;
  std::vector<DegreeTuple> out;
  out.reserve(n_max);
  std::mt19937_64 rng(seed);
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(out), n_max, rng);
  return out;
}

std::uint64_t element_seed(std::uint64_t seed, int element, int iteration) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(element), static_cast<std::uint32_t>(iteration)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace hpe
