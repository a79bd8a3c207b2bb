#include "emotk/dedup.hpp"

#include <algorithm>

#include "emotk/error.hpp"
#include "emotk/kernels.hpp"
#include "emotk/rng.hpp"
#include "emotk/text.hpp"

namespace emotk::dedup {

namespace {

constexpr std::uint64_t kMersenne61 = (1ULL << 61) - 1;

std::uint64_t mod_mersenne61(unsigned __int128 x) {
  std::uint64_t r = static_cast<std::uint64_t>(x & kMersenne61) + static_cast<std::uint64_t>(x >> 61);
  r = (r & kMersenne61) + (r >> 61);
  return r >= kMersenne61 ? r - kMersenne61 : r;
}

std::uint64_t hash_shingle(std::u32string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char32_t c : s) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

Sketches sketch_range(const std::vector<std::string_view>& texts, const Params& params,
                      bool parallel) {
  params.validate();
  const MinHasher hasher(params.num_hashes(), params.seed);
  Sketches out{std::vector<ShingleSet>(texts.size()), std::vector<Signature>(texts.size())};
  const auto n = static_cast<std::int64_t>(texts.size());
  const int threads = parallel ? kernels::num_threads() : 1;
  // Each iteration writes only its own slots.
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads) if (parallel && n > 64)
  for (std::int64_t i = 0; i < n; ++i) {
    out.shingles[i] = shingles(texts[i], params.shingle_size);
    out.signatures[i] = hasher.signature(out.shingles[i]);
  }
  return out;
}

}  // namespace

void Params::validate() const {
  if (shingle_size == 0) fail(ErrorKind::kUsage, "shingle size must be positive");
  if (bands == 0 || rows == 0) fail(ErrorKind::kUsage, "LSH bands and rows must be positive");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    fail(ErrorKind::kUsage, "duplicate threshold must lie in (0,1]");
  }
}

ShingleSet shingles(std::string_view text, std::size_t k) {
  const auto cps = text::to_code_points(text::fold_case(text));
  ShingleSet out;
  if (cps.empty()) return out;
  const std::u32string_view view(cps);
  if (cps.size() <= k) {
    out.push_back(hash_shingle(view));
    return out;
  }
  out.reserve(cps.size() - k + 1);
  for (std::size_t i = 0; i + k <= cps.size(); ++i) out.push_back(hash_shingle(view.substr(i, k)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double jaccard(const ShingleSet& a, const ShingleSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t i = 0, j = 0, inter = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const auto uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

MinHasher::MinHasher(std::size_t num_hashes, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "minhash"));
  a_.reserve(num_hashes);
  b_.reserve(num_hashes);
  for (std::size_t i = 0; i < num_hashes; ++i) {
    a_.push_back(1 + rng.below(kMersenne61 - 1));
    b_.push_back(rng.below(kMersenne61));
  }
}

Signature MinHasher::signature(const ShingleSet& set) const {
  Signature sig(a_.size(), kMersenne61);
  for (const auto raw : set) {
    const auto x = mod_mersenne61(raw);
    for (std::size_t i = 0; i < a_.size(); ++i) {
      const auto h = mod_mersenne61(static_cast<unsigned __int128>(a_[i]) * x + b_[i]);
      if (h < sig[i]) sig[i] = h;
    }
  }
  return sig;
}

Sketches sketch_all(const std::vector<std::string_view>& texts, const Params& params) {
  return sketch_range(texts, params, true);
}

namespace serial {
Sketches sketch_all(const std::vector<std::string_view>& texts, const Params& params) {
  return sketch_range(texts, params, false);
}
}  // namespace serial

NearDuplicateIndex::NearDuplicateIndex(Params params)
    : params_(params), hasher_((params.validate(), params.num_hashes()), params.seed),
      tables_(params.bands) {}

std::uint64_t NearDuplicateIndex::band_key(const Signature& sig, std::size_t band) const {
  std::uint64_t h = mix64(band);
  for (std::size_t r = 0; r < params_.rows; ++r) h = mix64(h ^ sig[band * params_.rows + r]);
  return h;
}

std::optional<NearDuplicateIndex::Match> NearDuplicateIndex::query(const ShingleSet& set,
                                                                   const Signature& sig) const {
  std::vector<std::uint32_t> candidates;
  for (std::size_t b = 0; b < params_.bands; ++b) {
    const auto it = tables_[b].find(band_key(sig, b));
    if (it == tables_[b].end()) continue;
    candidates.insert(candidates.end(), it->second.begin(), it->second.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const auto c : candidates) {
    ++candidates_checked_;
    const double j = jaccard(set, docs_[c]);
    if (j >= params_.threshold) return Match{c, j};
  }
  return std::nullopt;
}

std::optional<NearDuplicateIndex::Match> NearDuplicateIndex::query(std::string_view text) const {
  const auto set = shingles(text, params_.shingle_size);
  return query(set, hasher_.signature(set));
}

std::size_t NearDuplicateIndex::add(ShingleSet set, const Signature& sig) {
  const auto id = static_cast<std::uint32_t>(docs_.size());
  for (std::size_t b = 0; b < params_.bands; ++b) tables_[b][band_key(sig, b)].push_back(id);
  docs_.push_back(std::move(set));
  return id;
}

std::size_t NearDuplicateIndex::add(std::string_view text) {
  auto set = shingles(text, params_.shingle_size);
  const auto sig = hasher_.signature(set);
  return add(std::move(set), sig);
}

}  // namespace emotk::dedup
