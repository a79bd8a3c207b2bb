#pragma once

// MinHash + LSH banding near-duplicate detection over character shingles.
// Candidates from banding are always verified with the exact Jaccard of the
// (64-bit hashed) shingle sets, so the LSH stage only affects recall.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace emotk::dedup {

struct Params {
  std::size_t shingle_size = 5;  // code points
  double threshold = 0.85;       // exact Jaccard at or above => duplicate
  std::size_t bands = 32;
  std::size_t rows = 4;          // per band; signature length = bands * rows
  std::uint64_t seed = 0x5eed;

  std::size_t num_hashes() const { return bands * rows; }
  void validate() const;
};

using ShingleSet = std::vector<std::uint64_t>;  // sorted, unique
using Signature = std::vector<std::uint64_t>;

/// Case-folded NFC text split into overlapping `k`-code-point shingles. Texts
/// shorter than k yield one shingle; empty text yields none.
ShingleSet shingles(std::string_view text, std::size_t k);

/// |a ∩ b| / |a ∪ b| on sorted sets; two empty sets count as identical.
double jaccard(const ShingleSet& a, const ShingleSet& b);

class MinHasher {
 public:
  MinHasher(std::size_t num_hashes, std::uint64_t seed);
  Signature signature(const ShingleSet& set) const;
  std::size_t size() const noexcept { return a_.size(); }

 private:
  std::vector<std::uint64_t> a_;
  std::vector<std::uint64_t> b_;
};

/// Shingles + signatures for a batch of texts (OpenMP over documents).
struct Sketches {
  std::vector<ShingleSet> shingles;
  std::vector<Signature> signatures;
};
Sketches sketch_all(const std::vector<std::string_view>& texts, const Params& params);

namespace serial {
Sketches sketch_all(const std::vector<std::string_view>& texts, const Params& params);
}

/// Incremental index. Documents are only added once accepted, so a query
/// answers "does this duplicate anything kept so far".
class NearDuplicateIndex {
 public:
  explicit NearDuplicateIndex(Params params);

  struct Match {
    std::size_t doc;  // insertion index
    double jaccard;
  };

  /// Earliest-inserted document with exact Jaccard >= threshold, if any.
  std::optional<Match> query(const ShingleSet& set, const Signature& sig) const;
  std::optional<Match> query(std::string_view text) const;

  std::size_t add(ShingleSet set, const Signature& sig);
  std::size_t add(std::string_view text);

  std::size_t size() const noexcept { return docs_.size(); }
  const Params& params() const noexcept { return params_; }
  std::size_t candidates_checked() const noexcept { return candidates_checked_; }

 private:
  std::uint64_t band_key(const Signature& sig, std::size_t band) const;

  Params params_;
  MinHasher hasher_;
  std::vector<ShingleSet> docs_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> tables_;
  mutable std::size_t candidates_checked_ = 0;
};

}  // namespace emotk::dedup
