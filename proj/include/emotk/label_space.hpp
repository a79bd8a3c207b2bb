#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "emotk/matrix.hpp"

namespace emotk {

/// Lowercases (ASCII) and trims surrounding whitespace. Label comparisons
/// everywhere in the toolkit happen on normalized strings.
std::string normalize_label(std::string_view label);

/// Ordered, validated label set. Column j of every matrix built against a
/// taxonomy corresponds to labels()[j].
class EmotionTaxonomy {
 public:
  EmotionTaxonomy() = default;
  /// Throws kInvalidInput on empty/duplicate labels or an empty list.
  EmotionTaxonomy(std::string name, const std::vector<std::string>& labels);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::optional<std::size_t> index_of(std::string_view label) const;
  bool contains(std::string_view label) const { return index_of(label).has_value(); }

  friend bool operator==(const EmotionTaxonomy& a, const EmotionTaxonomy& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::string name_;
  std::vector<std::string> labels_;
};

namespace taxonomies {
/// anger ... surprise, the 11-class target space.
const EmotionTaxonomy& emotion11();
/// GoEmotions, in the benchmark's published label-id order.
const EmotionTaxonomy& goemotions28();
/// SemEval-2018 E-c, in the benchmark's column order.
const EmotionTaxonomy& semeval11();
}  // namespace taxonomies

/// One label per line; blank lines and lines starting with '#' are skipped.
EmotionTaxonomy load_taxonomy(const std::filesystem::path& path,
                              std::string name = {});

/// Many-to-one map from source labels to target labels. Total: every source
/// label is either mapped or explicitly dropped.
class LabelMapping {
 public:
  struct Pair {
    std::string source;
    std::string target;
  };

  /// Throws kInvalidInput when the pairs/dropped sets violate totality or
  /// reference unknown labels.
  LabelMapping(EmotionTaxonomy source, EmotionTaxonomy target,
               const std::vector<Pair>& pairs, const std::set<std::string>& dropped);

  static LabelMapping identity(const EmotionTaxonomy& taxonomy);

  const EmotionTaxonomy& source() const noexcept { return source_; }
  const EmotionTaxonomy& target() const noexcept { return target_; }

  /// Target column for source column `i`, or nullopt if dropped.
  std::optional<std::size_t> target_of(std::size_t source_index) const {
    return column_map_.at(source_index);
  }
  std::optional<std::string> target_of(std::string_view source_label) const;

  const std::set<std::string>& dropped() const noexcept { return dropped_; }
  std::size_t mapped_count() const noexcept { return source_.size() - dropped_.size(); }

  /// Source labels mapping onto `target_label`, in source order.
  std::vector<std::string> sources_of(std::string_view target_label) const;

 private:
  EmotionTaxonomy source_;
  EmotionTaxonomy target_;
  std::vector<std::optional<std::size_t>> column_map_;
  std::set<std::string> dropped_;
};

inline constexpr std::string_view kDropMarker = "__DROP__";

/// TSV, `source<TAB>target` or `source<TAB>__DROP__`.
LabelMapping load_mapping(const std::filesystem::path& path, const EmotionTaxonomy& source,
                          const EmotionTaxonomy& target);

struct ProjectedGold {
  BinaryMatrix values;
  /// Rows that became all-zero after projection. Kept, but reported.
  std::vector<std::size_t> empty_rows;
};

ProjectedGold project_gold(const BinaryMatrix& gold, const LabelMapping& mapping);

/// Labels present in both (post-normalization), in `a`'s order.
std::vector<std::string> intersect_taxonomies(const EmotionTaxonomy& a, const EmotionTaxonomy& b);

enum class ViewKind { kProjected, kIntersection };

std::string_view to_string(ViewKind kind);
ViewKind parse_view_kind(std::string_view text);

struct LabelSpaceView {
  ViewKind kind = ViewKind::kProjected;
  std::vector<std::string> effective_labels;

  /// All rows kept; columns restricted to the target taxonomy.
  static LabelSpaceView projected(const EmotionTaxonomy& target);
  /// Exact-match labels of both taxonomies; rows with no gold label inside
  /// the intersection are dropped.
  static LabelSpaceView intersection(const EmotionTaxonomy& target,
                                     const EmotionTaxonomy& benchmark);
};

struct ViewResult {
  EmotionTaxonomy taxonomy;  // effective labels as a taxonomy
  BinaryMatrix gold;
  RealMatrix scores;
  std::vector<std::size_t> kept_rows;  // indices into the input rows
};

/// Restricts gold and scores to the view's labels. Columns are resolved by
/// name in each taxonomy independently, so gold may still be over the
/// benchmark's native taxonomy while scores are over the model's.
ViewResult apply_view(const BinaryMatrix& gold, const EmotionTaxonomy& gold_taxonomy,
                      const RealMatrix& scores, const EmotionTaxonomy& score_taxonomy,
                      const LabelSpaceView& view);

}  // namespace emotk
