#pragma once

// Published reference values transcribed by hand for the fidelity checks.
// Kept separate from the library's own copies so a transcription slip in
// either place shows up as a test failure.

#include <map>
#include <string>
#include <vector>

namespace reference {

// Target label -> source labels, GoEmotions (28) to the 11-label taxonomy.
inline const std::map<std::string, std::vector<std::string>> kGoEmotionsProjection{
    {"anger", {"anger", "annoyance"}},
    {"contempt", {"disapproval"}},
    {"disgust", {"disgust"}},
    {"fear", {"fear", "nervousness", "embarrassment"}},
    {"frustration", {"disappointment"}},
    {"gratitude", {"gratitude"}},
    {"joy", {"joy", "amusement", "excitement", "optimism", "pride", "relief", "admiration", "approval"}},
    {"love", {"love", "caring", "desire"}},
    {"neutral", {"neutral"}},
    {"sadness", {"sadness", "grief", "remorse"}},
    {"surprise", {"surprise", "realization", "curiosity", "confusion"}},
};

// SemEval-2018 E-c (11) to the 11-label taxonomy; anticipation is dropped.
inline const std::map<std::string, std::vector<std::string>> kSemEvalProjection{
    {"anger", {"anger"}},       {"disgust", {"disgust"}},           {"fear", {"fear"}},
    {"joy", {"joy", "optimism"}}, {"love", {"love", "trust"}},      {"sadness", {"sadness", "pessimism"}},
    {"surprise", {"surprise"}},
};

struct ClassRow {
  const char* label;
  long count;
  double share_pct;
};

// Training-set class distribution.
inline const std::vector<ClassRow> kClassDistribution{
    {"sadness", 111059, 19.0},  {"anger", 107058, 18.3},   {"frustration", 104456, 17.9},
    {"surprise", 99942, 17.1},  {"disgust", 92825, 15.9},  {"love", 84870, 14.5},
    {"fear", 80464, 13.8},      {"contempt", 80447, 13.8}, {"gratitude", 78812, 13.5},
    {"joy", 78481, 13.4},       {"neutral", 46728, 8.0},
};

inline constexpr double kMeanCardinality = 1.65;

struct ModelRow {
  const char* name;
  double train_minutes;
  double jaccard;
};

// Training time and in-domain Jaccard per model.
inline const std::vector<ModelRow> kModels{
    {"DistilBERT", 14.0, 0.728},    {"mBERT", 27.4, 0.765},         {"XLM-R-Base", 31.5, 0.794},
    {"Twitter-XLM-R", 69.8, 0.794}, {"mDeBERTa-v3", 69.9, 0.790},   {"XLM-R-Large", 130.8, 0.830},
};

}  // namespace reference
