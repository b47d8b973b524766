#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "clsvm/core/json_util.hpp"
#include "clsvm/core/types.hpp"
#include "clsvm/numerics/subgradient.hpp"

namespace clsvm::ranker {

/// One annotator's ranking of k >= 2 distinct items, best first.
struct KWiseAnnotation {
  std::string annotator;
  std::vector<std::string> items;
};

struct Preference {
  std::string winner;
  std::string loser;

  bool operator==(const Preference&) const = default;
};

/// Each annotation of length k contributes its k(k-1)/2 ordered pairs, in
/// annotation order. Throws ValidationError on duplicate items or k < 2.
std::vector<Preference> expand_pairs(std::span<const KWiseAnnotation> annotations);

struct RankerConfig {
  double reg = 0.01;
  ScoreRange range;
  std::size_t steps = 4000;
  numerics::StepRule step_rule{0.1, 50.0};
};

struct RankDiagnostics {
  std::size_t items = 0;
  std::size_t pairs = 0;
  std::size_t violated_pairs = 0;  // pairs with s_winner <= s_loser
  std::size_t components = 0;      // connected components of the comparison graph
  bool degenerate = false;         // all scores equal; mapped to the range midpoint
  double objective = 0.0;
};

struct RankResult {
  std::map<std::string, double> scores;
  RankDiagnostics diagnostics;
};

/// Minimizes reg * |s|^2 + sum_pairs max(0, 1 - (s_winner - s_loser)) over
/// free per-item scores, then maps the scores affinely onto the range (min to
/// lo, max to hi). Disconnected components share one rescaling.
RankResult recover_scores(std::span<const Preference> pairs, const RankerConfig& config = {});

std::vector<KWiseAnnotation> load_annotations(const std::string& path);
Json rank_result_to_json(const RankResult& result);

}  // namespace clsvm::ranker
