#include "clsvm/ranker/ranker.hpp"

#include <numeric>
#include <set>
#include <unordered_map>

#include "clsvm/core/error.hpp"

namespace clsvm::ranker {

std::vector<Preference> expand_pairs(std::span<const KWiseAnnotation> annotations) {
  std::vector<Preference> pairs;
  for (const auto& ann : annotations) {
    if (ann.items.size() < 2) {
      throw ValidationError("annotation by '" + ann.annotator + "' ranks fewer than 2 items");
    }
    std::set<std::string> seen(ann.items.begin(), ann.items.end());
    if (seen.size() != ann.items.size()) {
      throw ValidationError("annotation by '" + ann.annotator + "' repeats an item");
    }
    for (std::size_t i = 0; i < ann.items.size(); ++i) {
      for (std::size_t j = i + 1; j < ann.items.size(); ++j) pairs.push_back({ann.items[i], ann.items[j]});
    }
  }
  return pairs;
}

namespace {

std::size_t count_components(std::size_t items, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::size_t> parent(items);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = items;
  for (auto [w, l] : edges) {
    const auto a = find(static_cast<std::size_t>(w));
    const auto b = find(static_cast<std::size_t>(l));
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

}  // namespace

RankResult recover_scores(std::span<const Preference> pairs, const RankerConfig& config) {
  if (pairs.empty()) throw ValidationError("recover_scores: no comparison pairs");
  if (!(config.reg > 0.0)) throw ConfigError("recover_scores: reg must be positive");
  if (!(config.range.lo < config.range.hi)) throw ConfigError("recover_scores: empty score range");

  // Items are indexed by first appearance so relabeling ids cannot change
  // the arithmetic.
  std::unordered_map<std::string, int> index;
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(pairs.size());
  auto id_of = [&](const std::string& name) {
    auto [it, inserted] = index.emplace(name, static_cast<int>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  };
  for (const auto& p : pairs) {
    if (p.winner == p.loser) throw ValidationError("recover_scores: item '" + p.winner + "' compared with itself");
    const int w = id_of(p.winner);
    const int l = id_of(p.loser);
    edges.emplace_back(w, l);
  }
  const auto n = static_cast<Eigen::Index>(names.size());

  auto objective = [&](const Vector& s) {
    numerics::ObjectiveValue ov;
    ov.value = config.reg * s.squaredNorm();
    ov.subgradient = 2.0 * config.reg * s;
    for (auto [w, l] : edges) {
      const double slack = 1.0 - (s(w) - s(l));
      if (slack > 0.0) {
        ov.value += slack;
        ov.subgradient(w) -= 1.0;
        ov.subgradient(l) += 1.0;
      }
    }
    return ov;
  };
  numerics::SubgradientOptions opts;
  opts.steps = config.steps;
  opts.step_rule = config.step_rule;
  const auto solved = numerics::projected_subgradient(objective, Vector::Zero(n), numerics::no_projection, opts);
  const Vector& s = solved.best;

  RankResult result;
  auto& diag = result.diagnostics;
  diag.items = names.size();
  diag.pairs = edges.size();
  diag.objective = solved.best_value;
  diag.components = count_components(names.size(), edges);
  for (auto [w, l] : edges) {
    if (!(s(w) > s(l))) ++diag.violated_pairs;
  }

  const double lo = s.minCoeff();
  const double hi = s.maxCoeff();
  const double spread = hi - lo;
  diag.degenerate = !(spread > 1e-9 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))));
  for (Eigen::Index i = 0; i < n; ++i) {
    double mapped;
    if (diag.degenerate) {
      mapped = 0.5 * (config.range.lo + config.range.hi);
    } else if (s(i) == lo) {
      mapped = config.range.lo;
    } else if (s(i) == hi) {
      mapped = config.range.hi;
    } else {
      mapped = config.range.clamp(config.range.lo + (s(i) - lo) / spread * (config.range.hi - config.range.lo));
    }
    result.scores[names[static_cast<std::size_t>(i)]] = mapped;
  }
  return result;
}

std::vector<KWiseAnnotation> load_annotations(const std::string& path) {
  std::vector<KWiseAnnotation> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t line) {
    const std::string where = "'" + path + "' line " + std::to_string(line);
    if (!j.is_object() || !j.contains("items") || !j["items"].is_array()) {
      throw SchemaError(where + ": annotation needs an \"items\" array");
    }
    KWiseAnnotation ann;
    ann.annotator = j.value("annotator", std::string());
    for (const auto& item : j["items"]) {
      if (!item.is_string()) throw SchemaError(where + ": item ids must be strings");
      ann.items.push_back(item.get<std::string>());
    }
    out.push_back(std::move(ann));
  });
  return out;
}

Json rank_result_to_json(const RankResult& result) {
  Json scores = Json::object();
  for (const auto& [id, s] : result.scores) scores[id] = s;
  const auto& d = result.diagnostics;
  return {{"scores", scores},
          {"diagnostics",
           {{"items", d.items},
            {"pairs", d.pairs},
            {"violated_pairs", d.violated_pairs},
            {"components", d.components},
            {"disconnected", d.components > 1},
            {"degenerate", d.degenerate},
            {"objective", d.objective}}}};
}

}  // namespace clsvm::ranker
