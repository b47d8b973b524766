#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace clsvm::cli {

struct SynthArgs {
  std::string spec;  // optional JSON file
  std::string out;
  std::optional<std::uint64_t> seed;
};

struct ExtractArgs {
  std::string images;
  std::string boxes;
  std::string pca;
  std::string out;
  std::string labels;
  std::string schema;
  bool fit_pca = false;
  std::size_t gabor_dim = 200;
  std::size_t hog_dim = 200;
  std::size_t lbp_dim = 40;
  std::size_t threads = 1;
};

struct RankArgs {
  std::string annotations;
  std::string out;
  double reg = 0.01;
  std::size_t steps = 4000;
};

struct TrainArgs {
  std::string method = "clsvm";
  std::string data;
  std::string config;
  std::string out;
  std::string schema;
  bool pin_attributes = false;
  std::optional<double> epsilon;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
};

struct PredictArgs {
  std::string model;
  std::string data;
  std::string out;
  std::size_t threads = 1;
};

struct EvalArgs {
  std::string preds;
  std::string truth;
  std::string out;
  std::string schema;
};

struct WeightsArgs {
  std::string model;
  std::string out;
};

/// Seed precedence: explicit flag, then CLSVM_SEED, then 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

void run_synth(const SynthArgs& args);
void run_extract(const ExtractArgs& args);
void run_rank(const RankArgs& args);
void run_train(const TrainArgs& args);
void run_predict(const PredictArgs& args);
void run_eval(const EvalArgs& args);
void run_weights(const WeightsArgs& args);

}  // namespace clsvm::cli
