#include <CLI11.hpp>

#include <iostream>

#include "clsvm/core/error.hpp"
#include "clsvm/core/parallel.hpp"
#include "commands.hpp"

namespace {

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

int report(clsvm::ErrorCategory category, const std::string& message) {
  std::cerr << "error: category=" << clsvm::category_name(category) << " message=" << one_line(message) << "\n";
  return clsvm::exit_code(category);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace clsvm::cli;
  CLI::App app{"Attribute-mediated score prediction with a continuous latent SVM"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate the synthetic attribute-mediated benchmark");
  c_synth->add_option("--spec", synth.spec, "Synth spec JSON (defaults used when omitted)");
  c_synth->add_option("--out", synth.out, "Output directory")->required();
  c_synth->add_option("--seed", synth.seed, "Seed (else spec seed, else CLSVM_SEED, else 0)");

  ExtractArgs ex;
  auto* c_ex = app.add_subcommand("extract-features", "Five-box Gabor/HOG/LBP features with PCA reduction");
  c_ex->add_option("--images", ex.images, "Directory of PGM (P5) images")->required();
  c_ex->add_option("--boxes", ex.boxes, "JSON object: image name -> [x, y, w, h] or {\"face_box\": [...]}")->required();
  c_ex->add_option("--pca", ex.pca, "PCA set JSON (written with --fit-pca, read otherwise)")->required();
  c_ex->add_option("--out", ex.out, "Output dataset JSONL")->required();
  c_ex->add_flag("--fit-pca", ex.fit_pca, "Fit the PCA set on these images first");
  c_ex->add_option("--labels", ex.labels, "JSONL of {id, a?, y?} merged into the records");
  c_ex->add_option("--schema", ex.schema, "Attribute schema JSON (default: built-in 19 slots)");
  c_ex->add_option("--gabor-dim", ex.gabor_dim, "PCA dimension for Gabor");
  c_ex->add_option("--hog-dim", ex.hog_dim, "PCA dimension for HOG");
  c_ex->add_option("--lbp-dim", ex.lbp_dim, "PCA dimension for LBP");
  c_ex->add_option("--threads", ex.threads, "Worker threads")->check(CLI::PositiveNumber);

  RankArgs rank;
  auto* c_rank = app.add_subcommand("rank-scores", "Recover scores from k-wise comparisons");
  c_rank->add_option("--annotations", rank.annotations, "JSONL of {annotator, items: [best, ..., worst]}")->required();
  c_rank->add_option("--out", rank.out, "Output scores JSON")->required();
  c_rank->add_option("--reg", rank.reg, "L2 regularization weight")->check(CLI::PositiveNumber);
  c_rank->add_option("--steps", rank.steps, "Subgradient steps");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train clsvm, f-s or f-a-s");
  c_train->add_option("--method", train.method, "Method")->check(CLI::IsMember({"clsvm", "f-s", "f-a-s"}));
  c_train->add_option("--data", train.data, "Training dataset JSONL")->required();
  c_train->add_option("--config", train.config, "Training config JSON");
  c_train->add_option("--out", train.out, "Output model JSON")->required();
  c_train->add_option("--schema", train.schema, "Attribute schema JSON");
  c_train->add_flag("--pin-attributes", train.pin_attributes, "Keep latent attributes equal to the annotations");
  c_train->add_option("--epsilon", train.epsilon, "Label tolerance (config default 0.5)");
  c_train->add_option("--gamma", train.gamma, "Regularization weight (config default 0.01)");
  c_train->add_option("--seed", train.seed, "Seed (else config seed, else CLSVM_SEED, else 0)");
  c_train->add_option("--threads", train.threads, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);

  PredictArgs pred;
  auto* c_pred = app.add_subcommand("predict", "Predict scores (and attributes) for a dataset");
  c_pred->add_option("--model", pred.model, "Model JSON")->required();
  c_pred->add_option("--data", pred.data, "Dataset JSONL")->required();
  c_pred->add_option("--out", pred.out, "Output predictions JSONL")->required();
  c_pred->add_option("--threads", pred.threads, "Worker threads")->check(CLI::PositiveNumber);

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "MAE and attribute accuracy of predictions");
  c_eval->add_option("--preds", ev.preds, "Predictions JSONL")->required();
  c_eval->add_option("--truth", ev.truth, "Ground-truth dataset JSONL")->required();
  c_eval->add_option("--out", ev.out, "Output report JSON")->required();
  c_eval->add_option("--schema", ev.schema, "Attribute schema JSON");

  WeightsArgs w;
  auto* c_w = app.add_subcommand("inspect-weights", "Attribute -> score weights, ranked");
  c_w->add_option("--model", w.model, "Model JSON (clsvm or f-a-s)")->required();
  c_w->add_option("--out", w.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(clsvm::ErrorCategory::usage, e.what());
  }

  try {
    if (*c_synth) run_synth(synth);
    else if (*c_ex) run_extract(ex);
    else if (*c_rank) run_rank(rank);
    else if (*c_train) run_train(train);
    else if (*c_pred) run_predict(pred);
    else if (*c_eval) run_eval(ev);
    else if (*c_w) run_weights(w);
  } catch (const clsvm::Error& e) {
    return report(e.category(), e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: category=internal message=" << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
