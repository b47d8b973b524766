#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "clsvm/core/dataset.hpp"
#include "clsvm/core/error.hpp"
#include "clsvm/core/json_util.hpp"
#include "clsvm/core/model_io.hpp"
#include "clsvm/core/parallel.hpp"
#include "clsvm/eval/baselines.hpp"
#include "clsvm/eval/metrics.hpp"
#include "clsvm/features/pipeline.hpp"
#include "clsvm/latent/inference.hpp"
#include "clsvm/latent/training.hpp"
#include "clsvm/ranker/ranker.hpp"
#include "clsvm/synth/synth.hpp"

namespace fs = std::filesystem;

namespace clsvm::cli {

namespace {

void ensure_distinct(const std::string& out, std::initializer_list<std::string> inputs) {
  std::error_code ec;
  for (const auto& in : inputs) {
    if (in.empty() || !fs::exists(in)) continue;
    if (fs::exists(out) && fs::equivalent(out, in, ec)) throw ConfigError("output '" + out + "' would overwrite an input");
  }
}

AttributeSchema schema_or_default(const std::string& path) {
  return path.empty() ? AttributeSchema::default_schema() : load_schema(path);
}

std::string jsonl(const std::vector<Json>& records) {
  std::string out;
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

// Schema used by a dataset: explicit file, else a generic schema sized by the
// first record's attribute vector, else the default schema.
AttributeSchema infer_schema(const std::string& data, const std::string& schema_path) {
  if (!schema_path.empty()) return load_schema(schema_path);
  std::optional<std::size_t> n;
  for_each_jsonl(data, [&](const Json& j, std::size_t) {
    if (!n && j.is_object() && j.contains("a") && j["a"].is_array()) n = j["a"].size();
  });
  if (!n || *n == AttributeSchema::default_schema().size()) return AttributeSchema::default_schema();
  return AttributeSchema::generic(*n);
}

}  // namespace

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CLSVM_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(std::string("CLSVM_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

void run_synth(const SynthArgs& args) {
  synth::SynthSpec spec;
  if (!args.spec.empty()) spec = synth::spec_from_json(read_json_file(args.spec));
  if (args.seed || args.spec.empty() || !read_json_file(args.spec).contains("seed")) spec.seed = resolve_seed(args.seed);
  spec.validate();
  const auto data = synth::generate(spec);
  fs::create_directories(args.out);
  const fs::path dir(args.out);
  save_dataset((dir / "train.jsonl").string(), data.train);
  save_dataset((dir / "test.jsonl").string(), data.test);
  write_file_atomic((dir / "schema.json").string(), dump_document(schema_to_json(data.schema)));
  write_file_atomic((dir / "truth.json").string(),
                    dump_document({{"spec", synth::spec_to_json(spec)}, {"truth", synth::ground_truth_to_json(data.truth)}}));
  std::cout << "synth: " << data.train.size() << " train, " << data.test.size() << " test samples -> " << args.out << "\n";
}

void run_extract(const ExtractArgs& args) {
  if (!fs::is_directory(args.images)) throw IoError("image directory not found: " + args.images);
  const Json boxes = read_json_file(args.boxes);
  if (!boxes.is_object()) throw SchemaError(args.boxes + ": expected an object mapping image names to face boxes");

  std::vector<fs::path> images;
  for (const auto& e : fs::directory_iterator(args.images)) {
    if (e.is_regular_file() && e.path().extension() == ".pgm") images.push_back(e.path());
  }
  std::sort(images.begin(), images.end());
  if (images.empty()) throw IoError("no .pgm images in " + args.images);

  std::vector<features::Rect> rects;
  for (const auto& p : images) {
    const std::string name = p.filename().string();
    const std::string stem = p.stem().string();
    const Json* entry = boxes.contains(name) ? &boxes[name] : (boxes.contains(stem) ? &boxes[stem] : nullptr);
    if (entry == nullptr) throw SchemaError(args.boxes + ": no face box for image '" + name + "'");
    rects.push_back(features::rect_from_json(*entry, args.boxes + " [" + name + "]"));
  }

  std::vector<features::ImageDescriptors> descriptors(images.size());
  parallel_for(images.size(), args.threads, [&](std::size_t i) {
    descriptors[i] = features::describe_image(features::read_pgm(images[i].string()), rects[i]);
  });

  features::PcaSet pca;
  Json pca_dims = Json::object();
  if (args.fit_pca) {
    const std::size_t limit = images.size() * features::kBoxCount - 1;
    features::PcaDims dims{std::min(args.gabor_dim, limit), std::min(args.hog_dim, limit), std::min(args.lbp_dim, limit)};
    if (dims.gabor != args.gabor_dim || dims.hog != args.hog_dim || dims.lbp != args.lbp_dim) {
      std::cerr << "warning: PCA dimensions reduced to " << dims.gabor << "/" << dims.hog << "/" << dims.lbp
                << " (only " << limit + 1 << " training patches)\n";
    }
    pca = features::fit_pca_set(descriptors, dims);
    Json doc = features::pca_set_to_json(pca);
    doc["config"] = {{"gabor_dim", dims.gabor}, {"hog_dim", dims.hog}, {"lbp_dim", dims.lbp}, {"images", args.images}};
    write_file_atomic(args.pca, dump_document(doc));
  } else {
    pca = features::pca_set_from_json(read_json_file(args.pca));
  }

  std::map<std::string, Json> labels;
  if (!args.labels.empty()) {
    for_each_jsonl(args.labels, [&](const Json& j, std::size_t line) {
      if (!j.is_object() || !j.contains("id")) throw SchemaError(args.labels + " line " + std::to_string(line) + ": label record needs an id");
      labels[j["id"].get<std::string>()] = j;
    });
  }
  const AttributeSchema schema = schema_or_default(args.schema);

  std::vector<Sample> samples;
  for (std::size_t i = 0; i < images.size(); ++i) {
    Sample s;
    s.id = images[i].stem().string();
    s.x = features::reduce_and_concat(descriptors[i], pca);
    if (auto it = labels.find(s.id); it != labels.end()) {
      if (it->second.contains("a")) s.a = vector_from_json(it->second["a"], "labels[" + s.id + "].a");
      if (it->second.contains("y")) s.y = it->second["y"].get<double>();
    }
    validate_sample(s, schema.size(), 0);
    samples.push_back(std::move(s));
  }
  save_dataset(args.out, samples);
  std::cout << "extract-features: " << samples.size() << " records of dimension " << pca.output_dim() << " -> " << args.out << "\n";
}

void run_rank(const RankArgs& args) {
  const auto annotations = ranker::load_annotations(args.annotations);
  ranker::RankerConfig cfg;
  cfg.reg = args.reg;
  cfg.steps = args.steps;
  const auto result = ranker::recover_scores(ranker::expand_pairs(annotations), cfg);
  Json doc = ranker::rank_result_to_json(result);
  doc["config"] = {{"reg", cfg.reg}, {"steps", cfg.steps}, {"eta0", cfg.step_rule.eta0}, {"tau", cfg.step_rule.tau},
                   {"score_range", Json::array({cfg.range.lo, cfg.range.hi})}};
  ensure_distinct(args.out, {args.annotations});
  write_file_atomic(args.out, dump_document(doc));
  std::cout << "rank-scores: " << result.diagnostics.items << " items, " << result.diagnostics.violated_pairs
            << " violated pairs -> " << args.out << "\n";
}

void run_train(const TrainArgs& args) {
  latent::TrainConfig cfg;
  if (!args.config.empty()) cfg = latent::train_config_from_json(read_json_file(args.config));
  const bool config_has_seed = !args.config.empty() && read_json_file(args.config).contains("seed");
  if (args.seed || !config_has_seed) cfg.seed = resolve_seed(args.seed);
  if (args.epsilon) cfg.epsilon = *args.epsilon;
  if (args.gamma) cfg.gamma = *args.gamma;
  if (args.pin_attributes) cfg.pin_attributes = true;
  cfg.threads = std::max<std::size_t>(1, args.threads);
  cfg.validate();

  const AttributeSchema schema = infer_schema(args.data, args.schema);
  const auto samples = load_dataset(args.data, schema, cfg.score_range);
  if (samples.empty()) throw ValidationError("no training samples in " + args.data);
  ensure_distinct(args.out, {args.data, args.config});

  Json extra = {{"config", latent::train_config_to_json(cfg)}, {"train_data", args.data}};
  if (args.method == "clsvm") {
    latent::TrainingReport report;
    const CLSVMModel model = latent::train(samples, schema, std::nullopt, cfg, &report);
    extra["training"] = {{"rounds_run", report.rounds_run}, {"round_loss", report.round_loss}};
    save_model(args.out, model, extra);
  } else if (args.method == "f-s") {
    write_file_atomic(args.out, dump_document(eval::fs_to_json(eval::train_fs(samples, cfg.svr, cfg.score_range), extra)));
  } else if (args.method == "f-a-s") {
    const auto m = eval::train_fas(samples, schema, cfg.svr, {}, cfg.score_range, cfg.threads);
    write_file_atomic(args.out, dump_document(eval::fas_to_json(m, extra)));
  } else {
    throw ConfigError("unknown method '" + args.method + "' (expected clsvm, f-s or f-a-s)");
  }
  std::cout << "train: method=" << args.method << " samples=" << samples.size() << " -> " << args.out << "\n";
}

void run_predict(const PredictArgs& args) {
  const Json doc = read_json_file(args.model);
  const std::string method = doc.is_object() ? doc.value("method", std::string()) : std::string();
  ensure_distinct(args.out, {args.model, args.data});

  std::vector<Json> records;
  auto load = [&](const AttributeSchema& schema, const ScoreRange& range) { return load_dataset(args.data, schema, range); };
  if (method == "clsvm") {
    const CLSVMModel model = model_from_json(doc);
    latent::InferenceOptions opts;
    if (doc.contains("config")) opts.qp.seed = doc["config"].value("seed", std::uint64_t{0});
    const latent::InferenceEngine engine(model, opts);
    const auto samples = load(model.schema, model.score_range);
    records.resize(samples.size());
    parallel_for(samples.size(), std::max<std::size_t>(1, args.threads), [&](std::size_t i) {
      const auto p = engine.predict(samples[i].x);
      records[i] = {{"id", samples[i].id}, {"y", p.y}, {"a_binary", vector_to_json(p.a_binary)},
                    {"a_confidence", vector_to_json(p.a_confidence)}, {"y_relaxed", p.y_relaxed}};
    });
  } else if (method == "f-s") {
    const auto model = eval::fs_from_json(doc);
    for (const auto& s : load(infer_schema(args.data, ""), model.range)) records.push_back({{"id", s.id}, {"y", model.predict(s.x)}});
  } else if (method == "f-a-s") {
    const auto model = eval::fas_from_json(doc);
    for (const auto& s : load(model.schema, model.range)) {
      const Vector a = model.predict_attributes(s.x);
      records.push_back({{"id", s.id}, {"y", model.predict(s.x)},
                         {"a_binary", vector_to_json((a.array() >= kActivationThreshold).cast<double>().matrix())},
                         {"a_confidence", vector_to_json(a)}});
    }
  } else {
    throw SchemaError(args.model + ": unknown model method '" + method + "'");
  }
  for (auto& r : records) r["method"] = method;
  write_file_atomic(args.out, jsonl(records));
  std::cout << "predict: " << records.size() << " predictions -> " << args.out << "\n";
}

void run_eval(const EvalArgs& args) {
  struct Pred {
    double y;
    std::optional<Vector> a;
  };
  std::map<std::string, Pred> preds;
  std::string method;
  for_each_jsonl(args.preds, [&](const Json& j, std::size_t line) {
    const std::string where = args.preds + " line " + std::to_string(line);
    if (!j.is_object() || !j.contains("id") || !j.contains("y")) throw SchemaError(where + ": prediction needs id and y");
    Pred p{j["y"].get<double>(), std::nullopt};
    if (j.contains("a_binary")) p.a = vector_from_json(j["a_binary"], where + " a_binary");
    if (method.empty()) method = j.value("method", std::string());
    if (!preds.emplace(j["id"].get<std::string>(), std::move(p)).second) throw SchemaError(where + ": duplicate id");
  });

  const AttributeSchema schema = infer_schema(args.truth, args.schema);
  const auto truth = load_dataset(args.truth, schema);
  std::vector<double> p, t;
  std::vector<Vector> pa, ta;
  for (const auto& s : truth) {
    if (!s.y) continue;
    const auto it = preds.find(s.id);
    if (it == preds.end()) throw SchemaError("no prediction for truth record '" + s.id + "'");
    p.push_back(it->second.y);
    t.push_back(*s.y);
    if (it->second.a && s.a) {
      if (it->second.a->size() != s.a->size()) throw SchemaError("attribute dimension mismatch for '" + s.id + "'");
      pa.push_back(*it->second.a);
      ta.push_back(*s.a);
    }
  }
  if (t.empty()) throw ValidationError(args.truth + ": no scored records");

  Json report = {{"method", method}, {"count", t.size()}, {"mae", eval::mae(p, t)},
                 {"published_reference", eval::published_reference_json()},
                 {"config", {{"preds", args.preds}, {"truth", args.truth}, {"activation_threshold", kActivationThreshold}}}};
  std::ostringstream table;
  table << std::fixed << std::setprecision(4);
  table << "method        MAE\n";
  table << std::left << std::setw(12) << (method.empty() ? "model" : method) << "  " << eval::mae(p, t) << "\n";
  table << "published (Table 1): NN " << eval::PublishedMae::nn << "  F-S " << eval::PublishedMae::fs << "  F-A-S "
        << eval::PublishedMae::fas << "  C-LSVM " << eval::PublishedMae::clsvm << "\n";
  if (!pa.empty() && pa.size() == t.size()) {
    Matrix P(static_cast<Eigen::Index>(pa.size()), pa.front().size()), T(P.rows(), P.cols());
    for (std::size_t i = 0; i < pa.size(); ++i) {
      P.row(static_cast<Eigen::Index>(i)) = pa[i].transpose();
      T.row(static_cast<Eigen::Index>(i)) = ta[i].transpose();
    }
    const Vector acc = eval::attribute_accuracy(P, T);
    Json per_slot = Json::object();
    for (Eigen::Index j = 0; j < acc.size(); ++j) {
      const std::string name = static_cast<std::size_t>(j) < schema.size() ? schema.slot(static_cast<std::size_t>(j)) : std::to_string(j);
      per_slot[name] = acc(j);
      table << "  accuracy " << std::left << std::setw(18) << name << acc(j) << "\n";
    }
    report["attribute_accuracy"] = per_slot;
    report["mean_attribute_accuracy"] = acc.mean();
  }
  ensure_distinct(args.out, {args.preds, args.truth});
  write_file_atomic(args.out, dump_document(report));
  std::cout << table.str();
}

void run_weights(const WeightsArgs& args) {
  const Json doc = read_json_file(args.model);
  const std::string method = doc.is_object() ? doc.value("method", std::string()) : std::string();
  std::vector<eval::WeightEntry> report;
  if (method == "clsvm") {
    report = eval::attribute_weight_report(model_from_json(doc));
  } else if (method == "f-a-s") {
    const auto m = eval::fas_from_json(doc);
    report = eval::attribute_weight_report(m.schema, m.w_ay);
  } else {
    throw ConfigError("inspect-weights needs a clsvm or f-a-s model (got '" + method + "')");
  }
  ensure_distinct(args.out, {args.model});
  write_file_atomic(args.out, eval::weight_csv(report));
  std::cout << eval::format_weight_table(report);
}

}  // namespace clsvm::cli
