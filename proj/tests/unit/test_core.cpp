#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "clsvm/core/dataset.hpp"
#include "clsvm/core/error.hpp"
#include "clsvm/core/model_io.hpp"
#include "clsvm/core/parallel.hpp"
#include "clsvm/core/random.hpp"
#include "clsvm/core/schema.hpp"
#include "clsvm/core/types.hpp"
#include "fixtures.hpp"

using namespace clsvm;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("clsvm_test_core_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

Sample make_sample(const std::string& id, Vector x, Vector a, double y) {
  Sample s;
  s.id = id;
  s.x = std::move(x);
  s.a = std::move(a);
  s.y = y;
  return s;
}

}  // namespace

TEST_CASE("default schema has 19 slots with exclusive age and hair families") {
  const auto s = AttributeSchema::default_schema();
  CHECK(s.size() == 19);
  std::size_t exclusive = 0;
  std::size_t covered = 0;
  for (const auto& f : s.families()) {
    CHECK(f.begin == covered);
    covered = f.end;
    if (f.exclusive) ++exclusive;
  }
  CHECK(covered == 19);
  CHECK(exclusive == 2);
  CHECK(s.index_of("smile").has_value());
  CHECK_FALSE(s.index_of("nope").has_value());
}

TEST_CASE("schema rejects duplicate slots and gaps") {
  CHECK_THROWS_AS(AttributeSchema({"a", "a"}, {{"f", 0, 2, false}}), SchemaError);
  CHECK_THROWS_AS(AttributeSchema({"a", "b"}, {{"f", 0, 1, false}}), SchemaError);
  const auto g = AttributeSchema::generic(3);
  CHECK(schema_from_json(schema_to_json(g)) == g);
}

TEST_CASE("error categories map to distinct exit codes") {
  std::set<int> codes;
  for (auto c : {ErrorCategory::usage, ErrorCategory::io, ErrorCategory::schema, ErrorCategory::validation,
                 ErrorCategory::numeric, ErrorCategory::config}) {
    codes.insert(exit_code(c));
    CHECK(exit_code(c) != 0);
  }
  CHECK(codes.size() == 6);
  CHECK(std::string(category_name(ErrorCategory::schema)) == "schema");
}

TEST_CASE("dataset: empty file loads as an empty list") {
  const auto dir = temp_dir("empty");
  write_text(dir / "d.jsonl", "");
  CHECK(load_dataset((dir / "d.jsonl").string(), AttributeSchema::generic(2)).empty());
}

TEST_CASE("dataset: attribute outside [0,1] is a validation error") {
  const auto dir = temp_dir("bad_attr");
  write_text(dir / "d.jsonl", R"({"id":"s0","x":[1,2],"a":[0,0,1.5],"y":3})" "\n");
  CHECK_THROWS_AS(load_dataset((dir / "d.jsonl").string(), AttributeSchema::generic(3)), ValidationError);
}

TEST_CASE("dataset: dimension mismatch names the record") {
  const auto dir = temp_dir("dim");
  write_text(dir / "d.jsonl", R"({"id":"s0","x":[1,2],"y":3})" "\n" R"({"id":"s1","x":[1],"y":3})" "\n");
  try {
    load_dataset((dir / "d.jsonl").string(), AttributeSchema::generic(1));
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("s1") != std::string::npos);
  }
}

TEST_CASE("dataset: save then load is the identity") {
  const auto dir = temp_dir("roundtrip");
  std::vector<Sample> samples;
  Rng rng(7);
  for (int i = 0; i < 5; ++i) {
    Sample s;
    s.id = "id" + std::to_string(i);
    s.x = fixture::normal_vector(rng, 4);
    if (i % 2 == 0) s.a = fixture::uniform_vector(rng, 3, 0.0, 1.0);
    if (i != 3) s.y = uniform(rng, 0.0, 10.0);
    samples.push_back(s);
  }
  save_dataset((dir / "d.jsonl").string(), samples);
  const auto back = load_dataset((dir / "d.jsonl").string(), AttributeSchema::generic(3));
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(back[i].id == samples[i].id);
    CHECK(back[i].x == samples[i].x);
    CHECK(back[i].a.has_value() == samples[i].a.has_value());
    if (back[i].a) CHECK(*back[i].a == *samples[i].a);
    CHECK(back[i].y == samples[i].y);
  }
}

TEST_CASE("co-occurrence by direct counting") {
  SUBCASE("all ones") {
    std::vector<Sample> s;
    for (int i = 0; i < 3; ++i) s.push_back(make_sample("s", Vector::Zero(1), Vector::Ones(3), 1.0));
    CHECK(compute_cooccurrence(s).M.isApprox(Matrix::Ones(3, 3)));
  }
  SUBCASE("never jointly active") {
    std::vector<Sample> s = {make_sample("a", Vector::Zero(1), (Vector(2) << 1, 0).finished(), 1.0),
                             make_sample("b", Vector::Zero(1), (Vector(2) << 0, 1).finished(), 1.0)};
    CHECK(compute_cooccurrence(s).M(0, 1) == 0.0);
  }
  SUBCASE("three of four") {
    std::vector<Sample> s;
    for (int i = 0; i < 4; ++i) {
      Vector a = Vector::Ones(2);
      if (i == 3) a(1) = 0.0;
      s.push_back(make_sample("s", Vector::Zero(1), a, 1.0));
    }
    const auto M = compute_cooccurrence(s).M;
    CHECK(M(0, 1) == doctest::Approx(0.75));
    CHECK(M(1, 0) == doctest::Approx(0.75));
    CHECK(M(1, 1) == doctest::Approx(0.75));
    CHECK(M(0, 0) == doctest::Approx(1.0));
  }
}

TEST_CASE("tradeoff flattening is column-major in P and validates") {
  TradeoffParams p = TradeoffParams::initial(2);
  p.P << 1, 2, 3, 4;
  const Vector z = p.to_flat();
  REQUIRE(z.size() == 8);
  CHECK(z(4) == 1.0);
  CHECK(z(5) == 3.0);
  CHECK(z(6) == 2.0);
  const auto back = TradeoffParams::from_flat(z, 2);
  CHECK(back.P == p.P);
  Vector bad = z;
  bad(2) = -1.0;
  CHECK_THROWS(TradeoffParams::from_flat(bad, 2));
}

TEST_CASE("model JSON round trip is exact") {
  const auto dir = temp_dir("model");
  const CLSVMModel m = fixture::random_model(3, {4, 3, 1.0});
  save_model((dir / "m.json").string(), m, {{"note", "x"}});
  const CLSVMModel back = load_model((dir / "m.json").string());
  CHECK(back.predictors.W_xa == m.predictors.W_xa);
  CHECK(back.predictors.w_ay == m.predictors.w_ay);
  CHECK(back.params.to_flat() == m.params.to_flat());
  CHECK(back.M.M == m.M.M);
  CHECK(back.schema == m.schema);
  CHECK(back.epsilon == m.epsilon);
}

TEST_CASE("model loading rejects wrong documents") {
  const auto dir = temp_dir("model_bad");
  write_text(dir / "m.json", R"({"format":"something-else"})");
  CHECK_THROWS_AS(load_model((dir / "m.json").string()), SchemaError);
  CHECK_THROWS_AS(load_model((dir / "missing.json").string()), IoError);
}

TEST_CASE("parallel_for visits each index once for any thread count") {
  for (std::size_t threads : {1u, 2u, 5u}) {
    std::vector<int> hits(37, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw NumericError("boom");
                  }),
                  NumericError);
}

TEST_CASE("counter seeds do not depend on draw order") {
  CHECK(counter_seed(1, 2, 3) == counter_seed(1, 2, 3));
  CHECK(counter_seed(1, 2, 3) != counter_seed(1, 2, 4));
  CHECK(counter_seed(1, 2, 3) != counter_seed(1, 3, 3));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
