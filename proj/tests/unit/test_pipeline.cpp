#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "kgef/pipeline.hpp"
#include "support.hpp"

using namespace kgef;
namespace fs = std::filesystem;

namespace {

PipelineConfig fixture_in(const fs::path& out) {
  auto c = PipelineConfig::load(test::fixture_config());
  c.out_dir = out;
  return c;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = test::read_file(e.path());
  }
  return files;
}

std::vector<double> loss_column(const fs::path& csv) {
  std::istringstream in(test::read_file(csv));
  std::string line;
  std::getline(in, line);
  std::vector<double> out;
  while (std::getline(in, line)) out.push_back(std::stod(line.substr(line.find(',') + 1)));
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\n"
      "sources_dir = src\n"
      "taxonomy = /abs/tax.csv\n"
      "dim = 32\n"
      "epochs=7\n"
      "models = TransE, RESCAL\n"
      "portions = WD,all\n"
      "relations = hasStatus,birthPlace\n"
      "k_levels = 1,20\n");
  auto c = PipelineConfig::parse(in, "/base");
  CHECK(c.sources_dir == fs::path("/base/src"));
  CHECK(c.taxonomy == fs::path("/abs/tax.csv"));
  CHECK(c.train.dim == 32);
  CHECK(c.train.epochs == 7);
  CHECK(c.models == std::vector<Model>{Model::TransE, Model::RESCAL});
  CHECK(c.portions == std::vector<std::string>{"WD", "all"});
  CHECK(c.relations.size() == 2);
  CHECK(c.k_levels == std::vector<int>{1, 20});

  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_WITH_AS(PipelineConfig::parse(unknown, "/"), doctest::Contains("colour"), Error);
  std::istringstream bad_model("models = GloVe\n");
  CHECK_THROWS_AS(PipelineConfig::parse(bad_model, "/"), Error);
  std::istringstream bad_number("dim = many\n");
  CHECK_THROWS_AS(PipelineConfig::parse(bad_number, "/"), Error);

  auto shipped = PipelineConfig::load(test::fixture_config());
  CHECK_NOTHROW(shipped.validate());
  set_seed(shipped, 9);
  CHECK(shipped.seed == 9);
  CHECK(shipped.train.seed == 9);
  CHECK_NOTHROW(PipelineConfig::load(test::source_dir() / "data/config/default.conf").validate());
}

TEST_CASE("portion labels") {
  CHECK(portion_source("WD") == Source::WD);
  CHECK_FALSE(portion_source("all"));
  CHECK_THROWS_AS(portion_source("GB"), Error);
  CHECK_THROWS_AS(portion_source("XX"), Error);
}

TEST_CASE("stages refuse to run before their predecessor") {
  test::ScratchDir dir("pred");
  const auto c = fixture_in(dir.path());
  try {
    run_stage("align", c);
    FAIL("align ran without ingest");
  } catch (const MissingPredecessor& e) {
    CHECK(e.stage() == "align");
    CHECK(e.predecessor() == "ingest");
    CHECK(std::string(e.what()).find("ingest") != std::string::npos);
  }
  run_stage("ingest", c);
  run_stage("align", c);
  CHECK_THROWS_AS(run_stage("build", c), MissingPredecessor);
  CHECK_THROWS_AS(run_stage("no-such-stage", c), Error);

  // Tampering with an upstream output invalidates the downstream stage.
  test::write_file(dir / "align/authors.jsonl", "{}\n");
  CHECK_THROWS_AS(run_stage("classify", c), MissingPredecessor);
}

TEST_CASE("full fixture run") {
  test::ScratchDir a("run-a"), b("run-b");
  auto ca = fixture_in(a.path());
  auto results = run_all(ca);
  CHECK(results.size() == std::size(kStages));

  for (const char* f : {"report/stats.csv", "report/graph_stats.csv", "report/exposure.csv", "report/flows.csv"}) {
    CHECK(fs::exists(a / f));
  }
  int svgs = 0;
  for (const auto& e : fs::directory_iterator(a / "report")) {
    if (e.path().extension() == ".svg") {
      ++svgs;
      CHECK(test::read_file(e.path()).rfind("<svg", 0) == 0);
    }
  }
  CHECK(svgs >= 2);
  CHECK(fs::exists(a / "manifest.json"));
  CHECK(test::read_file(a / "report/exposure.csv").rfind("model,top1_WD", 0) == 0);

  SUBCASE("the same seed reproduces every file") {
    run_all(fixture_in(b.path()));
    CHECK(tree(a.path()) == tree(b.path()));
  }
  SUBCASE("rerunning a stage rewrites identical bytes") {
    const auto before = tree(a.path());
    run_stage("stats", ca);
    run_stage("expose", ca);
    run_stage("report", ca);
    CHECK(tree(a.path()) == before);
  }
  SUBCASE("a different seed changes the embeddings") {
    auto cb = fixture_in(b.path());
    set_seed(cb, 7);
    run_all(cb);
    CHECK(test::read_file(a / "train/TransE_WD/params.txt") != test::read_file(b / "train/TransE_WD/params.txt"));
    CHECK(test::read_file(a / "report/stats.csv") == test::read_file(b / "report/stats.csv"));
  }
  SUBCASE("training losses fall across 5-epoch windows") {
    for (const auto& e : fs::directory_iterator(a / "train")) {
      CAPTURE(e.path().filename().string());
      const auto loss = loss_column(e.path() / "loss.csv");
      REQUIRE(loss.size() == static_cast<std::size_t>(ca.train.epochs));
      double previous = 1e300;
      for (std::size_t i = 0; i + 5 <= loss.size(); i += 5) {
        double mean = 0;
        for (std::size_t j = i; j < i + 5; ++j) mean += loss[j] / 5;
        CHECK(mean <= previous + 1e-9);
        previous = mean;
      }
    }
  }
}

TEST_CASE("train for a single model and portion") {
  test::ScratchDir dir("single");
  auto c = fixture_in(dir.path());
  c.train.epochs = 3;
  for (const char* s : {"ingest", "align", "classify", "build"}) run_stage(s, c);
  StageOptions only;
  only.models = {Model::DistMult};
  only.portions = {"OL"};
  auto r = run_stage("train", c, only);
  CHECK(fs::exists(dir / "train/DistMult_OL/params.txt"));
  CHECK_FALSE(fs::exists(dir / "train/TransE_OL"));
  only.models = {Model::TransE};
  run_stage("train", c, only);
  // Outputs from both invocations stay registered.
  CHECK_NOTHROW(run_stage("expose", c, only));
  StageOptions all_models;
  all_models.models = {Model::TransE, Model::TransR, Model::DistMult, Model::RESCAL};
  all_models.portions = {"WD"};
  run_stage("train", c, all_models);
  int params = 0;
  for (const auto& e : fs::directory_iterator(dir / "train")) {
    params += e.path().filename().string().ends_with("_WD") && fs::exists(e.path() / "params.txt");
  }
  CHECK(params == 4);
}

TEST_CASE("file hashes") {
  test::ScratchDir dir("hash");
  test::write_file(dir / "empty", "");
  test::write_file(dir / "a", "a");
  CHECK(file_hash(dir / "empty") == "cbf29ce484222325");
  CHECK(file_hash(dir / "a") == "af63dc4c8601ec8c");
  CHECK_THROWS_AS(file_hash(dir / "missing"), Error);
}
