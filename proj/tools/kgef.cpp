// kgef <command> --config <path> [--model <name>] [--portion <label>] [--seed <n>] [--out <dir>]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kgef/pipeline.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitMissingStage = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Writers-and-works knowledge graph toolkit"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string model = "";
  std::string portion = "";
  std::optional<std::uint64_t> seed;
  std::string out_dir;

  for (const char* name : kgef::kStages) {
    auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " stage");
    cmd->add_option("--config", config_path, "flat key = value config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--model", model, "TransE, TransR, DistMult, RESCAL or all");
    cmd->add_option("--portion", portion, "WD, OL, GR or all");
    cmd->add_option("--seed", seed, "seed for every stochastic stage");
    cmd->add_option("--out", out_dir, "output directory");
  }
  auto* all = app.add_subcommand("run", "run every stage in order");
  all->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  all->add_option("--model", model);
  all->add_option("--portion", portion);
  all->add_option("--seed", seed);
  all->add_option("--out", out_dir);

  CLI11_PARSE(app, argc, argv);
  const std::string stage = app.get_subcommands().front()->get_name();

  try {
    kgef::PipelineConfig config = kgef::PipelineConfig::load(config_path);
    if (seed) kgef::set_seed(config, *seed);
    if (!out_dir.empty()) config.out_dir = out_dir;

    kgef::StageOptions options;
    if (!model.empty() && kgef::lowercase_ascii(model) != "all") {
      auto m = kgef::parse_model(model);
      if (!m) throw kgef::Error("unknown model '" + model + "'");
      options.models = {*m};
    } else if (!model.empty()) {
      options.models.assign(std::begin(kgef::kAllModels), std::end(kgef::kAllModels));
    }
    if (!portion.empty()) {
      if (portion != "all") kgef::portion_source(portion);
      options.portions = {portion};
    }

    std::vector<kgef::StageResult> results;
    if (stage == "run") {
      results = kgef::run_all(config, options);
    } else {
      results.push_back(kgef::run_stage(stage, config, options));
    }
    for (const auto& r : results) {
      for (const auto& w : r.warnings) std::cerr << "kgef " << stage << ": warning: " << w << '\n';
      for (const auto& o : r.outputs) std::cout << (config.out_dir / o).string() << '\n';
    }
    return 0;
  } catch (const kgef::MissingPredecessor& e) {
    std::cerr << "kgef " << stage << ": missing predecessor stage '" << e.predecessor() << "': " << e.what() << '\n';
    return kExitMissingStage;
  } catch (const std::exception& e) {
    std::cerr << "kgef " << stage << ": error: " << e.what() << '\n';
    return kExitError;
  }
}
