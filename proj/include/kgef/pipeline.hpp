#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgef/embed.hpp"

namespace kgef {

/// Flat `key = value` configuration. Relative paths resolve against the
/// directory of the config file.
struct PipelineConfig {
  std::filesystem::path sources_dir;
  std::filesystem::path taxonomy;
  std::filesystem::path minorities;
  std::filesystem::path continents;
  std::filesystem::path out_dir = "out";
  TrainConfig train;
  std::size_t sample_size = 250;
  std::vector<int> k_levels = {1, 5, 10};
  std::uint64_t seed = 42;
  std::vector<std::string> portions = {"WD", "OL", "GR"};  // also "all"
  std::vector<Model> models = {Model::TransE, Model::TransR, Model::DistMult, Model::RESCAL};
  std::set<Relation> relations;  // empty: every relation

  static PipelineConfig parse(std::istream& in, const std::filesystem::path& base_dir);
  static PipelineConfig load(const std::filesystem::path& path);

  /// Throws Error unless every referenced file exists and values are sane.
  void validate() const;
};

/// Sets the seed used by every stochastic stage.
void set_seed(PipelineConfig& config, std::uint64_t seed);

inline constexpr const char* kStages[] = {"ingest", "align", "classify", "build", "stats", "train", "expose", "report"};

/// Raised when a stage runs before the stage it depends on.
class MissingPredecessor : public Error {
 public:
  MissingPredecessor(std::string stage, std::string predecessor, const std::string& detail);
  const std::string& stage() const { return stage_; }
  const std::string& predecessor() const { return predecessor_; }

 private:
  std::string stage_;
  std::string predecessor_;
};

struct StageOptions {
  std::vector<Model> models;          // empty: config models
  std::vector<std::string> portions;  // empty: config portions
};

struct StageResult {
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> outputs;  // relative to out_dir
};

/// 64-bit FNV-1a of the file bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

StageResult run_stage(const std::string& stage, const PipelineConfig& config, const StageOptions& options = {});

/// Every stage in order.
std::vector<StageResult> run_all(const PipelineConfig& config, const StageOptions& options = {});

/// `portion` label -> graph source, nullopt for "all".
std::optional<Source> portion_source(const std::string& label);

}  // namespace kgef
